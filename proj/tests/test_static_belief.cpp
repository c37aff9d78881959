#include <doctest.h>

#include <random>

#include "dfb/cooking.hpp"
#include "dfb/errors.hpp"
#include "dfb/static_belief.hpp"
#include "test_support.hpp"

using namespace dfb;
using testing::fluent;

namespace {

Observation single(const Fluent& f, double p = 1.0) {
  Observation o;
  o.add(f, p);
  return o;
}

struct Fixture {
  std::shared_ptr<cooking::Kitchen> kitchen = std::make_shared<cooking::Kitchen>(2, 2);
  BeliefConfig config = kitchen->belief_config();
  StaticBelief belief{kitchen->contents_priors(config), config};
};

}  // namespace

TEST_CASE("point observation folds into the fixed singleton") {
  Fixture fx;
  const auto& K = *fx.kitchen;
  auto r = fx.belief.update(single(K.make("Equal", {K.contents(1), K.seasoning()})), ActionRecord::noop());
  CHECK(r.folded == 1);
  CHECK(fx.belief.determined_value(K.contents(1)) == K.seasoning());
  CHECK(fx.belief.complex_fluents().empty());
}

TEST_CASE("multi-location and position fluents are kept aside") {
  Fixture fx;
  const auto& K = *fx.kitchen;
  const auto before = testing::structure_string(fx.belief.structure());
  fx.belief.update(single(K.make("Same", {K.contents(0), K.contents(1)})), ActionRecord::noop());
  fx.belief.update(single(K.make("Equal", {K.position("veg1"), K.location(2)})), ActionRecord::noop());
  fx.belief.update(single(K.make("In", {K.position("veg1"), K.regions()[1]}), 0.8), ActionRecord::noop());
  CHECK(fx.belief.complex_fluents().size() == 3);
  CHECK(testing::structure_string(fx.belief.structure()) == before);
  CHECK(fx.belief.structure().size() == 4);
  CHECK_FALSE(fx.belief.is_fixed(K.position("veg1")));
  CHECK_FALSE(fx.belief.determined_value(K.position("veg1")).has_value());

  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    auto s = fx.belief.sample_state(rng);
    CHECK(s.at(K.contents(0)) == s.at(K.contents(1)));
    CHECK(s.at(K.position("veg1")) == K.location(2));
  }
}

TEST_CASE("marginals of fixed factors and their errors") {
  Fixture fx;
  const auto& K = *fx.kitchen;
  auto m = fx.belief.marginal(std::vector<StateVariable>{K.contents(3)});
  for (std::size_t i = 0; i < 3; ++i) CHECK(m[i] == doctest::Approx(1.0 / 3));
  CHECK_THROWS_AS(fx.belief.marginal(std::vector<StateVariable>{K.contents(0), K.contents(1)}),
                  QuerySpansFactors);
  CHECK_THROWS_AS(fx.belief.marginal(std::vector<StateVariable>{K.position("sea9")}), UnknownVariable);
}

TEST_CASE("effects overwrite with a point mass") {
  Fixture fx;
  const auto& K = *fx.kitchen;
  fx.belief.update(single(K.make("Same", {K.contents(0), K.contents(2)})), ActionRecord::noop());
  ActionRecord pick{Operator::pick(K.location(0)),
                    {{K.contents(0), K.empty()}, {K.position("veg1"), K.picked()}},
                    20};
  fx.belief.update(Observation{}, pick);
  CHECK(fx.belief.determined_value(K.contents(0)) == K.empty());
  CHECK(fx.belief.complex_fluents().empty());
  Rng rng(2);
  CHECK(fx.belief.sample_state(rng).at(K.position("veg1")) == K.picked());
  CHECK(fx.belief.structure().size() == 4);
}

TEST_CASE("contents-only streams give the same marginals as the dynamic belief") {
  std::mt19937_64 gen(31);
  auto kitchen = std::make_shared<cooking::Kitchen>(3, 3);
  const auto& K = *kitchen;
  const Value vals[] = {K.vegetable(), K.seasoning(), K.empty()};
  for (int trial = 0; trial < 50; ++trial) {
    auto config = K.belief_config();
    StaticBelief st(K.contents_priors(config), config);
    auto dyn = Belief::init(K.contents_priors(config), config);
    std::uniform_int_distribution<std::size_t> loc(0, K.size() - 1);
    std::uniform_int_distribution<int> val(0, 2);
    std::uniform_real_distribution<double> pr(0.05, 1.0);
    for (int k = 0; k < 30; ++k) {
      const auto l = loc(gen);
      const auto f = K.make(val(gen) % 2 ? "Equal" : "Different", {K.contents(l), vals[val(gen)]});
      const double p = pr(gen);
      Observation o;
      o.add(f, p);
      auto rs = st.update(o, ActionRecord::noop(), ContradictionPolicy::Skip);
      auto rd = dyn.update(o, ActionRecord::noop(), ContradictionPolicy::Skip);
      REQUIRE(rs.rejected.size() == rd.rejected.size());
    }
    for (std::size_t l = 0; l < K.size(); ++l) {
      std::vector<StateVariable> v = {K.contents(l)};
      auto a = st.marginal(v), b = dyn.marginal(v);
      for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-9);
    }
  }
}

TEST_CASE("constructor validation") {
  auto kitchen = std::make_shared<cooking::Kitchen>(1, 2);
  auto priors = kitchen->contents_priors({});
  priors.push_back(priors.front());
  CHECK_THROWS_AS(StaticBelief(priors, {}), std::invalid_argument);
}
