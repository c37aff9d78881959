#include <doctest.h>

#include <cmath>
#include <map>
#include <set>

#include "dfb/cooking.hpp"
#include "dfb/errors.hpp"
#include "test_support.hpp"

using namespace dfb;
using namespace dfb::cooking;

namespace {

std::shared_ptr<const Kitchen> kitchen(int r, int c) { return std::make_shared<const Kitchen>(r, c); }

std::size_t count_places(const HiddenWorld& w, Place p) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < w.ingredients().size(); ++i) n += w.place(i) == p;
  return n;
}

std::set<std::string> rendered(const std::vector<Fluent>& fs) {
  std::set<std::string> out;
  for (const auto& f : fs) out.insert(f.render());
  return out;
}

}  // namespace

TEST_CASE("kitchen vocabulary") {
  auto k = kitchen(2, 3);
  CHECK(k->size() == 6);
  CHECK(k->location(4).to_string() == "L5");
  CHECK(k->regions().size() == 5);
  CHECK(k->contents(0).domain().size() == 3);
  CHECK(k->position("veg1").domain().size() == 7);
  auto cfg = k->belief_config();
  auto prior = cfg.default_prior(k->position("veg1"));
  CHECK(prior[6] == 0.0);
  CHECK(prior[0] == doctest::Approx(1.0 / 6));
}

TEST_CASE("world config validation") {
  WorldConfig c;
  c.rows = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.rows = 2;
  c.cols = 2;
  c.n_vegetables = 3;
  c.n_seasonings = 2;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.assertion_p = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = {};
  c.set_ingredients(5);
  CHECK(c.n_vegetables == 3);
  CHECK(c.n_seasonings == 2);
}

TEST_CASE("operator costs") {
  auto w = HiddenWorld::from_layout(kitchen(2, 2), {"veg1", "veg2", "veg3", "sea1"});
  const auto& K = w.kitchen();
  auto obs = w.step(Operator::observe(K.location(0)));
  CHECK(obs.cost == 15);
  CHECK(obs.observation.size() == 2);
  CHECK(w.step(Operator::pick(K.location(0))).cost == 30);
  w.step(Operator::pick(K.location(1)));
  w.step(Operator::pick(K.location(2)));
  CHECK(w.held().size() == 3);
  CHECK(w.step(Operator::place_in_pot()).cost == 100 + 50 * 3 + 10);
  w.step(Operator::pick(K.location(3)));
  // the vegetables went in one step ago
  CHECK(w.step(Operator::place_in_pot()).cost == 100 + 50 + 1000 + 10);
  CHECK(w.step(Operator::noop()).cost == 10);
}

TEST_CASE("seasoning after cooking is not penalized") {
  auto w = HiddenWorld::from_layout(kitchen(1, 2), {"veg1", "sea1"});
  const auto& K = w.kitchen();
  w.step(Operator::pick(K.location(0)));
  w.step(Operator::place_in_pot());
  w.step(Operator::pick(K.location(1)));
  for (int i = 0; i < 3; ++i) w.step(Operator::noop());
  CHECK(w.any_vegetable_uncooked());
  w.step(Operator::noop());
  CHECK_FALSE(w.any_vegetable_uncooked());
  CHECK(w.step(Operator::place_in_pot()).cost == 160);
  CHECK(w.goal_test());
}

TEST_CASE("seasoning with a vegetable still on the grid is penalized") {
  auto w = HiddenWorld::from_layout(kitchen(1, 2), {"veg1", "sea1"});
  w.step(Operator::pick(w.kitchen().location(1)));
  CHECK(w.step(Operator::place_in_pot()).cost == 1160);
}

TEST_CASE("cook timing") {
  auto w = HiddenWorld::from_layout(kitchen(1, 1), {"veg1"});
  w.step(Operator::pick(w.kitchen().location(0)));
  w.step(Operator::place_in_pot());
  const auto t = w.clock();
  CHECK(w.cooking_remaining() == 5);
  while (w.clock() < t + 5) {
    CHECK_FALSE(w.goal_test());
    w.step(Operator::noop());
  }
  CHECK(w.goal_test());
  CHECK(w.cooking_remaining() == 0);
}

TEST_CASE("goal test") {
  CHECK(HiddenWorld::from_layout(kitchen(2, 2), {"", "", "", ""}).goal_test());
  auto w = HiddenWorld::from_layout(kitchen(1, 2), {"veg1", "veg2"});
  CHECK_FALSE(w.goal_test());
  w.step(Operator::pick(w.kitchen().location(0)));
  w.step(Operator::pick(w.kitchen().location(1)));
  w.step(Operator::place_in_pot());
  CHECK(count_places(w, Place::Pot) == 2);
  for (int i = 0; i < 4; ++i) w.step(Operator::noop());
  CHECK_FALSE(w.goal_test());
  w.step(Operator::noop());
  CHECK(w.goal_test());
}

TEST_CASE("failed pick and action errors") {
  auto w = HiddenWorld::from_layout(kitchen(1, 2), {"", "veg1"});
  const auto& K = w.kitchen();
  auto r = w.step(Operator::pick(K.location(0)));
  CHECK_FALSE(r.succeeded);
  CHECK(r.cost == 30);
  REQUIRE(r.observation.size() == 1);
  CHECK(r.observation.entries()[0].fluent.render() == "Equal(contents(L1), empty)");
  CHECK(r.record.effects.empty());
  CHECK_THROWS_AS(w.step(Operator::pick(Value::symbol("L9"))), ActionError);
  CHECK_THROWS_AS(w.step(Operator{OpKind::Observe, std::nullopt}), ActionError);

  std::vector<std::string> layout;
  for (int i = 1; i <= 11; ++i) layout.push_back("veg" + std::to_string(i));
  auto full = HiddenWorld::from_layout(kitchen(1, 11), layout);
  for (std::size_t i = 0; i < 10; ++i) full.step(Operator::pick(full.kitchen().location(i)));
  CHECK_THROWS_AS(full.step(Operator::pick(full.kitchen().location(10))), ActionError);
}

TEST_CASE("pick effects") {
  auto w = HiddenWorld::from_layout(kitchen(1, 2), {"sea1", ""});
  const auto& K = w.kitchen();
  auto r = w.step(Operator::pick(K.location(0)));
  REQUIRE(r.record.effects.size() == 2);
  CHECK(r.record.effects[0].variable == K.contents(0));
  CHECK(r.record.effects[0].value == K.empty());
  CHECK(r.record.effects[1].value == K.picked());
  CHECK(w.contents_value(0) == K.empty());
  CHECK(w.assignment().at(K.position("sea1")) == K.picked());
}

TEST_CASE("valid assertions match brute-force template enumeration on 2x2") {
  auto k = kitchen(2, 2);
  const std::vector<std::vector<std::string>> layouts = {
      {"veg1", "", "sea1", ""}, {"veg1", "veg2", "", ""}, {"", "", "", ""}, {"sea1", "veg1", "veg2", "sea2"}};
  for (const auto& layout : layouts) {
    auto w = HiddenWorld::from_layout(k, layout);
    const auto truth = w.assignment();
    const auto& K = *k;
    std::vector<Fluent> all;
    for (std::size_t l = 0; l < K.size(); ++l) {
      for (const auto& v : {K.vegetable(), K.seasoning(), K.empty()}) all.push_back(K.make("Equal", {K.contents(l), v}));
      for (std::size_t m = l + 1; m < K.size(); ++m) {
        all.push_back(K.make("Same", {K.contents(l), K.contents(m)}));
        all.push_back(K.make("Different", {K.contents(l), K.contents(m)}));
      }
    }
    std::vector<std::string> names;
    for (const auto& ing : w.ingredients()) names.push_back(ing.name);
    for (std::size_t a = 0; a < names.size(); ++a) {
      const auto pa = K.position(names[a]);
      for (std::size_t l = 0; l < K.size(); ++l) all.push_back(K.make("Equal", {pa, K.location(l)}));
      for (const auto& r : K.regions()) all.push_back(K.make("In", {pa, r}));
      for (std::size_t b = a + 1; b < names.size(); ++b) all.push_back(K.make("NextTo", {pa, K.position(names[b])}));
    }
    std::vector<Fluent> expected;
    for (const auto& f : all) {
      if (evaluate(f, truth)) expected.push_back(f);
    }
    auto got = w.valid_assertions();
    CHECK(got.size() == rendered(got).size());
    const auto g = rendered(got), e = rendered(expected);
    for (const auto& f : g) CHECK_MESSAGE(e.count(f) == 1, f);
    for (const auto& f : e) CHECK_MESSAGE(g.count(f) == 1, f);
  }
  auto w = HiddenWorld::from_layout(k, {"veg1", "veg2", "", ""});
  CHECK(rendered(w.valid_assertions()).count("Same(contents(L1), contents(L2))") == 1);
}

TEST_CASE("noiseless assertions are uniform over the valid set") {
  WorldConfig c;
  c.rows = 3;
  c.cols = 3;
  c.seed = 5;
  auto w = HiddenWorld::generate(c, kitchen(3, 3));
  const auto valid = rendered(w.valid_assertions());
  std::map<std::string, int> counts;
  Rng rng(77);
  const int n = 10'000;
  for (int i = 0; i < n; ++i) {
    auto e = w.sample_assertion(rng, 1.0);
    CHECK(e.p == 1.0);
    counts[e.fluent.render()]++;
  }
  for (const auto& [f, _] : counts) REQUIRE(valid.count(f) == 1);
  const double expect = static_cast<double>(n) / static_cast<double>(valid.size());
  double chi2 = 0;
  for (const auto& f : valid) {
    const double d = counts[f] - expect;
    chi2 += d * d / expect;
  }
  // dof = k-1; accept up to the 99.9% quantile via the Wilson-Hilferty bound
  const double k = static_cast<double>(valid.size()) - 1;
  const double z = 3.09;
  const double limit = k * std::pow(1 - 2 / (9 * k) + z * std::sqrt(2 / (9 * k)), 3);
  CHECK(chi2 < limit);
}

TEST_CASE("noisy assertions are false about 1-p of the time") {
  WorldConfig c;
  c.seed = 9;
  auto w = HiddenWorld::generate(c, kitchen(4, 4));
  const auto truth = w.assignment();
  Rng rng(123);
  int falses = 0;
  const int n = 10'000;
  for (int i = 0; i < n; ++i) {
    auto e = w.sample_assertion(rng, 0.8);
    CHECK(e.p == 0.8);
    falses += !evaluate(e.fluent, truth);
  }
  const double sd = std::sqrt(n * 0.2 * 0.8);
  CHECK(std::abs(falses - n * 0.2) < 4 * sd);
}

TEST_CASE("determinism and conservation") {
  WorldConfig c;
  c.seed = 42;
  auto a = HiddenWorld::generate(c, kitchen(4, 4));
  auto b = HiddenWorld::generate(c, kitchen(4, 4));
  Rng ra(1), rb(1), ops(3);
  std::uniform_int_distribution<int> kind(0, 3);
  std::uniform_int_distribution<std::size_t> loc(0, 15);
  for (int step = 0; step < 300; ++step) {
    Operator op;
    switch (kind(ops)) {
      case 0: op = Operator::observe(a.kitchen().location(loc(ops))); break;
      case 1: op = Operator::pick(a.kitchen().location(loc(ops))); break;
      case 2: op = Operator::place_in_pot(); break;
      default: op = Operator::noop(); break;
    }
    if (op.kind == OpKind::Pick && a.held().size() >= kMaxHeld) op = Operator::place_in_pot();
    auto x = a.step(op);
    auto y = b.step(op);
    CHECK(x.cost == y.cost);
    CHECK(x.observation.size() == y.observation.size());
    CHECK(a.sample_assertion(ra, 0.9).fluent.render() == b.sample_assertion(rb, 0.9).fluent.render());
    std::size_t on_grid = 0;
    for (std::size_t l = 0; l < 16; ++l) on_grid += a.occupant(l) >= 0;
    CHECK(on_grid == count_places(a, Place::Grid));
    CHECK(a.held().size() == count_places(a, Place::Held));
    CHECK(count_places(a, Place::Grid) + count_places(a, Place::Held) + count_places(a, Place::Pot) ==
          a.ingredients().size());
  }
}

TEST_CASE("generated worlds respect the layout limits") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    WorldConfig c;
    c.rows = 3;
    c.cols = 3;
    c.n_vegetables = 4;
    c.n_seasonings = 5;
    c.seed = seed;
    auto w = HiddenWorld::generate(c, kitchen(3, 3));
    std::set<std::size_t> locs;
    for (std::size_t i = 0; i < w.ingredients().size(); ++i) locs.insert(*w.location_of(i));
    CHECK(locs.size() == 9);
  }
}
