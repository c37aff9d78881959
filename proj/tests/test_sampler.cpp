#include <doctest.h>

#include <random>

#include "dfb/errors.hpp"
#include "test_support.hpp"

using namespace dfb;
using testing::fluent;
using testing::var;

namespace {

Observation single(const Fluent& f, double p = 1.0) {
  Observation o;
  o.add(f, p);
  return o;
}

}  // namespace

TEST_CASE("independent factors sample in one pass") {
  auto d = testing::int_domain(3);
  auto b = Belief::init({});
  b.add_variable(var("v", "a", d));
  b.add_variable(var("v", "b", d));
  Rng rng(4);
  SamplerStats stats;
  auto s = b.sample_state(rng, &stats);
  CHECK(s.size() == 2);
  CHECK(stats.backtracks == 0);
  CHECK(stats.steps == 2);
}

TEST_CASE("Different over two binary singletons only yields the two mixed pairs") {
  auto d = testing::symbol_domain({"a", "b"});
  auto v1 = var("v", "one", d);
  auto v2 = var("v", "two", d);
  BeliefConfig cfg;
  cfg.max_joint_entries = 3;
  Belief b(cfg);
  b.update(single(fluent("Different", {v1, v2})), ActionRecord::noop());
  REQUIRE(b.complex_fluents().size() == 1);
  Rng rng(17);
  int ab = 0, ba = 0;
  for (int i = 0; i < 1000; ++i) {
    auto s = b.sample_state(rng);
    REQUIRE(s.at(v1) != s.at(v2));
    (s.at(v1) == Value::symbol("a") ? ab : ba)++;
  }
  CHECK(ab > 400);
  CHECK(ba > 400);
}

TEST_CASE("an unsatisfiable complex fluent exhausts the search") {
  auto d = testing::symbol_domain({"a", "b"});
  auto v1 = var("v", "one", d);
  auto v2 = var("v", "two", d);
  BeliefConfig cfg;
  cfg.max_joint_entries = 3;
  cfg.max_backtrack_steps = 5000;
  Belief b(cfg);
  b.update(single(fluent("Equal", {v1, Value::symbol("a")})), ActionRecord::noop());
  b.update(single(fluent("Equal", {v2, Value::symbol("a")})), ActionRecord::noop());
  b.update(single(fluent("Different", {v1, v2})), ActionRecord::noop());
  REQUIRE(b.complex_fluents().size() == 1);
  Rng rng(1);
  CHECK_THROWS_AS(b.sample_state(rng), SearchExhausted);
}

TEST_CASE("samples are sound and complete on small instances") {
  std::mt19937_64 gen(99);
  auto d = testing::int_domain(3);
  for (int trial = 0; trial < 20; ++trial) {
    BeliefConfig cfg;
    cfg.max_joint_entries = 9;
    Belief b(cfg);
    std::vector<StateVariable> vars;
    for (int i = 0; i < 4; ++i) vars.push_back(var("w", "s" + std::to_string(i), d));
    for (const auto& v : vars) b.add_variable(v);
    std::uniform_int_distribution<int> pick(0, 3);
    const char* preds[] = {"Same", "Different"};
    for (int k = 0; k < 5; ++k) {
      const int i = pick(gen), j = (i + 1 + pick(gen) % 3) % 4;
      b.update(single(fluent(preds[pick(gen) % 2], {vars[i], vars[j]})), ActionRecord::noop(),
               ContradictionPolicy::Skip);
      b.update(single(fluent("Different", {vars[pick(gen)], Value::integer(pick(gen) % 3)}), 0.7),
               ActionRecord::noop(), ContradictionPolicy::Skip);
    }
    std::vector<StateVariable> order;
    const auto feasible = testing::feasible_states(b, order);
    if (feasible.empty()) continue;
    REQUIRE(feasible.size() <= 100);
    std::set<std::string> seen;
    Rng rng(static_cast<std::uint64_t>(trial));
    for (int n = 0; n < 10'000; ++n) {
      auto s = b.sample_state(rng);
      auto key = testing::assignment_key(s, order);
      REQUIRE(feasible.count(key) == 1);
      seen.insert(key);
    }
    CHECK(seen.size() == feasible.size());
  }
}

TEST_CASE("smaller factors are drawn first") {
  auto d2 = testing::int_domain(2);
  auto d5 = testing::int_domain(5);
  auto big = var("w", "big", d5);
  auto small = var("w", "small", d2);
  Belief b;
  b.add_variable(big);
  b.add_variable(small);
  Rng r1(3), r2(3);
  auto s = b.sample_state(r1);
  // the first draw from the stream belongs to the binary factor
  CachedTable t(JointDistribution::uniform({small}));
  CHECK(s.at(small) == t.joint.tuple(t.draw(r2))[0]);
}
