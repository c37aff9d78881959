#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dfb/errors.hpp"
#include "test_support.hpp"

using namespace dfb;
using testing::fluent;
using testing::var;

namespace {

auto colors() { return testing::symbol_domain({"red", "green", "blue"}); }

}  // namespace

TEST_CASE("joint construction validates its table") {
  auto a = var("color", "o1", colors());
  CHECK_THROWS_AS(JointDistribution({a}, {0.5, 0.5}), std::invalid_argument);
  CHECK_THROWS_AS(JointDistribution({a}, {0.5, 0.6, -0.1}), std::invalid_argument);
  CHECK_THROWS_AS(JointDistribution({a}, {0.5, 0.2, 0.2}), std::invalid_argument);
  CHECK_THROWS_AS(JointDistribution({a, a}, std::vector<double>(9, 1.0 / 9)), std::invalid_argument);
  CHECK_NOTHROW(JointDistribution({a}, {0.2, 0.3, 0.5}));
  CHECK_THROWS_AS(JointDistribution::point_mass(a, Value::symbol("purple")), DomainError);
}

TEST_CASE("layout is row-major with the last variable fastest") {
  auto a = var("color", "o1", colors());
  auto b = var("size", "o1", testing::int_domain(2));
  auto j = JointDistribution::from_weights({a, b}, {1, 2, 3, 4, 5, 6});
  CHECK(j.tuple(1)[0] == Value::symbol("red"));
  CHECK(j.tuple(1)[1] == Value::integer(1));
  CHECK(j.tuple(2)[0] == Value::symbol("green"));
  std::vector<Value> t = {Value::symbol("blue"), Value::integer(0)};
  CHECK(j.probability(t) == doctest::Approx(5.0 / 21));
}

TEST_CASE("marginal, product and reorder agree with direct sums") {
  std::mt19937_64 rng(7);
  auto a = var("x", "o", testing::int_domain(3));
  auto b = var("y", "o", testing::int_domain(4));
  auto c = var("z", "o", testing::int_domain(2));
  auto t = testing::random_simplex(rng, 24);
  JointDistribution j({a, b, c}, t);

  std::vector<StateVariable> keep = {c, a};
  auto m = j.marginal(keep);
  for (int zc = 0; zc < 2; ++zc) {
    for (int xa = 0; xa < 3; ++xa) {
      double s = 0;
      for (int yb = 0; yb < 4; ++yb) s += t[static_cast<std::size_t>((xa * 4 + yb) * 2 + zc)];
      std::vector<Value> v = {Value::integer(zc), Value::integer(xa)};
      CHECK(m.probability(v) == doctest::Approx(s).epsilon(1e-12));
    }
  }

  std::vector<StateVariable> order = {c, b, a};
  auto r = j.reordered(order);
  for (std::size_t i = 0; i < j.size(); ++i) {
    auto tup = j.tuple(i);
    std::vector<Value> back = {tup[2], tup[1], tup[0]};
    CHECK(r.probability(back) == doctest::Approx(j[i]).epsilon(1e-15));
  }

  auto ma = j.marginal(std::vector<StateVariable>{a});
  auto mbc = j.marginal(std::vector<StateVariable>{b, c});
  auto prod = ma.product(mbc);
  REQUIRE(prod.variables() == j.variables());
  for (std::size_t i = 0; i < prod.size(); ++i) {
    auto tup = prod.tuple(i);
    std::vector<Value> va = {tup[0]};
    std::vector<Value> vbc = {tup[1], tup[2]};
    CHECK(prod[i] == doctest::Approx(ma.probability(va) * mbc.probability(vbc)));
  }
  CHECK_THROWS_AS(j.marginal(std::vector<StateVariable>{var("w", "o", testing::int_domain(2))}),
                  UnknownVariable);
}

TEST_CASE("mode breaks ties toward the smallest index tuple") {
  auto a = var("x", "m", testing::int_domain(2));
  auto b = var("y", "m", testing::int_domain(2));
  JointDistribution j({a, b}, {0.1, 0.4, 0.4, 0.1});
  CHECK(j.mode() == 1);
}

TEST_CASE("Jeffrey update on the Same example") {
  auto o1 = var("color", "o1", colors());
  auto o2 = var("color", "o2", colors());
  auto same = fluent("Same", {o1, o2});

  SUBCASE("p = 1 keeps only the diagonal") {
    auto j = JointDistribution::uniform({o1, o2});
    auto out = jeffrey_update(j, same, 1.0);
    CHECK(out.inconsistent_mass == doctest::Approx(2.0 / 3));
    for (std::size_t i = 0; i < 9; ++i) {
      CHECK(j[i] == doctest::Approx(i % 4 == 0 ? 1.0 / 3 : 0.0));
    }
  }
  SUBCASE("p = 0.5 puts 1/6 on agreeing and 1/12 on disagreeing pairs") {
    auto j = JointDistribution::uniform({o1, o2});
    jeffrey_update(j, same, 0.5);
    for (std::size_t i = 0; i < 9; ++i) {
      CHECK(j[i] == doctest::Approx(i % 4 == 0 ? 1.0 / 6 : 1.0 / 12));
    }
  }
  SUBCASE("already certain fluent leaves the table alone") {
    auto j = JointDistribution::uniform({o1, o2});
    jeffrey_update(j, same, 1.0);
    const std::vector<double> before(j.table().begin(), j.table().end());
    auto out = jeffrey_update(j, same, 0.3);
    CHECK_FALSE(out.changed);
    CHECK(std::vector<double>(j.table().begin(), j.table().end()) == before);
  }
  SUBCASE("no consistent tuple is a contradiction for any p") {
    auto j = JointDistribution::point_mass(o1, Value::symbol("red"));
    auto is_green = fluent("Equal", {o1, Value::symbol("green")});
    const std::vector<double> before(j.table().begin(), j.table().end());
    CHECK_THROWS_AS(jeffrey_update(j, is_green, 1.0), Contradiction);
    CHECK_THROWS_AS(jeffrey_update(j, is_green, 0.4), Contradiction);
    CHECK(std::vector<double>(j.table().begin(), j.table().end()) == before);
  }
}

TEST_CASE("Jeffrey update matches the enumeration oracle on random factors") {
  std::mt19937_64 rng(11);
  const char* preds[] = {"Equal", "Different", "Same"};
  for (int trial = 0; trial < 300; ++trial) {
    std::uniform_int_distribution<int> nvars(1, 4), dsize(2, 5), pick(0, 2);
    std::uniform_real_distribution<double> up(0.05, 1.0);
    const int n = nvars(rng);
    std::vector<StateVariable> vars;
    std::size_t size = 1;
    for (int i = 0; i < n; ++i) {
      vars.push_back(var("v", "o" + std::to_string(i), testing::int_domain(dsize(rng))));
      size *= vars.back().domain().size();
    }
    auto table = testing::random_simplex(rng, size);
    std::uniform_int_distribution<int> which(0, n - 1);
    const int a = which(rng), b = which(rng);
    std::string pred = preds[pick(rng)];
    Fluent f = (pred == "Same" && a != b && vars[a].domain().size() == vars[b].domain().size())
                   ? fluent("Same", {vars[a], vars[b]})
                   : fluent(pred == "Same" ? "Equal" : pred, {vars[a], Value::integer(1)});
    const double p = trial % 5 == 0 ? 1.0 : up(rng);
    JointDistribution j(vars, table);
    auto expected = testing::jeffrey_oracle(vars, table, f, p);
    try {
      jeffrey_update(j, f, p);
    } catch (const Contradiction&) {
      double consistent = 0;
      auto tuples = testing::enumerate_tuples(vars);
      for (std::size_t i = 0; i < tuples.size(); ++i) {
        if (evaluate(f, tuples[i])) consistent += table[i];
      }
      CHECK(consistent == 0.0);
      continue;
    }
    for (std::size_t i = 0; i < size; ++i) CHECK(std::abs(j[i] - expected[i]) <= 1e-9);
  }
}

TEST_CASE("Jensen-Shannon divergence") {
  const std::vector<double> uniform2 = {0.5, 0.5}, point = {1.0, 0.0}, other = {0.0, 1.0};
  CHECK(js_divergence(uniform2, point) == doctest::Approx(0.215762).epsilon(1e-6));
  CHECK(js_divergence(point, other) == doctest::Approx(std::numbers::ln2));
  CHECK(js_divergence(uniform2, uniform2) == 0.0);

  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    auto p = testing::random_simplex(rng, 6), q = testing::random_simplex(rng, 6);
    const double d = js_divergence(p, q);
    CHECK(d == doctest::Approx(testing::js_oracle(p, q)).epsilon(1e-12));
    CHECK(d == doctest::Approx(js_divergence(q, p)).epsilon(1e-12));
    CHECK(d >= 0.0);
    CHECK(d <= std::numbers::ln2 + 1e-15);
  }

  auto x = var("x", "js", testing::int_domain(2));
  auto y = var("y", "js", testing::int_domain(2));
  CHECK_THROWS_AS(js_divergence(JointDistribution::uniform({x}), JointDistribution::uniform({y})),
                  std::invalid_argument);
}

TEST_CASE("split divergence equals the divergence from the product of marginals") {
  auto a = var("x", "sd", testing::symbol_domain({"a", "b"}));
  auto b = var("y", "sd", testing::symbol_domain({"a", "b"}));
  JointDistribution corr({a, b}, {0.5, 0.0, 0.0, 0.5});
  const std::vector<double> product = {0.25, 0.25, 0.25, 0.25};
  const double expected = testing::js_oracle({0.5, 0, 0, 0.5}, product);
  CHECK(expected == doctest::Approx(0.215762).epsilon(1e-6));
  CHECK(split_divergence(corr, 0) == doctest::Approx(expected));
  CHECK(split_divergence(corr, 1) == doctest::Approx(expected));

  std::mt19937_64 rng(5);
  auto c = var("z", "sd", testing::int_domain(3));
  for (int i = 0; i < 50; ++i) {
    JointDistribution j({a, c, b}, testing::random_simplex(rng, 12));
    for (std::size_t pos = 0; pos < 3; ++pos) {
      auto [single, rest] = split_off(j, pos);
      auto rebuilt = single.product(rest).reordered(j.variables());
      std::vector<double> jt(j.table().begin(), j.table().end());
      std::vector<double> rt(rebuilt.table().begin(), rebuilt.table().end());
      CHECK(split_divergence(j, pos) == doctest::Approx(testing::js_oracle(jt, rt)).epsilon(1e-9));
    }
  }
}
