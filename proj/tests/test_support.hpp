#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "dfb/belief.hpp"
#include "dfb/distribution.hpp"
#include "dfb/fluent.hpp"
#include "dfb/schema.hpp"

namespace testing {

inline dfb::DomainPtr symbol_domain(std::vector<std::string> names) {
  std::vector<dfb::Value> vs;
  for (auto& n : names) vs.push_back(dfb::Value::symbol(n));
  return std::make_shared<const dfb::Domain>(std::move(vs));
}

inline dfb::DomainPtr int_domain(int n) {
  std::vector<dfb::Value> vs;
  for (int i = 0; i < n; ++i) vs.push_back(dfb::Value::integer(i));
  return std::make_shared<const dfb::Domain>(std::move(vs));
}

inline dfb::StateVariable var(const std::string& prop, const std::string& obj, dfb::DomainPtr d) {
  return dfb::StateVariable(dfb::Symbol(prop), dfb::Symbol(obj), std::move(d));
}

inline const dfb::PredicateRegistry& registry() {
  static auto grid = std::make_shared<dfb::Grid>();
  static dfb::PredicateRegistry r = dfb::PredicateRegistry::standard(grid);
  return r;
}

inline dfb::Fluent fluent(const std::string& name, std::vector<dfb::Term> args) {
  return dfb::Fluent(registry().find(name), std::move(args));
}

// Every tuple of the joint, as an assignment, paired with its flat index.
// Enumerates with its own odometer, independent of the library's layout code.
inline std::vector<dfb::Assignment> enumerate_tuples(const std::vector<dfb::StateVariable>& vars) {
  std::vector<dfb::Assignment> out;
  std::vector<std::size_t> idx(vars.size(), 0);
  for (;;) {
    dfb::Assignment a;
    for (std::size_t i = 0; i < vars.size(); ++i) a.emplace(vars[i], vars[i].domain()[idx[i]]);
    out.push_back(std::move(a));
    std::size_t k = vars.size();
    while (k > 0) {
      --k;
      if (++idx[k] < vars[k].domain().size()) break;
      idx[k] = 0;
      if (k == 0) return out;
    }
    if (vars.empty()) return out;
  }
}

// Jeffrey's rule written straight from its definition: scale inconsistent
// tuples by (1-p)(1-m)/(p m), then renormalize.
inline std::vector<double> jeffrey_oracle(const std::vector<dfb::StateVariable>& vars,
                                          const std::vector<double>& table, const dfb::Fluent& f,
                                          double p) {
  const auto tuples = enumerate_tuples(vars);
  std::vector<bool> ok(tuples.size());
  double m = 0.0;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    ok[i] = dfb::evaluate(f, tuples[i]);
    if (!ok[i]) m += table[i];
  }
  std::vector<double> out = table;
  if (m == 0.0) return out;
  const double scale = (1.0 - p) * (1.0 - m) / (p * m);
  double total = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!ok[i]) out[i] *= scale;
    total += out[i];
  }
  for (auto& x : out) x /= total;
  return out;
}

inline double js_oracle(const std::vector<double>& p, const std::vector<double>& q) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double a = 0.5 * (p[i] + q[i]);
    if (p[i] > 0) d += 0.5 * p[i] * std::log(p[i] / a);
    if (q[i] > 0) d += 0.5 * q[i] * std::log(q[i] / a);
  }
  return d;
}

inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n, double zero_chance = 0.2) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) {
    x = u(rng) < zero_chance ? 0.0 : u(rng);
    total += x;
  }
  if (total == 0.0) {
    w[0] = 1.0;
    total = 1.0;
  }
  for (auto& x : w) x /= total;
  return w;
}

inline std::string structure_string(const std::vector<std::vector<dfb::StateVariable>>& s) {
  std::vector<std::string> parts;
  for (const auto& f : s) {
    std::vector<std::string> names;
    for (const auto& v : f) names.push_back(v.to_string());
    std::sort(names.begin(), names.end());
    std::string p = "[";
    for (std::size_t i = 0; i < names.size(); ++i) p += (i ? "," : "") + names[i];
    parts.push_back(p + "]");
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto& p : parts) out += p;
  return out;
}

inline std::string assignment_key(const dfb::Assignment& a, const std::vector<dfb::StateVariable>& order) {
  std::string k;
  for (const auto& v : order) k += a.at(v).to_string() + ";";
  return k;
}

// Every total assignment with positive probability under each factor that
// satisfies every stored complex fluent held with certainty (the others are
// soft), keyed by assignment_key(order).
inline std::set<std::string> feasible_states(const dfb::Belief& b, std::vector<dfb::StateVariable>& order) {
  order.clear();
  std::vector<std::vector<std::pair<dfb::Assignment, double>>> per_factor;
  for (auto id : b.factor_ids()) {
    const auto& joint = b.factor(id);
    const auto& vars = joint.variables();
    order.insert(order.end(), vars.begin(), vars.end());
    auto tuples = enumerate_tuples(vars);
    std::vector<std::pair<dfb::Assignment, double>> rows;
    for (auto& t : tuples) {
      std::vector<dfb::Value> vals;
      for (const auto& v : vars) vals.push_back(t.at(v));
      const double p = joint.probability(vals);
      if (p > 0) rows.emplace_back(std::move(t), p);
    }
    per_factor.push_back(std::move(rows));
  }
  std::set<std::string> out;
  dfb::Assignment current;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == per_factor.size()) {
      for (const auto& cf : b.complex_fluents()) {
        if (cf.p >= 1.0 && !dfb::evaluate(cf.fluent, current)) return;
      }
      out.insert(assignment_key(current, order));
      return;
    }
    for (const auto& [t, p] : per_factor[i]) {
      for (const auto& [v, x] : t) current[v] = x;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

}  // namespace testing
