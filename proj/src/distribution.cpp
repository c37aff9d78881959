#include "dfb/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "dfb/errors.hpp"

namespace dfb {

namespace {

// Row-major walk over a mixed-radix layout that keeps a weighted digit sum,
// so mapping a flat index into another layout costs O(1) amortized.
class Odometer {
 public:
  Odometer(const std::vector<std::size_t>& radices, std::vector<std::size_t> weights)
      : radices_(radices), weights_(std::move(weights)), digits_(radices.size(), 0) {}

  std::size_t weighted() const { return sum_; }
  const std::vector<std::size_t>& digits() const { return digits_; }

  void next() {
    for (std::size_t i = digits_.size(); i-- > 0;) {
      ++digits_[i];
      sum_ += weights_[i];
      if (digits_[i] < radices_[i]) return;
      sum_ -= weights_[i] * radices_[i];
      digits_[i] = 0;
    }
  }

 private:
  const std::vector<std::size_t>& radices_;
  std::vector<std::size_t> weights_;
  std::vector<std::size_t> digits_;
  std::size_t sum_ = 0;
};

double table_sum(const std::vector<double>& t) {
  long double s = 0;
  for (double x : t) s += x;
  return static_cast<double>(s);
}

}  // namespace

JointDistribution::JointDistribution(std::vector<StateVariable> variables,
                                     std::vector<double> table)
    : variables_(std::move(variables)), table_(std::move(table)) {
  if (variables_.empty()) throw std::invalid_argument("a joint needs at least one variable");
  init_layout();
  std::size_t expected = 1;
  for (auto r : radices_) expected *= r;
  if (table_.size() != expected) {
    throw std::invalid_argument("table has " + std::to_string(table_.size()) +
                                " entries, expected " + std::to_string(expected));
  }
  for (double x : table_) {
    if (!(x >= 0.0)) throw std::invalid_argument("probabilities must be non-negative");
  }
  const double s = table_sum(table_);
  if (std::abs(s - 1.0) > kSumTolerance) {
    throw std::invalid_argument("probabilities sum to " + std::to_string(s));
  }
}

void JointDistribution::init_layout() {
  radices_.clear();
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    for (std::size_t k = 0; k < i; ++k) {
      if (variables_[k] == variables_[i]) {
        throw std::invalid_argument("repeated variable " + variables_[i].to_string());
      }
    }
    radices_.push_back(variables_[i].domain().size());
  }
  strides_.assign(radices_.size(), 1);
  for (std::size_t i = radices_.size(); i-- > 1;) strides_[i - 1] = strides_[i] * radices_[i];
}

JointDistribution JointDistribution::uniform(std::vector<StateVariable> variables) {
  std::size_t n = 1;
  for (const auto& v : variables) n *= v.domain().size();
  return from_weights(std::move(variables), std::vector<double>(n, 1.0));
}

JointDistribution JointDistribution::point_mass(const StateVariable& variable, const Value& value) {
  auto idx = variable.domain().index_of(value);
  if (!idx) {
    throw DomainError(value.to_string() + " is outside the domain of " + variable.to_string());
  }
  std::vector<double> t(variable.domain().size(), 0.0);
  t[*idx] = 1.0;
  return JointDistribution({variable}, std::move(t));
}

JointDistribution JointDistribution::from_weights(std::vector<StateVariable> variables,
                                                  std::vector<double> weights) {
  JointDistribution d;
  d.variables_ = std::move(variables);
  if (d.variables_.empty()) throw std::invalid_argument("a joint needs at least one variable");
  d.init_layout();
  std::size_t expected = 1;
  for (auto r : d.radices_) expected *= r;
  if (weights.size() != expected) throw std::invalid_argument("weight vector has the wrong size");
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("weights must be non-negative");
  }
  d.table_ = std::move(weights);
  d.normalize();
  return d;
}

std::optional<std::size_t> JointDistribution::position(const StateVariable& v) const {
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    if (variables_[i] == v) return i;
  }
  return std::nullopt;
}

std::vector<Value> JointDistribution::tuple(std::size_t flat) const {
  std::vector<Value> out;
  out.reserve(variables_.size());
  for (std::size_t i = 0; i < variables_.size(); ++i) {
    out.push_back(variables_[i].domain()[digit(flat, i)]);
  }
  return out;
}

double JointDistribution::probability(std::span<const Value> values) const {
  if (values.size() != variables_.size()) throw std::invalid_argument("tuple arity mismatch");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    auto idx = variables_[i].domain().index_of(values[i]);
    if (!idx) {
      throw DomainError(values[i].to_string() + " is outside the domain of " +
                        variables_[i].to_string());
    }
    flat += *idx * strides_[i];
  }
  return table_[flat];
}

JointDistribution JointDistribution::marginal(std::span<const StateVariable> keep) const {
  std::vector<StateVariable> out_vars(keep.begin(), keep.end());
  std::vector<std::size_t> out_radix;
  for (const auto& v : keep) {
    if (!position(v)) throw UnknownVariable(v.to_string() + " is not part of this joint");
    out_radix.push_back(v.domain().size());
  }
  std::vector<std::size_t> out_stride(out_radix.size(), 1);
  for (std::size_t i = out_radix.size(); i-- > 1;) out_stride[i - 1] = out_stride[i] * out_radix[i];

  std::vector<std::size_t> weights(variables_.size(), 0);
  for (std::size_t k = 0; k < keep.size(); ++k) weights[*position(keep[k])] = out_stride[k];

  std::size_t out_size = 1;
  for (auto r : out_radix) out_size *= r;
  std::vector<double> out(out_size, 0.0);
  Odometer odo(radices_, std::move(weights));
  for (std::size_t flat = 0; flat < table_.size(); ++flat, odo.next()) {
    out[odo.weighted()] += table_[flat];
  }
  return from_weights(std::move(out_vars), std::move(out));
}

JointDistribution JointDistribution::product(const JointDistribution& other) const {
  std::vector<StateVariable> vars = variables_;
  vars.insert(vars.end(), other.variables_.begin(), other.variables_.end());
  std::vector<double> t;
  t.reserve(table_.size() * other.table_.size());
  for (double a : table_) {
    for (double b : other.table_) t.push_back(a * b);
  }
  return from_weights(std::move(vars), std::move(t));
}

JointDistribution JointDistribution::reordered(std::span<const StateVariable> order) const {
  if (order.size() != variables_.size()) {
    throw std::invalid_argument("reorder needs a permutation of the variables");
  }
  std::vector<StateVariable> vars(order.begin(), order.end());
  std::vector<std::size_t> radix;
  std::vector<std::size_t> weights;
  for (const auto& v : order) {
    auto pos = position(v);
    if (!pos) throw UnknownVariable(v.to_string() + " is not part of this joint");
    radix.push_back(radices_[*pos]);
    weights.push_back(strides_[*pos]);
  }
  std::vector<double> t(table_.size());
  Odometer odo(radix, std::move(weights));
  for (std::size_t flat = 0; flat < t.size(); ++flat, odo.next()) t[flat] = table_[odo.weighted()];
  return JointDistribution(std::move(vars), std::move(t));
}

std::vector<std::vector<double>> JointDistribution::single_marginals() const {
  std::vector<std::vector<double>> out;
  for (auto r : radices_) out.emplace_back(r, 0.0);
  if (variables_.size() == 1) {
    out[0] = table_;
    return out;
  }
  Odometer odo(radices_, std::vector<std::size_t>(radices_.size(), 0));
  for (std::size_t flat = 0; flat < table_.size(); ++flat, odo.next()) {
    const double p = table_[flat];
    if (p == 0.0) continue;
    const auto& d = odo.digits();
    for (std::size_t i = 0; i < d.size(); ++i) out[i][d[i]] += p;
  }
  return out;
}

std::size_t JointDistribution::mode() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < table_.size(); ++i) {
    if (table_[i] > table_[best]) best = i;
  }
  return best;
}

void JointDistribution::normalize() {
  const double s = table_sum(table_);
  if (!(s > 0.0)) throw Contradiction("cannot normalize a distribution with zero mass");
  for (double& x : table_) x /= s;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("distributions differ in size");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] <= 0.0) continue;
    if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
    d += p[i] * std::log(p[i] / q[i]);
  }
  return d;
}

double js_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::invalid_argument("distributions differ in size");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double a = 0.5 * (p[i] + q[i]);
    if (p[i] > 0.0) d += 0.5 * p[i] * std::log(p[i] / a);
    if (q[i] > 0.0) d += 0.5 * q[i] * std::log(q[i] / a);
  }
  return std::clamp(d, 0.0, std::log(2.0));
}

double js_divergence(const JointDistribution& p, const JointDistribution& q) {
  if (p.variables() != q.variables()) {
    throw std::invalid_argument("js_divergence needs identical variable lists");
  }
  return js_divergence(p.table(), q.table());
}

std::vector<char> consistency_mask(const JointDistribution& joint, const Fluent& f) {
  const auto& fvars = f.variables();
  std::vector<std::size_t> fpos;
  std::vector<std::size_t> fradix;
  for (const auto& v : fvars) {
    auto pos = joint.position(v);
    if (!pos) throw UnknownVariable(v.to_string() + " is not part of the joint");
    fpos.push_back(*pos);
    fradix.push_back(v.domain().size());
  }

  // Truth table over the fluent's own variables first; the full mask is a
  // lookup into it.
  std::vector<std::size_t> fstride(fradix.size(), 1);
  for (std::size_t i = fradix.size(); i-- > 1;) fstride[i - 1] = fstride[i] * fradix[i];
  const std::size_t fsize = fradix.empty() ? 1 : fstride[0] * fradix[0];
  std::vector<char> truth(fsize);
  {
    std::vector<Value> values(fvars.size());
    Odometer odo(fradix, std::vector<std::size_t>(fradix.size(), 0));
    for (std::size_t s = 0; s < fsize; ++s, odo.next()) {
      for (std::size_t i = 0; i < fvars.size(); ++i) values[i] = fvars[i].domain()[odo.digits()[i]];
      truth[s] = f.holds(values) ? 1 : 0;
    }
  }

  std::vector<std::size_t> radices;
  for (std::size_t i = 0; i < joint.arity(); ++i) radices.push_back(joint.radix(i));
  std::vector<std::size_t> weights(joint.arity(), 0);
  for (std::size_t k = 0; k < fpos.size(); ++k) weights[fpos[k]] = fstride[k];

  std::vector<char> mask(joint.size());
  Odometer odo(radices, std::move(weights));
  for (std::size_t flat = 0; flat < mask.size(); ++flat, odo.next()) mask[flat] = truth[odo.weighted()];
  return mask;
}

JeffreyOutcome jeffrey_update(JointDistribution& joint, const Fluent& f, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("confidence must lie in (0, 1]");
  const auto mask = consistency_mask(joint, f);
  auto& t = joint.mutable_table();
  long double consistent = 0;
  long double inconsistent = 0;
  for (std::size_t i = 0; i < t.size(); ++i) (mask[i] ? consistent : inconsistent) += t[i];

  JeffreyOutcome out;
  out.inconsistent_mass = static_cast<double>(inconsistent);
  if (inconsistent == 0) return out;
  if (consistent == 0) {
    throw Contradiction(f.render() + " has no consistent value under the current belief");
  }
  // (1-p)(1-m)/(pm) with 1-m computed directly to avoid cancellation.
  const double scale = static_cast<double>((1.0L - p) * consistent / (p * inconsistent));
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!mask[i]) t[i] *= scale;
  }
  joint.normalize();
  out.changed = true;
  return out;
}

namespace {

// Marginals of the variable at pos and of the remaining variables, using
// flat = (hi * d + v) * low + lo and rest = hi * low + lo.
void split_marginals(const JointDistribution& joint, std::size_t pos, std::vector<double>& mv,
                     std::vector<double>& mr) {
  const std::size_t d = joint.radix(pos);
  const std::size_t low = joint.stride(pos);
  const std::size_t high = joint.size() / (d * low);
  mv.assign(d, 0.0);
  mr.assign(high * low, 0.0);
  const auto t = joint.table();
  for (std::size_t hi = 0; hi < high; ++hi) {
    for (std::size_t v = 0; v < d; ++v) {
      const std::size_t base = (hi * d + v) * low;
      double* rest = mr.data() + hi * low;
      double acc = 0.0;
      for (std::size_t lo = 0; lo < low; ++lo) {
        rest[lo] += t[base + lo];
        acc += t[base + lo];
      }
      mv[v] += acc;
    }
  }
}

}  // namespace

double split_divergence(const JointDistribution& joint, std::size_t pos) {
  std::vector<double> mv;
  std::vector<double> mr;
  split_marginals(joint, pos, mv, mr);
  const std::size_t d = joint.radix(pos);
  const std::size_t low = joint.stride(pos);
  const std::size_t high = joint.size() / (d * low);
  const auto t = joint.table();
  double js = 0.0;
  for (std::size_t hi = 0; hi < high; ++hi) {
    for (std::size_t v = 0; v < d; ++v) {
      const std::size_t base = (hi * d + v) * low;
      const double* rest = mr.data() + hi * low;
      for (std::size_t lo = 0; lo < low; ++lo) {
        const double p = t[base + lo];
        const double q = mv[v] * rest[lo];
        const double a = 0.5 * (p + q);
        if (p > 0.0) js += 0.5 * p * std::log(p / a);
        if (q > 0.0) js += 0.5 * q * std::log(q / a);
      }
    }
  }
  return std::clamp(js, 0.0, std::log(2.0));
}

std::pair<JointDistribution, JointDistribution> split_off(const JointDistribution& joint,
                                                          std::size_t pos) {
  if (joint.arity() < 2) throw std::invalid_argument("cannot split a singleton");
  std::vector<double> mv;
  std::vector<double> mr;
  split_marginals(joint, pos, mv, mr);
  std::vector<StateVariable> rest;
  for (std::size_t i = 0; i < joint.arity(); ++i) {
    if (i != pos) rest.push_back(joint.variables()[i]);
  }
  return {JointDistribution::from_weights({joint.variables()[pos]}, std::move(mv)),
          JointDistribution::from_weights(std::move(rest), std::move(mr))};
}

}  // namespace dfb
