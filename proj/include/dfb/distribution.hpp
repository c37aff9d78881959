#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dfb/fluent.hpp"
#include "dfb/variable.hpp"

namespace dfb {

// Dense joint distribution over an ordered list of state variables.
// The table is row-major over domain indices: the last variable varies
// fastest. Probabilities are non-negative and sum to 1 within 1e-9.
class JointDistribution {
 public:
  static constexpr double kSumTolerance = 1e-9;

  JointDistribution() = default;
  // Throws std::invalid_argument on a size mismatch, negative entries,
  // a bad sum, or a repeated variable.
  JointDistribution(std::vector<StateVariable> variables, std::vector<double> table);

  static JointDistribution uniform(std::vector<StateVariable> variables);
  static JointDistribution point_mass(const StateVariable& variable, const Value& value);
  // Normalizes non-negative weights; throws if they sum to zero.
  static JointDistribution from_weights(std::vector<StateVariable> variables,
                                        std::vector<double> weights);

  const std::vector<StateVariable>& variables() const { return variables_; }
  std::size_t arity() const { return variables_.size(); }
  std::size_t size() const { return table_.size(); }
  std::span<const double> table() const { return table_; }
  double operator[](std::size_t flat) const { return table_[flat]; }

  std::size_t radix(std::size_t pos) const { return radices_[pos]; }
  std::size_t stride(std::size_t pos) const { return strides_[pos]; }
  std::size_t digit(std::size_t flat, std::size_t pos) const {
    return (flat / strides_[pos]) % radices_[pos];
  }
  std::optional<std::size_t> position(const StateVariable& v) const;

  std::vector<Value> tuple(std::size_t flat) const;
  // values are in variables() order. Throws DomainError.
  double probability(std::span<const Value> values) const;

  // Exact marginal over `keep`, in the order given. Throws UnknownVariable.
  JointDistribution marginal(std::span<const StateVariable> keep) const;
  // Outer product; variables are this's followed by other's.
  JointDistribution product(const JointDistribution& other) const;
  // Same distribution with variables permuted into `order`.
  JointDistribution reordered(std::span<const StateVariable> order) const;

  // Single-variable marginals for every variable, in one pass.
  std::vector<std::vector<double>> single_marginals() const;

  // Index of the most likely tuple; ties break toward the lexicographically
  // smallest domain-index tuple.
  std::size_t mode() const;

  // Raw mutable access for in-place updates; call normalize() afterwards.
  std::vector<double>& mutable_table() { return table_; }
  void normalize();

 private:
  void init_layout();

  std::vector<StateVariable> variables_;
  std::vector<std::size_t> radices_;
  std::vector<std::size_t> strides_;
  std::vector<double> table_;
};

// Natural-log divergences over aligned probability vectors. Terms with
// p(i) = 0 contribute nothing; D_KL is infinite where q(i) = 0 < p(i).
double kl_divergence(std::span<const double> p, std::span<const double> q);
double js_divergence(std::span<const double> p, std::span<const double> q);
// Throws std::invalid_argument unless both share the same variable list.
double js_divergence(const JointDistribution& p, const JointDistribution& q);

struct JeffreyOutcome {
  double inconsistent_mass = 0.0;  // prior mass m of tuples violating the fluent
  bool changed = false;
};

// Moves exactly mass p onto the tuples consistent with f by rescaling the
// inconsistent ones by (1-p)(1-m)/(pm), then normalizing. m = 0 leaves the
// table untouched. Throws Contradiction when no tuple is consistent, and
// UnknownVariable when f mentions a variable outside the joint.
JeffreyOutcome jeffrey_update(JointDistribution& joint, const Fluent& f, double p);

// Per-tuple consistency of f over the joint's table.
std::vector<char> consistency_mask(const JointDistribution& joint, const Fluent& f);

// D_JS between the joint and marginal(variable at pos) x marginal(rest).
double split_divergence(const JointDistribution& joint, std::size_t pos);

// {marginal of the variable at pos, marginal of the remaining variables}.
std::pair<JointDistribution, JointDistribution> split_off(const JointDistribution& joint,
                                                          std::size_t pos);

}  // namespace dfb
