#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dfb/belief_model.hpp"

namespace dfb {

struct BeliefConfig {
  // Split threshold on the Jensen-Shannon reconstruction error, in [0, ln 2].
  // Splitting needs a strictly smaller error, so 0 disables it.
  double epsilon = 1e-9;
  // A fluent whose factors would join into more table entries than this
  // is stored lazily instead.
  std::uint64_t max_joint_entries = 1'000'000;
  std::uint32_t sample_limit_per_factor = 100;
  std::uint64_t max_backtrack_steps = 100'000;
  // Repeat the split scan until nothing splits (default: one pass).
  bool split_to_fixpoint = false;
  // Prior weights per property name for newly introduced variables;
  // properties not listed get a uniform prior.
  std::map<std::string, std::vector<double>> priors;

  // Throws std::invalid_argument on out-of-range settings.
  void validate() const;
  JointDistribution default_prior(const StateVariable& v) const;
  SamplerLimits sampler_limits() const { return {sample_limit_per_factor, max_backtrack_steps}; }
};

// True iff the product of the sizes exceeds config.max_joint_entries.
// The product saturates instead of overflowing.
bool is_too_big(std::span<const std::uint64_t> sizes, const BeliefConfig& config);

// Belief whose factoring follows the incoming fluents: factors mentioned
// together are joined and conditioned with Jeffrey's rule, and factors are
// split again whenever a variable can be marginalized out with small
// reconstruction error. Fluents too expensive to fold are kept aside and
// enforced only when sampling.
//
// Invariant: every known variable lives in exactly one factor.
class Belief : public BeliefModel {
 public:
  using FactorId = std::uint64_t;

  explicit Belief(BeliefConfig config = {});

  // One singleton factor per known variable. Throws std::invalid_argument
  // for duplicates or priors that are not over exactly that variable.
  static Belief init(std::vector<std::pair<StateVariable, JointDistribution>> known,
                     BeliefConfig config = {});

  UpdateReport update(const Observation& obs, const ActionRecord& action,
                      ContradictionPolicy policy = ContradictionPolicy::Throw) override;

  // Joins every factor touching f into one and conditions it so f holds
  // with probability p. All of f's variables must be known and the joint
  // must fit within max_joint_entries.
  void join_factors_and_update(const Fluent& f, double p);

  // One scan over a snapshot of the factor's variables, splitting off each
  // variable whose removal costs less than epsilon. Returns whether
  // anything split.
  bool try_split(FactorId id);

  // Each effected variable becomes a point-mass singleton; the rest of its
  // old factor keeps its marginal. Lazily stored fluents mentioning an
  // effected variable are discarded, since they described its old value.
  void update_with_action(const ActionRecord& action);

  // Adds a singleton factor; uses the configured default prior when none
  // is given. Throws std::invalid_argument if v is already known.
  void add_variable(const StateVariable& v, std::optional<JointDistribution> prior = std::nullopt);

  JointDistribution marginal(std::span<const StateVariable> vars) const override;
  Assignment sample_state(Rng& rng, SamplerStats* stats = nullptr) const override;
  std::optional<Value> determined_value(const StateVariable& v) const override;
  std::vector<StateVariable> variables() const override;
  const std::vector<ComplexFluent>& complex_fluents() const override { return complex_; }
  BeliefStats stats() const override;
  nlohmann::json snapshot() const override;

  bool contains(const StateVariable& v) const { return index_.count(v) != 0; }
  std::optional<FactorId> factor_of(const StateVariable& v) const;
  const JointDistribution& factor(FactorId id) const;
  std::vector<FactorId> factor_ids() const;
  // Variable lists of all factors, ordered by factor id.
  std::vector<std::vector<StateVariable>> structure() const;
  const BeliefConfig& config() const { return config_; }

  // Checks the partition invariant and index consistency.
  bool check_invariants(std::string* why = nullptr) const;

 private:
  struct FactorData {
    CachedTable table;
    bool split_pending = true;
  };

  FactorId insert_factor(JointDistribution joint);
  void join_internal(const Fluent& f, double p, const std::vector<FactorId>& ids);
  void apply_action(const ActionRecord& action);
  void split_pass();
  void fold_contained_complex(ContradictionPolicy policy, UpdateReport* report);
  std::vector<FactorId> factors_touching(const Fluent& f) const;

  std::map<FactorId, FactorData> factors_;
  std::unordered_map<StateVariable, FactorId, StateVariableHash> index_;
  std::vector<ComplexFluent> complex_;
  BeliefConfig config_;
  FactorId next_id_ = 1;
};

// Deterministic text form of a joint, used by snapshots.
nlohmann::json joint_to_json(const JointDistribution& joint);

}  // namespace dfb
