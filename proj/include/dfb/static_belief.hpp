#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dfb/belief.hpp"

namespace dfb {

// Baseline belief with a factoring fixed at construction: one singleton
// factor per given variable. A fluent folds only when it mentions exactly
// one of those variables; everything else is stored as a complex fluent.
// Variables outside the fixed set are never factored: they are drawn
// independently from their default prior (or pinned by an action effect)
// and filtered by the complex fluents at sampling time.
class StaticBelief : public BeliefModel {
 public:
  // Throws std::invalid_argument for duplicates or non-singleton priors.
  StaticBelief(std::vector<std::pair<StateVariable, JointDistribution>> fixed,
               BeliefConfig config = {});

  UpdateReport update(const Observation& obs, const ActionRecord& action,
                      ContradictionPolicy policy = ContradictionPolicy::Throw) override;
  JointDistribution marginal(std::span<const StateVariable> vars) const override;
  Assignment sample_state(Rng& rng, SamplerStats* stats = nullptr) const override;
  std::optional<Value> determined_value(const StateVariable& v) const override;
  std::vector<StateVariable> variables() const override;
  const std::vector<ComplexFluent>& complex_fluents() const override { return complex_; }
  BeliefStats stats() const override;
  nlohmann::json snapshot() const override;

  // Variable lists of the fixed factors, in construction order.
  std::vector<std::vector<StateVariable>> structure() const;
  bool is_fixed(const StateVariable& v) const { return fixed_index_.count(v) != 0; }
  const BeliefConfig& config() const { return config_; }

 private:
  std::vector<CachedTable> fixed_;
  std::unordered_map<StateVariable, std::size_t, StateVariableHash> fixed_index_;
  // Unfactored variables in first-seen order.
  std::vector<CachedTable> free_;
  std::unordered_map<StateVariable, std::size_t, StateVariableHash> free_index_;
  std::vector<ComplexFluent> complex_;
  BeliefConfig config_;

  const CachedTable* table_of(const StateVariable& v) const;
};

}  // namespace dfb
