#pragma once

#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "dfb/action.hpp"
#include "dfb/distribution.hpp"
#include "dfb/fluent.hpp"
#include "dfb/sampler.hpp"

namespace dfb {

enum class ContradictionPolicy {
  Throw,  // propagate Contradiction; entries before the failing one stay applied
  Skip,   // drop the contradicting entry and record it in the report
};

struct UpdateReport {
  std::size_t folded = 0;    // entries absorbed into factors
  std::size_t deferred = 0;  // entries stored as complex fluents
  std::vector<ObservationEntry> rejected;
};

struct ComplexFluent {
  Fluent fluent;
  double p = 1.0;
};

struct BeliefStats {
  std::size_t factors = 0;
  double mean_factor_size = 0.0;  // variables per factor
  std::size_t max_factor_size = 0;
  std::size_t max_table_entries = 0;
  std::size_t complex_fluents = 0;
};

// Query/update surface shared by the dynamic and static representations,
// so the planner and the benchmark treat them alike.
class BeliefModel {
 public:
  virtual ~BeliefModel() = default;

  virtual UpdateReport update(const Observation& obs, const ActionRecord& action,
                              ContradictionPolicy policy = ContradictionPolicy::Throw) = 0;
  virtual JointDistribution marginal(std::span<const StateVariable> vars) const = 0;
  virtual Assignment sample_state(Rng& rng, SamplerStats* stats = nullptr) const = 0;
  // The value v holds with probability 1 (within 1e-9), if its marginal is
  // tracked by a factor and is a point mass.
  virtual std::optional<Value> determined_value(const StateVariable& v) const = 0;
  virtual std::vector<StateVariable> variables() const = 0;
  virtual const std::vector<ComplexFluent>& complex_fluents() const = 0;
  virtual BeliefStats stats() const = 0;
  virtual nlohmann::json snapshot() const = 0;
};

}  // namespace dfb
