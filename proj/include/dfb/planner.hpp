#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dfb/action.hpp"
#include "dfb/belief.hpp"
#include "dfb/cooking.hpp"
#include "dfb/sampler.hpp"

namespace dfb::planner {

// An ingredient the plan must bring to the pot, at a hypothesized location.
// known means the belief pins it there, so it can be picked without looking.
struct Target {
  std::size_t location = 0;
  bool vegetable = true;
  bool known = false;
};

struct PlanningProblem {
  std::vector<Target> targets;  // ascending location, at most one per location
  int held_vegetables = 0;
  int held_seasonings = 0;
  int cooking_remaining = 0;  // steps until the pot's vegetables are cooked
};

// Locations and ingredient identities are irrelevant to cost, so search runs
// over counts: unknown (u), known (k) and held (h) vegetables and seasonings,
// plus the cooking countdown.
struct AbstractState {
  int uv = 0, us = 0, kv = 0, ks = 0, hv = 0, hs = 0, timer = 0;

  bool goal() const { return uv + us + kv + ks + hv + hs == 0 && timer == 0; }
  std::uint64_t key() const;
  friend bool operator==(const AbstractState&, const AbstractState&) = default;
};

enum class AbstractOp { ObserveVegetable, ObserveSeasoning, PickVegetable, PickSeasoning, Place, NoOp };
inline constexpr std::array<AbstractOp, 6> kAbstractOps = {
    AbstractOp::ObserveVegetable, AbstractOp::ObserveSeasoning, AbstractOp::PickVegetable,
    AbstractOp::PickSeasoning,    AbstractOp::Place,            AbstractOp::NoOp};

AbstractState abstract_state(const PlanningProblem& problem);
// Successor and step cost (including living cost), or nullopt when the
// operator is inapplicable or can never help.
std::optional<std::pair<AbstractState, int>> successor(const AbstractState& s, AbstractOp op);
// Admissible lower bound on the remaining cost.
int heuristic(const AbstractState& s);

struct Plan {
  std::vector<Operator> steps;
  double expected_cost = 0.0;
};

struct SearchStats {
  std::size_t expanded = 0;
  std::size_t generated = 0;
};

// Cost-optimal plan for the problem under its own hypothesis. Throws NoPlan.
Plan plan(const PlanningProblem& problem, const cooking::Kitchen& kitchen, SearchStats* stats = nullptr);

// Reads the planning problem off a hypothesized world. Targets are the
// hypothesized non-empty locations plus the locations of ingredients the
// belief pins down; an ingredient's type overrides the contents guess.
PlanningProblem make_problem(const cooking::Kitchen& kitchen, const Assignment& hypothesis,
                             const BeliefModel& belief, int held_vegetables, int held_seasonings,
                             int cooking_remaining);

// sample_state with fresh draws on SearchExhausted. Throws SearchExhausted
// once every attempt failed.
struct DeterminizeStats {
  std::size_t succeeded = 0;
  std::size_t failed = 0;
  double seconds = 0.0;
};
Assignment determinize(const BeliefModel& belief, Rng& rng, int attempts,
                       DeterminizeStats* stats = nullptr);

enum class Representation { Dynamic, Static };
std::string representation_name(Representation r);
Representation representation_from_name(const std::string& name);

std::unique_ptr<BeliefModel> make_belief(Representation rep, const cooking::Kitchen& kitchen,
                                         const BeliefConfig& config);

struct EpisodeOptions {
  Representation representation = Representation::Dynamic;
  BeliefConfig belief;
  double assertion_p = 1.0;
  std::vector<cooking::Template> templates = cooking::all_templates();
  double timeout_s = 60.0;
  std::size_t max_steps = 10'000;
  int determinize_attempts = 10;
  // Assert every ingredient position (p = 1) before the first step.
  bool initial_full_observation = false;
  // When false, timing fields are left at zero so results are reproducible.
  bool record_timing = true;
  // Called with one human-readable line per executed step.
  std::function<void(const std::string&)> trace;
};

struct EpisodeResult {
  std::uint64_t seed = 0;
  bool solved = false;
  std::string outcome;  // solved, timeout, step_cap, inference_failed
  double total_cost = 0.0;
  std::size_t steps = 0;
  std::size_t replans = 0;
  std::size_t observes = 0;
  std::size_t queries = 0;
  std::size_t failed_queries = 0;
  std::size_t rejected_fluents = 0;
  double belief_update_time_mean_s = 0.0;
  double queries_per_second = 0.0;
  double n_factors_mean = 0.0;
  double mean_factor_size = 0.0;
  double complex_fluents_final = 0.0;
  double wall_time_s = 0.0;
};

// Runs one determinize-and-replan episode in a world generated from config.
EpisodeResult run_episode(const cooking::WorldConfig& world, const EpisodeOptions& options);

// Runs the agent loop against an existing world and belief.
EpisodeResult execute_episode(cooking::HiddenWorld& world, BeliefModel& belief,
                              const EpisodeOptions& options, Rng& agent_rng, Rng& assertion_rng);

}  // namespace dfb::planner
