#include <chrono>
#include <deque>

#include "dfb/errors.hpp"
#include "dfb/planner.hpp"

namespace dfb::planner {

using cooking::HiddenWorld;
using cooking::Kitchen;

namespace {

bool contradicts(const Fluent& f, const Assignment& hypothesis) {
  for (const auto& v : f.variables()) {
    if (!hypothesis.count(v)) return true;
  }
  return !evaluate(f, hypothesis);
}

}  // namespace

EpisodeResult execute_episode(HiddenWorld& world, BeliefModel& belief, const EpisodeOptions& options,
                              Rng& agent_rng, Rng& assertion_rng) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const Kitchen& kitchen = world.kitchen();
  EpisodeResult r;

  if (options.initial_full_observation) {
    Observation obs;
    const auto truth = world.assignment();
    for (const auto& [var, value] : truth) {
      if (!(value == kitchen.picked())) obs.add(kitchen.make("Equal", {var, value}), 1.0);
    }
    belief.update(obs, ActionRecord::noop(), ContradictionPolicy::Skip);
  }

  DeterminizeStats dstats;
  double update_seconds = 0.0;
  double factor_sum = 0.0, size_sum = 0.0;
  std::size_t updates = 0;
  Assignment hypothesis;
  std::deque<Operator> pending;
  bool replan = true;

  for (;;) {
    if (world.goal_test()) {
      r.solved = true;
      r.outcome = "solved";
      break;
    }
    if (r.steps >= options.max_steps) {
      r.outcome = "step_cap";
      break;
    }
    if (std::chrono::duration<double>(clock::now() - start).count() > options.timeout_s) {
      r.outcome = "timeout";
      break;
    }
    if (replan || pending.empty()) {
      try {
        hypothesis = determinize(belief, agent_rng, options.determinize_attempts, &dstats);
      } catch (const SearchExhausted&) {
        r.outcome = "inference_failed";
        break;
      }
      int hv = 0, hs = 0;
      for (auto i : world.held()) (world.ingredients()[i].vegetable ? hv : hs)++;
      const auto problem = make_problem(kitchen, hypothesis, belief, hv, hs, world.cooking_remaining());
      auto p = plan(problem, kitchen);
      pending.assign(p.steps.begin(), p.steps.end());
      ++r.replans;
      replan = false;
      if (pending.empty()) {
        // The hypothesis is already solved but the world is not: wait and redraw.
        pending.push_back(Operator::noop());
        replan = true;
      }
    }

    const Operator op = pending.front();
    pending.pop_front();
    // The assertion describes the world as it was when the step began.
    const auto assertion = world.sample_assertion(assertion_rng, options.assertion_p, options.templates);
    auto step = world.step(op);
    ++r.steps;
    r.total_cost += step.cost;
    if (op.kind == OpKind::Observe) ++r.observes;
    if (options.trace) {
      std::string line = "t=" + std::to_string(world.clock()) + " " + op.to_string() +
                         (step.succeeded ? "" : " (failed)") + " cost " +
                         std::to_string(static_cast<long long>(step.cost)) + " | " +
                         assertion.fluent.render();
      options.trace(line);
    }

    Observation obs = step.observation;
    obs.add(assertion.fluent, assertion.p);
    const auto t0 = clock::now();
    const auto report = belief.update(obs, step.record, ContradictionPolicy::Skip);
    update_seconds += std::chrono::duration<double>(clock::now() - t0).count();
    r.rejected_fluents += report.rejected.size();
    const auto bs = belief.stats();
    factor_sum += static_cast<double>(bs.factors);
    size_sum += bs.mean_factor_size;
    ++updates;

    for (const auto& e : step.record.effects) hypothesis.insert_or_assign(e.variable, e.value);
    if (!step.succeeded) replan = true;
    for (const auto& e : obs.entries()) {
      if (e.p >= 1.0 && contradicts(e.fluent, hypothesis)) {
        replan = true;
        break;
      }
    }
  }

  r.queries = dstats.succeeded;
  r.failed_queries = dstats.failed;
  if (updates > 0) {
    r.n_factors_mean = factor_sum / static_cast<double>(updates);
    r.mean_factor_size = size_sum / static_cast<double>(updates);
  }
  r.complex_fluents_final = static_cast<double>(belief.complex_fluents().size());
  if (options.record_timing) {
    if (updates > 0) r.belief_update_time_mean_s = update_seconds / static_cast<double>(updates);
    if (dstats.seconds > 0.0) r.queries_per_second = static_cast<double>(dstats.succeeded) / dstats.seconds;
    r.wall_time_s = std::chrono::duration<double>(clock::now() - start).count();
  }
  return r;
}

EpisodeResult run_episode(const cooking::WorldConfig& config, const EpisodeOptions& options) {
  config.validate();
  auto kitchen = std::make_shared<const Kitchen>(config.rows, config.cols);
  auto world = HiddenWorld::generate(config, kitchen);
  auto belief = make_belief(options.representation, *kitchen, options.belief);
  // Separate streams so the assertion sequence does not depend on how many
  // draws the belief consumed.
  std::seed_seq agent_seed{config.seed, std::uint64_t{0x5eed}};
  std::seed_seq assertion_seed{config.seed, std::uint64_t{0xa55e}};
  Rng agent_rng(agent_seed);
  Rng assertion_rng(assertion_seed);
  auto r = execute_episode(world, *belief, options, agent_rng, assertion_rng);
  r.seed = config.seed;
  return r;
}

}  // namespace dfb::planner
