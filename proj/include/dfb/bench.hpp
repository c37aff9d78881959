#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dfb/planner.hpp"
#include "dfb/schema.hpp"

namespace dfb::bench {

struct BenchmarkConfig {
  int rows = 4;
  int cols = 4;
  int n_vegetables = 3;
  int n_seasonings = 3;
  planner::Representation representation = planner::Representation::Dynamic;
  int episodes = 100;
  double timeout_s = 60.0;
  double p = 1.0;
  BeliefConfig belief;
  std::uint64_t seed = 0;  // episode i uses seed + i unless seeds is given
  std::vector<std::uint64_t> seeds;
  std::vector<cooking::Template> templates = cooking::all_templates();
  std::size_t max_steps = 10'000;
  int determinize_attempts = 10;
  bool record_timing = true;
  int jobs = 1;
  std::string out;  // CSV path; the JSON report goes next to it

  // Throws std::invalid_argument.
  void validate() const;
  std::vector<std::uint64_t> episode_seeds() const;
  cooking::WorldConfig world(std::uint64_t episode_seed) const;
  planner::EpisodeOptions episode_options() const;

  // Unknown keys are rejected. Throws std::invalid_argument.
  static BenchmarkConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct Aggregate {
  int episodes = 0;
  int solved = 0;
  double percent_solved = 0.0;
  double mean_cost = 0.0;
  double mean_cost_solved = 0.0;
  double belief_update_time_mean_s = 0.0;
  // Averaged over solved episodes, or over all when none was solved.
  double queries_per_second = 0.0;
  double mean_factor_size = 0.0;
  double n_factors_mean = 0.0;
  double wall_time_mean_s = 0.0;
};

Aggregate aggregate(const std::vector<planner::EpisodeResult>& episodes);

struct BenchmarkReport {
  BenchmarkConfig config;
  std::vector<planner::EpisodeResult> episodes;
  Aggregate summary;
};

BenchmarkReport run_benchmark(const BenchmarkConfig& config);

void write_csv(const BenchmarkReport& report, std::ostream& os);
nlohmann::json to_json(const BenchmarkReport& report);

struct SweepCell {
  double p = 1.0;
  double epsilon = 0.0;
  BenchmarkReport report;
};

struct SweepReport {
  std::vector<SweepCell> cells;  // p-major, in the given order
};

// Every (p, epsilon) combination, each with the same episode seeds.
SweepReport sweep(const BenchmarkConfig& config, const std::vector<double>& p_values,
                  const std::vector<double>& epsilon_values);

// Long format: one row per episode and metric.
void write_sweep_csv(const SweepReport& report, std::ostream& os);
nlohmann::json to_json(const SweepReport& report);

// Writes CSV to path and JSON to path with its extension replaced by .json.
// Throws std::runtime_error on IO failure.
void save(const BenchmarkReport& report, const std::string& path);
void save(const SweepReport& report, const std::string& path);

// Line-oriented session over a belief built from the schema's known objects.
void run_repl(std::istream& in, std::ostream& out, Schema& schema, const BeliefConfig& config,
              bool prompt = true);

}  // namespace dfb::bench
