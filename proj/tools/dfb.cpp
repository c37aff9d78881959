#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "dfb/bench.hpp"
#include "dfb/errors.hpp"

namespace {

using dfb::bench::BenchmarkConfig;

struct Overrides {
  std::string config_path;
  std::string grid;
  int ingredients = -1;
  std::string rep;
  double p = -1;
  double epsilon = -1;
  int episodes = -1;
  double timeout = -1;
  long long seed = -1;
  std::string out;
  int jobs = -1;
  bool no_timing = false;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "JSON benchmark config");
    app->add_option("--grid", grid, "grid size, e.g. 5x5");
    app->add_option("--ingredients", ingredients, "number of ingredients");
    app->add_option("--rep", rep, "belief representation: dynamic or static");
    app->add_option("--p", p, "assertion confidence");
    app->add_option("--epsilon", epsilon, "split threshold");
    app->add_option("--episodes", episodes, "number of episodes");
    app->add_option("--timeout", timeout, "per-episode timeout in seconds");
    app->add_option("--seed", seed, "first episode seed");
    app->add_option("--out", out, "CSV output path (JSON is written alongside)");
    app->add_option("--jobs", jobs, "episodes run in parallel");
    app->add_flag("--no-timing", no_timing, "omit timing fields for reproducible output");
  }

  BenchmarkConfig build() const {
    BenchmarkConfig c;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw std::runtime_error("cannot read " + config_path);
      nlohmann::json j;
      try {
        f >> j;
      } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(config_path + ": " + e.what());
      }
      c = BenchmarkConfig::from_json(j);
    }
    nlohmann::json j = nlohmann::json::object();
    if (!grid.empty()) j["grid"] = grid;
    if (ingredients >= 0) j["ingredients"] = ingredients;
    if (!rep.empty()) j["representation"] = rep;
    auto merged = c.to_json();
    merged.erase("seeds");
    if (!c.seeds.empty()) merged["seeds"] = c.seeds;
    if (j.contains("grid")) {
      merged.erase("rows");
      merged.erase("cols");
    }
    if (j.contains("ingredients")) {
      merged.erase("vegetables");
      merged.erase("seasonings");
    }
    merged.update(j);
    c = BenchmarkConfig::from_json(merged);
    if (p >= 0) c.p = p;
    if (epsilon >= 0) c.belief.epsilon = epsilon;
    if (episodes >= 0) c.episodes = episodes;
    if (timeout >= 0) c.timeout_s = timeout;
    if (seed >= 0) c.seed = static_cast<std::uint64_t>(seed);
    if (!out.empty()) c.out = out;
    if (jobs >= 0) c.jobs = jobs;
    if (no_timing) c.record_timing = false;
    c.validate();
    return c;
  }
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size()) throw std::invalid_argument("bad number '" + item + "'");
  }
  if (out.empty()) throw std::invalid_argument("empty value list");
  return out;
}

void print_summary(const dfb::bench::Aggregate& a) {
  std::printf("episodes %d  solved %d (%.1f%%)  mean cost %.1f  update %.3g s  queries/s %.4g  factor size %.3f\n",
              a.episodes, a.solved, a.percent_solved, a.mean_cost, a.belief_update_time_mean_s,
              a.queries_per_second, a.mean_factor_size);
}

const char* kDefaultSchema = R"({
  "types": [
    {"name": "block", "properties": [
      {"name": "color", "domain": ["red", "green", "blue"]},
      {"name": "location", "domain": ["L1", "L2", "L3", "L4"]}]}
  ],
  "objects": [{"name": "A", "type": "block"}],
  "grid": {"cells": {"L1": [0, 0], "L2": [0, 1], "L3": [1, 0], "L4": [1, 1]},
           "regions": {"top": ["L1", "L2"], "bottom": ["L3", "L4"]}}
})";

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamically factored beliefs: benchmark, sweep, REPL and demo"};
  app.require_subcommand(1);

  Overrides bench_opts;
  auto* bench = app.add_subcommand("bench", "run seeded episodes and report metrics");
  bench_opts.attach(bench);

  Overrides sweep_opts;
  std::string p_values = "1.0,0.9,0.8";
  std::string epsilon_values = "0,0.05,0.2";
  auto* sweep = app.add_subcommand("sweep", "run a grid over assertion confidence and split threshold");
  sweep_opts.attach(sweep);
  sweep->add_option("--p-values", p_values, "comma-separated confidences");
  sweep->add_option("--epsilon-values", epsilon_values, "comma-separated split thresholds");

  std::string schema_path;
  double repl_epsilon = 1e-9;
  auto* repl = app.add_subcommand("repl", "interactive belief session");
  repl->add_option("--schema", schema_path, "schema JSON (default: a small block world)");
  repl->add_option("--epsilon", repl_epsilon, "split threshold");

  Overrides demo_opts;
  auto* demo = app.add_subcommand("demo", "run one traced episode");
  demo_opts.attach(demo);

  CLI11_PARSE(app, argc, argv);

  try {
    if (bench->parsed()) {
      const auto config = bench_opts.build();
      const auto report = dfb::bench::run_benchmark(config);
      print_summary(report.summary);
      if (!config.out.empty()) dfb::bench::save(report, config.out);
    } else if (sweep->parsed()) {
      const auto config = sweep_opts.build();
      const auto report = dfb::bench::sweep(config, parse_list(p_values), parse_list(epsilon_values));
      for (const auto& cell : report.cells) {
        std::printf("p %-5g epsilon %-6g ", cell.p, cell.epsilon);
        print_summary(cell.report.summary);
      }
      if (!config.out.empty()) dfb::bench::save(report, config.out);
    } else if (repl->parsed()) {
      nlohmann::json j;
      try {
        if (schema_path.empty()) {
          j = nlohmann::json::parse(kDefaultSchema);
        } else {
          std::ifstream f(schema_path);
          if (!f) throw std::runtime_error("cannot read " + schema_path);
          f >> j;
        }
      } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(schema_path + ": " + e.what());
      }
      auto schema = dfb::Schema::from_json(j);
      dfb::BeliefConfig config;
      config.epsilon = repl_epsilon;
      config.validate();
      dfb::bench::run_repl(std::cin, std::cout, *schema, config);
    } else if (demo->parsed()) {
      auto config = demo_opts.build();
      auto world = config.world(config.seed);
      auto options = config.episode_options();
      options.trace = [](const std::string& line) { std::printf("%s\n", line.c_str()); };
      const auto r = dfb::planner::run_episode(world, options);
      std::printf("%s after %zu steps, cost %.0f, %zu replans\n", r.outcome.c_str(), r.steps,
                  r.total_cost, r.replans);
    }
  } catch (const dfb::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
