#include "dfb/bench.hpp"

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <set>
#include <stdexcept>
#include <thread>

namespace dfb::bench {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

std::pair<int, int> parse_grid(const std::string& text) {
  const auto x = text.find('x');
  if (x == std::string::npos) throw std::invalid_argument("grid must look like 5x5: " + text);
  try {
    std::size_t used = 0;
    const int r = std::stoi(text.substr(0, x), &used);
    if (used != x) throw std::invalid_argument(text);
    const auto rest = text.substr(x + 1);
    const int c = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(text);
    return {r, c};
  } catch (const std::logic_error&) {
    throw std::invalid_argument("grid must look like 5x5: " + text);
  }
}

}  // namespace

void BenchmarkConfig::validate() const {
  world(seed).validate();
  belief.validate();
  if (episodes < 1 && seeds.empty()) throw std::invalid_argument("episodes must be at least 1");
  if (!(timeout_s > 0.0)) throw std::invalid_argument("timeout must be positive");
  if (max_steps == 0) throw std::invalid_argument("max_steps must be positive");
  if (determinize_attempts < 1) throw std::invalid_argument("determinize_attempts must be at least 1");
  if (jobs < 1) throw std::invalid_argument("jobs must be at least 1");
}

std::vector<std::uint64_t> BenchmarkConfig::episode_seeds() const {
  if (!seeds.empty()) return seeds;
  std::vector<std::uint64_t> out;
  for (int i = 0; i < episodes; ++i) out.push_back(seed + static_cast<std::uint64_t>(i));
  return out;
}

cooking::WorldConfig BenchmarkConfig::world(std::uint64_t episode_seed) const {
  cooking::WorldConfig w;
  w.rows = rows;
  w.cols = cols;
  w.n_vegetables = n_vegetables;
  w.n_seasonings = n_seasonings;
  w.assertion_p = p;
  w.seed = episode_seed;
  w.templates = templates;
  return w;
}

planner::EpisodeOptions BenchmarkConfig::episode_options() const {
  planner::EpisodeOptions o;
  o.representation = representation;
  o.belief = belief;
  o.assertion_p = p;
  o.templates = templates;
  o.timeout_s = timeout_s;
  o.max_steps = max_steps;
  o.determinize_attempts = determinize_attempts;
  o.record_timing = record_timing;
  return o;
}

BenchmarkConfig BenchmarkConfig::from_json(const nlohmann::json& j) {
  static const std::set<std::string> known = {
      "grid", "rows", "cols", "ingredients", "vegetables", "seasonings", "representation",
      "episodes", "timeout_s", "p", "epsilon", "max_joint_entries", "sample_limit_per_factor",
      "max_backtrack_steps", "split_to_fixpoint", "seed", "seeds", "templates", "max_steps",
      "determinize_attempts", "record_timing", "jobs", "out"};
  if (!j.is_object()) throw std::invalid_argument("benchmark config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw std::invalid_argument("unknown config key " + key);
  }
  BenchmarkConfig c;
  try {
    if (j.contains("grid")) std::tie(c.rows, c.cols) = parse_grid(j.at("grid").get<std::string>());
    c.rows = j.value("rows", c.rows);
    c.cols = j.value("cols", c.cols);
    if (j.contains("ingredients")) {
      cooking::WorldConfig w;
      w.set_ingredients(j.at("ingredients").get<int>());
      c.n_vegetables = w.n_vegetables;
      c.n_seasonings = w.n_seasonings;
    }
    c.n_vegetables = j.value("vegetables", c.n_vegetables);
    c.n_seasonings = j.value("seasonings", c.n_seasonings);
    if (j.contains("representation")) {
      c.representation = planner::representation_from_name(j.at("representation").get<std::string>());
    }
    c.episodes = j.value("episodes", c.episodes);
    c.timeout_s = j.value("timeout_s", c.timeout_s);
    c.p = j.value("p", c.p);
    c.belief.epsilon = j.value("epsilon", c.belief.epsilon);
    c.belief.max_joint_entries = j.value("max_joint_entries", c.belief.max_joint_entries);
    c.belief.sample_limit_per_factor = j.value("sample_limit_per_factor", c.belief.sample_limit_per_factor);
    c.belief.max_backtrack_steps = j.value("max_backtrack_steps", c.belief.max_backtrack_steps);
    c.belief.split_to_fixpoint = j.value("split_to_fixpoint", c.belief.split_to_fixpoint);
    c.seed = j.value("seed", c.seed);
    if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (j.contains("templates")) {
      c.templates.clear();
      for (const auto& t : j.at("templates")) c.templates.push_back(cooking::template_from_name(t.get<std::string>()));
    }
    c.max_steps = j.value("max_steps", c.max_steps);
    c.determinize_attempts = j.value("determinize_attempts", c.determinize_attempts);
    c.record_timing = j.value("record_timing", c.record_timing);
    c.jobs = j.value("jobs", c.jobs);
    c.out = j.value("out", c.out);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad benchmark config: ") + e.what());
  }
  c.validate();
  return c;
}

nlohmann::json BenchmarkConfig::to_json() const {
  nlohmann::json templ = nlohmann::json::array();
  for (auto t : templates) templ.push_back(cooking::template_name(t));
  nlohmann::json j = {
      {"rows", rows},
      {"cols", cols},
      {"vegetables", n_vegetables},
      {"seasonings", n_seasonings},
      {"representation", planner::representation_name(representation)},
      {"episodes", static_cast<int>(episode_seeds().size())},
      {"timeout_s", timeout_s},
      {"p", p},
      {"epsilon", belief.epsilon},
      {"max_joint_entries", belief.max_joint_entries},
      {"sample_limit_per_factor", belief.sample_limit_per_factor},
      {"max_backtrack_steps", belief.max_backtrack_steps},
      {"split_to_fixpoint", belief.split_to_fixpoint},
      {"seed", seed},
      {"templates", templ},
      {"max_steps", max_steps},
      {"determinize_attempts", determinize_attempts},
      {"record_timing", record_timing},
  };
  if (!seeds.empty()) j["seeds"] = seeds;
  return j;
}

Aggregate aggregate(const std::vector<planner::EpisodeResult>& episodes) {
  Aggregate a;
  a.episodes = static_cast<int>(episodes.size());
  if (episodes.empty()) return a;
  double qps_solved = 0.0, qps_all = 0.0;
  for (const auto& e : episodes) {
    if (e.solved) {
      ++a.solved;
      a.mean_cost_solved += e.total_cost;
      qps_solved += e.queries_per_second;
    }
    qps_all += e.queries_per_second;
    a.mean_cost += e.total_cost;
    a.belief_update_time_mean_s += e.belief_update_time_mean_s;
    a.mean_factor_size += e.mean_factor_size;
    a.n_factors_mean += e.n_factors_mean;
    a.wall_time_mean_s += e.wall_time_s;
  }
  const double n = static_cast<double>(episodes.size());
  a.percent_solved = 100.0 * a.solved / n;
  a.mean_cost /= n;
  a.mean_cost_solved = a.solved ? a.mean_cost_solved / a.solved : 0.0;
  a.queries_per_second = a.solved ? qps_solved / a.solved : qps_all / n;
  a.belief_update_time_mean_s /= n;
  a.mean_factor_size /= n;
  a.n_factors_mean /= n;
  a.wall_time_mean_s /= n;
  return a;
}

BenchmarkReport run_benchmark(const BenchmarkConfig& config) {
  config.validate();
  BenchmarkReport report;
  report.config = config;
  const auto seeds = config.episode_seeds();
  const auto options = config.episode_options();
  report.episodes.resize(seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      report.episodes[i] = planner::run_episode(config.world(seeds[i]), options);
    }
  };
  const auto jobs = std::min<std::size_t>(static_cast<std::size_t>(config.jobs), seeds.size());
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  report.summary = aggregate(report.episodes);
  return report;
}

void write_csv(const BenchmarkReport& report, std::ostream& os) {
  os << "seed,solved,outcome,total_cost,steps,replans,observes,queries,failed_queries,"
        "rejected_fluents,belief_update_time_mean_s,queries_per_second,n_factors_mean,"
        "mean_factor_size,wall_time_s\n";
  for (const auto& e : report.episodes) {
    os << e.seed << ',' << (e.solved ? 1 : 0) << ',' << e.outcome << ',' << num(e.total_cost) << ','
       << e.steps << ',' << e.replans << ',' << e.observes << ',' << e.queries << ','
       << e.failed_queries << ',' << e.rejected_fluents << ',' << num(e.belief_update_time_mean_s)
       << ',' << num(e.queries_per_second) << ',' << num(e.n_factors_mean) << ','
       << num(e.mean_factor_size) << ',' << num(e.wall_time_s) << '\n';
  }
}

namespace {

nlohmann::json summary_json(const Aggregate& a) {
  return {{"episodes", a.episodes},
          {"solved", a.solved},
          {"percent_solved", a.percent_solved},
          {"mean_cost", a.mean_cost},
          {"mean_cost_solved", a.mean_cost_solved},
          {"belief_update_time_mean_s", a.belief_update_time_mean_s},
          {"queries_per_second", a.queries_per_second},
          {"mean_factor_size", a.mean_factor_size},
          {"n_factors_mean", a.n_factors_mean},
          {"wall_time_mean_s", a.wall_time_mean_s}};
}

nlohmann::json episode_json(const planner::EpisodeResult& e) {
  return {{"seed", e.seed},
          {"solved", e.solved},
          {"outcome", e.outcome},
          {"total_cost", e.total_cost},
          {"steps", e.steps},
          {"replans", e.replans},
          {"observes", e.observes},
          {"queries", e.queries},
          {"failed_queries", e.failed_queries},
          {"rejected_fluents", e.rejected_fluents},
          {"belief_update_time_mean_s", e.belief_update_time_mean_s},
          {"queries_per_second", e.queries_per_second},
          {"n_factors_mean", e.n_factors_mean},
          {"mean_factor_size", e.mean_factor_size},
          {"wall_time_s", e.wall_time_s}};
}

const char* kQueryNote =
    "queries_per_second counts consistent-state samples drawn by the planner per second spent "
    "sampling, averaged over solved episodes (over all episodes when none was solved)";

}  // namespace

nlohmann::json to_json(const BenchmarkReport& report) {
  nlohmann::json eps = nlohmann::json::array();
  for (const auto& e : report.episodes) eps.push_back(episode_json(e));
  return {{"notes", kQueryNote},
          {"config", report.config.to_json()},
          {"summary", summary_json(report.summary)},
          {"episodes", eps}};
}

SweepReport sweep(const BenchmarkConfig& config, const std::vector<double>& p_values,
                  const std::vector<double>& epsilon_values) {
  if (p_values.empty() || epsilon_values.empty()) {
    throw std::invalid_argument("sweep needs at least one p and one epsilon");
  }
  SweepReport out;
  for (double p : p_values) {
    for (double eps : epsilon_values) {
      auto cell_config = config;
      cell_config.p = p;
      cell_config.belief.epsilon = eps;
      out.cells.push_back({p, eps, run_benchmark(cell_config)});
    }
  }
  return out;
}

void write_sweep_csv(const SweepReport& report, std::ostream& os) {
  os << "p,epsilon,seed,metric,value\n";
  for (const auto& cell : report.cells) {
    for (const auto& e : cell.report.episodes) {
      const std::string prefix = num(cell.p) + ',' + num(cell.epsilon) + ',' + std::to_string(e.seed) + ',';
      os << prefix << "solved," << (e.solved ? 1 : 0) << '\n';
      os << prefix << "total_cost," << num(e.total_cost) << '\n';
      os << prefix << "mean_factor_size," << num(e.mean_factor_size) << '\n';
      os << prefix << "n_factors_mean," << num(e.n_factors_mean) << '\n';
    }
  }
}

nlohmann::json to_json(const SweepReport& report) {
  nlohmann::json cells = nlohmann::json::array();
  for (const auto& c : report.cells) {
    cells.push_back({{"p", c.p}, {"epsilon", c.epsilon}, {"summary", summary_json(c.report.summary)}});
  }
  nlohmann::json config = report.cells.empty() ? nlohmann::json::object() : report.cells.front().report.config.to_json();
  config.erase("p");
  config.erase("epsilon");
  return {{"notes", kQueryNote}, {"config", config}, {"cells", cells}};
}

namespace {

std::ofstream open_for_write(const std::string& path) {
  const auto parent = std::filesystem::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

std::string json_path(const std::string& path) {
  return std::filesystem::path(path).replace_extension(".json").string();
}

}  // namespace

void save(const BenchmarkReport& report, const std::string& path) {
  {
    auto f = open_for_write(path);
    write_csv(report, f);
    if (!f) throw std::runtime_error("write failed for " + path);
  }
  auto f = open_for_write(json_path(path));
  f << to_json(report).dump(2) << '\n';
  if (!f) throw std::runtime_error("write failed for " + json_path(path));
}

void save(const SweepReport& report, const std::string& path) {
  {
    auto f = open_for_write(path);
    write_sweep_csv(report, f);
    if (!f) throw std::runtime_error("write failed for " + path);
  }
  auto f = open_for_write(json_path(path));
  f << to_json(report).dump(2) << '\n';
  if (!f) throw std::runtime_error("write failed for " + json_path(path));
}

}  // namespace dfb::bench
