#include "dfb/belief.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "dfb/errors.hpp"

namespace dfb {

void BeliefConfig::validate() const {
  if (!(epsilon >= 0.0) || epsilon > std::numbers::ln2) {
    throw std::invalid_argument("epsilon must lie in [0, ln 2]");
  }
  if (max_joint_entries == 0) throw std::invalid_argument("max_joint_entries must be positive");
  if (sample_limit_per_factor == 0) {
    throw std::invalid_argument("sample_limit_per_factor must be positive");
  }
  if (max_backtrack_steps == 0) throw std::invalid_argument("max_backtrack_steps must be positive");
  for (const auto& [name, w] : priors) {
    double total = 0.0;
    for (double x : w) {
      if (!(x >= 0.0)) throw std::invalid_argument("negative prior weight for " + name);
      total += x;
    }
    if (!(total > 0.0)) throw std::invalid_argument("prior weights for " + name + " sum to zero");
  }
}

JointDistribution BeliefConfig::default_prior(const StateVariable& v) const {
  auto it = priors.find(std::string(v.property().str()));
  if (it == priors.end()) return JointDistribution::uniform({v});
  if (it->second.size() != v.domain().size()) {
    throw std::invalid_argument("prior for " + it->first + " has " +
                                std::to_string(it->second.size()) + " weights, domain has " +
                                std::to_string(v.domain().size()));
  }
  return JointDistribution::from_weights({v}, it->second);
}

bool is_too_big(std::span<const std::uint64_t> sizes, const BeliefConfig& config) {
  std::uint64_t product = 1;
  for (auto s : sizes) {
    if (s != 0 && product > std::numeric_limits<std::uint64_t>::max() / s) return true;
    product *= s;
  }
  return product > config.max_joint_entries;
}

Belief::Belief(BeliefConfig config) : config_(std::move(config)) { config_.validate(); }

Belief Belief::init(std::vector<std::pair<StateVariable, JointDistribution>> known,
                    BeliefConfig config) {
  Belief b(std::move(config));
  for (auto& [v, prior] : known) {
    if (b.contains(v)) throw std::invalid_argument("duplicate variable " + v.to_string());
    if (prior.arity() != 1 || !(prior.variables()[0] == v)) {
      throw std::invalid_argument("prior for " + v.to_string() + " must be over that variable alone");
    }
    b.insert_factor(std::move(prior));
  }
  return b;
}

Belief::FactorId Belief::insert_factor(JointDistribution joint) {
  const FactorId id = next_id_++;
  for (const auto& v : joint.variables()) index_[v] = id;
  factors_.emplace(id, FactorData{CachedTable(std::move(joint)), true});
  return id;
}

void Belief::add_variable(const StateVariable& v, std::optional<JointDistribution> prior) {
  if (contains(v)) throw std::invalid_argument("variable already known: " + v.to_string());
  if (prior) {
    if (prior->arity() != 1 || !(prior->variables()[0] == v)) {
      throw std::invalid_argument("prior for " + v.to_string() + " must be over that variable alone");
    }
    insert_factor(std::move(*prior));
  } else {
    insert_factor(config_.default_prior(v));
  }
}

std::vector<Belief::FactorId> Belief::factors_touching(const Fluent& f) const {
  std::vector<FactorId> ids;
  for (const auto& v : f.variables()) {
    auto it = index_.find(v);
    if (it == index_.end()) throw UnknownVariable("unknown variable " + v.to_string());
    if (std::find(ids.begin(), ids.end(), it->second) == ids.end()) ids.push_back(it->second);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

void Belief::join_internal(const Fluent& f, double p, const std::vector<FactorId>& ids) {
  if (ids.size() == 1) {
    auto& data = factors_.at(ids.front());
    // jeffrey_update leaves the table alone when it throws.
    auto outcome = jeffrey_update(data.table.joint, f, p);
    if (outcome.changed) {
      data.table.refresh();
      data.split_pending = true;
    }
    return;
  }
  JointDistribution joint = factors_.at(ids.front()).table.joint;
  for (std::size_t i = 1; i < ids.size(); ++i) joint = joint.product(factors_.at(ids[i]).table.joint);
  jeffrey_update(joint, f, p);
  for (auto id : ids) factors_.erase(id);
  insert_factor(std::move(joint));
}

void Belief::join_factors_and_update(const Fluent& f, double p) {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("probability must lie in (0, 1]");
  const auto ids = factors_touching(f);
  std::vector<std::uint64_t> sizes;
  for (auto id : ids) sizes.push_back(factors_.at(id).table.joint.size());
  if (is_too_big(sizes, config_)) {
    throw std::invalid_argument("joint for " + f.render() + " exceeds max_joint_entries");
  }
  join_internal(f, p, ids);
  if (ids.size() > 1 && !complex_.empty()) fold_contained_complex(ContradictionPolicy::Throw, nullptr);
}

void Belief::fold_contained_complex(ContradictionPolicy policy, UpdateReport* report) {
  for (std::size_t i = 0; i < complex_.size();) {
    const auto ids = factors_touching(complex_[i].fluent);
    if (ids.size() != 1) {
      ++i;
      continue;
    }
    ComplexFluent cf = complex_[i];
    complex_.erase(complex_.begin() + static_cast<std::ptrdiff_t>(i));
    try {
      join_internal(cf.fluent, cf.p, ids);
      if (report) ++report->folded;
    } catch (const Contradiction&) {
      if (policy == ContradictionPolicy::Throw) throw;
      if (report) report->rejected.push_back({cf.fluent, cf.p});
    }
  }
}

UpdateReport Belief::update(const Observation& obs, const ActionRecord& action,
                            ContradictionPolicy policy) {
  UpdateReport report;
  for (const auto& entry : obs.entries()) {
    for (const auto& v : entry.fluent.variables()) {
      if (!contains(v)) add_variable(v);
    }
    const auto ids = factors_touching(entry.fluent);
    std::vector<std::uint64_t> sizes;
    for (auto id : ids) sizes.push_back(factors_.at(id).table.joint.size());
    if (is_too_big(sizes, config_)) {
      complex_.push_back({entry.fluent, entry.p});
      ++report.deferred;
      continue;
    }
    try {
      join_internal(entry.fluent, entry.p, ids);
      ++report.folded;
    } catch (const Contradiction&) {
      if (policy == ContradictionPolicy::Throw) throw;
      report.rejected.push_back(entry);
      continue;
    }
    if (ids.size() > 1 && !complex_.empty()) fold_contained_complex(policy, &report);
  }
  apply_action(action);
  split_pass();
  return report;
}

bool Belief::try_split(FactorId id) {
  auto it = factors_.find(id);
  if (it == factors_.end()) throw std::invalid_argument("no factor " + std::to_string(id));
  const auto snapshot = it->second.table.joint.variables();
  bool split = false;
  for (const auto& v : snapshot) {
    auto& data = factors_.at(id);
    const auto& joint = data.table.joint;
    if (joint.arity() < 2) break;
    const std::size_t pos = *joint.position(v);
    if (!(split_divergence(joint, pos) < config_.epsilon)) continue;
    auto [single, rest] = split_off(joint, pos);
    data.table = CachedTable(std::move(rest));
    data.split_pending = data.table.joint.arity() > 1;
    insert_factor(std::move(single));
    split = true;
  }
  if (!split) factors_.at(id).split_pending = false;
  return split;
}

void Belief::split_pass() {
  if (config_.epsilon <= 0.0) return;
  std::vector<FactorId> pending;
  for (const auto& [id, data] : factors_) {
    if (data.split_pending && data.table.joint.arity() > 1) pending.push_back(id);
  }
  for (auto id : pending) {
    if (!config_.split_to_fixpoint) {
      try_split(id);
      continue;
    }
    while (factors_.at(id).table.joint.arity() > 1 && try_split(id)) {
    }
  }
}

void Belief::apply_action(const ActionRecord& action) {
  if (action.effects.empty()) return;
  for (const auto& e : action.effects) {
    if (!e.variable.domain().contains(e.value)) {
      throw DomainError("effect value " + e.value.to_string() + " outside the domain of " +
                        e.variable.to_string());
    }
  }
  for (const auto& e : action.effects) {
    auto it = index_.find(e.variable);
    if (it != index_.end()) {
      const FactorId id = it->second;
      auto& data = factors_.at(id);
      if (data.table.joint.arity() == 1) {
        factors_.erase(id);
      } else {
        std::vector<StateVariable> rest;
        for (const auto& v : data.table.joint.variables()) {
          if (!(v == e.variable)) rest.push_back(v);
        }
        data.table = CachedTable(data.table.joint.marginal(rest));
        data.split_pending = data.table.joint.arity() > 1;
      }
      index_.erase(e.variable);
    }
    insert_factor(JointDistribution::point_mass(e.variable, e.value));
  }
  std::erase_if(complex_, [&](const ComplexFluent& cf) {
    for (const auto& e : action.effects) {
      for (const auto& v : cf.fluent.variables()) {
        if (v == e.variable) return true;
      }
    }
    return false;
  });
}

void Belief::update_with_action(const ActionRecord& action) { apply_action(action); }

std::optional<Belief::FactorId> Belief::factor_of(const StateVariable& v) const {
  auto it = index_.find(v);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const JointDistribution& Belief::factor(FactorId id) const {
  auto it = factors_.find(id);
  if (it == factors_.end()) throw std::invalid_argument("no factor " + std::to_string(id));
  return it->second.table.joint;
}

std::vector<Belief::FactorId> Belief::factor_ids() const {
  std::vector<FactorId> ids;
  ids.reserve(factors_.size());
  for (const auto& [id, data] : factors_) ids.push_back(id);
  return ids;
}

std::vector<std::vector<StateVariable>> Belief::structure() const {
  std::vector<std::vector<StateVariable>> out;
  for (const auto& [id, data] : factors_) out.push_back(data.table.joint.variables());
  return out;
}

JointDistribution Belief::marginal(std::span<const StateVariable> vars) const {
  if (vars.empty()) throw std::invalid_argument("marginal over no variables");
  std::optional<FactorId> id;
  for (const auto& v : vars) {
    auto f = factor_of(v);
    if (!f) throw UnknownVariable("unknown variable " + v.to_string());
    if (id && *id != *f) throw QuerySpansFactors("variables span several factors");
    id = f;
  }
  const auto& joint = factors_.at(*id).table.joint;
  if (vars.size() == joint.arity() &&
      std::equal(vars.begin(), vars.end(), joint.variables().begin())) {
    return joint;
  }
  return joint.marginal(vars);
}

std::optional<Value> Belief::determined_value(const StateVariable& v) const {
  auto id = factor_of(v);
  if (!id) return std::nullopt;
  const auto& data = factors_.at(*id);
  const std::size_t pos = *data.table.joint.position(v);
  const auto& m = data.table.marginals[pos];
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] >= 1.0 - 1e-9) return v.domain()[i];
  }
  return std::nullopt;
}

std::vector<StateVariable> Belief::variables() const {
  std::vector<StateVariable> out;
  out.reserve(index_.size());
  for (const auto& [id, data] : factors_) {
    for (const auto& v : data.table.joint.variables()) out.push_back(v);
  }
  return out;
}

Assignment Belief::sample_state(Rng& rng, SamplerStats* stats) const {
  std::vector<const CachedTable*> blocks;
  blocks.reserve(factors_.size());
  for (const auto& [id, data] : factors_) blocks.push_back(&data.table);
  // factors_ iterates by id, so a stable sort keeps ids ascending on ties.
  std::stable_sort(blocks.begin(), blocks.end(), [](const CachedTable* a, const CachedTable* b) {
    return a->joint.size() < b->joint.size();
  });
  std::vector<const Fluent*> constraints;
  std::bernoulli_distribution coin;
  for (const auto& cf : complex_) {
    if (cf.p >= 1.0 || coin(rng, std::bernoulli_distribution::param_type(cf.p))) {
      constraints.push_back(&cf.fluent);
    }
  }
  return backtracking_sample(blocks, constraints, config_.sampler_limits(), rng, stats);
}

BeliefStats Belief::stats() const {
  BeliefStats s;
  s.factors = factors_.size();
  s.complex_fluents = complex_.size();
  std::size_t total = 0;
  for (const auto& [id, data] : factors_) {
    total += data.table.joint.arity();
    s.max_factor_size = std::max(s.max_factor_size, data.table.joint.arity());
    s.max_table_entries = std::max(s.max_table_entries, data.table.joint.size());
  }
  s.mean_factor_size = s.factors ? static_cast<double>(total) / static_cast<double>(s.factors) : 0.0;
  return s;
}

bool Belief::check_invariants(std::string* why) const {
  auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  std::size_t seen = 0;
  for (const auto& [id, data] : factors_) {
    const auto& vars = data.table.joint.variables();
    if (vars.empty()) return fail("factor " + std::to_string(id) + " is empty");
    for (const auto& v : vars) {
      auto it = index_.find(v);
      if (it == index_.end()) return fail(v.to_string() + " missing from the index");
      if (it->second != id) return fail(v.to_string() + " appears in two factors");
      ++seen;
    }
  }
  if (seen != index_.size()) return fail("index refers to a variable outside every factor");
  for (const auto& cf : complex_) {
    std::optional<FactorId> only;
    bool single = true;
    for (const auto& v : cf.fluent.variables()) {
      auto f = factor_of(v);
      if (!f) return fail(cf.fluent.render() + " mentions an unknown variable");
      if (only && *only != *f) single = false;
      only = f;
    }
    if (single) return fail(cf.fluent.render() + " lies inside one factor but was not folded");
  }
  return true;
}

nlohmann::json joint_to_json(const JointDistribution& joint) {
  nlohmann::json vars = nlohmann::json::array();
  for (const auto& v : joint.variables()) vars.push_back(v.to_string());
  nlohmann::json table = nlohmann::json::array();
  for (double x : joint.table()) table.push_back(x);
  return {{"variables", vars}, {"table", table}};
}

nlohmann::json Belief::snapshot() const {
  std::vector<const JointDistribution*> joints;
  for (const auto& [id, data] : factors_) joints.push_back(&data.table.joint);
  // Canonical order: variables sorted within each factor, factors by first variable.
  std::vector<JointDistribution> canon;
  canon.reserve(joints.size());
  for (const auto* j : joints) {
    auto order = j->variables();
    std::sort(order.begin(), order.end());
    canon.push_back(j->reordered(order));
  }
  std::sort(canon.begin(), canon.end(), [](const JointDistribution& a, const JointDistribution& b) {
    return a.variables().front() < b.variables().front();
  });
  nlohmann::json factors = nlohmann::json::array();
  for (const auto& j : canon) factors.push_back(joint_to_json(j));
  std::vector<std::pair<std::string, double>> cfs;
  for (const auto& cf : complex_) cfs.emplace_back(cf.fluent.render(), cf.p);
  std::sort(cfs.begin(), cfs.end());
  nlohmann::json complex = nlohmann::json::array();
  for (const auto& [text, p] : cfs) complex.push_back({{"fluent", text}, {"p", p}});
  return {{"factors", factors}, {"complex_fluents", complex}};
}

}  // namespace dfb
