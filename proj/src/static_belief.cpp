#include "dfb/static_belief.hpp"

#include <algorithm>
#include <stdexcept>

#include "dfb/errors.hpp"

namespace dfb {

StaticBelief::StaticBelief(std::vector<std::pair<StateVariable, JointDistribution>> fixed,
                           BeliefConfig config)
    : config_(std::move(config)) {
  config_.validate();
  for (auto& [v, prior] : fixed) {
    if (fixed_index_.count(v)) throw std::invalid_argument("duplicate variable " + v.to_string());
    if (prior.arity() != 1 || !(prior.variables()[0] == v)) {
      throw std::invalid_argument("prior for " + v.to_string() + " must be over that variable alone");
    }
    fixed_index_.emplace(v, fixed_.size());
    fixed_.emplace_back(std::move(prior));
  }
}

const CachedTable* StaticBelief::table_of(const StateVariable& v) const {
  if (auto it = fixed_index_.find(v); it != fixed_index_.end()) return &fixed_[it->second];
  if (auto it = free_index_.find(v); it != free_index_.end()) return &free_[it->second];
  return nullptr;
}

UpdateReport StaticBelief::update(const Observation& obs, const ActionRecord& action,
                                  ContradictionPolicy policy) {
  UpdateReport report;
  for (const auto& entry : obs.entries()) {
    const auto& vars = entry.fluent.variables();
    for (const auto& v : vars) {
      if (!fixed_index_.count(v) && !free_index_.count(v)) {
        free_index_.emplace(v, free_.size());
        free_.emplace_back(config_.default_prior(v));
      }
    }
    if (vars.size() == 1 && fixed_index_.count(vars[0])) {
      auto& table = fixed_[fixed_index_.at(vars[0])];
      try {
        if (jeffrey_update(table.joint, entry.fluent, entry.p).changed) table.refresh();
        ++report.folded;
      } catch (const Contradiction&) {
        if (policy == ContradictionPolicy::Throw) throw;
        report.rejected.push_back(entry);
      }
      continue;
    }
    complex_.push_back({entry.fluent, entry.p});
    ++report.deferred;
  }

  for (const auto& e : action.effects) {
    if (!e.variable.domain().contains(e.value)) {
      throw DomainError("effect value " + e.value.to_string() + " outside the domain of " +
                        e.variable.to_string());
    }
  }
  for (const auto& e : action.effects) {
    auto point = JointDistribution::point_mass(e.variable, e.value);
    if (auto it = fixed_index_.find(e.variable); it != fixed_index_.end()) {
      fixed_[it->second] = CachedTable(std::move(point));
    } else if (auto jt = free_index_.find(e.variable); jt != free_index_.end()) {
      free_[jt->second] = CachedTable(std::move(point));
    } else {
      free_index_.emplace(e.variable, free_.size());
      free_.emplace_back(std::move(point));
    }
  }
  if (!action.effects.empty()) {
    std::erase_if(complex_, [&](const ComplexFluent& cf) {
      for (const auto& e : action.effects) {
        for (const auto& v : cf.fluent.variables()) {
          if (v == e.variable) return true;
        }
      }
      return false;
    });
  }
  return report;
}

JointDistribution StaticBelief::marginal(std::span<const StateVariable> vars) const {
  if (vars.empty()) throw std::invalid_argument("marginal over no variables");
  const CachedTable* t = table_of(vars[0]);
  if (!t) throw UnknownVariable("unknown variable " + vars[0].to_string());
  for (std::size_t i = 1; i < vars.size(); ++i) {
    if (!table_of(vars[i])) throw UnknownVariable("unknown variable " + vars[i].to_string());
    if (!(vars[i] == vars[0])) throw QuerySpansFactors("variables span several factors");
  }
  if (vars.size() > 1) return t->joint.marginal(vars);
  return t->joint;
}

Assignment StaticBelief::sample_state(Rng& rng, SamplerStats* stats) const {
  std::vector<const CachedTable*> blocks;
  blocks.reserve(fixed_.size() + free_.size());
  for (const auto& t : fixed_) blocks.push_back(&t);
  for (const auto& t : free_) blocks.push_back(&t);
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

std::optional<Value> StaticBelief::determined_value(const StateVariable& v) const {
  const CachedTable* t = table_of(v);
  if (!t) return std::nullopt;
  const auto& m = t->marginals[0];
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m[i] >= 1.0 - 1e-9) return v.domain()[i];
  }
  return std::nullopt;
}

std::vector<StateVariable> StaticBelief::variables() const {
  std::vector<StateVariable> out;
  for (const auto& t : fixed_) out.push_back(t.joint.variables()[0]);
  for (const auto& t : free_) out.push_back(t.joint.variables()[0]);
  return out;
}

std::vector<std::vector<StateVariable>> StaticBelief::structure() const {
  std::vector<std::vector<StateVariable>> out;
  for (const auto& t : fixed_) out.push_back(t.joint.variables());
  return out;
}

BeliefStats StaticBelief::stats() const {
  BeliefStats s;
  s.factors = fixed_.size();
  s.complex_fluents = complex_.size();
  s.mean_factor_size = fixed_.empty() ? 0.0 : 1.0;
  s.max_factor_size = fixed_.empty() ? 0 : 1;
  for (const auto& t : fixed_) s.max_table_entries = std::max(s.max_table_entries, t.joint.size());
  return s;
}

nlohmann::json StaticBelief::snapshot() const {
  auto dump = [](const std::vector<CachedTable>& tables) {
    std::vector<const JointDistribution*> js;
    for (const auto& t : tables) js.push_back(&t.joint);
    std::sort(js.begin(), js.end(), [](const JointDistribution* a, const JointDistribution* b) {
      return a->variables()[0] < b->variables()[0];
    });
    nlohmann::json out = nlohmann::json::array();
    for (const auto* j : js) out.push_back(joint_to_json(*j));
    return out;
  };
  std::vector<std::pair<std::string, double>> cfs;
  for (const auto& cf : complex_) cfs.emplace_back(cf.fluent.render(), cf.p);
  std::sort(cfs.begin(), cfs.end());
  nlohmann::json complex = nlohmann::json::array();
  for (const auto& [text, p] : cfs) complex.push_back({{"fluent", text}, {"p", p}});
  return {{"factors", dump(fixed_)}, {"unfactored", dump(free_)}, {"complex_fluents", complex}};
}

}  // namespace dfb
