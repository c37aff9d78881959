#include "dfb/fluent.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#include "dfb/errors.hpp"

namespace dfb {

void Grid::add_region(const Value& name, const std::vector<Value>& members) {
  if (!regions_.count(name)) region_order_.push_back(name);
  auto& set = regions_[name];
  set.insert(members.begin(), members.end());
}

std::optional<Cell> Grid::cell(const Value& location) const {
  auto it = cells_.find(location);
  if (it == cells_.end()) return std::nullopt;
  return it->second;
}

bool Grid::adjacent(const Value& a, const Value& b) const {
  auto ca = cell(a);
  auto cb = cell(b);
  if (!ca || !cb) return false;
  return std::abs(ca->row - cb->row) + std::abs(ca->col - cb->col) == 1;
}

bool Grid::in_region(const Value& location, const Value& region) const {
  auto it = regions_.find(region);
  return it != regions_.end() && it->second.count(location) != 0;
}

std::vector<Value> Grid::region_names() const { return region_order_; }

PredicateRegistry PredicateRegistry::standard(std::shared_ptr<const Grid> grid) {
  PredicateRegistry r;
  r.add({"Equal", {ArgKind::Term, ArgKind::Term},
         [](std::span<const Value> a) { return a[0] == a[1]; }, {}});
  r.add({"Different", {ArgKind::Term, ArgKind::Term},
         [](std::span<const Value> a) { return !(a[0] == a[1]); }, {}});
  r.add({"Same", {ArgKind::Variable, ArgKind::Variable},
         [](std::span<const Value> a) { return a[0] == a[1]; }, {}});
  r.add({"NextTo", {ArgKind::Variable, ArgKind::Variable},
         [grid](std::span<const Value> a) { return grid && grid->adjacent(a[0], a[1]); }, {}});
  r.add({"In", {ArgKind::Variable, ArgKind::Region},
         [grid](std::span<const Value> a) { return grid && grid->in_region(a[0], a[1]); },
         [grid](const Value& v) { return grid && grid->has_region(v); }});
  return r;
}

void PredicateRegistry::add(PredicateDef def) {
  auto name = def.name;
  defs_[name] = std::make_shared<const PredicateDef>(std::move(def));
}

PredicatePtr PredicateRegistry::find(std::string_view name) const {
  auto it = defs_.find(std::string(name));
  if (it == defs_.end()) return nullptr;
  return it->second;
}

Fluent::Fluent(PredicatePtr predicate, std::vector<Term> args)
    : predicate_(std::move(predicate)), args_(std::move(args)) {
  if (!predicate_) throw UnknownPredicate("null predicate");
  const auto& sig = predicate_->args;
  if (sig.size() != args_.size()) {
    throw ArityError(predicate_->name + " expects " + std::to_string(sig.size()) +
                     " arguments, got " + std::to_string(args_.size()));
  }

  std::vector<const StateVariable*> peers;
  for (std::size_t i = 0; i < args_.size(); ++i) {
    const auto* var = std::get_if<StateVariable>(&args_[i]);
    if (sig[i] == ArgKind::Variable && !var) {
      throw ArityError(predicate_->name + ": argument " + std::to_string(i + 1) +
                       " must be a state variable");
    }
    if (sig[i] == ArgKind::Region) {
      const auto* v = std::get_if<Value>(&args_[i]);
      if (!v) {
        throw ArityError(predicate_->name + ": argument " + std::to_string(i + 1) +
                         " must name a region");
      }
      if (!predicate_->region_exists || !predicate_->region_exists(*v)) {
        throw DomainError("unknown region " + v->to_string());
      }
    }
    if (var && sig[i] != ArgKind::Region) peers.push_back(var);
  }
  if (peers.empty()) {
    throw ArityError(predicate_->name + " needs at least one state variable argument");
  }

  for (std::size_t i = 0; i < args_.size(); ++i) {
    if (sig[i] != ArgKind::Term) continue;
    const auto* v = std::get_if<Value>(&args_[i]);
    if (!v) continue;
    for (const auto* peer : peers) {
      if (peer->domain().contains(*v)) continue;
      if (peer->domain().numeric() != v->is_integer()) {
        throw DomainError("type mismatch: " + v->to_string() + " is not a valid value of " +
                          peer->to_string());
      }
      throw DomainError(v->to_string() + " is outside the domain of " + peer->to_string());
    }
  }

  for (const auto& a : args_) {
    if (const auto* var = std::get_if<StateVariable>(&a)) {
      auto it = std::find(variables_.begin(), variables_.end(), *var);
      arg_slot_.push_back(static_cast<int>(it - variables_.begin()));
      if (it == variables_.end()) variables_.push_back(*var);
    } else {
      arg_slot_.push_back(-1);
    }
  }
}

bool Fluent::holds(std::span<const Value> variable_values) const {
  constexpr std::size_t kInline = 8;
  Value inline_buf[kInline];
  std::vector<Value> heap_buf;
  Value* buf = inline_buf;
  if (args_.size() > kInline) {
    heap_buf.resize(args_.size());
    buf = heap_buf.data();
  }
  for (std::size_t i = 0; i < args_.size(); ++i) {
    const int slot = arg_slot_[i];
    buf[i] = slot >= 0 ? variable_values[static_cast<std::size_t>(slot)]
                       : std::get<Value>(args_[i]);
  }
  return predicate_->holds(std::span<const Value>(buf, args_.size()));
}

std::string Fluent::render() const {
  std::string s = predicate_->name + "(";
  for (std::size_t i = 0; i < args_.size(); ++i) {
    if (i) s += ", ";
    if (const auto* var = std::get_if<StateVariable>(&args_[i])) {
      s += var->to_string();
    } else {
      s += std::get<Value>(args_[i]).to_string();
    }
  }
  s += ")";
  return s;
}

bool operator==(const Fluent& a, const Fluent& b) {
  if (a.name() != b.name() || a.args_.size() != b.args_.size()) return false;
  for (std::size_t i = 0; i < a.args_.size(); ++i) {
    const auto* va = std::get_if<StateVariable>(&a.args_[i]);
    const auto* vb = std::get_if<StateVariable>(&b.args_[i]);
    if ((va == nullptr) != (vb == nullptr)) return false;
    if (va ? !(*va == *vb) : !(std::get<Value>(a.args_[i]) == std::get<Value>(b.args_[i]))) {
      return false;
    }
  }
  return true;
}

bool evaluate(const Fluent& f, const Assignment& assignment) {
  std::vector<Value> values;
  values.reserve(f.variables().size());
  for (const auto& v : f.variables()) {
    auto it = assignment.find(v);
    if (it == assignment.end()) {
      throw MissingVariable("assignment does not cover " + v.to_string());
    }
    values.push_back(it->second);
  }
  return f.holds(values);
}

void Observation::add(Fluent fluent, double p) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw std::invalid_argument("observation confidence must lie in (0, 1]");
  }
  entries_.push_back({std::move(fluent), p});
}

}  // namespace dfb
