#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include "dfb/variable.hpp"

namespace dfb {

struct Cell {
  int row = 0;
  int col = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

// Spatial layout of location values, used by NextTo and In.
class Grid {
 public:
  void add_cell(const Value& location, Cell cell) { cells_[location] = cell; }
  void add_region(const Value& name, const std::vector<Value>& members);

  std::optional<Cell> cell(const Value& location) const;
  bool adjacent(const Value& a, const Value& b) const;
  bool has_region(const Value& name) const { return regions_.count(name) != 0; }
  bool in_region(const Value& location, const Value& region) const;
  std::vector<Value> region_names() const;

 private:
  std::unordered_map<Value, Cell> cells_;
  std::unordered_map<Value, std::unordered_set<Value>> regions_;
  std::vector<Value> region_order_;
};

enum class ArgKind {
  Variable,  // must be a state variable
  Term,      // a state variable, or a constant in the domain of a peer variable
  Region,    // a constant naming a region of the grid
};

struct PredicateDef {
  std::string name;
  std::vector<ArgKind> args;
  // Truth value given one value per argument, in argument order.
  std::function<bool(std::span<const Value>)> holds;
  std::function<bool(const Value&)> region_exists;
};

using PredicatePtr = std::shared_ptr<const PredicateDef>;

class PredicateRegistry {
 public:
  // Equal, Different, Same, NextTo, In. The grid backs NextTo and In.
  static PredicateRegistry standard(std::shared_ptr<const Grid> grid);

  void add(PredicateDef def);
  PredicatePtr find(std::string_view name) const;

 private:
  std::unordered_map<std::string, PredicatePtr> defs_;
};

using Term = std::variant<StateVariable, Value>;

class Fluent {
 public:
  // Throws ArityError or DomainError when the arguments do not fit the
  // predicate's signature.
  Fluent(PredicatePtr predicate, std::vector<Term> args);

  const PredicateDef& predicate() const { return *predicate_; }
  const std::string& name() const { return predicate_->name; }
  const std::vector<Term>& args() const { return args_; }

  // Deduplicated, in first-occurrence order.
  const std::vector<StateVariable>& variables() const { return variables_; }

  // variable_values[i] is the value of variables()[i].
  bool holds(std::span<const Value> variable_values) const;

  std::string render() const;

  friend bool operator==(const Fluent& a, const Fluent& b);

 private:
  PredicatePtr predicate_;
  std::vector<Term> args_;
  std::vector<StateVariable> variables_;
  std::vector<int> arg_slot_;  // index into variables_, or -1 for a constant
};

inline const std::vector<StateVariable>& mentioned_variables(const Fluent& f) {
  return f.variables();
}

inline std::string render(const Fluent& f) { return f.render(); }

// Throws MissingVariable when the assignment does not cover f.
bool evaluate(const Fluent& f, const Assignment& assignment);

struct ObservationEntry {
  Fluent fluent;
  double p = 1.0;
};

class Observation {
 public:
  Observation() = default;

  // Throws std::invalid_argument unless 0 < p <= 1.
  void add(Fluent fluent, double p);

  const std::vector<ObservationEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<ObservationEntry> entries_;
};

}  // namespace dfb
