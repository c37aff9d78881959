#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dfb/value.hpp"

namespace dfb {

// Finite ordered value domain of a property.
class Domain {
 public:
  explicit Domain(std::vector<Value> values);

  std::size_t size() const { return values_.size(); }
  const Value& operator[](std::size_t i) const { return values_[i]; }
  const std::vector<Value>& values() const { return values_; }
  std::optional<std::size_t> index_of(const Value& v) const;
  bool contains(const Value& v) const { return index_of(v).has_value(); }
  bool numeric() const { return numeric_; }

 private:
  std::vector<Value> values_;
  std::unordered_map<Value, std::size_t> index_;
  bool numeric_ = true;
};

using DomainPtr = std::shared_ptr<const Domain>;

// A property applied to an object, e.g. contents(L3). Identity is the
// (property, object) pair; the domain rides along so distributions and
// evaluators never need to consult the schema.
class StateVariable {
 public:
  StateVariable(Symbol property, Symbol object, DomainPtr domain)
      : property_(property), object_(object), domain_(std::move(domain)) {}

  Symbol property() const { return property_; }
  Symbol object() const { return object_; }
  const Domain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }

  std::string to_string() const;

  friend bool operator==(const StateVariable& a, const StateVariable& b) {
    return a.property_ == b.property_ && a.object_ == b.object_;
  }
  // Lexicographic on the printed names, for canonical output.
  friend bool operator<(const StateVariable& a, const StateVariable& b);

 private:
  Symbol property_;
  Symbol object_;
  DomainPtr domain_;
};

struct StateVariableHash {
  std::size_t operator()(const StateVariable& v) const noexcept {
    return (static_cast<std::size_t>(v.property().id()) << 32) ^ v.object().id();
  }
};

using Assignment = std::unordered_map<StateVariable, Value, StateVariableHash>;

}  // namespace dfb

template <>
struct std::hash<dfb::StateVariable> : dfb::StateVariableHash {};
