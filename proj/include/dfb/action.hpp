#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dfb/variable.hpp"

namespace dfb {

enum class OpKind { Observe, Pick, PlaceInPot, NoOp };

struct Operator {
  OpKind kind = OpKind::NoOp;
  std::optional<Value> location;  // Observe and Pick only

  static Operator observe(Value loc) { return {OpKind::Observe, loc}; }
  static Operator pick(Value loc) { return {OpKind::Pick, loc}; }
  static Operator place_in_pot() { return {OpKind::PlaceInPot, std::nullopt}; }
  static Operator noop() { return {OpKind::NoOp, std::nullopt}; }

  std::string to_string() const;
  friend bool operator==(const Operator&, const Operator&) = default;
};

// Deterministic effect of an executed action on one state variable.
struct Effect {
  StateVariable variable;
  Value value;
};

struct ActionRecord {
  Operator op;
  std::vector<Effect> effects;
  double cost = 0.0;

  static ActionRecord noop() { return {}; }
};

}  // namespace dfb
