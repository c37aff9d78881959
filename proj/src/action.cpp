#include "dfb/action.hpp"

namespace dfb {

std::string Operator::to_string() const {
  switch (kind) {
    case OpKind::Observe:
      return "Observe(" + location->to_string() + ")";
    case OpKind::Pick:
      return "Pick(" + location->to_string() + ")";
    case OpKind::PlaceInPot:
      return "PlaceInPot";
    case OpKind::NoOp:
      return "NoOp";
  }
  return "?";
}

}  // namespace dfb
