#include "dfb/variable.hpp"

#include <stdexcept>

namespace dfb {

Domain::Domain(std::vector<Value> values) : values_(std::move(values)) {
  if (values_.empty()) throw std::invalid_argument("domain must not be empty");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!index_.emplace(values_[i], i).second) {
      throw std::invalid_argument("duplicate domain value " + values_[i].to_string());
    }
    numeric_ = numeric_ && values_[i].is_integer();
  }
}

std::optional<std::size_t> Domain::index_of(const Value& v) const {
  auto it = index_.find(v);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::string StateVariable::to_string() const {
  std::string s(property_.str());
  s += '(';
  s += object_.str();
  s += ')';
  return s;
}

bool operator<(const StateVariable& a, const StateVariable& b) {
  if (a.property_ != b.property_) return a.property_.str() < b.property_.str();
  if (a.object_ == b.object_) return false;
  return a.object_.str() < b.object_.str();
}

}  // namespace dfb
