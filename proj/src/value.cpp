#include "dfb/value.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

namespace dfb {

namespace {

struct SymbolTable {
  std::shared_mutex mutex;
  std::deque<std::string> names{std::string()};
  std::unordered_map<std::string_view, std::uint32_t> ids{{std::string_view(), 0}};
};

SymbolTable& table() {
  static SymbolTable t;
  return t;
}

}  // namespace

std::uint32_t Symbol::intern(std::string_view text) {
  auto& t = table();
  {
    std::shared_lock lock(t.mutex);
    if (auto it = t.ids.find(text); it != t.ids.end()) return it->second;
  }
  std::unique_lock lock(t.mutex);
  if (auto it = t.ids.find(text); it != t.ids.end()) return it->second;
  const auto id = static_cast<std::uint32_t>(t.names.size());
  t.names.emplace_back(text);
  t.ids.emplace(t.names.back(), id);
  return id;
}

std::string_view Symbol::str() const {
  auto& t = table();
  std::shared_lock lock(t.mutex);
  return t.names[id_];
}

std::string Value::to_string() const {
  if (is_int_) return std::to_string(raw_);
  return std::string(as_symbol().str());
}

}  // namespace dfb
