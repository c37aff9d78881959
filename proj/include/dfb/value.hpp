#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace dfb {

// Interned identifier. Ids are process-wide and stable for the lifetime of
// the process; the table only grows.
class Symbol {
 public:
  Symbol() = default;
  explicit Symbol(std::string_view text) : id_(intern(text)) {}

  static Symbol from_id(std::uint32_t id) {
    Symbol s;
    s.id_ = id;
    return s;
  }

  std::string_view str() const;
  std::uint32_t id() const { return id_; }

  friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }

 private:
  static std::uint32_t intern(std::string_view text);
  std::uint32_t id_ = 0;  // 0 is the empty string
};

// A domain value: either an integer or a symbolic constant. Trivially
// copyable so tables of values stay cheap.
class Value {
 public:
  Value() = default;
  static Value integer(std::int64_t v) { return Value(true, v); }
  static Value symbol(std::string_view s) { return Value(false, Symbol(s).id()); }
  static Value symbol(Symbol s) { return Value(false, s.id()); }

  bool is_integer() const { return is_int_; }
  bool is_symbol() const { return !is_int_; }
  std::int64_t as_integer() const { return raw_; }
  Symbol as_symbol() const { return Symbol::from_id(static_cast<std::uint32_t>(raw_)); }

  std::string to_string() const;

  friend bool operator==(const Value& a, const Value& b) {
    return a.is_int_ == b.is_int_ && a.raw_ == b.raw_;
  }

  std::size_t hash() const {
    return std::hash<std::int64_t>{}(raw_) ^ (is_int_ ? 0x9e3779b97f4a7c15ULL : 0);
  }

 private:
  Value(bool is_int, std::int64_t raw) : is_int_(is_int), raw_(raw) {}
  bool is_int_ = false;
  std::int64_t raw_ = 0;
};

}  // namespace dfb

template <>
struct std::hash<dfb::Symbol> {
  std::size_t operator()(dfb::Symbol s) const noexcept { return s.id(); }
};

template <>
struct std::hash<dfb::Value> {
  std::size_t operator()(const dfb::Value& v) const noexcept { return v.hash(); }
};
