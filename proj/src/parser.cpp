#include "dfb/parser.hpp"

#include <cctype>
#include <charconv>
#include <string>
#include <vector>

#include "dfb/errors.hpp"

namespace dfb {

namespace {

class Parser {
 public:
  Parser(std::string_view text, Schema& schema) : text_(text), schema_(schema) {}

  Fluent parse() {
    const std::size_t pred_pos = skip_ws();
    const std::string_view pred = identifier("predicate name");
    auto def = schema_.predicates().find(pred);
    if (!def) {
      throw UnknownPredicate("unknown predicate " + std::string(pred) + " at position " +
                             std::to_string(pred_pos));
    }
    expect('(');
    std::vector<Term> args;
    if (peek() != ')') {
      args.push_back(term());
      while (peek() == ',') {
        ++pos_;
        args.push_back(term());
      }
    }
    expect(')');
    if (skip_ws() != text_.size()) throw ParseError("unexpected trailing input", pos_);
    return Fluent(std::move(def), std::move(args));
  }

 private:
  std::size_t skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  void expect(char c) {
    if (peek() != c) {
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
    ++pos_;
  }

  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  std::string_view identifier(const char* what) {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ >= text_.size() || !ident_start(text_[pos_])) {
      throw ParseError(std::string("expected ") + what, pos_);
    }
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  Term term() {
    const char c = peek();
    const std::size_t start = pos_;
    if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t end = pos_ + 1;
      while (end < text_.size() && std::isdigit(static_cast<unsigned char>(text_[end]))) ++end;
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(text_.data() + pos_, text_.data() + end, v);
      if (ec != std::errc() || ptr != text_.data() + end) {
        throw ParseError("malformed integer literal", start);
      }
      pos_ = end;
      return Value::integer(v);
    }
    const std::string_view name = identifier("term");
    if (peek() != '(') return Value::symbol(name);
    ++pos_;
    const std::string_view object = identifier("object name");
    expect(')');
    return schema_.variable_open(name, object);
  }

  std::string_view text_;
  Schema& schema_;
  std::size_t pos_ = 0;
};

}  // namespace

Fluent parse_fluent(std::string_view text, Schema& schema) {
  return Parser(text, schema).parse();
}

}  // namespace dfb
