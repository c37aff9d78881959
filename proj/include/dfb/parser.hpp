#pragma once

#include <string_view>

#include "dfb/fluent.hpp"
#include "dfb/schema.hpp"

namespace dfb {

// Parses `Pred(term, term, ...)` where a term is `property(object)`, an
// integer literal, or a symbolic literal. Whitespace between tokens is
// ignored; identifiers are case-sensitive. Objects not yet in the schema
// are registered.
//
// Throws ParseError (with byte offset), UnknownPredicate, ArityError,
// DomainError or SchemaError.
Fluent parse_fluent(std::string_view text, Schema& schema);

}  // namespace dfb
