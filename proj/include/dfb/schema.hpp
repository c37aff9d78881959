#pragma once

#include <deque>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "dfb/fluent.hpp"
#include "dfb/variable.hpp"

namespace dfb {

struct PropertySchema {
  std::string name;
  DomainPtr domain;
};

struct ObjectType {
  std::string name;
  std::vector<PropertySchema> properties;
  // Name prefix used to infer the type of objects first seen in a fluent
  // when several types declare the same property. Empty means none.
  std::string object_prefix;

  const PropertySchema* find_property(std::string_view property) const;
};

struct ObjectRef {
  std::string name;
  std::string type;
};

// Vocabulary of a problem: object types, the objects seen so far, the
// grid layout and the predicate registry. Objects referenced by fluents
// but not yet known are registered on sight (open domain).
class Schema {
 public:
  Schema();
  Schema(const Schema&) = delete;
  Schema& operator=(const Schema&) = delete;

  void add_type(ObjectType type);
  const ObjectRef& add_object(std::string name, std::string type);

  const ObjectType* find_type(std::string_view name) const;
  const ObjectRef* find_object(std::string_view name) const;
  const std::deque<ObjectRef>& objects() const { return objects_; }
  const std::vector<ObjectType>& types() const { return types_; }

  // Throws SchemaError for an unknown object or a property its type lacks.
  StateVariable variable(std::string_view property, std::string_view object) const;
  // Like variable(), but registers an unknown object, inferring its type
  // from the property (and the type prefixes when ambiguous).
  StateVariable variable_open(std::string_view property, std::string_view object);

  // Every property of every registered object, in registration order.
  std::vector<StateVariable> known_variables() const;

  Grid& grid() { return *grid_; }
  const Grid& grid() const { return *grid_; }
  const PredicateRegistry& predicates() const { return predicates_; }
  PredicateRegistry& predicates() { return predicates_; }

  // Builds a fluent from a predicate name; throws UnknownPredicate.
  Fluent make_fluent(std::string_view predicate, std::vector<Term> args) const;

  static std::unique_ptr<Schema> from_json(const nlohmann::json& j);

 private:
  std::vector<ObjectType> types_;
  std::deque<ObjectRef> objects_;
  std::unordered_map<std::string, std::size_t> object_index_;
  std::shared_ptr<Grid> grid_;
  PredicateRegistry predicates_;
};

// Values in JSON: integers map to integer values, strings to symbols.
Value value_from_json(const nlohmann::json& j);
nlohmann::json value_to_json(const Value& v);

}  // namespace dfb
