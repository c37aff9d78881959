#include "dfb/schema.hpp"

#include <algorithm>

#include "dfb/errors.hpp"

namespace dfb {

const PropertySchema* ObjectType::find_property(std::string_view property) const {
  for (const auto& p : properties) {
    if (p.name == property) return &p;
  }
  return nullptr;
}

Schema::Schema()
    : grid_(std::make_shared<Grid>()), predicates_(PredicateRegistry::standard(grid_)) {}

void Schema::add_type(ObjectType type) {
  if (find_type(type.name)) throw SchemaError("duplicate type " + type.name);
  for (std::size_t i = 0; i < type.properties.size(); ++i) {
    const auto& p = type.properties[i];
    if (!p.domain || p.domain->size() == 0) {
      throw SchemaError("property " + p.name + " has an empty domain");
    }
    for (std::size_t k = 0; k < i; ++k) {
      if (type.properties[k].name == p.name) {
        throw SchemaError("duplicate property " + p.name + " in type " + type.name);
      }
    }
  }
  types_.push_back(std::move(type));
}

const ObjectRef& Schema::add_object(std::string name, std::string type) {
  if (!find_type(type)) throw SchemaError("unknown type " + type);
  if (object_index_.count(name)) throw SchemaError("duplicate object " + name);
  object_index_.emplace(name, objects_.size());
  objects_.push_back({std::move(name), std::move(type)});
  return objects_.back();
}

const ObjectType* Schema::find_type(std::string_view name) const {
  for (const auto& t : types_) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

const ObjectRef* Schema::find_object(std::string_view name) const {
  auto it = object_index_.find(std::string(name));
  if (it == object_index_.end()) return nullptr;
  return &objects_[it->second];
}

StateVariable Schema::variable(std::string_view property, std::string_view object) const {
  const auto* obj = find_object(object);
  if (!obj) throw SchemaError("unknown object " + std::string(object));
  const auto* type = find_type(obj->type);
  const auto* prop = type->find_property(property);
  if (!prop) {
    throw SchemaError("type " + type->name + " has no property " + std::string(property));
  }
  return StateVariable(Symbol(property), Symbol(object), prop->domain);
}

StateVariable Schema::variable_open(std::string_view property, std::string_view object) {
  if (find_object(object)) return variable(property, object);

  std::vector<const ObjectType*> candidates;
  for (const auto& t : types_) {
    if (t.find_property(property)) candidates.push_back(&t);
  }
  if (candidates.empty()) {
    throw SchemaError("no type declares property " + std::string(property));
  }
  const ObjectType* chosen = nullptr;
  if (candidates.size() == 1) {
    chosen = candidates.front();
  } else {
    for (const auto* t : candidates) {
      if (!t->object_prefix.empty() && object.substr(0, t->object_prefix.size()) == t->object_prefix) {
        if (chosen) {
          throw SchemaError("cannot infer the type of " + std::string(object));
        }
        chosen = t;
      }
    }
    if (!chosen) throw SchemaError("cannot infer the type of " + std::string(object));
  }
  add_object(std::string(object), chosen->name);
  return variable(property, object);
}

std::vector<StateVariable> Schema::known_variables() const {
  std::vector<StateVariable> out;
  for (const auto& obj : objects_) {
    const auto* type = find_type(obj.type);
    for (const auto& p : type->properties) {
      out.emplace_back(Symbol(p.name), Symbol(obj.name), p.domain);
    }
  }
  return out;
}

Fluent Schema::make_fluent(std::string_view predicate, std::vector<Term> args) const {
  auto def = predicates_.find(predicate);
  if (!def) throw UnknownPredicate("unknown predicate " + std::string(predicate));
  return Fluent(std::move(def), std::move(args));
}

Value value_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Value::integer(j.get<std::int64_t>());
  if (j.is_string()) return Value::symbol(j.get<std::string>());
  throw SchemaError("domain values must be integers or strings: " + j.dump());
}

nlohmann::json value_to_json(const Value& v) {
  if (v.is_integer()) return v.as_integer();
  return std::string(v.as_symbol().str());
}

std::unique_ptr<Schema> Schema::from_json(const nlohmann::json& j) {
  auto schema = std::make_unique<Schema>();
  try {
    for (const auto& jt : j.at("types")) {
      ObjectType type;
      type.name = jt.at("name").get<std::string>();
      type.object_prefix = jt.value("prefix", std::string());
      for (const auto& jp : jt.at("properties")) {
        std::vector<Value> values;
        for (const auto& jv : jp.at("domain")) values.push_back(value_from_json(jv));
        type.properties.push_back(
            {jp.at("name").get<std::string>(), std::make_shared<const Domain>(std::move(values))});
      }
      schema->add_type(std::move(type));
    }
    if (j.contains("objects")) {
      for (const auto& jo : j.at("objects")) {
        schema->add_object(jo.at("name").get<std::string>(), jo.at("type").get<std::string>());
      }
    }
    if (j.contains("grid")) {
      const auto& jg = j.at("grid");
      if (jg.contains("cells")) {
        for (const auto& [name, rc] : jg.at("cells").items()) {
          schema->grid().add_cell(Value::symbol(name), {rc.at(0).get<int>(), rc.at(1).get<int>()});
        }
      }
      if (jg.contains("regions")) {
        for (const auto& [name, members] : jg.at("regions").items()) {
          std::vector<Value> vs;
          for (const auto& m : members) vs.push_back(value_from_json(m));
          schema->grid().add_region(Value::symbol(name), vs);
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed schema: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("malformed schema: ") + e.what());
  }
  return schema;
}

}  // namespace dfb
