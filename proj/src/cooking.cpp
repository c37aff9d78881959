#include "dfb/cooking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "dfb/errors.hpp"

namespace dfb::cooking {

std::vector<Template> all_templates() {
  return {Template::ContentsEqual,  Template::ContentsSame,   Template::ContentsDifferent,
          Template::PositionEqual,  Template::PositionNextTo, Template::PositionIn};
}

std::string template_name(Template t) {
  switch (t) {
    case Template::ContentsEqual: return "contents_equal";
    case Template::ContentsSame: return "contents_same";
    case Template::ContentsDifferent: return "contents_different";
    case Template::PositionEqual: return "position_equal";
    case Template::PositionNextTo: return "position_next_to";
    case Template::PositionIn: return "position_in";
  }
  return "?";
}

Template template_from_name(const std::string& name) {
  for (auto t : all_templates()) {
    if (template_name(t) == name) return t;
  }
  throw std::invalid_argument("unknown assertion template " + name);
}

void WorldConfig::validate() const {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("grid dimensions must be positive");
  if (n_vegetables < 0 || n_seasonings < 0) {
    throw std::invalid_argument("ingredient counts must be non-negative");
  }
  if (n_vegetables + n_seasonings > rows * cols) {
    throw std::invalid_argument("more ingredients than grid cells");
  }
  if (!(assertion_p > 0.0 && assertion_p <= 1.0)) {
    throw std::invalid_argument("assertion p must lie in (0, 1]");
  }
  if (templates.empty()) throw std::invalid_argument("at least one assertion template is needed");
}

void WorldConfig::set_ingredients(int n) {
  if (n < 0) throw std::invalid_argument("ingredient count must be non-negative");
  n_vegetables = (n + 1) / 2;
  n_seasonings = n / 2;
}

Kitchen::Kitchen(int rows, int cols)
    : rows_(rows),
      cols_(cols),
      vegetable_(Value::symbol("vegetable")),
      seasoning_(Value::symbol("seasoning")),
      empty_(Value::symbol("empty")),
      picked_(Value::symbol("picked")),
      schema_(std::make_unique<Schema>()) {
  if (rows <= 0 || cols <= 0) throw std::invalid_argument("grid dimensions must be positive");
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      locations_.push_back(Value::symbol("L" + std::to_string(r * cols + c + 1)));
      schema_->grid().add_cell(locations_.back(), {r, c});
    }
  }
  for (int r = 0; r < rows; ++r) {
    std::vector<Value> members(locations_.begin() + r * cols, locations_.begin() + (r + 1) * cols);
    regions_.push_back(Value::symbol("row" + std::to_string(r + 1)));
    schema_->grid().add_region(regions_.back(), members);
  }
  for (int c = 0; c < cols; ++c) {
    std::vector<Value> members;
    for (int r = 0; r < rows; ++r) members.push_back(locations_[static_cast<std::size_t>(r * cols + c)]);
    regions_.push_back(Value::symbol("col" + std::to_string(c + 1)));
    schema_->grid().add_region(regions_.back(), members);
  }

  auto contents_domain = std::make_shared<const Domain>(std::vector<Value>{vegetable_, seasoning_, empty_});
  auto positions = locations_;
  positions.push_back(picked_);
  position_domain_ = std::make_shared<const Domain>(std::move(positions));

  schema_->add_type({"location", {{"contents", contents_domain}}, "L"});
  schema_->add_type({"vegetable", {{"position", position_domain_}}, "veg"});
  schema_->add_type({"seasoning", {{"position", position_domain_}}, "sea"});
  for (const auto& loc : locations_) {
    const auto& obj = schema_->add_object(std::string(loc.as_symbol().str()), "location");
    contents_vars_.push_back(schema_->variable("contents", obj.name));
  }
}

std::optional<std::size_t> Kitchen::location_index(const Value& v) const {
  if (!v.is_symbol()) return std::nullopt;
  auto s = v.as_symbol().str();
  if (s.size() < 2 || s[0] != 'L') return std::nullopt;
  std::size_t n = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return std::nullopt;
    n = n * 10 + static_cast<std::size_t>(s[i] - '0');
  }
  if (n == 0 || n > locations_.size()) return std::nullopt;
  return n - 1;
}

StateVariable Kitchen::position(const std::string& ingredient) const {
  return StateVariable(Symbol("position"), Symbol(ingredient), position_domain_);
}

BeliefConfig Kitchen::belief_config(BeliefConfig base) const {
  std::vector<double> w(locations_.size(), 1.0);
  w.push_back(0.0);
  base.priors["position"] = std::move(w);
  return base;
}

std::vector<std::pair<StateVariable, JointDistribution>> Kitchen::contents_priors(
    const BeliefConfig& config) const {
  std::vector<std::pair<StateVariable, JointDistribution>> out;
  for (const auto& v : contents_vars_) out.emplace_back(v, config.default_prior(v));
  return out;
}

HiddenWorld HiddenWorld::generate(const WorldConfig& config, std::shared_ptr<const Kitchen> kitchen) {
  config.validate();
  if (kitchen->rows() != config.rows || kitchen->cols() != config.cols) {
    throw std::invalid_argument("kitchen does not match the world configuration");
  }
  Rng rng(config.seed);
  std::vector<std::size_t> cells(kitchen->size());
  std::iota(cells.begin(), cells.end(), 0);
  std::shuffle(cells.begin(), cells.end(), rng);
  std::vector<std::string> layout(kitchen->size());
  std::size_t next = 0;
  for (int k = 1; k <= config.n_vegetables; ++k) layout[cells[next++]] = "veg" + std::to_string(k);
  for (int k = 1; k <= config.n_seasonings; ++k) layout[cells[next++]] = "sea" + std::to_string(k);
  return from_layout(std::move(kitchen), layout);
}

HiddenWorld HiddenWorld::from_layout(std::shared_ptr<const Kitchen> kitchen,
                                     const std::vector<std::string>& layout) {
  if (layout.size() != kitchen->size()) {
    throw std::invalid_argument("layout must name one entry per location");
  }
  HiddenWorld w;
  w.kitchen_ = std::move(kitchen);
  w.grid_.assign(layout.size(), -1);
  // Vegetables first, then seasonings, each by name, so indices are stable.
  std::vector<std::pair<std::string, std::size_t>> found;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (layout[i].empty()) continue;
    const auto& name = layout[i];
    if (name.rfind("veg", 0) != 0 && name.rfind("sea", 0) != 0) {
      throw std::invalid_argument("ingredient names start with veg or sea: " + name);
    }
    found.emplace_back(name, i);
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
    const bool va = Kitchen::is_vegetable_name(a.first), vb = Kitchen::is_vegetable_name(b.first);
    if (va != vb) return va;
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first < b.first;
  });
  for (std::size_t k = 0; k < found.size(); ++k) {
    if (k > 0 && found[k].first == found[k - 1].first) {
      throw std::invalid_argument("duplicate ingredient " + found[k].first);
    }
    w.ingredients_.push_back({found[k].first, Kitchen::is_vegetable_name(found[k].first)});
    w.grid_[found[k].second] = static_cast<int>(k);
    w.loc_of_.push_back(found[k].second);
    w.place_.push_back(Place::Grid);
    w.placed_at_.push_back(0);
  }
  return w;
}

std::optional<std::size_t> HiddenWorld::location_of(std::size_t ingredient) const {
  if (place_[ingredient] != Place::Grid) return std::nullopt;
  return loc_of_[ingredient];
}

Value HiddenWorld::contents_value(std::size_t loc) const {
  const int i = grid_[loc];
  if (i < 0) return kitchen_->empty();
  return ingredients_[static_cast<std::size_t>(i)].vegetable ? kitchen_->vegetable()
                                                             : kitchen_->seasoning();
}

int HiddenWorld::cooking_remaining() const {
  std::int64_t r = 0;
  for (std::size_t i = 0; i < ingredients_.size(); ++i) {
    if (ingredients_[i].vegetable && place_[i] == Place::Pot) {
      r = std::max<std::int64_t>(r, kCookSteps - (clock_ - placed_at_[i]));
    }
  }
  return static_cast<int>(r);
}

bool HiddenWorld::any_vegetable_uncooked() const {
  for (std::size_t i = 0; i < ingredients_.size(); ++i) {
    if (!ingredients_[i].vegetable) continue;
    if (place_[i] != Place::Pot || clock_ - placed_at_[i] < kCookSteps) return true;
  }
  return false;
}

bool HiddenWorld::goal_test() const {
  for (auto p : place_) {
    if (p != Place::Pot) return false;
  }
  return !any_vegetable_uncooked();
}

Assignment HiddenWorld::assignment() const {
  Assignment a;
  for (std::size_t l = 0; l < grid_.size(); ++l) a.emplace(kitchen_->contents(l), contents_value(l));
  for (std::size_t i = 0; i < ingredients_.size(); ++i) {
    a.emplace(kitchen_->position(ingredients_[i].name),
              place_[i] == Place::Grid ? kitchen_->location(loc_of_[i]) : kitchen_->picked());
  }
  return a;
}

StepResult HiddenWorld::step(const Operator& op) {
  StepResult r;
  r.record.op = op;
  std::size_t loc = 0;
  if (op.kind == OpKind::Observe || op.kind == OpKind::Pick) {
    auto idx = op.location ? kitchen_->location_index(*op.location) : std::nullopt;
    if (!idx) throw ActionError("malformed location in " + op.to_string());
    loc = *idx;
  }
  if (op.kind == OpKind::Pick && held_.size() >= kMaxHeld) {
    throw ActionError("cannot hold more than " + std::to_string(kMaxHeld) + " ingredients");
  }
  ++clock_;
  const auto& K = *kitchen_;
  switch (op.kind) {
    case OpKind::Observe: {
      r.cost = kObserveCost;
      r.observation.add(K.make("Equal", {K.contents(loc), contents_value(loc)}), 1.0);
      if (grid_[loc] >= 0) {
        const auto& ing = ingredients_[static_cast<std::size_t>(grid_[loc])];
        r.observation.add(K.make("Equal", {K.position(ing.name), K.location(loc)}), 1.0);
      }
      break;
    }
    case OpKind::Pick: {
      r.cost = kPickCost;
      if (grid_[loc] < 0) {
        r.succeeded = false;
        r.observation.add(K.make("Equal", {K.contents(loc), K.empty()}), 1.0);
        break;
      }
      const auto i = static_cast<std::size_t>(grid_[loc]);
      grid_[loc] = -1;
      place_[i] = Place::Held;
      held_.push_back(i);
      r.record.effects.push_back({K.contents(loc), K.empty()});
      r.record.effects.push_back({K.position(ingredients_[i].name), K.picked()});
      break;
    }
    case OpKind::PlaceInPot: {
      const auto n = static_cast<double>(held_.size());
      bool seasoning = false;
      for (auto i : held_) {
        place_[i] = Place::Pot;
        placed_at_[i] = clock_;
        seasoning = seasoning || !ingredients_[i].vegetable;
      }
      held_.clear();
      r.cost = kPlaceBaseCost + kPlacePerItemCost * n;
      if (seasoning && any_vegetable_uncooked()) r.cost += kSeasoningPenalty;
      break;
    }
    case OpKind::NoOp:
      break;
  }
  r.cost += kLivingCost;
  r.record.cost = r.cost;
  return r;
}

void HiddenWorld::enumerate(const std::vector<Template>& templates, bool truth,
                            std::vector<Instance>& out) const {
  const auto& K = *kitchen_;
  const auto n = static_cast<std::uint32_t>(grid_.size());
  std::vector<std::uint32_t> on_grid;
  for (std::size_t i = 0; i < ingredients_.size(); ++i) {
    if (place_[i] == Place::Grid) on_grid.push_back(static_cast<std::uint32_t>(i));
  }
  auto code = [&](std::uint32_t l) { return grid_[l] < 0 ? 2u : (ingredients_[static_cast<std::size_t>(grid_[l])].vegetable ? 0u : 1u); };
  for (auto t : templates) {
    switch (t) {
      case Template::ContentsEqual:
        for (std::uint32_t l = 0; l < n; ++l) {
          for (std::uint32_t v = 0; v < 3; ++v) {
            if ((code(l) == v) == truth) out.push_back({t, l, v});
          }
        }
        break;
      case Template::ContentsSame:
      case Template::ContentsDifferent:
        for (std::uint32_t a = 0; a < n; ++a) {
          for (std::uint32_t b = a + 1; b < n; ++b) {
            const bool same = code(a) == code(b);
            const bool holds = t == Template::ContentsSame ? same : !same;
            if (holds == truth) out.push_back({t, a, b});
          }
        }
        break;
      case Template::PositionEqual:
        for (auto i : on_grid) {
          for (std::uint32_t l = 0; l < n; ++l) {
            if ((loc_of_[i] == l) == truth) out.push_back({t, i, l});
          }
        }
        break;
      case Template::PositionNextTo:
        for (std::size_t x = 0; x < on_grid.size(); ++x) {
          for (std::size_t y = x + 1; y < on_grid.size(); ++y) {
            const bool adj = K.schema().grid().adjacent(K.location(loc_of_[on_grid[x]]),
                                                        K.location(loc_of_[on_grid[y]]));
            if (adj == truth) out.push_back({t, on_grid[x], on_grid[y]});
          }
        }
        break;
      case Template::PositionIn:
        for (auto i : on_grid) {
          for (std::uint32_t r = 0; r < K.regions().size(); ++r) {
            const bool in = K.schema().grid().in_region(K.location(loc_of_[i]), K.regions()[r]);
            if (in == truth) out.push_back({t, i, r});
          }
        }
        break;
    }
  }
}

Fluent HiddenWorld::realize(const Instance& inst) const {
  const auto& K = *kitchen_;
  static const char* kContents[] = {"vegetable", "seasoning", "empty"};
  switch (inst.t) {
    case Template::ContentsEqual:
      return K.make("Equal", {K.contents(inst.a), Value::symbol(kContents[inst.b])});
    case Template::ContentsSame:
      return K.make("Same", {K.contents(inst.a), K.contents(inst.b)});
    case Template::ContentsDifferent:
      return K.make("Different", {K.contents(inst.a), K.contents(inst.b)});
    case Template::PositionEqual:
      return K.make("Equal", {K.position(ingredients_[inst.a].name), K.location(inst.b)});
    case Template::PositionNextTo:
      return K.make("NextTo", {K.position(ingredients_[inst.a].name),
                               K.position(ingredients_[inst.b].name)});
    case Template::PositionIn:
      return K.make("In", {K.position(ingredients_[inst.a].name), K.regions()[inst.b]});
  }
  throw std::logic_error("unreachable template");
}

std::vector<Fluent> HiddenWorld::valid_assertions(const std::vector<Template>& templates) const {
  std::vector<Instance> inst;
  enumerate(templates, true, inst);
  std::vector<Fluent> out;
  out.reserve(inst.size());
  for (const auto& i : inst) out.push_back(realize(i));
  return out;
}

ObservationEntry HiddenWorld::sample_assertion(Rng& rng, double p,
                                               const std::vector<Template>& templates) const {
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("assertion p must lie in (0, 1]");
  std::bernoulli_distribution honest(p);
  const bool truth = honest(rng);
  std::vector<Instance> inst;
  enumerate(templates, truth, inst);
  if (inst.empty() && !truth) enumerate(templates, true, inst);
  if (inst.empty()) throw std::logic_error("no assertion can be generated");
  std::uniform_int_distribution<std::size_t> pick(0, inst.size() - 1);
  return {realize(inst[pick(rng)]), p};
}

}  // namespace dfb::cooking
