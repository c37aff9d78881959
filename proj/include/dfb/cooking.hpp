#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dfb/action.hpp"
#include "dfb/belief.hpp"
#include "dfb/fluent.hpp"
#include "dfb/sampler.hpp"
#include "dfb/schema.hpp"

namespace dfb::cooking {

inline constexpr std::size_t kMaxHeld = 10;
inline constexpr int kCookSteps = 5;
inline constexpr double kObserveCost = 5;
inline constexpr double kPickCost = 20;
inline constexpr double kPlaceBaseCost = 100;
inline constexpr double kPlacePerItemCost = 50;
inline constexpr double kSeasoningPenalty = 1000;
inline constexpr double kLivingCost = 10;

enum class Template {
  ContentsEqual,      // Equal(contents(L), v)
  ContentsSame,       // Same(contents(L1), contents(L2))
  ContentsDifferent,  // Different(contents(L1), contents(L2))
  PositionEqual,      // Equal(position(i), L)
  PositionNextTo,     // NextTo(position(i), position(j))
  PositionIn,         // In(position(i), region)
};

std::vector<Template> all_templates();
std::string template_name(Template t);
Template template_from_name(const std::string& name);

struct WorldConfig {
  int rows = 4;
  int cols = 4;
  int n_vegetables = 3;
  int n_seasonings = 3;
  double assertion_p = 1.0;
  std::uint64_t seed = 0;
  std::vector<Template> templates = all_templates();

  // Throws std::invalid_argument.
  void validate() const;
  // n ingredients split into ceil(n/2) vegetables and floor(n/2) seasonings.
  void set_ingredients(int n);
};

// Shared vocabulary of a grid: location names L1..Ln in row-major order,
// the contents and position domains, regions row1.. and col1.., and the
// predicates. Ingredients are named veg<k> and sea<k>.
class Kitchen {
 public:
  Kitchen(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return locations_.size(); }
  const Value& location(std::size_t i) const { return locations_[i]; }
  const std::vector<Value>& locations() const { return locations_; }
  std::optional<std::size_t> location_index(const Value& v) const;
  const std::vector<Value>& regions() const { return regions_; }

  const StateVariable& contents(std::size_t loc) const { return contents_vars_[loc]; }
  StateVariable position(const std::string& ingredient) const;
  static bool is_vegetable_name(std::string_view name) { return name.substr(0, 3) == "veg"; }

  Value vegetable() const { return vegetable_; }
  Value seasoning() const { return seasoning_; }
  Value empty() const { return empty_; }
  Value picked() const { return picked_; }

  Schema& schema() { return *schema_; }
  const Schema& schema() const { return *schema_; }
  Fluent make(std::string_view predicate, std::vector<Term> args) const {
    return schema_->make_fluent(predicate, std::move(args));
  }

  // Uniform contents prior; position prior uniform over locations and 0 on picked.
  BeliefConfig belief_config(BeliefConfig base = {}) const;
  // One (contents variable, prior) pair per location.
  std::vector<std::pair<StateVariable, JointDistribution>> contents_priors(
      const BeliefConfig& config) const;

 private:
  int rows_;
  int cols_;
  std::vector<Value> locations_;
  std::vector<Value> regions_;
  std::vector<StateVariable> contents_vars_;
  DomainPtr position_domain_;
  Value vegetable_, seasoning_, empty_, picked_;
  std::unique_ptr<Schema> schema_;
};

struct Ingredient {
  std::string name;
  bool vegetable = true;
};

enum class Place { Grid, Held, Pot };

struct StepResult {
  Observation observation;
  double cost = 0.0;  // operator cost plus living cost
  ActionRecord record;
  bool succeeded = true;
};

// Ground-truth simulator state. Robot pose is implicit: moves are folded
// into Observe and Pick.
class HiddenWorld {
 public:
  // Random placement of the configured ingredients on distinct cells.
  static HiddenWorld generate(const WorldConfig& config, std::shared_ptr<const Kitchen> kitchen);
  // layout[i] names the ingredient at location i, or "" for empty.
  static HiddenWorld from_layout(std::shared_ptr<const Kitchen> kitchen,
                                 const std::vector<std::string>& layout);

  // Throws ActionError for a malformed location or a Pick with full hands.
  StepResult step(const Operator& op);

  std::vector<Fluent> valid_assertions(const std::vector<Template>& templates = all_templates()) const;
  // Uniform over valid assertions; with probability 1-p, uniform over the
  // false instantiations instead. Either way labeled with p.
  ObservationEntry sample_assertion(Rng& rng, double p,
                                    const std::vector<Template>& templates = all_templates()) const;

  // Every ingredient in the pot and every vegetable cooked.
  bool goal_test() const;

  const Kitchen& kitchen() const { return *kitchen_; }
  const std::shared_ptr<const Kitchen>& kitchen_ptr() const { return kitchen_; }
  const std::vector<Ingredient>& ingredients() const { return ingredients_; }
  std::int64_t clock() const { return clock_; }
  Place place(std::size_t ingredient) const { return place_[ingredient]; }
  // Ingredient index at a location, or -1.
  int occupant(std::size_t loc) const { return grid_[loc]; }
  std::optional<std::size_t> location_of(std::size_t ingredient) const;
  const std::vector<std::size_t>& held() const { return held_; }
  // Steps until every vegetable in the pot is cooked (0 if none is cooking).
  int cooking_remaining() const;
  // True if some vegetable is not yet cooked in the pot.
  bool any_vegetable_uncooked() const;
  Value contents_value(std::size_t loc) const;
  // Ground truth of every state variable, positions of pot or held items as picked.
  Assignment assignment() const;

 private:
  HiddenWorld() = default;
  struct Instance {
    Template t;
    std::uint32_t a, b;  // operand indices; meaning depends on the template
  };
  void enumerate(const std::vector<Template>& templates, bool truth, std::vector<Instance>& out) const;
  Fluent realize(const Instance& inst) const;

  std::shared_ptr<const Kitchen> kitchen_;
  std::vector<Ingredient> ingredients_;
  std::vector<int> grid_;
  std::vector<std::size_t> loc_of_;
  std::vector<Place> place_;
  std::vector<std::int64_t> placed_at_;
  std::vector<std::size_t> held_;
  std::int64_t clock_ = 0;
};

}  // namespace dfb::cooking
