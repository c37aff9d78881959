#include "dfb/planner.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include "dfb/errors.hpp"
#include "dfb/static_belief.hpp"

namespace dfb::planner {

using cooking::Kitchen;

std::uint64_t AbstractState::key() const {
  auto b = [](int x, int shift) { return static_cast<std::uint64_t>(x & 0xff) << shift; };
  return b(uv, 0) | b(us, 8) | b(kv, 16) | b(ks, 24) | b(hv, 32) | b(hs, 40) | b(timer, 48);
}

AbstractState abstract_state(const PlanningProblem& problem) {
  AbstractState s;
  for (const auto& t : problem.targets) {
    int& slot = t.known ? (t.vegetable ? s.kv : s.ks) : (t.vegetable ? s.uv : s.us);
    ++slot;
  }
  s.hv = problem.held_vegetables;
  s.hs = problem.held_seasonings;
  s.timer = problem.cooking_remaining;
  return s;
}

std::optional<std::pair<AbstractState, int>> successor(const AbstractState& s, AbstractOp op) {
  constexpr int kLiving = static_cast<int>(cooking::kLivingCost);
  AbstractState n = s;
  n.timer = std::max(s.timer - 1, 0);
  const int held = s.hv + s.hs;
  switch (op) {
    case AbstractOp::ObserveVegetable:
      if (s.uv == 0) return std::nullopt;
      --n.uv;
      ++n.kv;
      return std::make_pair(n, static_cast<int>(cooking::kObserveCost) + kLiving);
    case AbstractOp::ObserveSeasoning:
      if (s.us == 0) return std::nullopt;
      --n.us;
      ++n.ks;
      return std::make_pair(n, static_cast<int>(cooking::kObserveCost) + kLiving);
    case AbstractOp::PickVegetable:
      if (s.kv == 0 || held >= static_cast<int>(cooking::kMaxHeld)) return std::nullopt;
      --n.kv;
      ++n.hv;
      return std::make_pair(n, static_cast<int>(cooking::kPickCost) + kLiving);
    case AbstractOp::PickSeasoning:
      if (s.ks == 0 || held >= static_cast<int>(cooking::kMaxHeld)) return std::nullopt;
      --n.ks;
      ++n.hs;
      return std::make_pair(n, static_cast<int>(cooking::kPickCost) + kLiving);
    case AbstractOp::Place: {
      if (held == 0) return std::nullopt;
      if (s.hv > 0) n.timer = cooking::kCookSteps;
      n.hv = 0;
      n.hs = 0;
      int cost = static_cast<int>(cooking::kPlaceBaseCost + cooking::kPlacePerItemCost * held) + kLiving;
      if (s.hs > 0 && (n.timer > 0 || s.uv + s.kv > 0)) cost += static_cast<int>(cooking::kSeasoningPenalty);
      return std::make_pair(n, cost);
    }
    case AbstractOp::NoOp:
      if (s.timer == 0) return std::nullopt;
      return std::make_pair(n, kLiving);
  }
  return std::nullopt;
}

int heuristic(const AbstractState& s) {
  const int pending = s.uv + s.us + s.kv + s.ks;
  const int unknown = s.uv + s.us;
  const int not_in_pot = pending + s.hv + s.hs;
  const int veg_not_in_pot = s.uv + s.kv + s.hv;
  // Lower bound on the number of remaining steps.
  int steps = s.timer;
  if (not_in_pot > 0) steps = std::max(steps, pending + unknown + 1);
  if (veg_not_in_pot > 0) steps = std::max(steps, s.uv + s.kv + s.uv + 1 + cooking::kCookSteps);
  int h = static_cast<int>(cooking::kPickCost) * pending + static_cast<int>(cooking::kObserveCost) * unknown;
  if (not_in_pot > 0) {
    h += static_cast<int>(cooking::kPlaceBaseCost + cooking::kPlacePerItemCost * not_in_pot);
  }
  return h + static_cast<int>(cooking::kLivingCost) * steps;
}

namespace {

struct Record {
  int g;
  std::uint64_t parent;
  AbstractOp op;
  AbstractState state;
};

struct OpenEntry {
  int f;
  int h;
  std::uint64_t key;
  bool operator>(const OpenEntry& o) const { return f != o.f ? f > o.f : (h != o.h ? h > o.h : key > o.key); }
};

}  // namespace

Plan plan(const PlanningProblem& problem, const Kitchen& kitchen, SearchStats* stats) {
  const AbstractState start = abstract_state(problem);
  std::unordered_map<std::uint64_t, Record> seen;
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> open;
  seen.emplace(start.key(), Record{0, start.key(), AbstractOp::NoOp, start});
  open.push({heuristic(start), heuristic(start), start.key()});
  std::size_t expanded = 0, generated = 1;

  std::optional<std::uint64_t> goal;
  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    const Record rec = seen.at(top.key);
    if (top.f != rec.g + heuristic(rec.state)) continue;  // stale entry
    if (rec.state.goal()) {
      goal = top.key;
      break;
    }
    ++expanded;
    for (auto op : kAbstractOps) {
      auto next = successor(rec.state, op);
      if (!next) continue;
      const int g = rec.g + next->second;
      const auto k = next->first.key();
      auto it = seen.find(k);
      if (it != seen.end() && it->second.g <= g) continue;
      seen[k] = Record{g, top.key, op, next->first};
      const int h = heuristic(next->first);
      open.push({g + h, h, k});
      ++generated;
    }
  }
  if (stats) *stats = {expanded, generated};
  if (!goal) throw NoPlan("no plan reaches the goal");

  std::vector<AbstractOp> ops;
  for (auto k = *goal; k != start.key(); k = seen.at(k).parent) ops.push_back(seen.at(k).op);
  std::reverse(ops.begin(), ops.end());

  // Ground each abstract step on concrete locations, lowest index first.
  std::deque<std::size_t> unknown_veg, unknown_sea, known_veg, known_sea;
  for (const auto& t : problem.targets) {
    (t.known ? (t.vegetable ? known_veg : known_sea) : (t.vegetable ? unknown_veg : unknown_sea))
        .push_back(t.location);
  }
  auto take = [](std::deque<std::size_t>& q) {
    const auto v = q.front();
    q.pop_front();
    return v;
  };
  Plan out;
  out.expected_cost = seen.at(*goal).g;
  for (auto op : ops) {
    switch (op) {
      case AbstractOp::ObserveVegetable: {
        const auto l = take(unknown_veg);
        known_veg.push_back(l);
        out.steps.push_back(Operator::observe(kitchen.location(l)));
        break;
      }
      case AbstractOp::ObserveSeasoning: {
        const auto l = take(unknown_sea);
        known_sea.push_back(l);
        out.steps.push_back(Operator::observe(kitchen.location(l)));
        break;
      }
      case AbstractOp::PickVegetable:
        out.steps.push_back(Operator::pick(kitchen.location(take(known_veg))));
        break;
      case AbstractOp::PickSeasoning:
        out.steps.push_back(Operator::pick(kitchen.location(take(known_sea))));
        break;
      case AbstractOp::Place:
        out.steps.push_back(Operator::place_in_pot());
        break;
      case AbstractOp::NoOp:
        out.steps.push_back(Operator::noop());
        break;
    }
  }
  return out;
}

PlanningProblem make_problem(const Kitchen& kitchen, const Assignment& hypothesis,
                             const BeliefModel& belief, int held_vegetables, int held_seasonings,
                             int cooking_remaining) {
  std::vector<std::optional<Target>> at(kitchen.size());
  for (std::size_t l = 0; l < kitchen.size(); ++l) {
    auto it = hypothesis.find(kitchen.contents(l));
    if (it == hypothesis.end() || it->second == kitchen.empty()) continue;
    at[l] = Target{l, it->second == kitchen.vegetable(), false};
  }
  const Symbol position("position");
  for (const auto& v : belief.variables()) {
    if (!(v.property() == position)) continue;
    auto d = belief.determined_value(v);
    if (!d || *d == kitchen.picked()) continue;
    auto l = kitchen.location_index(*d);
    if (!l) continue;
    at[*l] = Target{*l, Kitchen::is_vegetable_name(v.object().str()), true};
  }
  PlanningProblem p;
  for (auto& t : at) {
    if (!t) continue;
    if (!t->known) {
      auto d = belief.determined_value(kitchen.contents(t->location));
      t->known = d && !(*d == kitchen.empty());
    }
    p.targets.push_back(*t);
  }
  p.held_vegetables = held_vegetables;
  p.held_seasonings = held_seasonings;
  p.cooking_remaining = cooking_remaining;
  return p;
}

Assignment determinize(const BeliefModel& belief, Rng& rng, int attempts, DeterminizeStats* stats) {
  using clock = std::chrono::steady_clock;
  for (int i = 0; i < attempts; ++i) {
    const auto t0 = clock::now();
    try {
      auto a = belief.sample_state(rng);
      if (stats) {
        stats->seconds += std::chrono::duration<double>(clock::now() - t0).count();
        ++stats->succeeded;
      }
      return a;
    } catch (const SearchExhausted&) {
      if (stats) {
        stats->seconds += std::chrono::duration<double>(clock::now() - t0).count();
        ++stats->failed;
      }
    }
  }
  throw SearchExhausted("no consistent world after " + std::to_string(attempts) + " attempts");
}

std::string representation_name(Representation r) {
  return r == Representation::Dynamic ? "dynamic" : "static";
}

Representation representation_from_name(const std::string& name) {
  if (name == "dynamic") return Representation::Dynamic;
  if (name == "static") return Representation::Static;
  throw std::invalid_argument("representation must be dynamic or static, got " + name);
}

std::unique_ptr<BeliefModel> make_belief(Representation rep, const Kitchen& kitchen,
                                         const BeliefConfig& config) {
  const auto cfg = kitchen.belief_config(config);
  if (rep == Representation::Dynamic) {
    return std::make_unique<Belief>(Belief::init(kitchen.contents_priors(cfg), cfg));
  }
  return std::make_unique<StaticBelief>(kitchen.contents_priors(cfg), cfg);
}

}  // namespace dfb::planner
