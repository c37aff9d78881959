#include "dfb/sampler.hpp"

#include <algorithm>
#include <unordered_map>

#include "dfb/errors.hpp"

namespace dfb {

void CachedTable::refresh() {
  const auto t = joint.table();
  cdf.resize(t.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    acc += t[i];
    cdf[i] = acc;
  }
  marginals = joint.single_marginals();
}

std::size_t CachedTable::draw(Rng& rng) const {
  std::uniform_real_distribution<double> u(0.0, cdf.back());
  const double x = u(rng);
  auto idx = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), x) - cdf.begin());
  if (idx == cdf.size()) {
    // x landed on the total through rounding; take the last entry with mass.
    idx = cdf.size() - 1;
    while (idx > 0 && joint[idx] == 0.0) --idx;
  }
  return idx;
}

namespace {

struct BoundConstraint {
  const Fluent* fluent;
  std::vector<std::size_t> slots;
};

}  // namespace

Assignment backtracking_sample(std::span<const CachedTable* const> blocks,
                               std::span<const Fluent* const> constraints,
                               const SamplerLimits& limits, Rng& rng, SamplerStats* stats) {
  std::unordered_map<StateVariable, std::pair<std::size_t, std::size_t>, StateVariableHash> where;
  std::vector<std::size_t> first_slot(blocks.size() + 1, 0);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& vars = blocks[b]->joint.variables();
    if (!constraints.empty()) {
      for (std::size_t i = 0; i < vars.size(); ++i) {
        where.emplace(vars[i], std::make_pair(b, first_slot[b] + i));
      }
    }
    first_slot[b + 1] = first_slot[b] + vars.size();
  }

  // Each constraint is checked at the block that completes its grounding.
  std::vector<std::vector<BoundConstraint>> at_block(blocks.size());
  for (const Fluent* f : constraints) {
    BoundConstraint bc{f, {}};
    std::size_t last = 0;
    for (const auto& v : f->variables()) {
      auto it = where.find(v);
      if (it == where.end()) {
        throw UnknownVariable("constraint " + f->render() + " mentions unsampled " + v.to_string());
      }
      last = std::max(last, it->second.first);
      bc.slots.push_back(it->second.second);
    }
    at_block[last].push_back(std::move(bc));
  }

  std::vector<Value> state(first_slot.back());
  std::vector<std::uint32_t> tries(blocks.size(), 0);
  std::vector<Value> scratch;
  std::uint64_t steps = 0;
  std::uint64_t backtracks = 0;

  std::size_t cur = 0;
  while (cur < blocks.size()) {
    if (steps >= limits.max_steps) {
      if (stats) *stats = {steps, backtracks};
      throw SearchExhausted("sampling step budget exhausted");
    }
    ++steps;
    if (tries[cur] >= limits.per_block) {
      ++backtracks;
      if (cur == 0) {
        if (stats) *stats = {steps, backtracks};
        throw SearchExhausted("no consistent assignment found for the first factor");
      }
      --cur;
      continue;
    }
    ++tries[cur];

    const CachedTable& block = *blocks[cur];
    const std::size_t flat = block.draw(rng);
    const auto& vars = block.joint.variables();
    for (std::size_t i = 0; i < vars.size(); ++i) {
      state[first_slot[cur] + i] = vars[i].domain()[block.joint.digit(flat, i)];
    }

    bool ok = true;
    for (const auto& c : at_block[cur]) {
      scratch.clear();
      for (auto s : c.slots) scratch.push_back(state[s]);
      if (!c.fluent->holds(scratch)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    ++cur;
    if (cur < blocks.size()) tries[cur] = 0;
  }

  if (stats) *stats = {steps, backtracks};
  Assignment out;
  out.reserve(state.size());
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const auto& vars = blocks[b]->joint.variables();
    for (std::size_t i = 0; i < vars.size(); ++i) out.emplace(vars[i], state[first_slot[b] + i]);
  }
  return out;
}

}  // namespace dfb
