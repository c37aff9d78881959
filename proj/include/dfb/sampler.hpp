#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "dfb/distribution.hpp"
#include "dfb/fluent.hpp"

namespace dfb {

using Rng = std::mt19937_64;

// A joint plus the derived data queries need: the cumulative table for
// sampling and every single-variable marginal. refresh() after mutation.
struct CachedTable {
  JointDistribution joint;
  std::vector<double> cdf;
  std::vector<std::vector<double>> marginals;

  explicit CachedTable(JointDistribution j) : joint(std::move(j)) { refresh(); }
  void refresh();
  std::size_t draw(Rng& rng) const;
};

struct SamplerLimits {
  std::uint32_t per_block = 100;
  std::uint64_t max_steps = 100'000;
};

struct SamplerStats {
  std::uint64_t steps = 0;
  std::uint64_t backtracks = 0;
};

// Draws blocks in the given order, one joint tuple at a time. After each
// draw, every constraint whose variables are now all assigned is checked;
// a violation redraws the block. A block that exhausts its per-block
// budget is cleared and the search resumes at the previous block, which
// keeps its own spent budget. Throws SearchExhausted when the step budget
// runs out or the first block is exhausted.
Assignment backtracking_sample(std::span<const CachedTable* const> blocks,
                               std::span<const Fluent* const> constraints,
                               const SamplerLimits& limits, Rng& rng,
                               SamplerStats* stats = nullptr);

}  // namespace dfb
