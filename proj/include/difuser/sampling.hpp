#pragma once

#include <cstdint>
#include <vector>

#include "difuser/hash.hpp"

namespace difuser {

// Per-simulation random values X_0..X_{R-1}, each uniform on [0, 2^31 - 1].
// Regenerable from (size, seed) alone; `sorted` records whether the values
// have been reordered ascending (sample-space partitioning does this).
struct RandomVector {
  std::vector<uint32_t> values;
  uint64_t seed = 0;
  bool sorted = false;

  uint32_t size() const { return static_cast<uint32_t>(values.size()); }
  uint32_t operator[](uint32_t r) const { return values[r]; }
};

// Value of simulation r, computable independently of the rest of the stream.
constexpr uint32_t random_value_at(uint64_t seed, uint32_t r) {
  return static_cast<uint32_t>(splitmix64_at(seed, r) >> 33);
}

// Draw R values; r = 0 is rejected because an empty sample space makes every
// downstream reduction ill-defined.
RandomVector gen_random_vector(uint32_t r, uint64_t seed);

// The quantity compared against the fixed-point weight: xor folds the
// per-simulation randomness into the edge hash and permutes [0, 2^31).
constexpr uint32_t sample_probability(uint32_t x, uint32_t h) { return x ^ h; }

// Edge with 31-bit hash h and fixed-point weight w_fixed is live in the
// simulation owning value x iff the folded value falls below the weight.
constexpr bool is_sampled(uint32_t x, uint32_t h, uint32_t w_fixed) {
  return sample_probability(x, h) < w_fixed;
}

inline bool is_sampled(const RandomVector& x, uint32_t r, uint64_t u,
                       uint64_t v, uint32_t w_fixed) {
  return is_sampled(x.values[r], edge_hash(u, v), w_fixed);
}

}  // namespace difuser
