#pragma once

#include <bit>
#include <cstdint>

namespace difuser {

// 64-bit avalanche finalizer (MurmurHash3 fmix64). Bijective on uint64.
constexpr uint64_t fmix64(uint64_t k) {
  k ^= k >> 33;
  k *= 0xff51afd7ed558ccdULL;
  k ^= k >> 33;
  k *= 0xc4ceb9fe1a85ec53ULL;
  k ^= k >> 33;
  return k;
}

inline constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// splitmix64 output at stream position i (0-based) for a given seed.
// Counter form: any element is computable without generating its predecessors.
constexpr uint64_t splitmix64_at(uint64_t seed, uint64_t i) {
  uint64_t z = seed + (i + 1) * kGolden;
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

// Independent sub-streams of one master seed. Keeping the tags centralized
// guarantees the CLI, the runtime and the tests derive identical streams.
inline constexpr uint64_t kSeedTagSamples = 1;    // per-simulation values X_r
inline constexpr uint64_t kSeedTagRegisters = 2;  // register hash family keys
inline constexpr uint64_t kSeedTagWeights = 3;    // randomized weight settings
inline constexpr uint64_t kSeedTagOracle = 4;     // Monte Carlo trial streams

constexpr uint64_t derive_seed(uint64_t master, uint64_t tag) {
  return splitmix64_at(master, tag);
}

struct Hash128 {
  uint64_t lo = 0;
  uint64_t hi = 0;
};

// MurmurHash3 x64/128 of the 16-byte little-endian block (a, b), seed 0.
// Specialized to the fixed 16-byte input: one block round, no tail.
constexpr Hash128 murmur3_pair(uint64_t a, uint64_t b) {
  constexpr uint64_t c1 = 0x87c37b91114253d5ULL;
  constexpr uint64_t c2 = 0x4cf5ad432745937fULL;
  uint64_t h1 = 0, h2 = 0;

  uint64_t k1 = a;
  k1 *= c1;
  k1 = std::rotl(k1, 31);
  k1 *= c2;
  h1 ^= k1;
  h1 = std::rotl(h1, 27);
  h1 += h2;
  h1 = h1 * 5 + 0x52dce729;

  uint64_t k2 = b;
  k2 *= c2;
  k2 = std::rotl(k2, 33);
  k2 *= c1;
  h2 ^= k2;
  h2 = std::rotl(h2, 31);
  h2 += h1;
  h2 = h2 * 5 + 0x38495ab5;

  h1 ^= 16;
  h2 ^= 16;
  h1 += h2;
  h2 += h1;
  h1 = fmix64(h1);
  h2 = fmix64(h2);
  h1 += h2;
  h2 += h1;
  return {h1, h2};
}

// Hash values and weights share the 31-bit fixed-point scale: a weight w maps
// to round(w * 2^31) and an edge is live iff (x ^ h) < W, which hits with
// probability exactly W / 2^31 because xor by a constant permutes [0, 2^31).
inline constexpr uint32_t kFixedOne = 1u << 31;
inline constexpr uint32_t kHashMask = kFixedOne - 1;

// 31-bit hash of the ordered endpoint pair; direction-sensitive.
constexpr uint32_t edge_hash(uint64_t u, uint64_t v) {
  return static_cast<uint32_t>(murmur3_pair(u, v).lo) & kHashMask;
}

// Key of the j-th register hash function, derived once per register.
constexpr uint64_t register_key(uint64_t base_key, uint32_t j) {
  return splitmix64_at(base_key, j);
}

// 64-bit register hash h_j(v): a Weyl step over the vertex id, finalized.
constexpr uint64_t register_hash(uint64_t jkey, uint64_t v) {
  return fmix64(jkey + v * kGolden);
}

// Register statistic: leading-zero count of the register hash, in [0, 64].
constexpr int clz64(uint64_t x) { return std::countl_zero(x); }

}  // namespace difuser
