#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "difuser/graph.hpp"

namespace difuser {

// Plain Monte Carlo ground truth, deliberately free of every optimization
// the sketch pipeline uses: per trial it materializes the full edge
// liveness bitmap with a dedicated PRNG and runs an explicit BFS. Liveness
// is a pure function of (seed, trial, edge index), so two seed sets
// evaluated under the same config see identical realizations: estimates are
// coupled and exactly monotone under seed-set inclusion.
struct OracleConfig {
  uint32_t trials = 10000;
  uint64_t seed = 0;
  uint32_t runs = 1;  // independent repetitions averaged together
};

struct InfluenceStats {
  double mean = 0.0;
  double std_error = 0.0;
  uint32_t trials = 0;  // total over runs
};

InfluenceStats influence_stats(const WeightedGraph& g,
                               std::span<const vertex_t> seeds,
                               const OracleConfig& cfg);
double influence(const WeightedGraph& g, std::span<const vertex_t> seeds,
                 const OracleConfig& cfg);

inline InfluenceStats influence_stats(const WeightedGraph& g,
                                      std::initializer_list<vertex_t> seeds,
                                      const OracleConfig& cfg) {
  return influence_stats(g, std::span<const vertex_t>(seeds.begin(), seeds.size()),
                         cfg);
}
inline double influence(const WeightedGraph& g,
                        std::initializer_list<vertex_t> seeds,
                        const OracleConfig& cfg) {
  return influence(g, std::span<const vertex_t>(seeds.begin(), seeds.size()), cfg);
}

// Exact greedy under the same trial coupling: each step scores every vertex
// by its mean marginal coverage over a fresh batch of cfg.trials
// realizations (reachability via SCC condensation + transitive closure) and
// commits the argmax, ties to the smallest id. Intended for small graphs;
// cost grows with n * trials. k must be in [1, n].
std::vector<vertex_t> greedy_exact(const WeightedGraph& g, uint32_t k,
                                   const OracleConfig& cfg);

}  // namespace difuser
