#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "difuser/collectives.hpp"
#include "difuser/fasst.hpp"
#include "difuser/graph.hpp"

namespace difuser {

struct RunConfig {
  uint32_t k = 1;
  uint32_t r = 256;
  uint32_t mu = 1;
  PartitionMode mode = PartitionMode::Fasst;
  WeightSetting weights{};
  double rebuild_eps = 0.01;  // 0: rebuild on any gain; 1: never rebuild
  uint64_t seed = 0;
  int sim_cap = 256;
};

struct PhaseTimings {
  double build = 0, fill = 0, simulate = 0, select = 0, cascade = 0,
         total = 0;
};

struct SeedReport {
  RunConfig config;
  std::vector<uint64_t> seeds;  // original input ids, selection order
  std::vector<vertex_t> seeds_dense;
  std::vector<double> score_trajectory;  // global score after each commit
  std::vector<uint32_t> rebuild_rounds;
  uint32_t rebuilds = 0;
  bool saturated = false;  // every vertex covered before k seeds were found
  bool degraded_plan = false;
  CollectiveGroup::Counters comms;
  PhaseTimings timings;
  uint64_t n = 0, m = 0;
};

// Overwrite g's probabilities per cfg.weights from the weight sub-stream of
// cfg.seed. Every caller of run() goes through this, so a (graph, config)
// pair pins the exact edge probabilities.
void apply_weights(WeightedGraph& g, const RunConfig& cfg);

// Greedy seed selection over mu simulated devices (one thread each).
// Per round: local scores, tree-reduce to root, root argmax over uncommitted
// vertices (ties to the smallest id), broadcast, every device commits and
// cascades, allreduce of the covered-register count; registers are refilled
// and resimulated when the relative score growth since the last rebuild
// exceeds cfg.rebuild_eps. If scores saturate (all zero), remaining seeds
// are filled with the smallest-id unseeded vertices and the report says so.
// Requires weights already applied; k in [1, n]; mu dividing r.
SeedReport run(const WeightedGraph& g, const RunConfig& cfg);

}  // namespace difuser
