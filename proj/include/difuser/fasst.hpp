#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "difuser/engine.hpp"
#include "difuser/graph.hpp"
#include "difuser/sampling.hpp"

namespace difuser {

enum class PartitionMode { Naive, Fasst };

const char* to_string(PartitionMode mode);
PartitionMode parse_partition_mode(std::string_view s);

// Assignment of the R simulations to mu devices in equisized contiguous
// chunks of the (possibly reordered) value vector. Sorting the values first
// is the whole trick: simulation j keeps value x_(j), and because the
// sampling test is (x ^ h) < W, the x values that can pass it for a given
// edge form balls around the edge hash in xor space. For thin edges
// (W <= 2^28) a ball spans one aligned 2^28-window of sorted order, so the
// edge lands on at most two adjacent chunks at mu = 8 instead of all of
// them. Naive mode slices the vector in generation order for contrast.
struct PartitionPlan {
  RandomVector x;  // full vector, mode order; chunk tau owns [tau*chunk, ...)
  std::vector<uint32_t> order;  // slot -> generation index: x[i] == X_order[i]
  uint32_t mu = 1;
  uint32_t chunk = 0;  // R / mu
  PartitionMode mode = PartitionMode::Fasst;
  bool degraded = false;  // chunk < 32: window argument loses its bite

  std::span<const uint32_t> chunk_values(uint32_t tau) const {
    return {x.values.data() + size_t(tau) * chunk, chunk};
  }
  // Generation indices of the simulations chunk tau owns. Reordering moves
  // whole simulations between devices; their identity survives the sort.
  std::span<const uint32_t> chunk_sims(uint32_t tau) const {
    return {order.data() + size_t(tau) * chunk, chunk};
  }
};

// Sort (stable, ascending) for FASST, keep order for Naive, then slice.
// mu must divide R.
PartitionPlan make_plan(RandomVector x, uint32_t mu, PartitionMode mode);

// Compact the weighted graph to the edges live somewhere in chunk tau and
// bake the per-edge, per-simulation liveness masks.
DeviceGraph build_device_graph(const WeightedGraph& g,
                               const PartitionPlan& plan, uint32_t tau);

// For each k in [0, mu]: how many edges of E appear in exactly k device
// graphs, as counts and as fractions of m (they sum to 1 over all of E;
// k = 0 is the never-sampled mass).
struct DuplicationHistogram {
  std::vector<uint64_t> count;
  std::vector<double> fraction;
  uint64_t m = 0;

  // Share of the sampled edges (k >= 1) that stay within `limit` devices.
  double sampled_share_within(uint32_t limit) const;
};

DuplicationHistogram duplication_stats(const WeightedGraph& g,
                                       const PartitionPlan& plan);

// Edge appearances per device (edge e counted once per device whose chunk
// samples it somewhere); max/mean over devices measures load imbalance.
std::vector<uint64_t> device_edge_loads(const WeightedGraph& g,
                                        const PartitionPlan& plan);

// Mean useful-lane fraction over 32-wide simulation batches, counting only
// (edge, batch) pairs with at least one live lane: with values in chunk
// order, adjacent lanes that cannot pass the test for the edge at hand are
// wasted work in a lockstep machine. R must be a multiple of 32.
struct FillRateReport {
  double fill_rate = 0.0;
  uint64_t batches = 0;  // (edge, batch) pairs with >= 1 live lane
};

FillRateReport fill_rate(const WeightedGraph& g, const RandomVector& x,
                         PartitionMode mode);

}  // namespace difuser
