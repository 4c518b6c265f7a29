#pragma once

#include <cstdint>
#include <vector>

#include "difuser/sketch.hpp"

namespace difuser {

// Device-local CSR carrying only edges live in at least one of the device's
// simulations, plus a per-edge bitmask with bit j set iff the edge is live
// in local simulation j. All sampling decisions are baked in here; the
// traversals below never reconsult weights or hashes.
struct DeviceGraph {
  uint32_t tau = 0;      // device rank
  vertex_t n = 0;        // full vertex set, shared across devices
  uint32_t j_local = 0;  // simulations assigned to this device
  uint32_t r0 = 0;       // global index of the first local simulation
  uint32_t mask_words = 0;
  uint64_t m = 0;        // surviving edges
  std::vector<uint64_t> offsets;
  std::vector<vertex_t> adj;
  std::vector<uint32_t> weights;  // original fixed-point weights, kept
  std::vector<uint64_t> mask;     // m * mask_words, little-endian bit order

  const uint64_t* edge_mask(uint64_t e) const {
    return mask.data() + e * mask_words;
  }
};

// Vertex queue with one-hot membership: push is O(1) and duplicate-free.
struct FrontierQueue {
  std::vector<vertex_t> items;
  std::vector<uint8_t> member;

  void init(vertex_t n) {
    member.assign(n, 0);
    items.clear();
  }
  bool push(vertex_t v) {
    if (member[v]) return false;
    member[v] = 1;
    items.push_back(v);
    return true;
  }
  void clear() {
    for (vertex_t v : items) member[v] = 0;
    items.clear();
  }
  bool empty() const { return items.empty(); }
  size_t size() const { return items.size(); }
};

// Scratch for simulate: previous-iteration snapshot of the register matrix
// plus change tracking. Rows are re-synced into the snapshot only when they
// changed, and an edge is reprocessed only when its source row changed.
struct SimulateBuffers {
  std::vector<int8_t> snapshot;
  std::vector<uint8_t> changed, changed_prev;
  std::vector<vertex_t> changed_list;
  bool primed = false;

  void reset(const SketchMatrix& m);
};

// One synchronized pull iteration: every register reads neighbor values from
// the pre-iteration snapshot, so update order cannot leak into the result.
// Returns whether any register changed.
bool simulate_iteration(const DeviceGraph& g, SketchMatrix& m,
                        SimulateBuffers& buf);

// Iterate until no register changes; returns the iteration count. Exceeds
// `cap` iterations only if monotonicity is broken, so that is an error.
int simulate_to_convergence(const DeviceGraph& g, SketchMatrix& m,
                            SimulateBuffers& buf, int cap = 256);

// Frontier bookkeeping for cascades: per-vertex bitsets of registers that
// became VISITED in the current/next level, plus the two level queues.
// All four are empty between cascades.
struct CascadeState {
  std::vector<uint64_t> fresh_cur, fresh_next;
  FrontierQueue q, q_next;
  uint32_t words = 0;

  void init(vertex_t n, uint32_t words_per_row);
  uint64_t* fresh_row(std::vector<uint64_t>& f, vertex_t u) {
    return f.data() + size_t(u) * words;
  }
};

// Mark every register of s VISITED; registers newly flipped become fresh and
// s enters the frontier. Registers already VISITED propagate nothing, which
// is the register-level early exit for re-covered seeds.
void commit_seed(SketchMatrix& m, CascadeState& cs, vertex_t s);

// Level-synchronous propagation of freshly VISITED registers along sampled
// edges. Post: within every local simulation j, the VISITED register set is
// exactly the set reachable from committed seeds in sample graph j.
void cascade(const DeviceGraph& g, SketchMatrix& m, CascadeState& cs);

}  // namespace difuser
