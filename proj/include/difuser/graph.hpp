#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "difuser/hash.hpp"

namespace difuser {

using vertex_t = uint32_t;

// Fixed-point conversion of a probability in [0, 1]; w = 1 maps to 2^31,
// which no 31-bit folded value can reach, so such an edge is always live.
uint32_t to_fixed_point(double w);
double from_fixed_point(uint32_t w);

struct RawEdge {
  uint64_t u = 0;
  uint64_t v = 0;
  double w = -1.0;  // negative means "no explicit probability on this edge"
  bool has_weight() const { return w >= 0.0; }
};

// Edge list as parsed: original ids, possible duplicates, optional weights.
struct RawEdgeList {
  std::vector<RawEdge> edges;
  bool directed = true;
};

// Whitespace-separated "u v [p]" lines; '#' starts a comment line. Undirected
// input materializes both directions. Malformed lines report their number.
RawEdgeList parse_edge_list(std::string_view text, bool directed);
RawEdgeList parse_edge_list_file(const std::string& path, bool directed);

// Collapse parallel edges into one edge carrying the compound probability
// 1 - prod(1 - w_i). Every input edge must carry an explicit probability.
RawEdgeList merge_parallel_edges(const RawEdgeList& raw);

// Immutable CSR over outgoing neighborhoods. Ids are dense [0, n); weights
// are 31-bit fixed point; ehash caches the endpoint-pair hash per edge.
struct WeightedGraph {
  vertex_t n = 0;
  uint64_t m = 0;
  std::vector<uint64_t> offsets;    // n + 1, non-decreasing, offsets[n] == m
  std::vector<vertex_t> adj;        // edge targets, sorted within a vertex
  std::vector<uint32_t> weights;    // fixed-point edge probabilities
  std::vector<uint32_t> ehash;      // edge_hash(u, v) on dense ids
  std::vector<uint32_t> in_degree;  // counted after parallel edges merged
  std::vector<uint64_t> orig_id;    // dense id -> input id, ascending

  uint64_t degree(vertex_t u) const { return offsets[u + 1] - offsets[u]; }
  std::span<const vertex_t> neighbors(vertex_t u) const {
    return {adj.data() + offsets[u], adj.data() + offsets[u + 1]};
  }
};

// Dense relabeling, duplicate merging (compound probability when weighted,
// plain dedup when not; mixing within one endpoint pair is an error) and CSR
// assembly. Self-loops are kept; diffusion treats them as no-ops.
WeightedGraph build_graph(const RawEdgeList& raw);

enum class WeightKind { Constant, WeightedCascade, Normal, Uniform };

struct WeightSetting {
  WeightKind kind = WeightKind::Constant;
  double a = 0.1;  // Constant: value; Normal: mean; Uniform: low
  double b = 0.0;  // Normal: stddev; Uniform: high

  // "const:w" | "wc" | "normal:mean,stddev" | "uniform:lo,hi"
  static WeightSetting parse(std::string_view spec);
  std::string to_string() const;
};

// Overwrite all edge probabilities per the setting. Weighted cascade sets
// w(u,v) = 1 / indegree(v); randomized kinds draw per edge in CSR order from
// a generator seeded with `seed` and clamp into [0, 1].
void assign_weights(WeightedGraph& g, const WeightSetting& s, uint64_t seed);

// Binary snapshot of a built graph (magic-tagged, little-endian). Derived
// fields (ehash, in_degree) are recomputed on load.
void save_graph_cache(const WeightedGraph& g, const std::string& path);
WeightedGraph load_graph_cache(const std::string& path);
bool is_graph_cache(const std::string& path);

// Load either format: binary cache if the magic matches, else edge-list text.
WeightedGraph load_graph(const std::string& path, bool directed);

}  // namespace difuser
