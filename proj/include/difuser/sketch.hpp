#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "difuser/graph.hpp"
#include "difuser/hash.hpp"

namespace difuser {

// Absorbing register state: the vertex is reachable from a committed seed in
// the simulation owning this register. Only an explicit refill after a
// rebuild of the register family may clear it, and no such op exists here;
// fills and merges both skip it.
inline constexpr int8_t kVisited = -1;

// Correction for the harmonic register score (the least-set-bit family's
// constant; the score is used only through argmax, so only scale-invariance
// matters there).
inline constexpr double kPhi = 0.77351;

// Correction for the max-clz geometric mean estimator, 2^(1/2 - gamma/ln 2).
// With the statistic M = max clz(h(item)) one has E[M] = log2(n) + delta and
// 2^delta = e^gamma / sqrt(2) asymptotically, so the unbiasing factor is the
// reciprocal; the loglog-style constant for this 0-indexed statistic.
inline constexpr double kClzAlpha = 0.7940236163832829;

// Dense n x j_local matrix of signed 8-bit registers, one register per
// simulation assigned to this device, rows contiguous per vertex in
// increasing simulation order. Values are either kVisited or a leading-zero
// count in [0, 64]. A packed per-row bitset mirrors the visited states so
// traversals can test and set 64 registers per word; the byte matrix stays
// authoritative and the two views never disagree.
class SketchMatrix {
 public:
  SketchMatrix(vertex_t n, uint32_t j_local, uint32_t j_offset, uint64_t key);

  vertex_t n() const { return n_; }
  uint32_t j_local() const { return j_local_; }
  uint32_t j_offset() const { return j_offset_; }
  uint64_t key() const { return key_; }
  uint32_t words() const { return words_; }

  int8_t* row(vertex_t u) { return regs_.data() + size_t(u) * j_local_; }
  const int8_t* row(vertex_t u) const {
    return regs_.data() + size_t(u) * j_local_;
  }
  std::span<const int8_t> row_span(vertex_t u) const {
    return {row(u), j_local_};
  }

  const uint64_t* vis_row(vertex_t u) const {
    return vis_.data() + size_t(u) * words_;
  }
  bool is_visited(vertex_t u, uint32_t j) const {
    return (vis_row(u)[j >> 6] >> (j & 63)) & 1;
  }

  // Set registers of u selected by `bits` (word w of the row bitset) to
  // VISITED. Returns the subset that was not already visited.
  uint64_t mark_visited_word(vertex_t u, uint32_t w, uint64_t bits);
  void mark_visited(vertex_t u, uint32_t j) {
    mark_visited_word(u, j >> 6, 1ull << (j & 63));
  }

  // Number of (vertex, register) pairs in the VISITED state; O(1), kept as a
  // running counter by the marking ops.
  uint64_t visited_count() const { return visited_; }

  // Valid register bits of the trailing bitset word (all-ones when j_local
  // is a multiple of 64).
  uint64_t tail_mask(uint32_t w) const {
    uint32_t rem = j_local_ - w * 64;
    return rem >= 64 ? ~0ull : (1ull << rem) - 1;
  }

 private:
  vertex_t n_ = 0;
  uint32_t j_local_ = 0;
  uint32_t j_offset_ = 0;
  uint32_t words_ = 0;
  uint64_t key_ = 0;
  uint64_t visited_ = 0;
  std::vector<int8_t> regs_;
  std::vector<uint64_t> vis_;
};

// Write the clz statistic of every non-VISITED register: register j of
// vertex u gets clz(h_{j_offset + j}(u)).
void fill_sketches(SketchMatrix& m);

// Fold one item into a row: register j maxes with clz(h_j(item)).
// Registers already VISITED are left alone.
void add_item(SketchMatrix& m, vertex_t u, uint64_t item);

// Bulk form of add_item; derives the register keys once for the whole batch.
void add_items(SketchMatrix& m, vertex_t u, std::span<const uint64_t> items);

// Row-level union: dst takes the pairwise max. VISITED in dst is absorbing;
// VISITED in src contributes nothing (it is the minimal element here, the
// reachability it encodes belongs to src's seed history, not dst's).
void merge_rows(SketchMatrix& m, vertex_t u, std::span<const int8_t> src);
void merge_rows(std::span<int8_t> dst, std::span<const int8_t> src);

// Distinct-count estimate from the non-VISITED registers of a row:
// 2^(mean clz) * kClzAlpha. All registers VISITED yields 0. Meaningful from
// roughly 16 live registers upward.
double estimate_row(std::span<const int8_t> row);
double estimate(const SketchMatrix& m, vertex_t u);

// Marginal-gain score of one row: harmonic aggregation of 2^reg over the
// non-VISITED registers, live^2 / sum(2^-reg) / kPhi. Each live register
// sketches one simulation's residual reach set, so the aggregate estimates
// total residual reach mass across simulations: the live^2 weighting is what
// keeps a vertex already covered in most simulations from outranking a fresh
// vertex on the strength of a few large residuals. VISITED registers are
// excluded from both factors, which is what discounts already-covered
// reachability. All registers VISITED yields 0.
double row_score(std::span<const int8_t> row);

// row_score for every vertex.
std::vector<double> sketchwise_score(const SketchMatrix& m);

// Alias of visited_count, module-level name.
uint64_t count_visited(const SketchMatrix& m);

}  // namespace difuser
