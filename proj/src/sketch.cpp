#include "difuser/sketch.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace difuser {

namespace {

// 2^r for r in [0, 64] and 2^-r lookup; exact in double.
struct Pow2Table {
  double pos[65];
  double neg[65];
  Pow2Table() {
    for (int i = 0; i <= 64; ++i) {
      pos[i] = std::ldexp(1.0, i);
      neg[i] = std::ldexp(1.0, -i);
    }
  }
};
const Pow2Table kPow2;

}  // namespace

SketchMatrix::SketchMatrix(vertex_t n, uint32_t j_local, uint32_t j_offset,
                           uint64_t key)
    : n_(n),
      j_local_(j_local),
      j_offset_(j_offset),
      words_((j_local + 63) / 64),
      key_(key) {
  if (j_local == 0)
    throw std::invalid_argument("SketchMatrix: j_local must be >= 1");
  regs_.assign(size_t(n) * j_local, 0);
  vis_.assign(size_t(n) * words_, 0);
}

uint64_t SketchMatrix::mark_visited_word(vertex_t u, uint32_t w,
                                         uint64_t bits) {
  uint64_t& word = vis_[size_t(u) * words_ + w];
  uint64_t fresh = bits & ~word;
  if (!fresh) return 0;
  word |= fresh;
  visited_ += std::popcount(fresh);
  int8_t* r = row(u) + w * 64;
  uint64_t b = fresh;
  while (b) {
    r[std::countr_zero(b)] = kVisited;
    b &= b - 1;
  }
  return fresh;
}

void fill_sketches(SketchMatrix& m) {
  const uint32_t j_local = m.j_local();
  std::vector<uint64_t> jkey(j_local);
  for (uint32_t j = 0; j < j_local; ++j)
    jkey[j] = register_key(m.key(), m.j_offset() + j);
  for (vertex_t u = 0; u < m.n(); ++u) {
    int8_t* r = m.row(u);
    for (uint32_t j = 0; j < j_local; ++j)
      if (r[j] != kVisited)
        r[j] = static_cast<int8_t>(clz64(register_hash(jkey[j], u)));
  }
}

void add_item(SketchMatrix& m, vertex_t u, uint64_t item) {
  int8_t* r = m.row(u);
  for (uint32_t j = 0; j < m.j_local(); ++j) {
    if (r[j] == kVisited) continue;
    int8_t c = static_cast<int8_t>(
        clz64(register_hash(register_key(m.key(), m.j_offset() + j), item)));
    if (c > r[j]) r[j] = c;
  }
}

void add_items(SketchMatrix& m, vertex_t u, std::span<const uint64_t> items) {
  const uint32_t j_local = m.j_local();
  std::vector<uint64_t> jkey(j_local);
  for (uint32_t j = 0; j < j_local; ++j)
    jkey[j] = register_key(m.key(), m.j_offset() + j);
  int8_t* r = m.row(u);
  for (uint64_t item : items)
    for (uint32_t j = 0; j < j_local; ++j) {
      if (r[j] == kVisited) continue;
      int8_t c = static_cast<int8_t>(clz64(register_hash(jkey[j], item)));
      if (c > r[j]) r[j] = c;
    }
}

void merge_rows(std::span<int8_t> dst, std::span<const int8_t> src) {
  if (dst.size() != src.size())
    throw std::invalid_argument("merge_rows: register count mismatch");
  for (size_t j = 0; j < dst.size(); ++j)
    if (dst[j] != kVisited && src[j] > dst[j]) dst[j] = src[j];
}

void merge_rows(SketchMatrix& m, vertex_t u, std::span<const int8_t> src) {
  merge_rows(std::span<int8_t>(m.row(u), m.j_local()), src);
}

double estimate_row(std::span<const int8_t> row) {
  double sum = 0;
  uint32_t live = 0;
  for (int8_t r : row)
    if (r != kVisited) {
      sum += r;
      ++live;
    }
  if (live == 0) return 0.0;
  return std::exp2(sum / live) * kClzAlpha;
}

double estimate(const SketchMatrix& m, vertex_t u) {
  return estimate_row(m.row_span(u));
}

double row_score(std::span<const int8_t> row) {
  double denom = 0;
  uint32_t live = 0;
  for (int8_t r : row)
    if (r != kVisited) {
      denom += kPow2.neg[r];
      ++live;
    }
  if (live == 0) return 0.0;
  // live / denom is the harmonic mean of per-simulation reach estimates;
  // the second live factor scales it to a total over live simulations.
  return double(live) * live / (denom * kPhi);
}

std::vector<double> sketchwise_score(const SketchMatrix& m) {
  std::vector<double> s(m.n());
  for (vertex_t u = 0; u < m.n(); ++u) s[u] = row_score(m.row_span(u));
  return s;
}

uint64_t count_visited(const SketchMatrix& m) { return m.visited_count(); }

}  // namespace difuser
