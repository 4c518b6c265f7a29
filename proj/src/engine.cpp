#include "difuser/engine.hpp"

#include <bit>
#include <cstring>
#include <stdexcept>

namespace difuser {

void SimulateBuffers::reset(const SketchMatrix& m) {
  snapshot.assign(m.row(0), m.row(0) + size_t(m.n()) * m.j_local());
  changed.assign(m.n(), 0);
  changed_prev.assign(m.n(), 1);  // first iteration processes every edge
  changed_list.clear();
  primed = true;
}

namespace {

// Pull registers of v (snapshot) into registers of u (live matrix) for the
// simulations selected by `bits`. dst VISITED is absorbing; src VISITED is
// the minimal value and never wins a max. Returns whether dst changed.
inline bool pull_edge(int8_t* dst, const int8_t* src, const uint64_t* bits,
                      uint32_t words) {
  uint8_t diff = 0;
  for (uint32_t w = 0; w < words; ++w) {
    uint64_t b = bits[w];
    if (!b) continue;
    const uint32_t base = w * 64;
    if (b == ~0ull) {
      int8_t* d = dst + base;
      const int8_t* s = src + base;
      for (uint32_t t = 0; t < 64; ++t) {  // branch-free, autovectorizable
        int8_t dv = d[t];
        int8_t sv = s[t];
        int8_t mx = sv > dv ? sv : dv;
        int8_t nv = dv < 0 ? dv : mx;
        diff |= static_cast<uint8_t>(nv ^ dv);
        d[t] = nv;
      }
    } else {
      do {
        uint32_t j = base + static_cast<uint32_t>(std::countr_zero(b));
        b &= b - 1;
        int8_t dv = dst[j];
        if (dv >= 0 && src[j] > dv) {
          dst[j] = src[j];
          diff = 1;
        }
      } while (b);
    }
  }
  return diff != 0;
}

}  // namespace

bool simulate_iteration(const DeviceGraph& g, SketchMatrix& m,
                        SimulateBuffers& buf) {
  if (!buf.primed) buf.reset(m);
  const uint32_t j_local = m.j_local();
  const uint32_t words = g.mask_words;
  const int8_t* snap = buf.snapshot.data();
  buf.changed_list.clear();

  for (vertex_t u = 0; u < g.n; ++u) {
    bool touched = false;
    int8_t* dst = m.row(u);
    for (uint64_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e) {
      vertex_t v = g.adj[e];
      if (!buf.changed_prev[v]) continue;
      touched |= pull_edge(dst, snap + size_t(v) * j_local, g.edge_mask(e),
                           words);
    }
    if (touched) {
      buf.changed[u] = 1;
      buf.changed_list.push_back(u);
    }
  }

  // Re-sync snapshot rows that moved; untouched rows are already identical.
  for (vertex_t u : buf.changed_list)
    std::memcpy(buf.snapshot.data() + size_t(u) * j_local, m.row(u), j_local);
  std::swap(buf.changed, buf.changed_prev);
  std::fill(buf.changed.begin(), buf.changed.end(), 0);
  return !buf.changed_list.empty();
}

int simulate_to_convergence(const DeviceGraph& g, SketchMatrix& m,
                            SimulateBuffers& buf, int cap) {
  buf.reset(m);
  for (int it = 1; it <= cap; ++it)
    if (!simulate_iteration(g, m, buf)) return it;
  throw std::runtime_error(
      "simulate did not converge within " + std::to_string(cap) +
      " iterations; register monotonicity must be broken");
}

void CascadeState::init(vertex_t n, uint32_t words_per_row) {
  words = words_per_row;
  fresh_cur.assign(size_t(n) * words, 0);
  fresh_next.assign(size_t(n) * words, 0);
  q.init(n);
  q_next.init(n);
}

void commit_seed(SketchMatrix& m, CascadeState& cs, vertex_t s) {
  uint64_t* fresh = cs.fresh_row(cs.fresh_cur, s);
  const uint64_t* vis = m.vis_row(s);
  bool any = false;
  for (uint32_t w = 0; w < cs.words; ++w) {
    uint64_t bits = m.tail_mask(w) & ~vis[w];
    if (!bits) continue;
    m.mark_visited_word(s, w, bits);
    fresh[w] |= bits;
    any = true;
  }
  if (any) cs.q.push(s);
}

void cascade(const DeviceGraph& g, SketchMatrix& m, CascadeState& cs) {
  while (!cs.q.empty()) {
    for (vertex_t u : cs.q.items) {
      const uint64_t* fresh_u = cs.fresh_row(cs.fresh_cur, u);
      for (uint64_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e) {
        vertex_t v = g.adj[e];
        const uint64_t* em = g.edge_mask(e);
        const uint64_t* vis_v = m.vis_row(v);
        for (uint32_t w = 0; w < cs.words; ++w) {
          uint64_t cand = fresh_u[w] & em[w] & ~vis_v[w];
          if (!cand) continue;
          m.mark_visited_word(v, w, cand);
          cs.fresh_row(cs.fresh_next, v)[w] |= cand;
          cs.q_next.push(v);
        }
      }
    }
    for (vertex_t u : cs.q.items)
      std::memset(cs.fresh_row(cs.fresh_cur, u), 0, cs.words * 8);
    cs.q.clear();
    std::swap(cs.q.items, cs.q_next.items);
    std::swap(cs.q.member, cs.q_next.member);
    std::swap(cs.fresh_cur, cs.fresh_next);
  }
}

}  // namespace difuser
