#include "difuser/oracle.hpp"

#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

#include "difuser/hash.hpp"

namespace difuser {

namespace {

// One edge-liveness draw per edge, in edge index order, from the trial's
// own generator: liveness is a pure function of (seed, trial, edge).
void draw_liveness(const WeightedGraph& g, uint64_t trial_seed,
                   std::vector<uint8_t>& live) {
  std::mt19937_64 rng(trial_seed);
  live.resize(g.m);
  for (uint64_t e = 0; e < g.m; ++e)
    live[e] = static_cast<uint32_t>(rng() >> 33) < g.weights[e];
}

uint64_t trial_seed(uint64_t oracle_seed, uint64_t stream, uint64_t t) {
  return splitmix64_at(splitmix64_at(oracle_seed, stream), t);
}

}  // namespace

InfluenceStats influence_stats(const WeightedGraph& g,
                               std::span<const vertex_t> seeds,
                               const OracleConfig& cfg) {
  if (cfg.trials == 0 || cfg.runs == 0)
    throw std::invalid_argument("oracle: trials and runs must be >= 1");
  for (vertex_t s : seeds)
    if (s >= g.n) throw std::invalid_argument("oracle: seed id out of range");

  const uint64_t base = derive_seed(cfg.seed, kSeedTagOracle);
  std::vector<uint8_t> live;
  std::vector<uint32_t> mark(g.n, 0);
  std::vector<vertex_t> queue;
  uint32_t epoch = 0;

  double sum = 0, sumsq = 0;
  for (uint32_t run = 0; run < cfg.runs; ++run) {
    for (uint32_t t = 0; t < cfg.trials; ++t) {
      draw_liveness(g, trial_seed(base, run, t), live);
      ++epoch;
      queue.clear();
      for (vertex_t s : seeds)
        if (mark[s] != epoch) {
          mark[s] = epoch;
          queue.push_back(s);
        }
      for (size_t head = 0; head < queue.size(); ++head) {
        vertex_t u = queue[head];
        for (uint64_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e) {
          vertex_t v = g.adj[e];
          if (live[e] && mark[v] != epoch) {
            mark[v] = epoch;
            queue.push_back(v);
          }
        }
      }
      double reached = static_cast<double>(queue.size());
      sum += reached;
      sumsq += reached * reached;
    }
  }

  InfluenceStats st;
  st.trials = cfg.trials * cfg.runs;
  st.mean = sum / st.trials;
  if (st.trials > 1) {
    double var = (sumsq - sum * sum / st.trials) / (st.trials - 1);
    st.std_error = std::sqrt(std::max(0.0, var) / st.trials);
  }
  return st;
}

double influence(const WeightedGraph& g, std::span<const vertex_t> seeds,
                 const OracleConfig& cfg) {
  return influence_stats(g, seeds, cfg).mean;
}

namespace {

// Iterative Tarjan over the live subgraph. Components are numbered in pop
// order, which is reverse topological: a cross-component edge always goes
// from a higher component id to a lower one.
struct SccScratch {
  std::vector<int32_t> idx, low, comp;
  std::vector<vertex_t> stk;
  std::vector<uint8_t> onstk;
  struct Frame {
    vertex_t v;
    uint64_t e;
  };
  std::vector<Frame> call;

  int32_t run(vertex_t n, const std::vector<uint64_t>& offs,
              const std::vector<vertex_t>& tgts) {
    idx.assign(n, -1);
    low.assign(n, 0);
    comp.assign(n, -1);
    onstk.assign(n, 0);
    stk.clear();
    call.clear();
    int32_t counter = 0, ncomp = 0;
    for (vertex_t root = 0; root < n; ++root) {
      if (idx[root] != -1) continue;
      call.push_back({root, offs[root]});
      idx[root] = low[root] = counter++;
      stk.push_back(root);
      onstk[root] = 1;
      while (!call.empty()) {
        Frame& f = call.back();
        vertex_t v = f.v;
        if (f.e < offs[v + 1]) {
          vertex_t w = tgts[f.e++];
          if (idx[w] == -1) {
            idx[w] = low[w] = counter++;
            stk.push_back(w);
            onstk[w] = 1;
            call.push_back({w, offs[w]});
          } else if (onstk[w] && idx[w] < low[v]) {
            low[v] = idx[w];
          }
        } else {
          if (low[v] == idx[v]) {
            vertex_t w;
            do {
              w = stk.back();
              stk.pop_back();
              onstk[w] = 0;
              comp[w] = ncomp;
            } while (w != v);
            ++ncomp;
          }
          call.pop_back();
          if (!call.empty() && low[v] < low[call.back().v])
            low[call.back().v] = low[v];
        }
      }
    }
    return ncomp;
  }
};

}  // namespace

std::vector<vertex_t> greedy_exact(const WeightedGraph& g, uint32_t k,
                                   const OracleConfig& cfg) {
  if (k == 0 || k > g.n)
    throw std::invalid_argument("greedy_exact: k must be in [1, n]");
  if (cfg.trials == 0)
    throw std::invalid_argument("greedy_exact: trials must be >= 1");

  const uint64_t base = derive_seed(cfg.seed, kSeedTagOracle);
  std::vector<vertex_t> committed;
  std::vector<uint64_t> gains(g.n);
  std::vector<uint8_t> live;
  std::vector<uint64_t> loffs(g.n + 1);
  std::vector<vertex_t> ltgts;
  SccScratch scc;
  std::vector<uint64_t> reach, covered;
  std::vector<uint32_t> comp_size;
  std::vector<uint64_t> comp_gain;

  for (uint32_t step = 0; step < k; ++step) {
    std::fill(gains.begin(), gains.end(), 0);
    for (uint32_t t = 0; t < cfg.trials; ++t) {
      draw_liveness(g, trial_seed(base, 1000 + step, t), live);

      // Compact the live subgraph to CSR for the SCC pass.
      std::fill(loffs.begin(), loffs.end(), 0);
      for (vertex_t u = 0; u < g.n; ++u)
        for (uint64_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e)
          loffs[u + 1] += live[e];
      for (vertex_t u = 0; u < g.n; ++u) loffs[u + 1] += loffs[u];
      ltgts.resize(loffs[g.n]);
      {
        uint64_t w = 0;
        for (vertex_t u = 0; u < g.n; ++u)
          for (uint64_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e)
            if (live[e]) ltgts[w++] = g.adj[e];
      }

      const int32_t ncomp = scc.run(g.n, loffs, ltgts);
      const uint32_t words = (ncomp + 63) / 64;

      comp_size.assign(ncomp, 0);
      for (vertex_t v = 0; v < g.n; ++v) comp_size[scc.comp[v]]++;

      // Closure in component id order: every cross edge points to a lower
      // id, so reach[c] only ORs already-final rows.
      reach.assign(size_t(ncomp) * words, 0);
      for (int32_t c = 0; c < ncomp; ++c)
        reach[size_t(c) * words + (c >> 6)] |= 1ull << (c & 63);
      for (vertex_t u = 0; u < g.n; ++u) {
        const int32_t cu = scc.comp[u];
        uint64_t* ru = reach.data() + size_t(cu) * words;
        for (uint64_t e = loffs[u]; e < loffs[u + 1]; ++e) {
          const int32_t cv = scc.comp[ltgts[e]];
          if (cv == cu) continue;
          const uint64_t* rv = reach.data() + size_t(cv) * words;
          for (uint32_t w = 0; w < words; ++w) ru[w] |= rv[w];
        }
      }

      covered.assign(words, 0);
      for (vertex_t s : committed) {
        const uint64_t* rs = reach.data() + size_t(scc.comp[s]) * words;
        for (uint32_t w = 0; w < words; ++w) covered[w] |= rs[w];
      }

      // Marginal coverage per component, then credited to member vertices.
      comp_gain.assign(ncomp, 0);
      for (int32_t c = 0; c < ncomp; ++c) {
        const uint64_t* rc = reach.data() + size_t(c) * words;
        uint64_t gain = 0;
        for (uint32_t w = 0; w < words; ++w) {
          uint64_t bits = rc[w] & ~covered[w];
          while (bits) {
            gain += comp_size[w * 64 + std::countr_zero(bits)];
            bits &= bits - 1;
          }
        }
        comp_gain[c] = gain;
      }
      for (vertex_t v = 0; v < g.n; ++v) gains[v] += comp_gain[scc.comp[v]];
    }

    vertex_t best = 0;
    uint64_t best_gain = 0;
    bool found = false;
    for (vertex_t v = 0; v < g.n; ++v) {
      bool taken = false;
      for (vertex_t s : committed) taken |= (s == v);
      if (taken) continue;
      if (!found || gains[v] > best_gain) {
        found = true;
        best = v;
        best_gain = gains[v];
      }
    }
    committed.push_back(best);
  }
  return committed;
}

}  // namespace difuser
