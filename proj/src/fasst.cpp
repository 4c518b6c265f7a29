#include "difuser/fasst.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace difuser {

const char* to_string(PartitionMode mode) {
  return mode == PartitionMode::Fasst ? "fasst" : "naive";
}

PartitionMode parse_partition_mode(std::string_view s) {
  if (s == "fasst") return PartitionMode::Fasst;
  if (s == "naive") return PartitionMode::Naive;
  throw std::runtime_error("bad partition mode: " + std::string(s) +
                           " (expected naive|fasst)");
}

PartitionPlan make_plan(RandomVector x, uint32_t mu, PartitionMode mode) {
  if (mu == 0) throw std::invalid_argument("make_plan: mu must be >= 1");
  if (x.size() == 0 || x.size() % mu != 0)
    throw std::invalid_argument("make_plan: mu must divide R (" +
                                std::to_string(mu) + " vs " +
                                std::to_string(x.size()) + ")");
  PartitionPlan plan;
  plan.mu = mu;
  plan.mode = mode;
  plan.chunk = x.size() / mu;
  plan.order.resize(x.size());
  std::iota(plan.order.begin(), plan.order.end(), 0u);
  if (mode == PartitionMode::Fasst) {
    // Ties keep generation order, so permuting by `order` reproduces a
    // stable sort of the values bit for bit.
    std::stable_sort(plan.order.begin(), plan.order.end(),
                     [&](uint32_t a, uint32_t b) {
                       return x.values[a] < x.values[b];
                     });
    std::vector<uint32_t> sorted(x.size());
    for (uint32_t i = 0; i < x.size(); ++i) sorted[i] = x.values[plan.order[i]];
    x.values = std::move(sorted);
    x.sorted = true;
    plan.degraded = plan.chunk < 32;
  }
  plan.x = std::move(x);
  return plan;
}

DeviceGraph build_device_graph(const WeightedGraph& g,
                               const PartitionPlan& plan, uint32_t tau) {
  if (tau >= plan.mu) throw std::invalid_argument("build_device_graph: tau");
  std::span<const uint32_t> xs = plan.chunk_values(tau);
  const uint32_t j_local = plan.chunk;
  const uint32_t words = (j_local + 63) / 64;

  DeviceGraph d;
  d.tau = tau;
  d.n = g.n;
  d.j_local = j_local;
  d.r0 = tau * plan.chunk;
  d.mask_words = words;
  d.offsets.assign(g.n + 1, 0);

  std::vector<uint64_t> mw(words);
  for (vertex_t u = 0; u < g.n; ++u) {
    d.offsets[u] = d.adj.size();
    for (uint64_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e) {
      const uint32_t h = g.ehash[e];
      const uint32_t w = g.weights[e];
      if (w == 0) continue;
      std::fill(mw.begin(), mw.end(), 0);
      bool any = false;
      for (uint32_t j = 0; j < j_local; ++j)
        if ((xs[j] ^ h) < w) {
          mw[j >> 6] |= 1ull << (j & 63);
          any = true;
        }
      if (!any) continue;
      d.adj.push_back(g.adj[e]);
      d.weights.push_back(w);
      d.mask.insert(d.mask.end(), mw.begin(), mw.end());
    }
  }
  d.offsets[g.n] = d.adj.size();
  d.m = d.adj.size();
  return d;
}

namespace {

// Does chunk tau sample edge (h, w) anywhere? Early-out scan.
inline bool chunk_hits(std::span<const uint32_t> xs, uint32_t h, uint32_t w) {
  for (uint32_t x : xs)
    if ((x ^ h) < w) return true;
  return false;
}

}  // namespace

DuplicationHistogram duplication_stats(const WeightedGraph& g,
                                       const PartitionPlan& plan) {
  DuplicationHistogram hist;
  hist.m = g.m;
  hist.count.assign(plan.mu + 1, 0);
  for (uint64_t e = 0; e < g.m; ++e) {
    uint32_t k = 0;
    if (g.weights[e] != 0)
      for (uint32_t tau = 0; tau < plan.mu; ++tau)
        k += chunk_hits(plan.chunk_values(tau), g.ehash[e], g.weights[e]);
    hist.count[k]++;
  }
  hist.fraction.resize(hist.count.size());
  for (size_t k = 0; k < hist.count.size(); ++k)
    hist.fraction[k] = static_cast<double>(hist.count[k]) / g.m;
  return hist;
}

double DuplicationHistogram::sampled_share_within(uint32_t limit) const {
  uint64_t within = 0, sampled = 0;
  for (size_t k = 1; k < count.size(); ++k) {
    sampled += count[k];
    if (k <= limit) within += count[k];
  }
  return sampled ? static_cast<double>(within) / sampled : 0.0;
}

std::vector<uint64_t> device_edge_loads(const WeightedGraph& g,
                                        const PartitionPlan& plan) {
  std::vector<uint64_t> load(plan.mu, 0);
  for (uint64_t e = 0; e < g.m; ++e) {
    if (g.weights[e] == 0) continue;
    for (uint32_t tau = 0; tau < plan.mu; ++tau)
      load[tau] +=
          chunk_hits(plan.chunk_values(tau), g.ehash[e], g.weights[e]);
  }
  return load;
}

FillRateReport fill_rate(const WeightedGraph& g, const RandomVector& x,
                         PartitionMode mode) {
  if (x.size() % 32 != 0)
    throw std::invalid_argument("fill_rate: R must be a multiple of 32");
  std::vector<uint32_t> xs = x.values;
  if (mode == PartitionMode::Fasst) std::stable_sort(xs.begin(), xs.end());

  // Integer accumulation: sum of live-lane counts over counted batches.
  uint64_t live_lanes = 0, batches = 0;
  const uint32_t nb = x.size() / 32;
  for (uint64_t e = 0; e < g.m; ++e) {
    const uint32_t h = g.ehash[e];
    const uint32_t w = g.weights[e];
    if (w == 0) continue;
    for (uint32_t b = 0; b < nb; ++b) {
      const uint32_t* lane = xs.data() + b * 32;
      uint32_t c = 0;
      for (uint32_t t = 0; t < 32; ++t) c += (lane[t] ^ h) < w;
      if (c) {
        live_lanes += c;
        ++batches;
      }
    }
  }
  FillRateReport rep;
  rep.batches = batches;
  rep.fill_rate = batches ? live_lanes / (32.0 * batches) : 0.0;
  return rep;
}

}  // namespace difuser
