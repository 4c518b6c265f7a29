#include "difuser/runtime.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <stdexcept>
#include <thread>

#include "difuser/engine.hpp"
#include "difuser/sampling.hpp"
#include "difuser/sketch.hpp"

namespace difuser {

void apply_weights(WeightedGraph& g, const RunConfig& cfg) {
  assign_weights(g, cfg.weights, derive_seed(cfg.seed, kSeedTagWeights));
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Root-only selection state, written by rank 0 between barriers.
struct RootState {
  std::vector<double> reduced;   // destination of the score reduce
  std::vector<uint8_t> committed;
  uint64_t chosen = 0;           // broadcast slot, dense id
  bool saturated = false;
};

}  // namespace

SeedReport run(const WeightedGraph& g, const RunConfig& cfg) {
  if (cfg.k == 0 || cfg.k > g.n)
    throw std::invalid_argument("run: k must be in [1, n]");
  if (cfg.mu == 0) throw std::invalid_argument("run: mu must be >= 1");
  if (!(cfg.rebuild_eps >= 0.0))
    throw std::invalid_argument("run: rebuild_eps must be >= 0");

  PartitionPlan plan = make_plan(
      gen_random_vector(cfg.r, derive_seed(cfg.seed, kSeedTagSamples)),
      cfg.mu, cfg.mode);
  const uint64_t reg_key = derive_seed(cfg.seed, kSeedTagRegisters);
  const uint32_t mu = cfg.mu;
  const uint32_t j_local = plan.chunk;

  CollectiveGroup group(mu);
  RootState root;
  root.reduced.assign(g.n, 0.0);
  root.committed.assign(g.n, 0);

  SeedReport rep;
  rep.config = cfg;
  rep.n = g.n;
  rep.m = g.m;
  rep.degraded_plan = plan.degraded;

  std::vector<std::exception_ptr> errs(mu);

  auto worker = [&](uint32_t tau) {
    try {
      const bool is_root = tau == 0;
      auto t0 = Clock::now();

      DeviceGraph dg = build_device_graph(g, plan, tau);
      if (is_root) rep.timings.build += seconds_since(t0);

      SketchMatrix m(g.n, j_local, tau * j_local, reg_key);
      CascadeState cs;
      cs.init(g.n, m.words());
      SimulateBuffers buf;

      t0 = Clock::now();
      fill_sketches(m);
      if (is_root) rep.timings.fill += seconds_since(t0);
      t0 = Clock::now();
      simulate_to_convergence(dg, m, buf, cfg.sim_cap);
      if (is_root) rep.timings.simulate += seconds_since(t0);

      double oldscore = 0.0;
      std::vector<double> scores(g.n);

      for (uint32_t step = 0; step < cfg.k; ++step) {
        group.barrier(tau);

        t0 = Clock::now();
        for (vertex_t v = 0; v < g.n; ++v)
          scores[v] = row_score(m.row_span(v));
        group.reduce_to_root(tau, scores);

        if (is_root) {
          // Committed rows are all-VISITED on every device, hence score 0;
          // skipping them in the argmax is the committed-seed mask.
          double best = 0.0;
          vertex_t arg = g.n;
          const double* red = scores.data();
          for (vertex_t v = 0; v < g.n; ++v) {
            if (root.committed[v]) continue;
            if (red[v] > best) {
              best = red[v];
              arg = v;
            }
          }
          if (arg == g.n) {
            // Saturated: every candidate's registers are fully covered.
            root.saturated = true;
            for (vertex_t v = 0; v < g.n; ++v)
              if (!root.committed[v]) {
                arg = v;
                break;
              }
          }
          root.chosen = arg;
          root.committed[arg] = 1;
        }
        uint64_t chosen = root.chosen;
        group.broadcast(tau, std::span<uint64_t>(&chosen, 1), 0);
        if (is_root) rep.timings.select += seconds_since(t0);

        t0 = Clock::now();
        commit_seed(m, cs, static_cast<vertex_t>(chosen));
        cascade(dg, m, cs);
        if (is_root) rep.timings.cascade += seconds_since(t0);

        uint64_t covered = group.allreduce(tau, count_visited(m));
        double score = static_cast<double>(covered) / cfg.r;

        if (is_root) {
          rep.seeds_dense.push_back(static_cast<vertex_t>(chosen));
          rep.score_trajectory.push_back(score);
        }

        // Same history on every rank, so the decision needs no extra
        // communication. Last round skips: nothing would consume the refill.
        bool rebuild =
            step + 1 < cfg.k && (score - oldscore) > cfg.rebuild_eps * score;
        if (rebuild) {
          t0 = Clock::now();
          fill_sketches(m);
          if (is_root) rep.timings.fill += seconds_since(t0);
          t0 = Clock::now();
          simulate_to_convergence(dg, m, buf, cfg.sim_cap);
          if (is_root) rep.timings.simulate += seconds_since(t0);
          oldscore = score;
          if (is_root) {
            rep.rebuilds++;
            rep.rebuild_rounds.push_back(step);
          }
        }
      }
    } catch (...) {
      errs[tau] = std::current_exception();
      group.leave(tau);  // peers must not be stranded at a barrier
    }
  };

  auto t_total = Clock::now();
  {
    std::vector<std::jthread> threads;
    threads.reserve(mu);
    for (uint32_t tau = 1; tau < mu; ++tau)
      threads.emplace_back(worker, tau);
    worker(0);
  }
  rep.timings.total = seconds_since(t_total);

  for (uint32_t tau = 0; tau < mu; ++tau)
    if (errs[tau]) std::rethrow_exception(errs[tau]);

  rep.saturated = root.saturated;
  rep.comms = group.counters();
  rep.seeds.reserve(rep.seeds_dense.size());
  for (vertex_t s : rep.seeds_dense) rep.seeds.push_back(g.orig_id[s]);
  return rep;
}

}  // namespace difuser
