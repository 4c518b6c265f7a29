#include <cstdint>
#include <random>
#include <vector>

#include "difuser/engine.hpp"
#include "difuser/fasst.hpp"
#include "doctest.h"
#include "testutil.hpp"

using namespace difuser;
using namespace testutil;

namespace {

PartitionPlan plan_of(uint32_t r, uint32_t mu, uint64_t seed,
                      PartitionMode mode = PartitionMode::Fasst) {
  return make_plan(gen_random_vector(r, seed), mu, mode);
}

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("frontier queue pushes once") {
  FrontierQueue q;
  q.init(5);
  CHECK(q.push(3));
  CHECK_FALSE(q.push(3));
  CHECK(q.push(0));
  CHECK(q.size() == 2);
  q.clear();
  CHECK(q.empty());
  CHECK(q.push(3));
}

TEST_CASE("simulate on a deterministic path") {
  // 0 -> 1 -> 2 -> 3, w = 1: every edge live in every simulation; register
  // j of u converges to max clz over the suffix {u, ..., 3}.
  WeightedGraph g = path_graph(4);
  set_const_weights(g, 1.0);
  PartitionPlan plan = plan_of(64, 1, 5);
  DeviceGraph dg = build_device_graph(g, plan, 0);
  CHECK(dg.m == g.m);

  SketchMatrix m(g.n, 64, 0, 77);
  fill_sketches(m);
  std::vector<int8_t> filled(m.row(0), m.row(0) + 4 * 64);

  SimulateBuffers buf;
  int iters = simulate_to_convergence(dg, m, buf);
  CHECK(iters >= 2);
  CHECK(iters <= 4 + 1);

  for (vertex_t u = 0; u < 4; ++u)
    for (uint32_t j = 0; j < 64; ++j) {
      int8_t expect = -1;
      for (vertex_t v = u; v < 4; ++v)
        expect = std::max(expect, filled[size_t(v) * 64 + j]);
      CHECK(m.row(u)[j] == expect);
    }
}

TEST_CASE("simulate equals the naive fixed point on random graphs") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 20; ++trial) {
    vertex_t n = 5 + uint32_t(rng() % 36);
    uint64_t m_edges = 1 + rng() % (uint64_t(n) * 3);
    double w = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
    WeightedGraph g = er_graph(n, m_edges, rng());
    set_const_weights(g, w);

    uint32_t mu = (trial % 2) ? 2 : 1;
    PartitionPlan plan = plan_of(64, mu, rng(),
                                 (trial % 3) ? PartitionMode::Fasst
                                             : PartitionMode::Naive);
    for (uint32_t tau = 0; tau < mu; ++tau) {
      DeviceGraph dg = build_device_graph(g, plan, tau);
      SketchMatrix m(g.n, plan.chunk, tau * plan.chunk, rng());
      fill_sketches(m);

      std::vector<int8_t> ref(m.row(0), m.row(0) + size_t(g.n) * plan.chunk);
      ref_simulate(dg, ref, plan.chunk);

      SimulateBuffers buf;
      simulate_to_convergence(dg, m, buf);
      for (size_t i = 0; i < ref.size(); ++i)
        REQUIRE(m.row(0)[i] == ref[i]);
    }
  }
}

TEST_CASE("simulate respects pre-VISITED registers") {
  WeightedGraph g = er_graph(20, 60, 3);
  set_const_weights(g, 0.8);
  PartitionPlan plan = plan_of(64, 1, 9);
  DeviceGraph dg = build_device_graph(g, plan, 0);

  SketchMatrix m(g.n, 64, 0, 13);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i)
    m.mark_visited(vertex_t(rng() % g.n), uint32_t(rng() % 64));
  uint64_t visited_before = count_visited(m);
  fill_sketches(m);

  std::vector<int8_t> ref(m.row(0), m.row(0) + size_t(g.n) * 64);
  ref_simulate(dg, ref, 64);

  SimulateBuffers buf;
  simulate_to_convergence(dg, m, buf);
  CHECK(count_visited(m) == visited_before);  // simulate never marks
  for (size_t i = 0; i < ref.size(); ++i) REQUIRE(m.row(0)[i] == ref[i]);
}

TEST_CASE("simulate iteration count tracks the propagation depth") {
  // Chain of 12 with the maximum planted at the tail: the value walks one
  // hop per iteration, so convergence needs depth + 1 sweeps.
  WeightedGraph g = path_graph(12);
  set_const_weights(g, 1.0);
  PartitionPlan plan = plan_of(64, 1, 5);
  DeviceGraph dg = build_device_graph(g, plan, 0);

  SketchMatrix m(g.n, 64, 0, 1);  // all zeros
  m.row(11)[0] = 50;
  SimulateBuffers buf;
  CHECK_THROWS_AS(simulate_to_convergence(dg, m, buf, 3),
                  std::runtime_error);

  SketchMatrix m2(g.n, 64, 0, 1);
  m2.row(11)[0] = 50;
  SimulateBuffers buf2;
  int iters = simulate_to_convergence(dg, m2, buf2, 64);
  CHECK(iters == 12);
  for (vertex_t u = 0; u < 12; ++u) CHECK(m2.row(u)[0] == 50);
}

TEST_CASE("cascade marks exactly the sample-graph reachability") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    vertex_t n = 4 + uint32_t(rng() % 47);
    WeightedGraph g = er_graph(n, 1 + rng() % (uint64_t(n) * 3), rng());
    double w = (trial % 3 == 0) ? 0.1 : (trial % 3 == 1) ? 0.5 : 1.0;
    set_const_weights(g, w);

    uint32_t mu = (trial % 2) ? 2 : 1;
    PartitionPlan plan = plan_of(64, mu, rng());
    std::vector<vertex_t> seeds = {vertex_t(rng() % n),
                                   vertex_t(rng() % n)};

    for (uint32_t tau = 0; tau < mu; ++tau) {
      DeviceGraph dg = build_device_graph(g, plan, tau);
      SketchMatrix m(g.n, plan.chunk, tau * plan.chunk, rng());
      fill_sketches(m);
      CascadeState cs;
      cs.init(g.n, m.words());

      for (vertex_t s : seeds) {
        commit_seed(m, cs, s);
        cascade(dg, m, cs);
      }

      // Reference: per local simulation, BFS over that sample graph from
      // both seeds; VISITED must match exactly.
      for (uint32_t j = 0; j < plan.chunk; ++j) {
        uint32_t x = plan.chunk_values(tau)[j];
        std::vector<uint8_t> reach = ref_bfs(g, ref_live_edges(g, x), seeds);
        for (vertex_t v = 0; v < g.n; ++v)
          REQUIRE(m.is_visited(v, j) == (reach[v] != 0));
      }
    }
  }
}

TEST_CASE("recommitting a covered seed is a no-op") {
  WeightedGraph g = path_graph(6);
  set_const_weights(g, 1.0);
  PartitionPlan plan = plan_of(32, 1, 2);
  DeviceGraph dg = build_device_graph(g, plan, 0);
  SketchMatrix m(g.n, 32, 0, 5);
  fill_sketches(m);
  CascadeState cs;
  cs.init(g.n, m.words());

  commit_seed(m, cs, 0);
  cascade(dg, m, cs);
  uint64_t covered = count_visited(m);
  CHECK(covered == uint64_t(g.n) * 32);  // w=1 chain: head covers all

  // Seed 3 is already fully covered: no fresh registers, no growth.
  commit_seed(m, cs, 3);
  CHECK(cs.q.empty());
  cascade(dg, m, cs);
  CHECK(count_visited(m) == covered);
}

TEST_CASE("cascade leaves no freshness residue") {
  WeightedGraph g = er_graph(30, 90, 8);
  set_const_weights(g, 0.5);
  PartitionPlan plan = plan_of(64, 1, 3);
  DeviceGraph dg = build_device_graph(g, plan, 0);
  SketchMatrix m(g.n, 64, 0, 21);
  fill_sketches(m);
  CascadeState cs;
  cs.init(g.n, m.words());
  commit_seed(m, cs, 7);
  cascade(dg, m, cs);
  CHECK(cs.q.empty());
  CHECK(cs.q_next.empty());
  for (uint64_t wbits : cs.fresh_cur) CHECK(wbits == 0);
  for (uint64_t wbits : cs.fresh_next) CHECK(wbits == 0);
}

TEST_CASE("count_visited matches a direct scan") {
  WeightedGraph g = er_graph(25, 100, 12);
  set_const_weights(g, 0.4);
  PartitionPlan plan = plan_of(96, 1, 4);
  DeviceGraph dg = build_device_graph(g, plan, 0);
  SketchMatrix m(g.n, 96, 0, 31);
  fill_sketches(m);
  CascadeState cs;
  cs.init(g.n, m.words());
  commit_seed(m, cs, 1);
  cascade(dg, m, cs);

  uint64_t scan = 0;
  for (vertex_t u = 0; u < g.n; ++u)
    for (uint32_t j = 0; j < 96; ++j) scan += m.row(u)[j] == kVisited;
  CHECK(count_visited(m) == scan);
}

}  // TEST_SUITE
