#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "difuser/fasst.hpp"
#include "difuser/graph.hpp"
#include "difuser/oracle.hpp"
#include "difuser/report.hpp"
#include "difuser/runtime.hpp"
#include "difuser/sampling.hpp"

namespace py = pybind11;
using namespace difuser;

namespace {

RunConfig make_config(uint32_t k, uint32_t r, uint32_t mu,
                      const std::string& mode, const std::string& weights,
                      double rebuild_eps, uint64_t seed) {
  RunConfig cfg;
  cfg.k = k;
  cfg.r = r;
  cfg.mu = mu;
  cfg.mode = parse_partition_mode(mode);
  cfg.weights = WeightSetting::parse(weights);
  cfg.rebuild_eps = rebuild_eps;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_difuser, m) {
  m.doc() = "hash-fused sketch-space influence maximization core";

  py::class_<WeightedGraph>(m, "Graph")
      .def_property_readonly("n",
                             [](const WeightedGraph& g) { return g.n; })
      .def_property_readonly("m",
                             [](const WeightedGraph& g) { return g.m; })
      .def_property_readonly(
          "orig_ids", [](const WeightedGraph& g) { return g.orig_id; })
      .def("out_degree",
           [](const WeightedGraph& g, vertex_t u) {
             if (u >= g.n) throw py::index_error();
             return g.degree(u);
           })
      .def("__repr__", [](const WeightedGraph& g) {
        return "<difuser.Graph n=" + std::to_string(g.n) +
               " m=" + std::to_string(g.m) + ">";
      });

  m.def(
      "load_graph",
      [](const std::string& path, bool directed) {
        return load_graph(path, directed);
      },
      py::arg("path"), py::arg("directed") = true,
      "Load an edge-list text file or a binary graph cache.");

  m.def(
      "graph_from_text",
      [](const std::string& text, bool directed) {
        return build_graph(parse_edge_list(text, directed));
      },
      py::arg("text"), py::arg("directed") = true,
      "Build a graph from edge-list text (\"u v [p]\" lines).");

  m.def(
      "save_cache",
      [](const WeightedGraph& g, const std::string& path) {
        save_graph_cache(g, path);
      },
      py::arg("graph"), py::arg("path"));

  m.def(
      "run_json",
      [](const WeightedGraph& g, uint32_t k, uint32_t r, uint32_t devices,
         const std::string& mode, const std::string& weights,
         double rebuild_eps, uint64_t seed, bool timings) {
        RunConfig cfg =
            make_config(k, r, devices, mode, weights, rebuild_eps, seed);
        WeightedGraph gw = g;
        apply_weights(gw, cfg);
        return report_to_json(run(gw, cfg), timings);
      },
      py::arg("graph"), py::arg("k") = 10, py::arg("r") = 256,
      py::arg("devices") = 1, py::arg("mode") = "fasst",
      py::arg("weights") = "const:0.1", py::arg("rebuild_eps") = 0.01,
      py::arg("seed") = 0, py::arg("timings") = true,
      "Select seeds; returns the report as a JSON string.");

  m.def(
      "influence",
      [](const WeightedGraph& g, const std::vector<vertex_t>& seeds,
         uint32_t trials, uint64_t seed, uint32_t runs,
         const std::string& weights) {
        WeightedGraph gw = g;
        assign_weights(gw, WeightSetting::parse(weights),
                       derive_seed(seed, kSeedTagWeights));
        OracleConfig cfg{trials, seed, runs};
        InfluenceStats st = influence_stats(gw, seeds, cfg);
        return py::make_tuple(st.mean, st.std_error);
      },
      py::arg("graph"), py::arg("seeds"), py::arg("trials") = 10000,
      py::arg("seed") = 0, py::arg("runs") = 1,
      py::arg("weights") = "const:0.1",
      "Monte Carlo influence of a dense-id seed set: (mean, std_error).");

  m.def(
      "greedy_exact",
      [](const WeightedGraph& g, uint32_t k, uint32_t trials, uint64_t seed,
         const std::string& weights) {
        WeightedGraph gw = g;
        assign_weights(gw, WeightSetting::parse(weights),
                       derive_seed(seed, kSeedTagWeights));
        OracleConfig cfg{trials, seed, 1};
        return greedy_exact(gw, k, cfg);
      },
      py::arg("graph"), py::arg("k"), py::arg("trials") = 1000,
      py::arg("seed") = 0, py::arg("weights") = "const:0.1",
      "Reference greedy selection (dense ids).");

  m.def("edge_hash", &edge_hash, py::arg("u"), py::arg("v"),
        "31-bit hash of the ordered endpoint pair.");
  m.def("random_value_at", &random_value_at, py::arg("seed"), py::arg("r"),
        "Per-simulation 31-bit value at index r.");
  m.def(
      "is_sampled",
      [](uint32_t x, uint32_t h, double w) {
        return is_sampled(x, h, to_fixed_point(w));
      },
      py::arg("x"), py::arg("h"), py::arg("w"),
      "Does the simulation owning value x sample an edge with hash h?");
}
