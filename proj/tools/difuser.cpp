#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "difuser/engine.hpp"
#include "difuser/fasst.hpp"
#include "difuser/graph.hpp"
#include "difuser/oracle.hpp"
#include "difuser/report.hpp"
#include "difuser/runtime.hpp"
#include "json.hpp"

using namespace difuser;
using nlohmann::json;

namespace {

struct GraphOpts {
  std::string path;
  bool undirected = false;
};

void add_graph_opts(CLI::App* cmd, GraphOpts& g) {
  cmd->add_option("--graph", g.path, "edge list file or binary graph cache")
      ->required();
  cmd->add_flag("--undirected", g.undirected,
                "treat text edge lists as undirected");
}

void write_out(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + out);
  f << text;
}

vertex_t dense_of(const WeightedGraph& g, uint64_t orig) {
  auto it = std::lower_bound(g.orig_id.begin(), g.orig_id.end(), orig);
  if (it == g.orig_id.end() || *it != orig)
    throw std::runtime_error("vertex id not in graph: " + std::to_string(orig));
  return static_cast<vertex_t>(it - g.orig_id.begin());
}

std::vector<vertex_t> parse_seed_arg(const WeightedGraph& g,
                                     const std::string& arg) {
  std::ifstream f(arg, std::ios::binary);
  std::vector<uint64_t> orig;
  if (f) {
    std::ostringstream ss;
    ss << f.rdbuf();
    orig = seeds_from_json(ss.str());
  } else {
    std::string tok;
    std::istringstream ss(arg);
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) continue;
      size_t used = 0;
      uint64_t v = 0;
      try {
        if (tok[0] != '-') v = std::stoull(tok, &used);
      } catch (const std::exception&) {
      }
      if (used == 0 || used != tok.size())
        throw std::runtime_error("bad seed id: " + tok);
      orig.push_back(v);
    }
    if (orig.empty())
      throw std::runtime_error("no seeds in argument: " + arg);
  }
  std::vector<vertex_t> dense;
  dense.reserve(orig.size());
  for (uint64_t v : orig) dense.push_back(dense_of(g, v));
  return dense;
}

int cmd_seeds(const GraphOpts& go, RunConfig cfg, const std::string& out) {
  WeightedGraph g = load_graph(go.path, !go.undirected);
  apply_weights(g, cfg);
  SeedReport rep = run(g, cfg);
  write_out(out, report_to_json(rep, true));
  return 0;
}

int cmd_eval(const GraphOpts& go, const std::string& weights,
             const std::string& seed_arg, uint32_t trials, uint32_t runs,
             uint64_t seed, const std::string& out) {
  WeightedGraph g = load_graph(go.path, !go.undirected);
  WeightSetting ws = WeightSetting::parse(weights);
  assign_weights(g, ws, derive_seed(seed, kSeedTagWeights));
  std::vector<vertex_t> seeds = parse_seed_arg(g, seed_arg);

  OracleConfig oc{trials, seed, runs};
  InfluenceStats st = influence_stats(g, seeds, oc);

  json j;
  j["config"] = {{"graph", go.path},   {"weights", ws.to_string()},
                 {"trials", trials},   {"runs", runs},
                 {"seed", seed}};
  std::vector<uint64_t> orig;
  for (vertex_t v : seeds) orig.push_back(g.orig_id[v]);
  j["seeds"] = orig;
  j["influence"] = {{"mean", st.mean},
                    {"std_error", st.std_error},
                    {"trials", st.trials}};
  write_out(out, j.dump(2) + "\n");
  return 0;
}

int cmd_partition_stats(const GraphOpts& go,
                        const std::vector<std::string>& weights, uint32_t r,
                        uint32_t mu, uint64_t seed, const std::string& out) {
  WeightedGraph g = load_graph(go.path, !go.undirected);
  std::ostringstream os;
  os << "# partition-stats graph=" << go.path << " r=" << r
     << " devices=" << mu << " seed=" << seed << "\n";
  os << "setting,mode,mu,k,fraction\n";
  for (const std::string& wspec : weights) {
    WeightSetting ws = WeightSetting::parse(wspec);
    assign_weights(g, ws, derive_seed(seed, kSeedTagWeights));
    for (PartitionMode mode : {PartitionMode::Naive, PartitionMode::Fasst}) {
      PartitionPlan plan = make_plan(
          gen_random_vector(r, derive_seed(seed, kSeedTagSamples)), mu, mode);
      DuplicationHistogram h = duplication_stats(g, plan);
      for (uint32_t k = 0; k <= mu; ++k)
        os << ws.to_string() << "," << to_string(mode) << "," << mu << ","
           << k << "," << h.fraction[k] << "\n";
    }
  }
  write_out(out, os.str());
  return 0;
}

int cmd_fillrate(const GraphOpts& go, const std::vector<std::string>& weights,
                 uint32_t r, uint64_t seed, const std::string& out) {
  WeightedGraph g = load_graph(go.path, !go.undirected);
  std::ostringstream os;
  os << "# fillrate graph=" << go.path << " r=" << r << " seed=" << seed
     << "\n";
  os << "setting,mode,fill_rate\n";
  RandomVector x = gen_random_vector(r, derive_seed(seed, kSeedTagSamples));
  for (const std::string& wspec : weights) {
    WeightSetting ws = WeightSetting::parse(wspec);
    assign_weights(g, ws, derive_seed(seed, kSeedTagWeights));
    for (PartitionMode mode : {PartitionMode::Naive, PartitionMode::Fasst}) {
      FillRateReport rep = fill_rate(g, x, mode);
      os << ws.to_string() << "," << to_string(mode) << "," << rep.fill_rate
         << "\n";
    }
  }
  write_out(out, os.str());
  return 0;
}

int cmd_bench(const std::vector<std::string>& graphs, bool undirected,
              const std::vector<std::string>& weights,
              std::vector<uint32_t> devices, uint32_t k, uint32_t r,
              double eps, uint64_t seed, uint32_t oracle_trials,
              const std::string& out) {
  std::ostringstream os;
  os << "# bench k=" << k << " r=" << r << " rebuild_eps=" << eps
     << " seed=" << seed << " oracle_trials=" << oracle_trials << "\n";
  os << "graph,setting,mu,mode,build_s,fill_s,simulate_s,select_s,cascade_s,"
        "total_s,score,rebuilds";
  if (oracle_trials) os << ",oracle_mean,oracle_se";
  os << "\n";
  for (const std::string& path : graphs) {
    WeightedGraph g = load_graph(path, !undirected);
    for (const std::string& wspec : weights) {
      for (uint32_t mu : devices) {
        for (PartitionMode mode :
             {PartitionMode::Naive, PartitionMode::Fasst}) {
          RunConfig cfg;
          cfg.k = k;
          cfg.r = r;
          cfg.mu = mu;
          cfg.mode = mode;
          cfg.weights = WeightSetting::parse(wspec);
          cfg.rebuild_eps = eps;
          cfg.seed = seed;
          apply_weights(g, cfg);
          SeedReport rep = run(g, cfg);
          const PhaseTimings& t = rep.timings;
          os << path << "," << wspec << "," << mu << "," << to_string(mode)
             << "," << t.build << "," << t.fill << "," << t.simulate << ","
             << t.select << "," << t.cascade << "," << t.total << ","
             << (rep.score_trajectory.empty() ? 0.0
                                              : rep.score_trajectory.back())
             << "," << rep.rebuilds;
          if (oracle_trials) {
            OracleConfig oc{oracle_trials, seed, 1};
            InfluenceStats st = influence_stats(g, rep.seeds_dense, oc);
            os << "," << st.mean << "," << st.std_error;
          }
          os << "\n";
        }
      }
    }
  }
  write_out(out, os.str());
  return 0;
}

int cmd_cache(const GraphOpts& go, const std::string& out) {
  WeightedGraph g = load_graph(go.path, !go.undirected);
  save_graph_cache(g, out);
  std::cerr << "cached " << g.n << " vertices, " << g.m << " edges to " << out
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hash-fused sketch-space influence maximization"};
  app.require_subcommand(1);

  // seeds
  GraphOpts sg;
  RunConfig cfg;
  std::string s_weights = "const:0.1", s_mode = "fasst", s_out;
  auto* seeds = app.add_subcommand("seeds", "select seeds on one graph");
  add_graph_opts(seeds, sg);
  seeds->add_option("--weights", s_weights, "const:w|wc|normal:m,s|uniform:lo,hi");
  seeds->add_option("--k", cfg.k, "number of seeds")->default_val(10u);
  seeds->add_option("--r", cfg.r, "number of simulations")->default_val(256u);
  seeds->add_option("--devices", cfg.mu, "simulated devices")->default_val(1u);
  seeds->add_option("--mode", s_mode, "naive|fasst");
  seeds->add_option("--rebuild-eps", cfg.rebuild_eps,
                    "relative score growth that triggers a rebuild");
  seeds->add_option("--seed", cfg.seed, "master seed");
  seeds->add_option("--out", s_out, "output path (default stdout)");

  // eval
  GraphOpts eg;
  std::string e_weights = "const:0.1", e_seeds, e_out;
  uint32_t e_trials = 10000, e_runs = 1;
  uint64_t e_seed = 0;
  auto* eval = app.add_subcommand("eval", "Monte Carlo influence of a seed set");
  add_graph_opts(eval, eg);
  eval->add_option("--weights", e_weights, "weight setting");
  eval->add_option("--seeds", e_seeds, "report JSON path or comma-separated ids")
      ->required();
  eval->add_option("--trials", e_trials, "Monte Carlo trials");
  eval->add_option("--runs", e_runs, "independent repetitions");
  eval->add_option("--seed", e_seed, "master seed");
  eval->add_option("--out", e_out, "output path (default stdout)");

  // partition-stats
  GraphOpts pg;
  std::vector<std::string> p_weights{"const:0.1"};
  uint32_t p_r = 1024, p_mu = 8;
  uint64_t p_seed = 0;
  std::string p_out;
  auto* pstats = app.add_subcommand("partition-stats",
                                    "edge duplication across devices");
  add_graph_opts(pstats, pg);
  pstats->add_option("--weights", p_weights, "weight settings (repeatable)");
  pstats->add_option("--r", p_r, "number of simulations");
  pstats->add_option("--devices", p_mu, "simulated devices");
  pstats->add_option("--seed", p_seed, "master seed");
  pstats->add_option("--out", p_out, "output path (default stdout)");

  // fillrate
  GraphOpts fg;
  std::vector<std::string> f_weights{"const:0.1", "const:0.005"};
  uint32_t f_r = 1024;
  uint64_t f_seed = 0;
  std::string f_out;
  auto* frate = app.add_subcommand("fillrate",
                                   "useful-lane fraction of 32-wide batches");
  add_graph_opts(frate, fg);
  frate->add_option("--weights", f_weights, "weight settings (repeatable)");
  frate->add_option("--r", f_r, "number of simulations");
  frate->add_option("--seed", f_seed, "master seed");
  frate->add_option("--out", f_out, "output path (default stdout)");

  // bench
  std::vector<std::string> b_graphs, b_weights{"const:0.1"};
  std::vector<uint32_t> b_devices{1};
  bool b_undirected = false;
  uint32_t b_k = 10, b_r = 256, b_oracle = 0;
  double b_eps = 0.01;
  uint64_t b_seed = 0;
  std::string b_out;
  auto* bench = app.add_subcommand("bench", "phase timing table");
  bench->add_option("--graph", b_graphs, "graph files (repeatable)")
      ->required();
  bench->add_flag("--undirected", b_undirected, "text graphs are undirected");
  bench->add_option("--weights", b_weights, "weight settings (repeatable)");
  bench->add_option("--devices", b_devices, "device counts (repeatable)");
  bench->add_option("--k", b_k, "seeds per run");
  bench->add_option("--r", b_r, "number of simulations");
  bench->add_option("--rebuild-eps", b_eps, "rebuild threshold");
  bench->add_option("--seed", b_seed, "master seed");
  bench->add_option("--oracle-trials", b_oracle,
                    "also evaluate selected seeds (0 = off)");
  bench->add_option("--out", b_out, "output path (default stdout)");

  // cache
  GraphOpts cg;
  std::string c_out;
  auto* cache = app.add_subcommand("cache", "convert a text graph to the binary cache");
  add_graph_opts(cache, cg);
  cache->add_option("--out", c_out, "cache output path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (seeds->parsed()) {
      cfg.weights = WeightSetting::parse(s_weights);
      cfg.mode = parse_partition_mode(s_mode);
      return cmd_seeds(sg, cfg, s_out);
    }
    if (eval->parsed())
      return cmd_eval(eg, e_weights, e_seeds, e_trials, e_runs, e_seed, e_out);
    if (pstats->parsed())
      return cmd_partition_stats(pg, p_weights, p_r, p_mu, p_seed, p_out);
    if (frate->parsed())
      return cmd_fillrate(fg, f_weights, f_r, f_seed, f_out);
    if (bench->parsed())
      return cmd_bench(b_graphs, b_undirected, b_weights, b_devices, b_k, b_r,
                       b_eps, b_seed, b_oracle, b_out);
    if (cache->parsed()) return cmd_cache(cg, c_out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
