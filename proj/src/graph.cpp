#include "difuser/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace difuser {

namespace {

constexpr char kCacheMagic[8] = {'D', 'F', 'S', 'G', '0', '0', '0', '1'};

[[noreturn]] void parse_fail(size_t line, const std::string& why) {
  throw std::runtime_error("edge list parse error at line " +
                           std::to_string(line) + ": " + why);
}

const char* skip_ws(const char* p, const char* end) {
  while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
  return p;
}

}  // namespace

uint32_t to_fixed_point(double w) {
  if (!(w >= 0.0 && w <= 1.0))
    throw std::invalid_argument("probability out of [0, 1]: " +
                                std::to_string(w));
  return static_cast<uint32_t>(std::llround(w * static_cast<double>(kFixedOne)));
}

double from_fixed_point(uint32_t w) {
  return static_cast<double>(w) / static_cast<double>(kFixedOne);
}

RawEdgeList parse_edge_list(std::string_view text, bool directed) {
  RawEdgeList out;
  out.directed = directed;
  const char* p = text.data();
  const char* end = p + text.size();
  size_t line = 0;
  while (p < end) {
    ++line;
    const char* eol = static_cast<const char*>(memchr(p, '\n', end - p));
    const char* stop = eol ? eol : end;
    const char* q = skip_ws(p, stop);
    p = eol ? eol + 1 : end;
    if (q == stop || *q == '#') continue;

    RawEdge e;
    auto [pu, ecu] = std::from_chars(q, stop, e.u);
    if (ecu != std::errc{}) parse_fail(line, "expected source id");
    q = skip_ws(pu, stop);
    auto [pv, ecv] = std::from_chars(q, stop, e.v);
    if (ecv != std::errc{}) parse_fail(line, "expected target id");
    q = skip_ws(pv, stop);
    if (q != stop) {
      auto [pw, ecw] = std::from_chars(q, stop, e.w);
      if (ecw != std::errc{}) parse_fail(line, "expected edge probability");
      if (!(e.w >= 0.0 && e.w <= 1.0))
        parse_fail(line, "probability out of [0, 1]");
      q = skip_ws(pw, stop);
      if (q != stop) parse_fail(line, "trailing tokens");
    }
    out.edges.push_back(e);
    if (!directed && e.u != e.v) out.edges.push_back({e.v, e.u, e.w});
  }
  if (out.edges.empty()) throw std::runtime_error("edge list is empty");
  return out;
}

RawEdgeList parse_edge_list_file(const std::string& path, bool directed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_edge_list(ss.str(), directed);
}

namespace {

// Shared duplicate-collapse walk over (u, v)-sorted edges. Within one
// endpoint pair either every copy carries a probability (compound merge)
// or none does (plain dedup); a mix has no meaningful resolution.
template <class Edge, class Emit>
void collapse_sorted(std::vector<Edge>& es, Emit emit) {
  size_t i = 0;
  while (i < es.size()) {
    size_t j = i;
    bool weighted = es[i].has_weight();
    double keep = 1.0;
    while (j < es.size() && es[j].u == es[i].u && es[j].v == es[i].v) {
      if (es[j].has_weight() != weighted)
        throw std::runtime_error(
            "parallel edges mix explicit and implicit probabilities");
      if (weighted) keep *= 1.0 - es[j].w;
      ++j;
    }
    emit(es[i].u, es[i].v, weighted ? 1.0 - keep : -1.0);
    i = j;
  }
}

}  // namespace

RawEdgeList merge_parallel_edges(const RawEdgeList& raw) {
  for (const RawEdge& e : raw.edges)
    if (!e.has_weight())
      throw std::runtime_error(
          "merge_parallel_edges requires explicit probabilities");
  RawEdgeList out;
  out.directed = raw.directed;
  std::vector<RawEdge> es = raw.edges;
  std::sort(es.begin(), es.end(), [](const RawEdge& a, const RawEdge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });
  collapse_sorted(es, [&](uint64_t u, uint64_t v, double w) {
    out.edges.push_back({u, v, w});
  });
  return out;
}

WeightedGraph build_graph(const RawEdgeList& raw) {
  if (raw.edges.empty()) throw std::runtime_error("graph has no edges");

  std::vector<uint64_t> ids;
  ids.reserve(raw.edges.size() * 2);
  for (const RawEdge& e : raw.edges) {
    ids.push_back(e.u);
    ids.push_back(e.v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  auto dense = [&](uint64_t id) -> vertex_t {
    return static_cast<vertex_t>(
        std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };

  struct DEdge {
    vertex_t u, v;
    double w;
    bool has_weight() const { return w >= 0.0; }
  };
  std::vector<DEdge> es;
  es.reserve(raw.edges.size());
  for (const RawEdge& e : raw.edges)
    es.push_back({dense(e.u), dense(e.v), e.w});
  std::sort(es.begin(), es.end(), [](const DEdge& a, const DEdge& b) {
    return a.u != b.u ? a.u < b.u : a.v < b.v;
  });

  WeightedGraph g;
  g.n = static_cast<vertex_t>(ids.size());
  g.orig_id = std::move(ids);
  g.offsets.assign(g.n + 1, 0);
  g.in_degree.assign(g.n, 0);

  std::vector<DEdge> merged;
  merged.reserve(es.size());
  collapse_sorted(es, [&](vertex_t u, vertex_t v, double w) {
    merged.push_back({u, v, w});
    g.offsets[u + 1]++;
    g.in_degree[v]++;
  });
  for (vertex_t u = 0; u < g.n; ++u) g.offsets[u + 1] += g.offsets[u];

  g.m = merged.size();
  g.adj.resize(g.m);
  g.weights.resize(g.m);
  g.ehash.resize(g.m);
  for (uint64_t i = 0; i < g.m; ++i) {
    const DEdge& e = merged[i];
    g.adj[i] = e.v;
    g.weights[i] = e.has_weight() ? to_fixed_point(e.w) : 0;
    g.ehash[i] = edge_hash(e.u, e.v);
  }
  return g;
}

WeightSetting WeightSetting::parse(std::string_view spec) {
  auto bad = [&]() -> std::runtime_error {
    return std::runtime_error("bad weight setting: " + std::string(spec));
  };
  auto num = [&](std::string_view s) {
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) throw bad();
    return v;
  };
  WeightSetting w;
  if (spec == "wc") {
    w.kind = WeightKind::WeightedCascade;
    return w;
  }
  size_t colon = spec.find(':');
  if (colon == std::string_view::npos) throw bad();
  std::string_view head = spec.substr(0, colon);
  std::string_view args = spec.substr(colon + 1);
  size_t comma = args.find(',');
  if (head == "const") {
    if (comma != std::string_view::npos) throw bad();
    w.kind = WeightKind::Constant;
    w.a = num(args);
    if (!(w.a >= 0.0 && w.a <= 1.0)) throw bad();
    return w;
  }
  if (comma == std::string_view::npos) throw bad();
  w.a = num(args.substr(0, comma));
  w.b = num(args.substr(comma + 1));
  if (head == "normal") {
    w.kind = WeightKind::Normal;
    if (w.b < 0.0) throw bad();
    return w;
  }
  if (head == "uniform") {
    w.kind = WeightKind::Uniform;
    if (w.a > w.b) throw bad();
    return w;
  }
  throw bad();
}

std::string WeightSetting::to_string() const {
  std::ostringstream ss;
  switch (kind) {
    case WeightKind::Constant:
      ss << "const:" << a;
      break;
    case WeightKind::WeightedCascade:
      ss << "wc";
      break;
    case WeightKind::Normal:
      ss << "normal:" << a << "," << b;
      break;
    case WeightKind::Uniform:
      ss << "uniform:" << a << "," << b;
      break;
  }
  return ss.str();
}

void assign_weights(WeightedGraph& g, const WeightSetting& s, uint64_t seed) {
  auto clamp01 = [](double w) { return std::min(1.0, std::max(0.0, w)); };
  switch (s.kind) {
    case WeightKind::Constant: {
      uint32_t w = to_fixed_point(s.a);
      std::fill(g.weights.begin(), g.weights.end(), w);
      break;
    }
    case WeightKind::WeightedCascade:
      for (uint64_t e = 0; e < g.m; ++e)
        g.weights[e] = to_fixed_point(1.0 / g.in_degree[g.adj[e]]);
      break;
    case WeightKind::Normal: {
      std::mt19937_64 rng(seed);
      std::normal_distribution<double> d(s.a, s.b);
      for (uint64_t e = 0; e < g.m; ++e)
        g.weights[e] = to_fixed_point(clamp01(d(rng)));
      break;
    }
    case WeightKind::Uniform: {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> d(s.a, s.b);
      for (uint64_t e = 0; e < g.m; ++e)
        g.weights[e] = to_fixed_point(clamp01(d(rng)));
      break;
    }
  }
}

namespace {

template <class T>
void write_vec(std::ofstream& out, const std::vector<T>& v) {
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <class T>
void read_vec(std::ifstream& in, std::vector<T>& v, size_t count) {
  v.resize(count);
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(count * sizeof(T)));
}

}  // namespace

void save_graph_cache(const WeightedGraph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(kCacheMagic, sizeof kCacheMagic);
  uint64_t n = g.n, m = g.m;
  out.write(reinterpret_cast<const char*>(&n), 8);
  out.write(reinterpret_cast<const char*>(&m), 8);
  write_vec(out, g.offsets);
  write_vec(out, g.adj);
  write_vec(out, g.weights);
  write_vec(out, g.orig_id);
  if (!out) throw std::runtime_error("write failed: " + path);
}

bool is_graph_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[8] = {};
  in.read(magic, 8);
  return in && memcmp(magic, kCacheMagic, 8) == 0;
}

WeightedGraph load_graph_cache(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[8] = {};
  in.read(magic, 8);
  if (!in || memcmp(magic, kCacheMagic, 8) != 0)
    throw std::runtime_error("not a graph cache: " + path);
  uint64_t n = 0, m = 0;
  in.read(reinterpret_cast<char*>(&n), 8);
  in.read(reinterpret_cast<char*>(&m), 8);
  WeightedGraph g;
  g.n = static_cast<vertex_t>(n);
  g.m = m;
  read_vec(in, g.offsets, n + 1);
  read_vec(in, g.adj, m);
  read_vec(in, g.weights, m);
  read_vec(in, g.orig_id, n);
  if (!in) throw std::runtime_error("truncated graph cache: " + path);
  if (g.offsets.back() != m)
    throw std::runtime_error("corrupt graph cache: " + path);

  g.in_degree.assign(g.n, 0);
  g.ehash.resize(m);
  for (vertex_t u = 0; u < g.n; ++u)
    for (uint64_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e) {
      g.in_degree[g.adj[e]]++;
      g.ehash[e] = edge_hash(u, g.adj[e]);
    }
  return g;
}

WeightedGraph load_graph(const std::string& path, bool directed) {
  if (is_graph_cache(path)) return load_graph_cache(path);
  return build_graph(parse_edge_list_file(path, directed));
}

}  // namespace difuser
