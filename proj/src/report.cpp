#include "difuser/report.hpp"

#include "json.hpp"

namespace difuser {

using nlohmann::json;

std::string report_to_json(const SeedReport& rep, bool include_timings) {
  const RunConfig& c = rep.config;
  json j;
  j["config"] = {
      {"k", c.k},
      {"r", c.r},
      {"devices", c.mu},
      {"mode", to_string(c.mode)},
      {"weights", c.weights.to_string()},
      {"rebuild_eps", c.rebuild_eps},
      {"seed", c.seed},
  };
  j["graph"] = {{"n", rep.n}, {"m", rep.m}};
  j["seeds"] = rep.seeds;
  j["seeds_dense"] = rep.seeds_dense;
  j["score_trajectory"] = rep.score_trajectory;
  j["rebuilds"] = rep.rebuilds;
  j["rebuild_rounds"] = rep.rebuild_rounds;
  j["saturated"] = rep.saturated;
  j["degraded_plan"] = rep.degraded_plan;
  j["comms"] = {
      {"reduced_elements", rep.comms.reduced_elements},
      {"broadcast_elements", rep.comms.broadcast_elements},
      {"barriers", rep.comms.barriers},
  };
  if (include_timings)
    j["timings"] = {
        {"build", rep.timings.build},       {"fill", rep.timings.fill},
        {"simulate", rep.timings.simulate}, {"select", rep.timings.select},
        {"cascade", rep.timings.cascade},   {"total", rep.timings.total},
    };
  return j.dump(2) + "\n";
}

std::vector<uint64_t> seeds_from_json(const std::string& text) {
  json j = json::parse(text);
  if (!j.contains("seeds") || !j["seeds"].is_array())
    throw std::runtime_error("report has no seeds array");
  return j["seeds"].get<std::vector<uint64_t>>();
}

}  // namespace difuser
