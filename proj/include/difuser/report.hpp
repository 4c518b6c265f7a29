#pragma once

#include <string>

#include "difuser/runtime.hpp"

namespace difuser {

// JSON form of a seed report. The full resolved config is echoed under
// "config". Timings are wall-clock and vary run to run, so they live in a
// single "timings" object that callers comparing outputs can omit; with
// include_timings = false the serialization is a pure function of
// (graph, config).
std::string report_to_json(const SeedReport& rep, bool include_timings = true);

// Parse the "seeds" array back out of a report produced above.
std::vector<uint64_t> seeds_from_json(const std::string& text);

}  // namespace difuser
