#pragma once

#include <string>

#include "json.hpp"

namespace bilinop::harness {

using Json = nlohmann::json;

/// Runs one of the named experiments with defaults overridden by `config`:
/// "lp-check", "counterexample", "norm-probe", "paraproduct", "bench".
/// Reports embed the resolved config and the library version; everything
/// except the "timing" blocks is deterministic for a fixed config and seed.
Json runExperiment(const std::string& name, const Json& config);

Json runLpCheck(const Json& config);
Json runCounterexample(const Json& config);
Json runNormRatioProbe(const Json& config);
Json runParaproductStudy(const Json& config);
Json runBenchBilinear(const Json& config);

/// Copy of a report with every "timing" object and *Ms field removed.
Json stripTimings(const Json& report);

/// Long-format CSV of the report's "rows" array (one line per row).
std::string toCsv(const Json& report);

}  // namespace bilinop::harness
