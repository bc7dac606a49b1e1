#pragma once

#include <string>
#include <string_view>

#include "dunklkit/kernel.hpp"

namespace dunklkit {

// JSON object with a top-level "schema": 1 marker and every EvalReport
// field; parse(emit(r)) == r bitwise (doubles are emitted with shortest
// round-trip precision).
std::string report_to_json(const EvalReport& report);
EvalReport report_from_json(std::string_view text);

// One CSV cell per numeric field, %.17g, no padding.
std::string csv_number(double v);

// Applies a config-file JSON object onto a KernelConfig; recognized keys:
// nodes_per_level (array of int), series_order, min_gap, tolerance,
// threads. Unknown keys are an error (they would silently change nothing).
void apply_config_json(std::string_view text, KernelConfig& cfg);

}  // namespace dunklkit
