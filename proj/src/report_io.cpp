#include "dunklkit/report_io.hpp"

#include <cstdio>
#include <stdexcept>

#include <json.hpp>

namespace dunklkit {

std::string report_to_json(const EvalReport& report) {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["value"] = report.value;
    j["method"] = std::string(method_name(report.method));
    j["error_estimate"] = report.error_estimate;
    j["evals"] = report.evals;
    j["elapsed_ms"] = report.elapsed_ms;
    j["flagged"] = report.flagged;
    return j.dump(2) + "\n";
}

EvalReport report_from_json(std::string_view text) {
    const auto j = nlohmann::json::parse(text);
    if (!j.contains("schema") || j["schema"].get<int>() != 1)
        throw std::invalid_argument("unsupported report schema");
    EvalReport r;
    r.value = j.at("value").get<double>();
    const auto method = parse_method(j.at("method").get<std::string>());
    if (!method) throw std::invalid_argument("unknown method in report");
    r.method = *method;
    r.error_estimate = j.at("error_estimate").get<double>();
    r.evals = j.at("evals").get<std::uint64_t>();
    r.elapsed_ms = j.at("elapsed_ms").get<double>();
    r.flagged = j.at("flagged").get<bool>();
    return r;
}

std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void apply_config_json(std::string_view text, KernelConfig& cfg) {
    const auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "nodes_per_level") {
            cfg.nodes_per_level = value.get<std::vector<int>>();
        } else if (key == "series_order") {
            cfg.series_order = value.get<int>();
        } else if (key == "min_gap") {
            cfg.min_gap = value.get<double>();
        } else if (key == "tolerance") {
            cfg.tolerance = value.get<double>();
        } else if (key == "threads") {
            cfg.parallel_width = value.get<int>();
        } else {
            throw std::invalid_argument("unknown config key: " + key);
        }
    }
    cfg.validate();
}

}  // namespace dunklkit
