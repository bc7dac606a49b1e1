#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dunklkit/intertwine.hpp"
#include "dunklkit/kernel.hpp"
#include "dunklkit/report_io.hpp"
#include "dunklkit/validate.hpp"

using namespace dunklkit;

namespace {

std::vector<double> parse_vector(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
        std::size_t used = 0;
        out.push_back(std::stod(piece, &used));
        while (used < piece.size() && std::isspace(static_cast<unsigned char>(piece[used])))
            ++used;
        if (used != piece.size()) throw std::invalid_argument("bad number: '" + piece + "'");
    }
    if (out.empty()) throw std::invalid_argument("empty vector");
    return out;
}

Multiplicity parse_k(const std::string& text) {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        const long num = std::stol(text.substr(0, slash));
        const long den = std::stol(text.substr(slash + 1));
        return Multiplicity(num, den);
    }
    return Multiplicity(std::stod(text));
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

// Shared flags; config file first, explicit flags override it.
struct CommonOpts {
    std::string config_path;
    std::string nodes_text;
    int series_order = -1;
    double min_gap = -1.0;
    double tolerance = -1.0;
    int threads = 0;
    bool timing = false;

    void add_to(CLI::App& cmd) {
        cmd.add_option("--config", config_path, "JSON config file");
        cmd.add_option("--nodes", nodes_text, "comma-separated per-level node counts");
        cmd.add_option("--series-order", series_order, "series truncation degree");
        cmd.add_option("--min-gap", min_gap, "relative dominance gap threshold");
        cmd.add_option("--tolerance", tolerance, "error-estimate flag threshold");
        cmd.add_option("--threads", threads,
                       "worker threads for the top-level quadrature (env DUNKLKIT_THREADS)");
        cmd.add_flag("--timing", timing,
                     "report wall-clock times (off by default so output is reproducible)");
    }

    KernelConfig build() const {
        KernelConfig cfg;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw std::invalid_argument("cannot read config file: " + config_path);
            std::stringstream buf;
            buf << in.rdbuf();
            apply_config_json(buf.str(), cfg);
        }
        if (!nodes_text.empty()) {
            cfg.nodes_per_level.clear();
            for (double v : parse_vector(nodes_text))
                cfg.nodes_per_level.push_back(static_cast<int>(v));
        }
        if (series_order >= 0) cfg.series_order = series_order;
        if (min_gap > 0) cfg.min_gap = min_gap;
        if (tolerance > 0) cfg.tolerance = tolerance;
        if (threads > 0)
            cfg.parallel_width = threads;
        else if (const char* env = std::getenv("DUNKLKIT_THREADS"); env && *env && threads == 0)
            cfg.parallel_width = std::max(1, std::atoi(env));
        cfg.validate();
        return cfg;
    }
};

EvalReport dispatch_eval(KernelMethod method, std::span<const double> x,
                         std::span<const double> lambda, const Multiplicity& k,
                         const KernelConfig& cfg) {
    switch (method) {
        case KernelMethod::reduce:
            return kernel_reduce(x, lambda, k, cfg);
        case KernelMethod::series:
            return kernel_series(x, lambda, k, cfg.series_order, cfg);
        case KernelMethod::compact:
            return kernel_compact(x, lambda, k, cfg);
        case KernelMethod::symmetrized:
            return kernel_symmetrized(x, lambda, k, cfg);
        case KernelMethod::xu: {
            int axis = 0;
            double scalar = 0.0;
            int nonzero = 0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                if (x[i] != 0.0) {
                    ++nonzero;
                    axis = static_cast<int>(i);
                    scalar = x[i];
                }
            }
            if (nonzero > 1)
                throw std::invalid_argument("method xu requires x on a coordinate axis");
            return kernel_xu(scalar, axis, lambda, k, cfg);
        }
        case KernelMethod::a1_closed: {
            if (x.size() != 2) throw std::invalid_argument("method a1 requires two variables");
            EvalReport report;
            report.method = KernelMethod::a1_closed;
            const auto t0 = std::chrono::steady_clock::now();
            report.value = kernel_a1_closed(x, lambda, k, cfg);
            if (cfg.refine) {
                KernelConfig fine = cfg;
                for (int& n : fine.nodes_per_level) n *= 2;
                report.error_estimate = std::abs(kernel_a1_closed(x, lambda, k, fine) -
                                                 report.value);
                report.evals = static_cast<std::uint64_t>(cfg.nodes_for_dim(0)) * 3;
            } else {
                report.evals = cfg.nodes_for_dim(0);
            }
            report.flagged = report.error_estimate > cfg.tolerance;
            report.elapsed_ms = std::chrono::duration<double, std::milli>(
                                    std::chrono::steady_clock::now() - t0)
                                    .count();
            return report;
        }
    }
    throw std::invalid_argument("unknown method");
}

std::string report_to_csv(const EvalReport& report) {
    std::string out = "value,error_estimate,evals,elapsed_ms\n";
    out += csv_number(report.value) + "," + csv_number(report.error_estimate) + "," +
           std::to_string(report.evals) + "," + csv_number(report.elapsed_ms) + "\n";
    return out;
}

int cmd_eval(const CommonOpts& common, int n, const std::string& k_text,
             const std::string& x_text, const std::string& lambda_text,
             const std::string& method_text, const std::string& format,
             const std::string& out_path, bool strict) {
    const KernelConfig cfg = common.build();
    const auto method = parse_method(method_text);
    if (!method) throw std::invalid_argument("unknown method: " + method_text);
    const Multiplicity k = parse_k(k_text);
    const auto x = parse_vector(x_text);
    const auto lambda = parse_vector(lambda_text);
    if (x.size() != lambda.size())
        throw std::invalid_argument("x and lambda must have the same arity");
    if (n >= 0 && static_cast<int>(lambda.size()) != n + 1)
        throw std::invalid_argument("--n does not match the vector arity (need n+1 entries)");

    EvalReport report = dispatch_eval(*method, x, lambda, k, cfg);
    if (!common.timing) report.elapsed_ms = 0.0;

    if (format == "json")
        write_output(out_path, report_to_json(report));
    else if (format == "csv")
        write_output(out_path, report_to_csv(report));
    else
        throw std::invalid_argument("unknown format: " + format);
    return strict && report.flagged ? 3 : 0;
}

int cmd_validate(const CommonOpts& common, const std::string& suite, int n_max,
                 std::uint64_t seed, const std::string& format, const std::string& out_path) {
    ValidateOptions opt;
    opt.n_max = n_max;
    opt.seed = seed;
    opt.cfg = common.build();
    const auto checks = run_suite(suite, opt);

    bool all_passed = true;
    for (const auto& c : checks) all_passed &= c.passed;

    std::string text;
    if (format == "json") {
        nlohmann::ordered_json j;
        j["schema"] = 1;
        j["suite"] = suite;
        j["passed"] = all_passed;
        j["checks"] = nlohmann::ordered_json::array();
        for (const auto& c : checks) {
            nlohmann::ordered_json jc;
            jc["suite"] = c.suite;
            jc["name"] = c.name;
            jc["passed"] = c.passed;
            jc["residual"] = c.residual;
            jc["threshold"] = c.threshold;
            if (!c.note.empty()) jc["note"] = c.note;
            j["checks"].push_back(std::move(jc));
        }
        text = j.dump(2) + "\n";
    } else if (format == "text") {
        std::ostringstream out;
        int passed = 0;
        for (const auto& c : checks) {
            out << (c.passed ? "PASS" : "FAIL") << "  " << c.suite << ": " << c.name
                << "  (residual " << csv_number(c.residual) << ", threshold "
                << csv_number(c.threshold) << ")\n";
            if (!c.note.empty()) out << "      note: " << c.note << "\n";
            passed += c.passed;
        }
        out << passed << "/" << checks.size() << " checks passed\n";
        text = out.str();
    } else {
        throw std::invalid_argument("unknown format: " + format);
    }
    write_output(out_path, text);
    return all_passed ? 0 : 1;
}

int cmd_table(const CommonOpts& common, const std::string& sweep, double from, double to,
              double step, const std::string& k_text, const std::string& x_text,
              const std::string& lambda_text, const std::string& method_text, int axis,
              bool dual, const std::string& out_path) {
    const KernelConfig cfg = common.build();
    const auto method = parse_method(method_text);
    if (!method) throw std::invalid_argument("unknown method: " + method_text);
    if (sweep != "k" && sweep != "x") throw std::invalid_argument("--sweep must be k or x");
    if (!(step > 0) || !std::isfinite(from) || !std::isfinite(to) || to < from)
        throw std::invalid_argument("malformed sweep range");
    const long rows = std::lround(std::floor((to - from) / step + 1e-9)) + 1;
    if (rows > 100000) throw std::invalid_argument("sweep range too long");

    const auto lambda = parse_vector(lambda_text);
    std::vector<double> x_dir(lambda.size(), 0.0);
    if (!x_text.empty()) x_dir = parse_vector(x_text);
    if (x_dir.size() != lambda.size())
        throw std::invalid_argument("x and lambda must have the same arity");
    if (dual && (lambda.size() != 2 || *method != KernelMethod::reduce))
        throw std::invalid_argument("--dual needs n=1 and method reduce");

    std::string csv = "param,value,error_estimate,evals,elapsed_ms";
    if (dual) csv += ",delta";
    csv += "\n";

    for (long i = 0; i < rows; ++i) {
        const double param = from + i * step;
        Multiplicity k = parse_k(k_text);
        std::vector<double> x = x_dir;
        EvalReport report;
        if (sweep == "k") {
            if (!(param > 0)) throw std::invalid_argument("k sweep needs positive values");
            k = Multiplicity(param);
            report = dispatch_eval(*method, x, lambda, k, cfg);
        } else if (*method == KernelMethod::xu) {
            report = kernel_xu(param, axis, lambda, k, cfg);
        } else {
            for (double& v : x) v *= param;
            report = dispatch_eval(*method, x, lambda, k, cfg);
        }
        if (!common.timing) report.elapsed_ms = 0.0;
        csv += csv_number(param) + "," + csv_number(report.value) + "," +
               csv_number(report.error_estimate) + "," + std::to_string(report.evals) + "," +
               csv_number(report.elapsed_ms);
        if (dual) {
            const double closed = kernel_a1_closed(x, lambda, k, cfg);
            csv += "," + csv_number(std::abs(report.value - closed));
        }
        csv += "\n";
    }
    write_output(out_path, csv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dunkl kernel and intertwining operator evaluator (type A)"};
    app.require_subcommand(1);

    CommonOpts ce, cv, ct;

    auto* eval = app.add_subcommand("eval", "evaluate the kernel at one point");
    int n = -1;
    std::string k_text = "1", x_text, lambda_text, method_text = "reduce";
    std::string format = "json", out_path;
    bool strict = false;
    eval->add_option("--n", n, "rank (vectors then need n+1 entries)");
    eval->add_option("--k", k_text, "multiplicity, decimal or p/q");
    eval->add_option("--x", x_text, "first argument, comma-separated")->required();
    eval->add_option("--lambda", lambda_text, "second argument, strictly decreasing")->required();
    eval->add_option("--method", method_text, "reduce|series|xu|a1|compact|symmetrized");
    eval->add_option("--format", format, "json|csv");
    eval->add_option("--out", out_path, "output path (default stdout)");
    eval->add_flag("--strict", strict, "exit 3 when the error estimate exceeds the tolerance");
    ce.add_to(*eval);

    auto* validate = app.add_subcommand("validate", "run property suites");
    std::string suite = "all", vformat = "text", vout;
    int n_max = 2;
    std::uint64_t seed = 42;
    bool vstrict = false;
    validate->add_option("--suite", suite, "identities|oracles|eigen|quadrature|all");
    validate->add_option("--n-max", n_max, "largest rank exercised");
    validate->add_option("--seed", seed, "RNG seed for sampled checks");
    validate->add_option("--format", vformat, "text|json");
    validate->add_option("--out", vout, "output path (default stdout)");
    validate->add_flag("--strict", vstrict,
                       "accepted for interface symmetry; validation always exits 1 on failure");
    cv.add_to(*validate);

    auto* table = app.add_subcommand("table", "sweep one scalar parameter, CSV output");
    std::string sweep, tk = "1", tx, tlambda, tmethod = "reduce", tout;
    double from = 0.0, to = 0.0, step = 0.0;
    int axis = 0;
    bool dual = false;
    table->add_option("--sweep", sweep, "k|x")->required();
    table->add_option("--from", from)->required();
    table->add_option("--to", to)->required();
    table->add_option("--step", step)->required();
    table->add_option("--k", tk, "fixed multiplicity for x sweeps");
    table->add_option("--x", tx, "direction vector scaled by the sweep parameter");
    table->add_option("--lambda", tlambda)->required();
    table->add_option("--method", tmethod, "reduce|series|xu|a1|compact|symmetrized");
    table->add_option("--j", axis, "coordinate axis for method xu, 0-based");
    table->add_flag("--dual", dual, "n=1 only: add |reduce - closed form| delta column");
    table->add_option("--out", tout, "output path (default stdout)");
    ct.add_to(*table);

    try {
        app.parse(argc, argv);
        if (eval->parsed())
            return cmd_eval(ce, n, k_text, x_text, lambda_text, method_text, format, out_path,
                            strict);
        if (validate->parsed()) return cmd_validate(cv, suite, n_max, seed, vformat, vout);
        if (table->parsed())
            return cmd_table(ct, sweep, from, to, step, tk, tx, tlambda, tmethod, axis, dual,
                             tout);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
