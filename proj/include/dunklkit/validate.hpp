#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dunklkit/kernel.hpp"

namespace dunklkit {

// One property check: passed iff residual <= threshold (exact checks use
// threshold 0 and report residual 0 or 1). `note` carries human-readable
// context, e.g. the exponent-sign cross-check in the oracle suite.
struct CheckResult {
    std::string suite;
    std::string name;
    bool passed = false;
    double residual = 0.0;
    double threshold = 0.0;
    std::string note;
};

struct ValidateOptions {
    int n_max = 2;
    std::uint64_t seed = 42;
    KernelConfig cfg;
};

std::vector<CheckResult> run_identities(const ValidateOptions& opt);
std::vector<CheckResult> run_oracles(const ValidateOptions& opt);
std::vector<CheckResult> run_eigen(const ValidateOptions& opt);
std::vector<CheckResult> run_quadrature(const ValidateOptions& opt);

// suite in {identities, oracles, eigen, quadrature, all}; throws
// std::invalid_argument on any other name.
std::vector<CheckResult> run_suite(std::string_view suite, const ValidateOptions& opt);

}  // namespace dunklkit
