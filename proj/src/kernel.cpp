#include "dunklkit/kernel.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "dunklkit/summation.hpp"

namespace dunklkit {

std::string_view method_name(KernelMethod m) {
    switch (m) {
        case KernelMethod::reduce: return "reduce";
        case KernelMethod::series: return "series";
        case KernelMethod::xu: return "xu";
        case KernelMethod::a1_closed: return "a1";
        case KernelMethod::compact: return "compact";
        case KernelMethod::symmetrized: return "symmetrized";
    }
    return "unknown";
}

std::optional<KernelMethod> parse_method(std::string_view name) {
    if (name == "reduce") return KernelMethod::reduce;
    if (name == "series") return KernelMethod::series;
    if (name == "xu") return KernelMethod::xu;
    if (name == "a1" || name == "a1_closed") return KernelMethod::a1_closed;
    if (name == "compact") return KernelMethod::compact;
    if (name == "symmetrized") return KernelMethod::symmetrized;
    return std::nullopt;
}

void KernelConfig::validate() const {
    if (nodes_per_level.empty()) throw std::invalid_argument("nodes_per_level must not be empty");
    for (int n : nodes_per_level)
        if (n < 8) throw std::invalid_argument("nodes_per_level entries must be >= 8");
    if (series_order < 0) throw std::invalid_argument("series_order must be >= 0");
    if (!(min_gap > 0)) throw std::invalid_argument("min_gap must be > 0");
    if (!(tolerance > 0)) throw std::invalid_argument("tolerance must be > 0");
    if (parallel_width < 1) throw std::invalid_argument("parallel_width must be >= 1");
    if (max_n < 1) throw std::invalid_argument("max_n must be >= 1");
}

int KernelConfig::nodes_for_dim(int i) const {
    if (i < static_cast<int>(nodes_per_level.size())) return nodes_per_level[i];
    return nodes_per_level.back();
}

std::vector<int> KernelConfig::nodes_for_rank(int rank, int scale) const {
    std::vector<int> out(rank);
    for (int i = 0; i < rank; ++i) out[i] = scale * nodes_for_dim(i);
    return out;
}

DominantPoint::DominantPoint(std::vector<double> coords, double min_gap_rel)
    : coords_(std::move(coords)) {
    if (coords_.empty()) throw std::invalid_argument("empty point");
    double scale = 0.0;
    for (double c : coords_) {
        if (!std::isfinite(c)) throw std::domain_error("lambda not finite");
        scale = std::max(scale, std::abs(c));
    }
    const double gap = min_gap_rel * scale;
    for (std::size_t i = 0; i + 1 < coords_.size(); ++i) {
        const double g = coords_[i] - coords_[i + 1];
        if (!(g > 0.0) || g < gap) throw std::domain_error("lambda not strictly dominant");
    }
}

double c_norm(int n, const Multiplicity& k) {
    if (n < 0) throw std::invalid_argument("rank must be >= 0");
    const double kv = k.value();
    return (n + 1) * std::exp(std::lgamma((n + 1) * kv) - (n + 1) * std::lgamma(kv));
}

double q_factor(std::span<const double> lambda, std::span<const double> nu) {
    const int n = static_cast<int>(nu.size());
    if (static_cast<int>(lambda.size()) != n + 1) throw std::invalid_argument("q_factor arity mismatch");
    double prod = 1.0;
    for (int r = 0; r <= n; ++r) {
        for (int s = r + 1; s < n; ++s) prod *= lambda[r] - nu[s];
        for (int s = 0; s < r; ++s) prod *= nu[s] - lambda[r];
    }
    return prod;
}

double w_weight_regular(std::span<const double> lambda, std::span<const double> nu,
                        const Multiplicity& k) {
    const int n = static_cast<int>(nu.size());
    if (static_cast<int>(lambda.size()) != n + 1) throw std::invalid_argument("arity mismatch");
    for (int i = 0; i < n; ++i) {
        if (!(nu[i] < lambda[i] && nu[i] > lambda[i + 1])) throw std::domain_error("nu outside box");
    }
    const double e = k.value() - 1.0;
    if (e == 0.0) return 1.0;
    double logsum = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= n; ++j) {
            if (j == i || j == i + 1) continue;
            logsum += std::log(std::abs(lambda[j] - nu[i]));
        }
    }
    return std::exp(e * logsum);
}

double alternating_q_sum(std::span<const double> lambda, std::span<const double> nu) {
    const int n = static_cast<int>(nu.size());
    const std::vector<double> nu_vec(nu.begin(), nu.end());
    CompensatedSum acc;
    for (const auto& w : symmetric_group(n))
        acc.add(w.sign() * q_factor(lambda, w.apply(nu_vec)));
    return acc.value();
}

double alternating_q_sum_closed(std::span<const double> lambda, std::span<const double> nu) {
    const int n = static_cast<int>(nu.size());
    if (static_cast<int>(lambda.size()) != n + 1) throw std::invalid_argument("arity mismatch");
    double prod = 1.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) prod *= (lambda[i] - lambda[j]) * (nu[i] - nu[j]);
    for (int r = 0; r < n; ++r) prod *= nu[r] - lambda[n];
    return prod;
}

namespace {

double vec_sum(std::span<const double> v) {
    CompensatedSum s;
    for (double x : v) s.add(x);
    return s.value();
}

double sum_log_gaps(std::span<const double> lambda) {
    double s = 0.0;
    for (std::size_t i = 0; i < lambda.size(); ++i)
        for (std::size_t j = i + 1; j < lambda.size(); ++j) s += std::log(lambda[i] - lambda[j]);
    return s;
}

struct DedupGroup {
    std::vector<double> z;  // deduplicated inner first argument
    std::vector<std::pair<Permutation, int>> members;
};

std::vector<DedupGroup> dedup_groups(const std::vector<double>& y) {
    const int n = static_cast<int>(y.size());
    std::map<std::vector<double>, std::vector<std::pair<Permutation, int>>> buckets;
    for (const auto& w : symmetric_group(n)) buckets[w.inverse().apply(y)].emplace_back(w, w.sign());
    std::vector<DedupGroup> groups;
    groups.reserve(buckets.size());
    for (auto& [z, members] : buckets) groups.push_back({z, std::move(members)});
    return groups;
}

// Shared state of one kernel evaluation (both discretizations). Jacobi
// rules are precomputed up front so the parallel region never mutates
// shared state.
class Reducer {
  public:
    Reducer(const Multiplicity& k, const KernelConfig& cfg, int top_rank)
        : k_(k.value()), cfg_(cfg) {
        log_c_.resize(top_rank + 1, 0.0);
        for (int n = 1; n <= top_rank; ++n)
            log_c_[n] = std::log(n + 1.0) + std::lgamma((n + 1) * k_) - (n + 1) * std::lgamma(k_);
        for (int i = 0; i < top_rank; ++i) {
            cache_rule(cfg_.nodes_for_dim(i));
            cache_rule(2 * cfg_.nodes_for_dim(i));
        }
    }

    std::uint64_t evals() const { return evals_.load(std::memory_order_relaxed); }

    // E_k(X, lambda) with the given per-dimension node counts at this rank;
    // lower ranks use the configured counts.
    double evaluate(const std::vector<double>& x, const std::vector<double>& lambda,
                    const std::vector<int>& nodes, int threads) {
        const int d = static_cast<int>(x.size());
        if (d == 1) {
            evals_.fetch_add(1, std::memory_order_relaxed);
            return std::exp(x[0] * lambda[0]);
        }
        const int n = d - 1;
        const BoxGrid grid = make_grid(lambda, nodes);
        const double log_pre =
            log_c_[n] + x[d - 1] * vec_sum(lambda) - 2.0 * k_ * sum_log_gaps(lambda);

        bool const_head = true;
        for (int i = 0; i + 1 < n; ++i)
            if (x[i] != x[i + 1]) const_head = false;

        double integral;
        if (const_head) {
            const double c = x[0] - x[d - 1];
            evals_.fetch_add(grid.total_points(), std::memory_order_relaxed);
            integral = integrate(grid, threads, [&](const std::vector<double>& nu) {
                return alternating_q_sum_closed(lambda, nu) * regular_weight(lambda, nu) *
                       std::exp(c * vec_sum(nu));
            });
        } else {
            std::vector<double> y(x.begin(), x.begin() + n);
            if (cfg_.shift_inner)
                for (double& v : y) v -= x[d - 1];
            const auto groups = dedup_groups(y);
            const std::vector<int> inner_nodes = cfg_.nodes_for_rank(n - 1);
            evals_.fetch_add(grid.total_points() * groups.size(), std::memory_order_relaxed);
            integral = integrate(grid, threads, [&](const std::vector<double>& nu) {
                double node_val = 0.0;
                std::vector<double> permuted(nu.size());
                for (const auto& group : groups) {
                    double coef = 0.0;
                    for (const auto& [w, sign] : group.members) {
                        for (int s = 0; s < n; ++s) permuted[s] = nu[w(s)];
                        coef += sign * q_factor(lambda, permuted);
                    }
                    node_val += coef * evaluate(group.z, nu, inner_nodes, 1);
                }
                if (!cfg_.shift_inner) node_val *= std::exp(-x[d - 1] * vec_sum(nu));
                return node_val * regular_weight(lambda, nu);
            });
        }
        return std::exp(log_pre) * integral;
    }

    // Same value through the rewritten alternating sum: per permutation the
    // factor Q is replaced by division by prod_j (lambda_j - nu_{w(j)}) and
    // the weight is promoted one power (cross factors to k, the absorbed
    // per-dimension factors contributing one extra explicit power each).
    double evaluate_compact(const std::vector<double>& x, const std::vector<double>& lambda,
                            const std::vector<int>& nodes, int threads) {
        const int d = static_cast<int>(x.size());
        if (d == 1) {
            evals_.fetch_add(1, std::memory_order_relaxed);
            return std::exp(x[0] * lambda[0]);
        }
        const int n = d - 1;
        const BoxGrid grid = make_grid(lambda, nodes);
        const double log_pre =
            log_c_[n] + x[d - 1] * vec_sum(lambda) - 2.0 * k_ * sum_log_gaps(lambda);

        std::vector<double> y(x.begin(), x.begin() + n);
        for (double& v : y) v -= x[d - 1];
        const auto groups = dedup_groups(y);
        const std::vector<int> inner_nodes = cfg_.nodes_for_rank(n - 1);
        evals_.fetch_add(grid.total_points() * groups.size(), std::memory_order_relaxed);

        const double integral = integrate(grid, threads, [&](const std::vector<double>& nu) {
            double bracket = 1.0;
            for (int i = 0; i < n; ++i) bracket *= (lambda[i] - nu[i]) * (nu[i] - lambda[i + 1]);
            double log_cross = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j <= n; ++j) {
                    if (j == i || j == i + 1) continue;
                    log_cross += std::log(std::abs(lambda[j] - nu[i]));
                }
            const double cross_k = std::exp(k_ * log_cross);

            double node_val = 0.0;
            for (const auto& group : groups) {
                double coef = 0.0;
                for (const auto& [w, sign] : group.members) {
                    double denom = 1.0;
                    for (int j = 0; j < n; ++j) denom *= lambda[j] - nu[w(j)];
                    coef += sign / denom;
                }
                node_val += coef * evaluate(group.z, nu, inner_nodes, 1);
            }
            return node_val * bracket * cross_k;
        });
        return std::exp(log_pre) * integral;
    }

  private:
    void cache_rule(int n_nodes) {
        if (!rules_.count(n_nodes)) rules_.emplace(n_nodes, gauss_jacobi(n_nodes, k_ - 1.0, k_ - 1.0));
    }

    BoxGrid make_grid(const std::vector<double>& lambda, const std::vector<int>& nodes) const {
        const int dim = static_cast<int>(lambda.size()) - 1;
        BoxGrid grid;
        grid.dim = dim;
        grid.k = k_;
        grid.nodes.resize(dim);
        grid.weights.resize(dim);
        for (int i = 0; i < dim; ++i) {
            const auto it = rules_.find(nodes[i]);
            const JacobiRule& rule = it != rules_.end() ? it->second : throw_missing_rule();
            const double center = 0.5 * (lambda[i] + lambda[i + 1]);
            const double half = 0.5 * (lambda[i] - lambda[i + 1]);
            if (!(half > 0.0)) throw std::domain_error("lambda not strictly dominant");
            const double scale = std::pow(half, 2.0 * k_ - 1.0);
            grid.nodes[i].resize(rule.n);
            grid.weights[i].resize(rule.n);
            for (int m = 0; m < rule.n; ++m) {
                grid.nodes[i][m] = center + half * rule.nodes[m];
                grid.weights[i][m] = scale * rule.weights[m];
            }
        }
        return grid;
    }

    [[noreturn]] static const JacobiRule& throw_missing_rule() {
        throw std::logic_error("quadrature rule not precomputed");
    }

    double regular_weight(const std::vector<double>& lambda, const std::vector<double>& nu) const {
        const double e = k_ - 1.0;
        if (e == 0.0) return 1.0;
        const int n = static_cast<int>(nu.size());
        double logsum = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j <= n; ++j) {
                if (j == i || j == i + 1) continue;
                logsum += std::log(std::abs(lambda[j] - nu[i]));
            }
        return std::exp(e * logsum);
    }

    template <typename F>
    double integrate(const BoxGrid& grid, int threads, F&& f) {
        const std::size_t total = grid.total_points();
        const std::size_t chunks = std::min<std::size_t>(total, 64);
        std::vector<double> partial(chunks, 0.0);

        const auto run_chunk = [&](std::size_t c) {
            const std::size_t lo = c * total / chunks;
            const std::size_t hi = (c + 1) * total / chunks;
            CompensatedSum acc;
            std::vector<double> nu(grid.dim);
            for (std::size_t flat = lo; flat < hi; ++flat) {
                std::size_t rem = flat;
                double wgt = 1.0;
                for (int i = grid.dim - 1; i >= 0; --i) {
                    const std::size_t count = grid.nodes[i].size();
                    const std::size_t m = rem % count;
                    rem /= count;
                    nu[i] = grid.nodes[i][m];
                    wgt *= grid.weights[i][m];
                }
                acc.add(wgt * f(nu));
            }
            partial[c] = acc.value();
        };

        if (threads <= 1 || chunks == 1) {
            for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
        } else {
            std::atomic<std::size_t> next{0};
            const int workers = static_cast<int>(std::min<std::size_t>(threads, chunks));
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (int t = 0; t < workers; ++t) {
                pool.emplace_back([&] {
                    for (std::size_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1))
                        run_chunk(c);
                });
            }
            for (auto& t : pool) t.join();
        }

        // Partial sums combined in fixed chunk order: the result does not
        // depend on the worker count.
        CompensatedSum totalsum;
        for (double p : partial) totalsum.add(p);
        return totalsum.value();
    }

    double k_;
    const KernelConfig& cfg_;
    std::vector<double> log_c_;
    std::map<int, JacobiRule> rules_;
    std::atomic<std::uint64_t> evals_{0};
};

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

void check_eval_input(std::span<const double> x, std::span<const double> lambda,
                      const KernelConfig& cfg) {
    cfg.validate();
    if (x.size() != lambda.size()) throw std::invalid_argument("x and lambda arity mismatch");
    if (x.empty()) throw std::invalid_argument("empty input");
    const int n = static_cast<int>(lambda.size()) - 1;
    if (n > cfg.max_n) throw std::invalid_argument("rank exceeds configured maximum");
    for (double v : x)
        if (!std::isfinite(v)) throw std::invalid_argument("x not finite");
    if (lambda.size() > 1) DominantPoint(std::vector<double>(lambda.begin(), lambda.end()), cfg.min_gap);
}

EvalReport run_reduction(std::span<const double> x, std::span<const double> lambda,
                         const Multiplicity& k, const KernelConfig& cfg, bool compact) {
    const Timer timer;
    check_eval_input(x, lambda, cfg);
    const std::vector<double> xv(x.begin(), x.end());
    const std::vector<double> lv(lambda.begin(), lambda.end());
    const int n = static_cast<int>(lv.size()) - 1;

    Reducer reducer(k, cfg, n);
    const auto eval_at_scale = [&](int scale) {
        const std::vector<int> nodes = cfg.nodes_for_rank(n, scale);
        return compact ? reducer.evaluate_compact(xv, lv, nodes, cfg.parallel_width)
                       : reducer.evaluate(xv, lv, nodes, cfg.parallel_width);
    };

    EvalReport report;
    report.method = compact ? KernelMethod::compact : KernelMethod::reduce;
    if (n >= 1 && cfg.refine) {
        const double coarse = eval_at_scale(1);
        const double fine = eval_at_scale(2);
        report.value = fine;
        report.error_estimate = std::abs(fine - coarse);
    } else {
        report.value = eval_at_scale(1);
        report.error_estimate = 0.0;
    }
    report.evals = reducer.evals();
    report.flagged = report.error_estimate > cfg.tolerance;
    report.elapsed_ms = timer.ms();
    return report;
}

}  // namespace

EvalReport kernel_reduce(std::span<const double> x, std::span<const double> lambda,
                         const Multiplicity& k, const KernelConfig& cfg) {
    return run_reduction(x, lambda, k, cfg, false);
}

EvalReport kernel_compact(std::span<const double> x, std::span<const double> lambda,
                          const Multiplicity& k, const KernelConfig& cfg) {
    return run_reduction(x, lambda, k, cfg, true);
}

double kernel_a1_closed(std::span<const double> x, std::span<const double> lambda,
                        const Multiplicity& k, const KernelConfig& cfg) {
    cfg.validate();
    if (x.size() != 2 || lambda.size() != 2) throw std::invalid_argument("arity-2 inputs required");
    DominantPoint(std::vector<double>(lambda.begin(), lambda.end()), cfg.min_gap);

    const double kv = k.value();
    const double l1 = lambda[0], l2 = lambda[1];
    const double prefactor = std::exp(std::log(2.0) + std::lgamma(2.0 * kv) -
                                      2.0 * std::lgamma(kv) + x[1] * (l1 + l2) -
                                      2.0 * kv * std::log(l1 - l2));

    const JacobiRule rule = gauss_jacobi(cfg.nodes_for_dim(0), kv - 1.0, kv - 1.0);
    const double center = 0.5 * (l1 + l2);
    const double half = 0.5 * (l1 - l2);
    const double scale = std::pow(half, 2.0 * kv - 1.0);
    CompensatedSum acc;
    for (int m = 0; m < rule.n; ++m) {
        const double nu = center + half * rule.nodes[m];
        acc.add(scale * rule.weights[m] * std::exp((x[0] - x[1]) * nu) * (nu - l2));
    }
    return prefactor * acc.value();
}

EvalReport kernel_xu(double x, int j, std::span<const double> lambda, const Multiplicity& k,
                     const KernelConfig& cfg) {
    const Timer timer;
    cfg.validate();
    const int n = static_cast<int>(lambda.size()) - 1;
    if (n < 1) throw std::invalid_argument("lambda needs at least two coordinates");
    if (j < 0 || j > n) throw std::invalid_argument("coordinate axis index out of range");

    const double c = c_norm(n, k);
    std::uint64_t evals = 0;
    const auto eval_at = [&](int n_nodes) {
        const SimplexRule rule = simplex_rule(n, k, n_nodes);
        CompensatedSum acc;
        for (int m = 0; m < rule.point_count; ++m) {
            const auto t = rule.point(m);
            double dot = 0.0;
            for (int p = 0; p <= n; ++p) dot += lambda[p] * t[p];
            acc.add(rule.weights[m] * std::exp(x * dot) * t[j]);
            ++evals;
        }
        return c * acc.value();
    };

    EvalReport report;
    report.method = KernelMethod::xu;
    const int base = cfg.nodes_for_dim(0);
    if (cfg.refine) {
        const double coarse = eval_at(base);
        const double fine = eval_at(2 * base);
        report.value = fine;
        report.error_estimate = std::abs(fine - coarse);
    } else {
        report.value = eval_at(base);
    }
    report.evals = evals;
    report.flagged = report.error_estimate > cfg.tolerance;
    report.elapsed_ms = timer.ms();
    return report;
}

EvalReport kernel_symmetrized(std::span<const double> x, std::span<const double> lambda,
                              const Multiplicity& k, const KernelConfig& cfg) {
    const Timer timer;
    check_eval_input(x, lambda, cfg);
    const int n = static_cast<int>(lambda.size()) - 1;
    if (n > cfg.symmetrized_max_n)
        throw std::invalid_argument("symmetrized evaluation cost guard exceeded");

    const std::vector<double> xv(x.begin(), x.end());
    EvalReport report;
    report.method = KernelMethod::symmetrized;
    CompensatedSum value, error;
    int count = 0;
    for (const auto& w : symmetric_group(n + 1)) {
        const EvalReport part = kernel_reduce(w.apply(xv), lambda, k, cfg);
        value.add(part.value);
        error.add(part.error_estimate);
        report.evals += part.evals;
        ++count;
    }
    report.value = value.value() / count;
    report.error_estimate = error.value() / count;
    report.flagged = report.error_estimate > cfg.tolerance;
    report.elapsed_ms = timer.ms();
    return report;
}

double kernel_eval_sorted(std::span<const double> x, std::span<const double> mu,
                          const Multiplicity& k, const KernelConfig& cfg) {
    if (x.size() != mu.size()) throw std::invalid_argument("x and mu arity mismatch");
    const int d = static_cast<int>(mu.size());
    std::vector<int> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return mu[a] > mu[b]; });
    const Permutation v{order};
    const std::vector<double> xv(x.begin(), x.end());
    const std::vector<double> mv(mu.begin(), mu.end());
    return kernel_reduce(v.apply(xv), v.apply(mv), k, cfg).value;
}

std::vector<double> change_of_vars_t(std::span<const double> lambda, std::span<const double> nu) {
    const int n = static_cast<int>(nu.size());
    if (static_cast<int>(lambda.size()) != n + 1) throw std::invalid_argument("arity mismatch");
    std::vector<double> t(n + 1);
    for (int p = 0; p <= n; ++p) {
        double num = 1.0, den = 1.0;
        for (int i = 0; i < n; ++i) num *= nu[i] - lambda[p];
        for (int i = 0; i <= n; ++i)
            if (i != p) den *= lambda[i] - lambda[p];
        t[p] = num / den;
    }
    return t;
}

double jacobian_t(std::span<const double> lambda, std::span<const double> nu) {
    const int n = static_cast<int>(nu.size());
    if (static_cast<int>(lambda.size()) != n + 1) throw std::invalid_argument("arity mismatch");
    double num = 1.0, den = 1.0;
    for (int i = 0; i < n; ++i)
        for (int p = i + 1; p < n; ++p) num *= nu[i] - nu[p];
    for (int i = 0; i <= n; ++i)
        for (int p = i + 1; p <= n; ++p) den *= lambda[i] - lambda[p];
    return num / den;
}

NegativityWitness negativity_witness(std::span<const double> lambda) {
    if (lambda.size() != 4) throw std::invalid_argument("witness defined for arity-4 lambda");
    DominantPoint(std::vector<double>(lambda.begin(), lambda.end()), 0.0);

    NegativityWitness witness;
    witness.w = Permutation({1, 2, 0});  // the even 3-cycle
    witness.nu.resize(3);
    for (int i = 0; i < 3; ++i) witness.nu[i] = 0.5 * (lambda[i] + lambda[i + 1]);
    witness.product = 1.0;
    for (int i = 0; i < 3; ++i) witness.product *= lambda[i] - witness.nu[witness.w(i)];
    return witness;
}

}  // namespace dunklkit
