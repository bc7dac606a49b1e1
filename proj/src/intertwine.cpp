#include "dunklkit/intertwine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "dunklkit/quadrature.hpp"
#include "dunklkit/summation.hpp"

namespace dunklkit {

namespace {

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

struct DegreeBasis {
    std::vector<MultiIndex> monomials;

    int size() const { return static_cast<int>(monomials.size()); }
    int index_of(const MultiIndex& mi) const {
        const auto it = std::lower_bound(monomials.begin(), monomials.end(), mi);
        if (it == monomials.end() || !(*it == mi))
            throw std::logic_error("monomial outside degree basis");
        return static_cast<int>(it - monomials.begin());
    }
};

DegreeBasis degree_basis(int arity, int m) { return {monomials_of_degree(arity, m)}; }

// Gauss-Jordan over the rationals for the stacked (all operators) system;
// every column must get a pivot and leftover rows must be consistent.
std::vector<std::vector<Rational>> solve_exact_system(std::vector<std::vector<Rational>> a,
                                                      std::vector<std::vector<Rational>> b,
                                                      int unknowns, const Multiplicity& k,
                                                      int degree) {
    const int rows = static_cast<int>(a.size());
    const int rhs = rows > 0 ? static_cast<int>(b[0].size()) : 0;
    const auto fail = [&](const char* what) {
        std::ostringstream msg;
        msg << what << " solving the intertwining system at k = " << to_string(k.exact())
            << ", degree " << degree;
        throw std::runtime_error(msg.str());
    };

    std::vector<int> pivot_row_of(unknowns, -1);
    int next_row = 0;
    for (int col = 0; col < unknowns; ++col) {
        int pivot = -1;
        for (int r = next_row; r < rows; ++r)
            if (sgn(a[r][col]) != 0) {
                pivot = r;
                break;
            }
        if (pivot < 0) fail("singular system");
        std::swap(a[pivot], a[next_row]);
        std::swap(b[pivot], b[next_row]);
        const Rational inv = Rational(1) / a[next_row][col];
        for (int c = col; c < unknowns; ++c) a[next_row][c] *= inv;
        for (int c = 0; c < rhs; ++c) b[next_row][c] *= inv;
        for (int r = 0; r < rows; ++r) {
            if (r == next_row || sgn(a[r][col]) == 0) continue;
            const Rational f = a[r][col];
            for (int c = col; c < unknowns; ++c) a[r][c] -= f * a[next_row][c];
            for (int c = 0; c < rhs; ++c) b[r][c] -= f * b[next_row][c];
        }
        pivot_row_of[col] = next_row;
        ++next_row;
    }
    for (int r = next_row; r < rows; ++r)
        for (int c = 0; c < rhs; ++c)
            if (sgn(b[r][c]) != 0) fail("inconsistent system");

    std::vector<std::vector<Rational>> x(unknowns, std::vector<Rational>(rhs, Rational(0)));
    for (int col = 0; col < unknowns; ++col) x[col] = b[pivot_row_of[col]];
    return x;
}

// Coordinates of T_j applied to the degree-m basis monomial `alpha`,
// written in the degree-(m-1) basis. The divided difference of a monomial
// x_j^a x_i^b is the standard geometric-sum expansion.
void add_dunkl_column(Eigen::MatrixXd& a, int col, const MultiIndex& alpha, int j, double k,
                      const DegreeBasis& lower) {
    const int arity = alpha.arity();
    MultiIndex scratch = alpha;
    if (alpha.exponents[j] > 0) {
        scratch.exponents[j] -= 1;
        a(lower.index_of(scratch), col) += alpha.exponents[j];
        scratch.exponents[j] += 1;
    }
    for (int i = 0; i < arity; ++i) {
        if (i == j) continue;
        const int ea = alpha.exponents[j];
        const int eb = alpha.exponents[i];
        if (ea == eb) continue;
        const double sign = ea > eb ? 1.0 : -1.0;
        const int lo = std::min(ea, eb);
        const int hi = std::max(ea, eb);
        for (int u = lo; u < hi; ++u) {
            scratch.exponents[j] = u;
            scratch.exponents[i] = ea + eb - 1 - u;
            a(lower.index_of(scratch), col) += sign * k;
        }
        scratch.exponents[j] = ea;
        scratch.exponents[i] = eb;
    }
}

double tail_bound(double r, int order) {
    // sum_{m > order} r^m / m!
    double term = 1.0;
    for (int m = 1; m <= order + 1; ++m) term *= r / m;
    CompensatedSum tail;
    for (int m = order + 1; m < order + 400; ++m) {
        tail.add(term);
        term *= r / (m + 1);
        if (term < 1e-300) break;
    }
    return tail.value();
}

double vec_sum(std::span<const double> v) {
    CompensatedSum s;
    for (double x : v) s.add(x);
    return s.value();
}

}  // namespace

IntertwineTable::IntertwineTable(Mode mode, int arity, Multiplicity k, int max_degree)
    : mode_(mode), arity_(arity), k_(std::move(k)), max_degree_(max_degree) {
    if (arity < 1) throw std::invalid_argument("arity must be >= 1");
    if (max_degree < 0) throw std::invalid_argument("max_degree must be >= 0");
}

const Polynomial& IntertwineTable::image(int m, int idx) const {
    if (mode_ != Mode::exact) throw std::logic_error("exact images not stored in floating mode");
    return images_.at(m).at(idx);
}

const Eigen::MatrixXd& IntertwineTable::matrix(int m) const {
    if (mode_ != Mode::floating) throw std::logic_error("matrices not stored in exact mode");
    return matrices_.at(m);
}

IntertwineTable IntertwineTable::build_exact(int arity, const Multiplicity& k, int max_degree) {
    IntertwineTable table(Mode::exact, arity, k, max_degree);
    table.images_.resize(max_degree + 1);
    table.images_[0] = {Polynomial::constant(arity, Rational(1))};

    for (int m = 1; m <= max_degree; ++m) {
        const DegreeBasis basis = degree_basis(arity, m);
        const DegreeBasis lower = degree_basis(arity, m - 1);
        const int unknowns = basis.size();
        const int block = lower.size();
        const int rows = arity * block;

        std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(unknowns, Rational(0)));
        std::vector<std::vector<Rational>> b(rows, std::vector<Rational>(unknowns, Rational(0)));
        for (int col = 0; col < unknowns; ++col) {
            const MultiIndex& alpha = basis.monomials[col];
            const Polynomial mono = Polynomial::monomial(alpha, Rational(1));
            for (int j = 0; j < arity; ++j) {
                const Polynomial tj = dunkl_apply_poly(mono, j, k);
                for (const auto& term : tj.terms())
                    a[j * block + lower.index_of(term.first)][col] += term.second;
                if (alpha.exponents[j] > 0) {
                    MultiIndex dalpha = alpha;
                    dalpha.exponents[j] -= 1;
                    const Polynomial& lower_image =
                        table.images_[m - 1][lower.index_of(dalpha)];
                    for (const auto& term : lower_image.terms())
                        b[j * block + lower.index_of(term.first)][col] +=
                            Rational(alpha.exponents[j]) * term.second;
                }
            }
        }

        const auto x = solve_exact_system(std::move(a), std::move(b), unknowns, k, m);
        table.images_[m].resize(unknowns, Polynomial::zero(arity));
        for (int col = 0; col < unknowns; ++col) {
            Polynomial img = Polynomial::zero(arity);
            for (int row = 0; row < unknowns; ++row) {
                if (sgn(x[row][col]) == 0) continue;
                img += Polynomial::monomial(basis.monomials[row], x[row][col]);
            }
            table.images_[m][col] = img;
        }

        // the defining relation itself, asserted with zero residual
        for (int col = 0; col < unknowns; ++col) {
            const MultiIndex& alpha = basis.monomials[col];
            for (int j = 0; j < arity; ++j) {
                Polynomial rhs = Polynomial::zero(arity);
                if (alpha.exponents[j] > 0) {
                    MultiIndex dalpha = alpha;
                    dalpha.exponents[j] -= 1;
                    rhs = table.images_[m - 1][lower.index_of(dalpha)] *
                          Rational(alpha.exponents[j]);
                }
                if ((dunkl_apply_poly(table.images_[m][col], j, k) - rhs).term_count() != 0) {
                    std::ostringstream msg;
                    msg << "defining relation violated at k = " << to_string(k.exact())
                        << ", degree " << m;
                    throw std::runtime_error(msg.str());
                }
            }
        }
    }
    return table;
}

IntertwineTable IntertwineTable::build_float(int arity, const Multiplicity& k, int max_degree) {
    IntertwineTable table(Mode::floating, arity, k, max_degree);
    table.matrices_.resize(max_degree + 1);
    table.matrices_[0] = Eigen::MatrixXd::Ones(1, 1);
    const double kv = k.value();

    for (int m = 1; m <= max_degree; ++m) {
        const DegreeBasis basis = degree_basis(arity, m);
        const DegreeBasis lower = degree_basis(arity, m - 1);
        const int unknowns = basis.size();
        const int block = lower.size();

        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(arity * block, unknowns);
        Eigen::MatrixXd b = Eigen::MatrixXd::Zero(arity * block, unknowns);
        for (int col = 0; col < unknowns; ++col) {
            const MultiIndex& alpha = basis.monomials[col];
            for (int j = 0; j < arity; ++j) {
                Eigen::MatrixXd ablock = Eigen::MatrixXd::Zero(block, 1);
                add_dunkl_column(ablock, 0, alpha, j, kv, lower);
                a.block(j * block, col, block, 1) = ablock;
                if (alpha.exponents[j] > 0) {
                    MultiIndex dalpha = alpha;
                    dalpha.exponents[j] -= 1;
                    b.block(j * block, col, block, 1) =
                        alpha.exponents[j] * table.matrices_[m - 1].col(lower.index_of(dalpha));
                }
            }
        }

        const Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
        table.matrices_[m] = qr.solve(b);
        const double residual = (a * table.matrices_[m] - b).cwiseAbs().maxCoeff();
        if (!(residual <= 1e-12)) {
            std::ostringstream msg;
            msg << "intertwining solve residual " << residual << " at k = "
                << to_string(k.exact()) << ", degree " << m;
            throw std::runtime_error(msg.str());
        }
    }
    return table;
}

int default_series_degree(int arity) {
    if (arity <= 2) return 30;
    if (arity == 3) return 20;
    return 12;
}

IntertwineTable build_intertwine(int arity, const Multiplicity& k, int max_degree) {
    const std::size_t top = monomials_of_degree(arity, max_degree).size();
    if (top <= 50) return IntertwineTable::build_exact(arity, k, max_degree);
    return IntertwineTable::build_float(arity, k, max_degree);
}

Polynomial apply_intertwine(const IntertwineTable& table, const Polynomial& p) {
    if (p.arity() != table.arity()) throw std::invalid_argument("arity mismatch");
    if (p.degree() > table.max_degree()) throw std::invalid_argument("degree exceeds table");
    Polynomial out = Polynomial::zero(p.arity());
    for (const auto& term : p.terms()) {
        const int m = term.first.degree();
        const DegreeBasis basis = degree_basis(p.arity(), m);
        out += table.image(m, basis.index_of(term.first)) * term.second;
    }
    return out;
}

RealPolynomial apply_intertwine_real(const IntertwineTable& table, const RealPolynomial& p) {
    if (p.arity() != table.arity()) throw std::invalid_argument("arity mismatch");
    if (p.degree() > table.max_degree()) throw std::invalid_argument("degree exceeds table");
    if (table.mode() == IntertwineTable::Mode::exact) {
        RealPolynomial out = RealPolynomial::zero(p.arity());
        for (const auto& term : p.terms()) {
            const int m = term.first.degree();
            const DegreeBasis basis = degree_basis(p.arity(), m);
            out += to_real(table.image(m, basis.index_of(term.first))) * term.second;
        }
        return out;
    }
    RealPolynomial out = RealPolynomial::zero(p.arity());
    std::map<int, std::vector<double>> coords_by_degree;
    for (const auto& term : p.terms()) {
        const int m = term.first.degree();
        auto& coords = coords_by_degree[m];
        const DegreeBasis basis = degree_basis(p.arity(), m);
        coords.resize(basis.size(), 0.0);
        coords[basis.index_of(term.first)] += term.second;
    }
    for (const auto& [m, coords] : coords_by_degree) {
        const DegreeBasis basis = degree_basis(p.arity(), m);
        const Eigen::VectorXd c =
            Eigen::Map<const Eigen::VectorXd>(coords.data(), coords.size());
        const Eigen::VectorXd image = table.matrix(m) * c;
        for (int idx = 0; idx < basis.size(); ++idx) {
            if (image[idx] == 0.0) continue;
            out += RealPolynomial::monomial(basis.monomials[idx], image[idx]);
        }
    }
    return out;
}

namespace {

std::shared_ptr<const IntertwineTable> series_table(int arity, const Multiplicity& k, int order) {
    struct Key {
        int arity;
        std::string k;
        int order;
        bool operator<(const Key& o) const {
            return std::tie(arity, k, order) < std::tie(o.arity, o.k, o.order);
        }
    };
    static std::mutex mutex;
    static std::map<Key, std::shared_ptr<const IntertwineTable>> cache;
    const Key key{arity, to_string(k.exact()), order};
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it == cache.end()) {
        it = cache
                 .emplace(key, std::make_shared<const IntertwineTable>(
                                   IntertwineTable::build_float(arity, k, order)))
                 .first;
    }
    return it->second;
}

}  // namespace

EvalReport kernel_series(std::span<const double> x, std::span<const double> lambda,
                         const Multiplicity& k, int series_order, const KernelConfig& cfg) {
    const Timer timer;
    cfg.validate();
    if (x.size() != lambda.size()) throw std::invalid_argument("x and lambda arity mismatch");
    if (x.empty()) throw std::invalid_argument("empty input");
    if (series_order < 0) throw std::invalid_argument("series order must be >= 0");
    const int arity = static_cast<int>(x.size());

    const auto table = series_table(arity, k, series_order);

    EvalReport report;
    report.method = KernelMethod::series;
    CompensatedSum value;
    value.add(1.0);
    report.evals = 1;
    for (int m = 1; m <= series_order; ++m) {
        const DegreeBasis basis = degree_basis(arity, m);
        Eigen::VectorXd coords(basis.size());
        Eigen::VectorXd monomial_values(basis.size());
        for (int idx = 0; idx < basis.size(); ++idx) {
            const MultiIndex& alpha = basis.monomials[idx];
            double c = 1.0;  // prod x_i^{a_i} / a_i!
            double v = 1.0;  // prod lambda_i^{a_i}
            for (int i = 0; i < arity; ++i) {
                for (int t = 1; t <= alpha.exponents[i]; ++t) {
                    c *= x[i] / t;
                    v *= lambda[i];
                }
            }
            coords[idx] = c;
            monomial_values[idx] = v;
        }
        value.add(monomial_values.dot(table->matrix(m) * coords));
        report.evals += basis.size();
    }

    double xnorm = 0.0, lnorm = 0.0;
    for (double v : x) xnorm += v * v;
    for (double v : lambda) lnorm += v * v;
    report.value = value.value();
    report.error_estimate = tail_bound(std::sqrt(xnorm * lnorm), series_order);
    report.flagged = report.error_estimate > cfg.tolerance;
    report.elapsed_ms = timer.ms();
    return report;
}

FunctionHandle restrict_f_lambda(const FunctionHandle& f, std::span<const double> lambda) {
    if (f.arity != static_cast<int>(lambda.size()))
        throw std::invalid_argument("handle arity must match lambda");
    if (f.arity < 2) throw std::invalid_argument("restriction needs arity >= 2");
    const double total = vec_sum(lambda);
    const int n = f.arity - 1;
    auto inner = f.f;
    return FunctionHandle{n, [inner, total, n](const std::vector<double>& nu) {
                              std::vector<double> full(nu.begin(), nu.end());
                              full.push_back(total - std::accumulate(nu.begin(), nu.end(), 0.0));
                              return inner(full);
                          }};
}

RealPolynomial poly_restrict(const RealPolynomial& f, std::span<const double> lambda) {
    if (f.arity() != static_cast<int>(lambda.size()))
        throw std::invalid_argument("polynomial arity must match lambda");
    if (f.arity() < 2) throw std::invalid_argument("restriction needs arity >= 2");
    const int n = f.arity() - 1;
    const double total = vec_sum(lambda);

    RealPolynomial last = RealPolynomial::constant(n, total);
    for (int i = 0; i < n; ++i) last -= RealPolynomial::variable(n, i);
    std::vector<RealPolynomial> last_powers{RealPolynomial::constant(n, 1.0)};

    RealPolynomial out = RealPolynomial::zero(n);
    for (const auto& term : f.terms()) {
        const int e = term.first.exponents[n];
        while (static_cast<int>(last_powers.size()) <= e)
            last_powers.push_back(last_powers.back() * last);
        MultiIndex head;
        head.exponents.assign(term.first.exponents.begin(), term.first.exponents.end() - 1);
        out += RealPolynomial::monomial(head, term.second) * last_powers[e];
    }
    return out;
}

namespace {

// Shared alternating-sum box integral of Eq-style reductions of the
// intertwining operator: integrates
//   sum_w sign(w) q(lambda, w nu) * inner(w, nu)
// against the absorbed interlacing weight and normalizes.
EvalReport vk_box_reduce(std::span<const double> lambda, const Multiplicity& k,
                         const KernelConfig& cfg,
                         const std::function<double(const Permutation&,
                                                    const std::vector<double>&)>& inner) {
    const Timer timer;
    cfg.validate();
    const int n = static_cast<int>(lambda.size()) - 1;
    const DominantPoint checked(std::vector<double>(lambda.begin(), lambda.end()), cfg.min_gap);
    (void)checked;

    const double kv = k.value();
    double log_gaps = 0.0;
    for (int i = 0; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) log_gaps += std::log(lambda[i] - lambda[j]);
    const double prefactor = std::exp(std::log(n + 1.0) + std::lgamma((n + 1) * kv) -
                                      (n + 1) * std::lgamma(kv) - 2.0 * kv * log_gaps);

    const auto perms = symmetric_group(n);
    std::uint64_t evals = 0;
    const auto pass = [&](int scale) {
        const std::vector<int> counts = cfg.nodes_for_rank(n, scale);
        const BoxGrid grid = box_grid(lambda, kv, counts, 0.0);
        CompensatedSum acc;
        std::vector<double> nu(n);
        const std::size_t total = grid.total_points();
        for (std::size_t flat = 0; flat < total; ++flat) {
            std::size_t rem = flat;
            double wgt = 1.0;
            for (int i = n - 1; i >= 0; --i) {
                const std::size_t count = grid.nodes[i].size();
                nu[i] = grid.nodes[i][rem % count];
                wgt *= grid.weights[i][rem % count];
                rem /= count;
            }
            double regular = 1.0;
            if (kv != 1.0) {
                double logsum = 0.0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j <= n; ++j) {
                        if (j == i || j == i + 1) continue;
                        logsum += std::log(std::abs(lambda[j] - nu[i]));
                    }
                regular = std::exp((kv - 1.0) * logsum);
            }
            double node_val = 0.0;
            std::vector<double> permuted(n);
            for (const auto& w : perms) {
                for (int s = 0; s < n; ++s) permuted[s] = nu[w(s)];
                node_val += w.sign() * q_factor(lambda, permuted) * inner(w, nu);
                ++evals;
            }
            acc.add(wgt * regular * node_val);
        }
        return prefactor * acc.value();
    };

    EvalReport report;
    report.method = KernelMethod::reduce;
    if (cfg.refine) {
        const double coarse = pass(1);
        const double fine = pass(2);
        report.value = fine;
        report.error_estimate = std::abs(fine - coarse);
    } else {
        report.value = pass(1);
        report.error_estimate = 0.0;
    }
    report.evals = evals;
    report.flagged = report.error_estimate > cfg.tolerance;
    report.elapsed_ms = timer.ms();
    return report;
}

}  // namespace

EvalReport intertwine_reduction(const RealPolynomial& f, std::span<const double> lambda,
                                const Multiplicity& k, const KernelConfig& cfg) {
    if (f.arity() != static_cast<int>(lambda.size()))
        throw std::invalid_argument("polynomial arity must match lambda");
    const int n = f.arity() - 1;
    if (n == 0) {
        EvalReport report;
        report.method = KernelMethod::reduce;
        report.value = f.evaluate(std::vector<double>(lambda.begin(), lambda.end()));
        report.evals = 1;
        return report;
    }

    const RealPolynomial restricted = poly_restrict(f, lambda);
    const IntertwineTable table = build_intertwine(n, k, std::max(restricted.degree(), 0));
    const RealPolynomial g = apply_intertwine_real(table, restricted);

    return vk_box_reduce(lambda, k, cfg,
                         [&](const Permutation& w, const std::vector<double>& nu) {
                             return g.evaluate(w.apply(nu));
                         });
}

EvalReport intertwine_reduction(const FunctionHandle& f, std::span<const double> lambda,
                                const Multiplicity& k, const KernelConfig& cfg) {
    if (f.arity != static_cast<int>(lambda.size()))
        throw std::invalid_argument("handle arity must match lambda");
    const int n = f.arity - 1;
    if (n == 0) {
        EvalReport report;
        report.method = KernelMethod::reduce;
        report.value = f.f(std::vector<double>(lambda.begin(), lambda.end()));
        report.evals = 1;
        return report;
    }

    const FunctionHandle restricted = restrict_f_lambda(f, lambda);
    KernelConfig inner_cfg = cfg;
    inner_cfg.refine = false;
    // inner evaluations sit at interior interlacing points, strictly
    // decreasing by construction; the relative-gap guard is bypassed but
    // box_grid still rejects actual ties
    inner_cfg.min_gap = std::numeric_limits<double>::min();

    return vk_box_reduce(
        lambda, k, cfg, [&](const Permutation& w, const std::vector<double>& nu) {
            // (V g)(w nu) = (V g_w)(nu) with g_w = g composed with w
            FunctionHandle composed{n, [&restricted, &w](const std::vector<double>& y) {
                                        return restricted.f(w.apply(y));
                                    }};
            return intertwine_reduction(composed, nu, k, inner_cfg).value;
        });
}

EvalReport xu_univariate(const std::function<double(double)>& f, int j,
                         std::span<const double> lambda, const Multiplicity& k,
                         const KernelConfig& cfg) {
    const Timer timer;
    cfg.validate();
    const int n = static_cast<int>(lambda.size()) - 1;
    if (n < 1) throw std::invalid_argument("lambda needs at least two coordinates");
    if (j < 0 || j > n) throw std::invalid_argument("coordinate axis index out of range");

    const double c = c_norm(n, k);
    std::uint64_t evals = 0;
    const auto pass = [&](int n_nodes) {
        const SimplexRule rule = simplex_rule(n, k, n_nodes);
        CompensatedSum acc;
        for (int m = 0; m < rule.point_count; ++m) {
            const auto t = rule.point(m);
            double dot = 0.0;
            for (int p = 0; p <= n; ++p) dot += lambda[p] * t[p];
            acc.add(rule.weights[m] * f(dot) * t[j]);
            ++evals;
        }
        return c * acc.value();
    };

    EvalReport report;
    report.method = KernelMethod::xu;
    const int base = cfg.nodes_for_dim(0);
    if (cfg.refine) {
        const double coarse = pass(base);
        const double fine = pass(2 * base);
        report.value = fine;
        report.error_estimate = std::abs(fine - coarse);
    } else {
        report.value = pass(base);
    }
    report.evals = evals;
    report.flagged = report.error_estimate > cfg.tolerance;
    report.elapsed_ms = timer.ms();
    return report;
}

}  // namespace dunklkit
