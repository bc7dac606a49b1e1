#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dunklkit/dunkl.hpp"
#include "dunklkit/kernel.hpp"
#include "dunklkit/polynomial.hpp"

namespace dunklkit {

// Degree-by-degree monomial-basis representation of the intertwining
// operator: for every degree m <= max_degree a linear map on the span of
// the degree-m monomials, pinned down by requiring that every Dunkl
// operator applied to an image equals the image of the matching partial
// derivative. Exact tables store rational images (small degrees); floating
// tables store dense per-degree matrices (deep series truncations).
class IntertwineTable {
  public:
    enum class Mode { exact, floating };

    static IntertwineTable build_exact(int arity, const Multiplicity& k, int max_degree);
    static IntertwineTable build_float(int arity, const Multiplicity& k, int max_degree);

    Mode mode() const { return mode_; }
    int arity() const { return arity_; }
    int max_degree() const { return max_degree_; }
    const Multiplicity& multiplicity() const { return k_; }

    // image of the idx-th degree-m basis monomial (exact mode)
    const Polynomial& image(int m, int idx) const;
    // per-degree matrix, column j = image coordinates of basis monomial j
    const Eigen::MatrixXd& matrix(int m) const;

  private:
    IntertwineTable(Mode mode, int arity, Multiplicity k, int max_degree);

    Mode mode_;
    int arity_;
    Multiplicity k_;
    int max_degree_;
    std::vector<std::vector<Polynomial>> images_;  // [degree][basis index]
    std::vector<Eigen::MatrixXd> matrices_;        // [degree]
};

// Default series depth per arity: deep enough for truncation error below
// 1e-8 at |X||lambda| <= 2 while the per-degree solves stay fast.
int default_series_degree(int arity);

// build_exact below an arity-dependent size threshold, build_float above.
IntertwineTable build_intertwine(int arity, const Multiplicity& k, int max_degree);

// Applies the operator per homogeneous component. The exact overload
// requires an exact-mode table.
Polynomial apply_intertwine(const IntertwineTable& table, const Polynomial& p);
RealPolynomial apply_intertwine_real(const IntertwineTable& table, const RealPolynomial& p);

// Truncated series for the kernel: sum over degrees m <= M of the
// intertwined power <X,.>^m evaluated at lambda, divided by m!. The
// error_estimate is the tail bound sum_{m>M} (|X||lambda|)^m / m!.
// Tables are cached per (arity, k, M) and shared across calls.
EvalReport kernel_series(std::span<const double> x, std::span<const double> lambda,
                         const Multiplicity& k, int series_order, const KernelConfig& cfg = {});

// f(nu_1..nu_n, sum(lambda) - sum(nu)) as a handle of one lower arity.
FunctionHandle restrict_f_lambda(const FunctionHandle& f, std::span<const double> lambda);
// Same substitution on polynomials, exact in the coefficients.
RealPolynomial poly_restrict(const RealPolynomial& f, std::span<const double> lambda);

// The intertwining operator evaluated through the rank reduction: an
// alternating-sum integral over the box of the lower-rank operator applied
// to the restricted integrand. The polynomial overload applies the
// lower-rank operator through a table; the handle overload recurses.
EvalReport intertwine_reduction(const RealPolynomial& f, std::span<const double> lambda,
                                const Multiplicity& k, const KernelConfig& cfg = {});
EvalReport intertwine_reduction(const FunctionHandle& f, std::span<const double> lambda,
                                const Multiplicity& k, const KernelConfig& cfg = {});

// V_k of t -> f(x * t) composed with a coordinate functional, as a single
// simplex integral against the Dirichlet weight.
EvalReport xu_univariate(const std::function<double(double)>& f, int j,
                         std::span<const double> lambda, const Multiplicity& k,
                         const KernelConfig& cfg = {});

}  // namespace dunklkit
