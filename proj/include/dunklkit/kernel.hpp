#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dunklkit/dunkl.hpp"
#include "dunklkit/permutation.hpp"
#include "dunklkit/quadrature.hpp"

namespace dunklkit {

enum class KernelMethod { reduce, series, xu, a1_closed, compact, symmetrized };

std::string_view method_name(KernelMethod m);
std::optional<KernelMethod> parse_method(std::string_view name);

struct KernelConfig {
    // nodes_per_level[i] = node count for dimension i of every box grid; a
    // rank-m integral uses the first m entries (last entry repeats if m
    // exceeds the list). Cost of a rank-n evaluation is roughly
    // n! * prod_{l<=n} N_l * cost(n-1).
    std::vector<int> nodes_per_level{24, 16, 12};
    int series_order = 20;
    double min_gap = 1e-6;  // relative to max|lambda_i|
    double tolerance = 1e-6;
    KernelMethod mode = KernelMethod::reduce;
    int parallel_width = 1;  // worker threads for the top-level quadrature loop
    int max_n = 3;
    int symmetrized_max_n = 2;
    // Inner recursive calls absorb the e^{-x_{n+1} sum(nu)} factor into a
    // shifted lower-rank argument; setting false keeps the factor in the
    // integrand instead. Both are exact rewrites of the same formula.
    bool shift_inner = true;
    // Error estimate by re-running with the top-level node counts doubled;
    // the refined value is the one returned.
    bool refine = true;

    void validate() const;
    int nodes_for_dim(int i) const;
    std::vector<int> nodes_for_rank(int rank, int scale = 1) const;
};

// Strictly decreasing coordinate vector; the admissible second argument of
// the kernel. The gap threshold is relative: min_gap_rel * max|coord|.
class DominantPoint {
  public:
    DominantPoint(std::vector<double> coords, double min_gap_rel);

    const std::vector<double>& coords() const { return coords_; }
    int arity() const { return static_cast<int>(coords_.size()); }

  private:
    std::vector<double> coords_;
};

struct EvalReport {
    double value = 0.0;
    KernelMethod method = KernelMethod::reduce;
    double error_estimate = 0.0;
    std::uint64_t evals = 0;  // integrand evaluations across all levels
    double elapsed_ms = 0.0;
    bool flagged = false;  // error_estimate exceeded cfg.tolerance
};

// (n+1) Gamma((n+1)k) / Gamma(k)^(n+1), in log-Gamma space.
double c_norm(int n, const Multiplicity& k);

// Q(lambda, nu) = prod_r [ prod_{s>r, s<=n} (lambda_r - nu_s) *
//                          prod_{s<r} (nu_s - lambda_r) ].
double q_factor(std::span<const double> lambda, std::span<const double> nu);

// W_k(lambda, nu) with the two per-dimension endpoint factors
// (lambda_i - nu_i)^(k-1) (nu_i - lambda_{i+1})^(k-1) divided out (the box
// grid absorbs those); what remains is the smooth positive cross-factor
// product prod_i prod_{j not in {i,i+1}} |lambda_j - nu_i|^(k-1).
double w_weight_regular(std::span<const double> lambda, std::span<const double> nu,
                        const Multiplicity& k);

// sum_{w in S_n} sign(w) Q(lambda, w nu), by direct enumeration.
double alternating_q_sum(std::span<const double> lambda, std::span<const double> nu);

// Its closed form prod_{i<j<=n} (lambda_i-lambda_j)(nu_i-nu_j) *
// prod_r (nu_r - lambda_{n+1}); the two agree identically.
double alternating_q_sum_closed(std::span<const double> lambda, std::span<const double> nu);

// The recursive reduction evaluator for E_k(X, lambda): rank n reduces to an
// alternating sum of rank n-1 evaluations integrated over the box
// prod [lambda_{i+1}, lambda_i]; rank 0 (arity 1) is E(x, l) = e^{xl}.
// lambda must be strictly decreasing; X is unrestricted.
EvalReport kernel_reduce(std::span<const double> x, std::span<const double> lambda,
                         const Multiplicity& k, const KernelConfig& cfg = {});

// Closed-form arity-2 kernel: a single Gauss-Jacobi integral of
// e^{(x1-x2) nu} (nu - lambda_2) against [(lambda_1-nu)(nu-lambda_2)]^(k-1),
// with prefactor 2 Gamma(2k) Gamma(k)^-2 e^{x2 (l1+l2)} (l1-l2)^(-2k).
double kernel_a1_closed(std::span<const double> x, std::span<const double> lambda,
                        const Multiplicity& k, const KernelConfig& cfg = {});

// Same value as kernel_reduce through the rewritten integrand
// sum_w sign(w) E~(X'-x_{n+1}, w nu) / prod_j (lambda_j - nu_{w(j)}) with
// weight W_{k+1}; exercised as an independent discretization.
EvalReport kernel_compact(std::span<const double> x, std::span<const double> lambda,
                          const Multiplicity& k, const KernelConfig& cfg = {});

// E_k(x e_j, lambda) as a single simplex integral
// c_{n,k} Int_sigma e^{+x (lambda . t)} t_j (prod t)^(k-1) dt, j 0-based.
// The exponent sign is +; it is cross-validated against kernel_a1_closed.
EvalReport kernel_xu(double x, int j, std::span<const double> lambda, const Multiplicity& k,
                     const KernelConfig& cfg = {});

// Weyl-invariant average (n+1)!^{-1} sum_w E_k(w X, lambda); guarded by
// cfg.symmetrized_max_n since the cost is (n+1)! reduce calls.
EvalReport kernel_symmetrized(std::span<const double> x, std::span<const double> lambda,
                              const Multiplicity& k, const KernelConfig& cfg = {});

// E_k(X, mu) for mu with pairwise distinct but unordered coordinates:
// sorts mu into decreasing order and applies the matching permutation to X
// (simultaneous-permutation invariance). Explicit helper, never implicit.
double kernel_eval_sorted(std::span<const double> x, std::span<const double> mu,
                          const Multiplicity& k, const KernelConfig& cfg = {});

// Barycentric map from the box onto the simplex:
// t_p = prod_i (nu_i - lambda_p) / prod_{i != p} (lambda_i - lambda_p),
// returning all n+1 components (sum = 1, each >= 0 for nu in the box).
std::vector<double> change_of_vars_t(std::span<const double> lambda, std::span<const double> nu);

// Determinant of d(t_1..t_n)/d(nu_1..nu_n):
// prod_{i<p<=n} (nu_i - nu_p) / prod_{i<p<=n+1} (lambda_i - lambda_p).
double jacobian_t(std::span<const double> lambda, std::span<const double> nu);

// For arity-4 lambda: the even 3-cycle w and an interior point nu (the box
// center) where prod_i (lambda_i - nu_{w(i)}) < 0, showing the alternating
// sum has genuinely negative terms.
struct NegativityWitness {
    Permutation w;
    std::vector<double> nu;
    double product = 0.0;
};

NegativityWitness negativity_witness(std::span<const double> lambda);

}  // namespace dunklkit
