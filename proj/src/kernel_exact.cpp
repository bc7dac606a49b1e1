#include "dunklkit/kernel_exact.hpp"

#include <numeric>
#include <stdexcept>

#include "dunklkit/algebra.hpp"

namespace dunklkit {

namespace {

Polynomial linear_diff(int arity, int a, int b) {
    return Polynomial::variable(arity, a) - Polynomial::variable(arity, b);
}

Permutation extend_nu(const Permutation& w, int n) {
    std::vector<int> images(2 * n + 1);
    std::iota(images.begin(), images.begin() + n + 1, 0);
    for (int s = 0; s < n; ++s) images[n + 1 + s] = n + 1 + w(s);
    return Permutation(images);
}

Permutation extend_lambda_head(const Permutation& w, int n) {
    std::vector<int> images(2 * n + 1);
    for (int r = 0; r < n; ++r) images[r] = w(r);
    std::iota(images.begin() + n, images.end(), n);
    return Permutation(images);
}

std::vector<std::pair<int, int>> w_base_factors(int n) {
    std::vector<std::pair<int, int>> factors;
    for (int r = 0; r <= n; ++r) {
        for (int s = r; s < n; ++s) factors.emplace_back(r, n + 1 + s);
        for (int s = 0; s < r; ++s) factors.emplace_back(n + 1 + s, r);
    }
    return factors;
}

// One linear factor at a time keeps the intermediate term counts (and the
// multiply cost) proportional to the collected result size.
Polynomial multiply_factors(Polynomial p, const std::vector<std::pair<int, int>>& factors,
                            int copies) {
    const int arity = p.arity();
    for (int c = 0; c < copies; ++c)
        for (const auto& [a, b] : factors) p = p * linear_diff(arity, a, b);
    return p;
}

}  // namespace

Polynomial q_cofactor_poly(int n) {
    if (n < 1) throw std::invalid_argument("rank must be >= 1");
    const int arity = 2 * n + 1;
    Polynomial q = Polynomial::constant(arity, Rational(1));
    for (int r = 0; r <= n; ++r) {
        for (int s = r + 1; s < n; ++s) q = q * linear_diff(arity, r, n + 1 + s);
        for (int s = 0; s < r; ++s) q = q * linear_diff(arity, n + 1 + s, r);
    }
    return q;
}

Polynomial w_base_poly(int n) {
    if (n < 1) throw std::invalid_argument("rank must be >= 1");
    const int arity = 2 * n + 1;
    Polynomial p = Polynomial::constant(arity, Rational(1));
    for (int r = 0; r <= n; ++r) {
        for (int s = r; s < n; ++s) p = p * linear_diff(arity, r, n + 1 + s);
        for (int s = 0; s < r; ++s) p = p * linear_diff(arity, n + 1 + s, r);
    }
    return p;
}

Polynomial diagonal_product_poly(int n) {
    const int arity = 2 * n + 1;
    Polynomial p = Polynomial::constant(arity, Rational(1));
    for (int j = 0; j < n; ++j) p = p * linear_diff(arity, j, n + 1 + j);
    return p;
}

Polynomial compose_nu(const Polynomial& p, const Permutation& w, int n) {
    return permute_polynomial(extend_nu(w.inverse(), n), p);
}

Polynomial compose_lambda_head(const Polynomial& p, const Permutation& w, int n) {
    return permute_polynomial(extend_lambda_head(w.inverse(), n), p);
}

Polynomial alternating_q_sum_poly(int n) {
    const Polynomial q = q_cofactor_poly(n);
    Polynomial sum = Polynomial::zero(2 * n + 1);
    for (const auto& w : symmetric_group(n)) {
        Polynomial term = compose_nu(q, w, n);
        if (w.sign() < 0) term = term * Rational(-1);
        sum += term;
    }
    return sum;
}

Polynomial alternating_closed_poly(int n) {
    const int arity = 2 * n + 1;
    Polynomial p = Polynomial::constant(arity, Rational(1));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            p = p * linear_diff(arity, i, j) * linear_diff(arity, n + 1 + i, n + 1 + j);
    for (int r = 0; r < n; ++r) p = p * linear_diff(arity, n + 1 + r, n);
    return p;
}

Rational q_factor_exact(std::span<const Rational> lambda, std::span<const Rational> nu) {
    const int n = static_cast<int>(nu.size());
    if (static_cast<int>(lambda.size()) != n + 1) throw std::invalid_argument("arity mismatch");
    Rational prod(1);
    for (int r = 0; r <= n; ++r) {
        for (int s = r + 1; s < n; ++s) prod *= lambda[r] - nu[s];
        for (int s = 0; s < r; ++s) prod *= nu[s] - lambda[r];
    }
    return prod;
}

bool q_symmetry_holds(int n) {
    const Polynomial q = q_cofactor_poly(n);
    for (const auto& w : symmetric_group(n)) {
        const Polynomial lhs = compose_lambda_head(q, w, n);
        const Polynomial rhs = compose_nu(q, w.inverse(), n);
        if ((lhs - rhs).term_count() != 0) return false;
    }
    return true;
}

bool alternating_closed_form_holds(int n) {
    return (alternating_q_sum_poly(n) - alternating_closed_poly(n)).term_count() == 0;
}

bool weight_promotion_holds(int n, int k) {
    if (k < 1) throw std::invalid_argument("integer k must be >= 1");
    const auto base = w_base_factors(n);
    const Polynomial lhs =
        multiply_factors(q_cofactor_poly(n) * diagonal_product_poly(n), base, k - 1);
    const Polynomial rhs = multiply_factors(Polynomial::constant(2 * n + 1, Rational(1)), base, k);
    return (lhs - rhs).term_count() == 0;
}

bool integrand_skew_symmetry_holds(int n, const Polynomial& standin) {
    if (standin.arity() != 2 * n + 1) throw std::invalid_argument("stand-in arity mismatch");
    const Polynomial qg = q_cofactor_poly(n) * standin;
    Polynomial f = Polynomial::zero(2 * n + 1);
    for (const auto& w : symmetric_group(n)) {
        Polynomial term = compose_nu(qg, w, n);
        if (w.sign() < 0) term = term * Rational(-1);
        f += term;
    }
    for (const auto& s : symmetric_group(n)) {
        Polynomial expected = f;
        if (s.sign() < 0) expected = expected * Rational(-1);
        if ((compose_nu(f, s, n) - expected).term_count() != 0) return false;
    }
    return true;
}

Polynomial lifted_standin(int n, int degree) {
    const int arity = 2 * n + 1;
    Polynomial g = Polynomial::zero(arity);
    long counter = 1;
    for (int d = 0; d <= degree; ++d) {
        for (const MultiIndex& mi : monomials_of_degree(n, d)) {
            MultiIndex lifted;
            lifted.exponents.assign(arity, 0);
            for (int s = 0; s < n; ++s) lifted.exponents[n + 1 + s] = mi.exponents[s];
            // varying coefficients keep the stand-in free of accidental symmetry
            g += Polynomial::monomial(lifted, Rational(counter * counter % 23 + counter));
            ++counter;
        }
    }
    return g;
}

}  // namespace dunklkit
