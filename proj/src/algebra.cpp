#include "dunklkit/algebra.hpp"

#include <cassert>

namespace dunklkit {

Polynomial divided_difference(const Polynomial& p, int i, int j) {
    const int arity = p.arity();
    if (i < 0 || j < 0 || i >= arity || j >= arity || i == j)
        throw std::invalid_argument("bad divided difference indices");

    const Polynomial numer = p - permute_polynomial(Permutation::transposition(arity, i, j), p);
    if (numer.is_zero()) return Polynomial::zero(arity);

    // Synthetic division by (x_i - x_j), treating the numerator as a
    // polynomial in x_i: with numer = sum_m c_m x_i^m, the quotient
    // coefficients satisfy q_{D-1} = c_D and q_{m-1} = c_m + x_j q_m.
    int top = 0;
    for (const auto& [mi, c] : numer.terms()) top = std::max(top, mi.exponents[i]);

    std::vector<Polynomial> c(top + 1, Polynomial::zero(arity));
    for (const auto& [mi, coeff] : numer.terms()) {
        MultiIndex stripped = mi;
        const int m = stripped.exponents[i];
        stripped.exponents[i] = 0;
        c[m] += Polynomial::monomial(std::move(stripped), coeff);
    }

    const Polynomial xj = Polynomial::variable(arity, j);
    Polynomial quotient = Polynomial::zero(arity);
    Polynomial q_m = Polynomial::zero(arity);
    for (int m = top; m >= 1; --m) {
        q_m = c[m] + xj * q_m;
        std::vector<int> e(arity, 0);
        e[i] = m - 1;
        quotient += Polynomial::monomial(MultiIndex(std::move(e)), Rational(1)) * q_m;
    }
    const Polynomial remainder = c[0] + xj * q_m;
    assert(remainder.is_zero() && "difference not divisible by x_i - x_j");
    (void)remainder;
    return quotient;
}

double pi_product(std::span<const double> x) {
    double prod = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) prod *= x[i] - x[j];
    return prod;
}

Rational pi_product_exact(std::span<const Rational> x) {
    Rational prod(1);
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) prod *= x[i] - x[j];
    return prod;
}

Polynomial vandermonde_polynomial(int arity) {
    Polynomial prod = Polynomial::constant(arity, Rational(1));
    for (int i = 0; i < arity; ++i)
        for (int j = i + 1; j < arity; ++j)
            prod *= Polynomial::variable(arity, i) - Polynomial::variable(arity, j);
    return prod;
}

}  // namespace dunklkit
