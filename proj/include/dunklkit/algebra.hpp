#pragma once

#include <span>
#include <vector>

#include "dunklkit/permutation.hpp"
#include "dunklkit/polynomial.hpp"

namespace dunklkit {

// Group action on polynomials: (w.p)(X) = p(w^{-1} X). Exponent vectors
// transform by e'[j] = e[w(j)], since x_{w^{-1}(i)} picks up the exponent
// that x_i carried.
template <typename Coeff>
PolynomialT<Coeff> permute_polynomial(const Permutation& w, const PolynomialT<Coeff>& p) {
    if (w.size() != p.arity()) throw std::invalid_argument("permutation/polynomial arity mismatch");
    std::vector<typename PolynomialT<Coeff>::Term> terms;
    terms.reserve(p.term_count());
    for (const auto& [mi, c] : p.terms()) {
        std::vector<int> e(mi.exponents.size());
        for (int j = 0; j < p.arity(); ++j) e[j] = mi.exponents[w(j)];
        terms.emplace_back(MultiIndex(std::move(e)), c);
    }
    return PolynomialT<Coeff>::from_terms(p.arity(), std::move(terms));
}

// (p - (i j).p) / (x_i - x_j), which is again a polynomial. Computed by
// synthetic division in the variable x_i; the zero remainder is asserted.
Polynomial divided_difference(const Polynomial& p, int i, int j);

// prod_{i<j} (x_i - x_j) evaluated at a point.
double pi_product(std::span<const double> x);
Rational pi_product_exact(std::span<const Rational> x);

// The Vandermonde factor prod_{i<j} (x_i - x_j) as an exact polynomial.
Polynomial vandermonde_polynomial(int arity);

}  // namespace dunklkit
