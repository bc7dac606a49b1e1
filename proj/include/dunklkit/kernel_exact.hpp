#pragma once

#include <span>

#include "dunklkit/permutation.hpp"
#include "dunklkit/polynomial.hpp"
#include "dunklkit/rational.hpp"

namespace dunklkit {

// Exact polynomial layer for the alternating-sum building blocks. All
// polynomials live in the ring Q[l_0..l_n, v_0..v_{n-1}] of arity 2n+1:
// variable i <= n is lambda_i, variable n+1+s is nu_s.

// The cofactor Q(lambda, nu) in its product form (the diagonal factors
// cancelled against the denominator).
Polynomial q_cofactor_poly(int n);

// The interlacing-positive weight base P(lambda, nu): the (k-1)-st power
// of this is the integration weight. Equals Q times the diagonal product.
Polynomial w_base_poly(int n);

// prod_{j<n} (l_j - v_j)
Polynomial diagonal_product_poly(int n);

// p(lambda, w nu) and p(w lambda, nu); w acts on the nu block resp. on the
// first n lambda variables (l_n stays fixed).
Polynomial compose_nu(const Polynomial& p, const Permutation& w, int n);
Polynomial compose_lambda_head(const Polynomial& p, const Permutation& w, int n);

// sum over S_n of sign(w) * Q(lambda, w nu), and its product form
Polynomial alternating_q_sum_poly(int n);
Polynomial alternating_closed_poly(int n);

// Exact evaluation of the cofactor at rational points.
Rational q_factor_exact(std::span<const Rational> lambda, std::span<const Rational> nu);

// Identity checks, each an exact zero-residual statement:
//   Q(w lambda, nu) == Q(lambda, w^{-1} nu) for every w in S_n
bool q_symmetry_holds(int n);
//   sum_w sign(w) Q(lambda, w nu) == product form
bool alternating_closed_form_holds(int n);
//   Q * prod_j (l_j - v_j) * P^{k-1} == P^k for integer k >= 1
bool weight_promotion_holds(int n, int k);
//   nu -> sum_w sign(w) Q(lambda, w nu) g(w nu) is skew-symmetric for any
//   stand-in g (polynomial in the nu variables, lifted into the big ring)
bool integrand_skew_symmetry_holds(int n, const Polynomial& standin);

// A deterministic asymmetric stand-in of the given degree in n variables,
// lifted to the 2n+1-variable ring.
Polynomial lifted_standin(int n, int degree);

}  // namespace dunklkit
