#pragma once

#include <span>
#include <vector>

#include "dunklkit/dunkl.hpp"

namespace dunklkit {

// N-point Gauss rule for the weight (1-x)^alpha (1+x)^beta on (-1,1).
struct JacobiRule {
    int n = 0;
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<double> nodes;    // strictly increasing, interior
    std::vector<double> weights;  // positive; sum = 2^(a+b+1) B(a+1,b+1)
};

// Golub-Welsch: eigen-decomposition of the symmetric tridiagonal matrix of
// the Jacobi three-term recurrence. Exact for degree <= 2N-1.
JacobiRule gauss_jacobi(int n, double alpha, double beta);

// Moments integral of x^m against (1-x)^alpha (1+x)^beta for m = 0..max_m,
// from the first-order recurrence; independent oracle for rule exactness.
std::vector<double> jacobi_weight_moments(double alpha, double beta, int max_m);

// Tensor grid over the box prod_i [lambda_{i+1}, lambda_i]. Dimension i
// carries a Jacobi(k-1, k-1) rule affinely mapped onto its interval, so the
// two endpoint-singular weight factors (lambda_i - nu_i)^(k-1) and
// (nu_i - lambda_{i+1})^(k-1) are absorbed: stored weights already include
// them and the interval half-width Jacobian, i.e. summing f over the grid
// approximates the integral of f times those singular factors.
struct BoxGrid {
    int dim = 0;  // number of nu variables (= arity of lambda minus 1)
    double k = 1.0;
    std::vector<std::vector<double>> nodes;    // [dim][N_i], increasing
    std::vector<std::vector<double>> weights;  // [dim][N_i], positive

    std::size_t total_points() const {
        std::size_t total = 1;
        for (const auto& v : nodes) total *= v.size();
        return total;
    }
};

BoxGrid box_grid(std::span<const double> lambda, double k, std::span<const int> nodes_per_dim,
                 double min_gap);

// Quadrature on the simplex {t >= 0, sum t = 1} in n+1 coordinates against
// the Dirichlet-type density (prod_i t_i)^(k-1): sum_m w_m f(t_m) is exact
// for polynomials f of total degree <= 2N-1. Built by stick-breaking into n
// one-dimensional Jacobi rules.
struct SimplexRule {
    int n = 0;            // n+1 coordinates per point
    int point_count = 0;
    std::vector<double> points;  // row-major, (n+1) per row, each row sums to 1
    std::vector<double> weights;

    std::span<const double> point(int m) const {
        return std::span<const double>(points).subspan(static_cast<std::size_t>(m) * (n + 1), n + 1);
    }
};

SimplexRule simplex_rule(int n, const Multiplicity& k, int N);

}  // namespace dunklkit
