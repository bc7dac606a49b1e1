#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dunklkit/quadrature.hpp"
#include "dunklkit/summation.hpp"

using namespace dunklkit;

namespace {

double pochhammer(double a, int m) { return std::exp(std::lgamma(a + m) - std::lgamma(a)); }

// (n+1) Gamma((n+1)k) / Gamma(k)^(n+1)
double normalization(int n, double k) {
    return (n + 1) * std::exp(std::lgamma((n + 1) * k) - (n + 1) * std::lgamma(k));
}

double dirichlet_moment(int n, double k, const std::vector<int>& m) {
    // moments of Dir(k, ..., k, k+1) on n+1 coordinates
    double num = 1.0;
    int total = 0;
    for (int j = 0; j <= n; ++j) {
        num *= pochhammer(j == n ? k + 1.0 : k, m[j]);
        total += m[j];
    }
    return num / pochhammer((n + 1) * k + 1.0, total);
}

double simplex_integrate_monomial(const SimplexRule& rule, const std::vector<int>& expo) {
    CompensatedSum acc;
    for (int p = 0; p < rule.point_count; ++p) {
        const auto t = rule.point(p);
        double v = rule.weights[p];
        for (int j = 0; j <= rule.n; ++j)
            for (int e = 0; e < expo[j]; ++e) v *= t[j];
        acc.add(v);
    }
    return acc.value();
}

}  // namespace

TEST_CASE("small gauss-jacobi rules match closed forms") {
    const JacobiRule r1 = gauss_jacobi(1, 0.0, 0.0);
    CHECK(r1.nodes[0] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(r1.weights[0] == doctest::Approx(2.0).epsilon(1e-15));

    const JacobiRule r2 = gauss_jacobi(2, 0.0, 0.0);
    CHECK(r2.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(r2.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(r2.weights[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r2.weights[1] == doctest::Approx(1.0).epsilon(1e-14));

    for (double k : {0.5, 1.0, 2.5}) {
        const JacobiRule r = gauss_jacobi(1, k - 1.0, k - 1.0);
        const double expected = std::exp((2.0 * k - 1.0) * std::log(2.0) + 2.0 * std::lgamma(k) -
                                         std::lgamma(2.0 * k));
        CHECK(r.nodes[0] == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(r.weights[0] == doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("gauss-jacobi rules integrate monomials to recurrence moments") {
    for (const auto& [N, alpha, beta] : std::vector<std::tuple<int, double, double>>{
             {4, 0.0, 0.0}, {8, -0.5, -0.5}, {8, 1.5, 1.5}, {12, 0.25, 3.0}, {16, 2.0, -0.75}}) {
        const JacobiRule rule = gauss_jacobi(N, alpha, beta);
        const auto moments = jacobi_weight_moments(alpha, beta, 2 * N - 1);
        for (int m = 0; m <= 2 * N - 1; ++m) {
            CompensatedSum acc;
            for (int i = 0; i < N; ++i) acc.add(rule.weights[i] * std::pow(rule.nodes[i], m));
            CHECK(acc.value() == doctest::Approx(moments[m]).epsilon(1e-13));
        }
    }
}

TEST_CASE("gauss-jacobi structural invariants") {
    const JacobiRule rule = gauss_jacobi(32, -0.5, 1.75);
    for (int i = 0; i < rule.n; ++i) {
        CHECK(rule.weights[i] > 0.0);
        CHECK(rule.nodes[i] > -1.0);
        CHECK(rule.nodes[i] < 1.0);
        if (i > 0) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
    }
    CHECK_THROWS_AS(gauss_jacobi(0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(gauss_jacobi(4, -1.0, 0.0), std::invalid_argument);
}

TEST_CASE("box grid reduces to gauss-legendre when k = 1") {
    const std::vector<double> lambda = {1.0, -1.0};
    const std::vector<int> nodes = {16};
    const BoxGrid grid = box_grid(lambda, 1.0, nodes, 1e-9);
    const JacobiRule legendre = gauss_jacobi(16, 0.0, 0.0);
    REQUIRE(grid.dim == 1);
    for (int m = 0; m < 16; ++m) {
        CHECK(grid.nodes[0][m] == doctest::Approx(legendre.nodes[m]).epsilon(1e-14));
        CHECK(grid.weights[0][m] == doctest::Approx(legendre.weights[m]).epsilon(1e-14));
    }
}

TEST_CASE("box grid total measure matches the product of beta integrals") {
    const std::vector<double> lambda = {2.0, 0.5, -1.5};
    const std::vector<int> nodes = {12, 10};
    for (double k : {0.5, 1.0, 2.5}) {
        const BoxGrid grid = box_grid(lambda, k, nodes, 1e-9);
        double total = 1.0;
        for (int i = 0; i < grid.dim; ++i) {
            CompensatedSum acc;
            for (double w : grid.weights[i]) acc.add(w);
            total *= acc.value();
        }
        const double beta_kk = std::exp(2.0 * std::lgamma(k) - std::lgamma(2.0 * k));
        const double expected = std::pow(lambda[0] - lambda[1], 2.0 * k - 1.0) *
                                std::pow(lambda[1] - lambda[2], 2.0 * k - 1.0) * beta_kk * beta_kk;
        CHECK(total == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("box grid nodes stay strictly inside their intervals") {
    const std::vector<double> lambda = {3.0, 1.0, 0.0, -2.0};
    const std::vector<int> nodes = {32, 32, 32};
    const BoxGrid grid = box_grid(lambda, 0.5, nodes, 1e-9);
    for (int i = 0; i < grid.dim; ++i) {
        for (double v : grid.nodes[i]) {
            CHECK(v > lambda[i + 1]);
            CHECK(v < lambda[i]);
        }
    }
}

TEST_CASE("box grid rejects degenerate lambda") {
    const std::vector<int> nodes = {8, 8};
    const std::vector<double> tied = {1.0, 1.0, -1.0};
    CHECK_THROWS_AS(box_grid(tied, 1.0, nodes, 1e-9), std::domain_error);
    const std::vector<double> increasing = {-1.0, 0.0, 1.0};
    CHECK_THROWS_AS(box_grid(increasing, 1.0, nodes, 1e-9), std::domain_error);
}

TEST_CASE("simplex rule points lie on the simplex") {
    const SimplexRule rule = simplex_rule(3, Multiplicity(rational(3, 4)), 10);
    for (int p = 0; p < rule.point_count; ++p) {
        const auto t = rule.point(p);
        CompensatedSum sum;
        for (double v : t) {
            CHECK(v >= 0.0);
            sum.add(v);
        }
        CHECK(std::abs(sum.value() - 1.0) <= 1e-14);
    }
}

TEST_CASE("normalized simplex integral of t_{n+1} equals one") {
    {
        const SimplexRule rule = simplex_rule(2, Multiplicity(rational(3, 4)), 16);
        const double integral = simplex_integrate_monomial(rule, {0, 0, 1});
        CHECK(normalization(2, 0.75) * integral == doctest::Approx(1.0).epsilon(1e-12));
    }
    {
        const SimplexRule rule = simplex_rule(1, Multiplicity(1, 1), 8);
        const double integral = simplex_integrate_monomial(rule, {0, 1});
        CHECK(integral == doctest::Approx(0.5).epsilon(1e-13));
        CHECK(normalization(1, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
    }
}

TEST_CASE("simplex rule reproduces dirichlet moments") {
    for (int n : {1, 2, 3}) {
        for (double kv : {0.5, 1.0, 2.5}) {
            const Multiplicity k{Rational(kv)};
            const SimplexRule rule = simplex_rule(n, k, 12);
            const double c = normalization(n, kv);
            std::vector<int> expo(n + 1, 0);
            // all exponent vectors of total degree <= 4
            const auto check_all = [&](auto&& self, int pos, int remaining) -> void {
                if (pos == n + 1) {
                    std::vector<int> with_extra = expo;
                    with_extra[n] += 1;  // density carries one factor of t_{n+1}
                    const double quad = c * simplex_integrate_monomial(rule, with_extra);
                    const double exact = dirichlet_moment(n, kv, expo);
                    CHECK(quad == doctest::Approx(exact).epsilon(1e-10));
                    return;
                }
                for (int e = 0; e <= remaining; ++e) {
                    expo[pos] = e;
                    self(self, pos + 1, remaining - e);
                }
                expo[pos] = 0;
            };
            check_all(check_all, 0, 4);

            // first-moment closed form
            std::vector<int> first(n + 1, 0);
            first[0] = 1;
            first[n] += 1;
            CHECK(c * simplex_integrate_monomial(rule, first) ==
                  doctest::Approx(kv / ((n + 1) * kv + 1.0)).epsilon(1e-12));
        }
    }
}
