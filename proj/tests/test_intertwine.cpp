#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "dunklkit/intertwine.hpp"
#include "dunklkit/kernel.hpp"

using namespace dunklkit;

namespace {

std::vector<double> random_dominant(std::mt19937_64& rng, int d, double lo = 0.5,
                                    double hi = 2.0) {
    std::uniform_real_distribution<double> gap(lo, hi);
    std::uniform_real_distribution<double> start(-1.0, 1.0);
    std::vector<double> v(d);
    v[0] = start(rng) + gap(rng) * d;
    for (int i = 1; i < d; ++i) v[i] = v[i - 1] - gap(rng);
    return v;
}

Polynomial defect(const Polynomial& image, const Polynomial& lower_image, int j,
                  const Multiplicity& k) {
    return dunkl_apply_poly(image, j, k) - lower_image;
}

}  // namespace

TEST_CASE("defining relation holds exactly through degree four") {
    for (const Multiplicity k : {Multiplicity(1, 2), Multiplicity(1, 1), Multiplicity(5, 2)}) {
        for (int arity = 1; arity <= 3; ++arity) {
            const auto table = IntertwineTable::build_exact(arity, k, 4);
            for (int m = 1; m <= 4; ++m) {
                const auto basis = monomials_of_degree(arity, m);
                const auto lower = monomials_of_degree(arity, m - 1);
                for (std::size_t c = 0; c < basis.size(); ++c) {
                    for (int j = 0; j < arity; ++j) {
                        Polynomial rhs = Polynomial::zero(arity);
                        if (basis[c].exponents[j] > 0) {
                            MultiIndex d = basis[c];
                            d.exponents[j] -= 1;
                            const auto it = std::lower_bound(lower.begin(), lower.end(), d);
                            rhs = table.image(m - 1, static_cast<int>(it - lower.begin())) *
                                  Rational(basis[c].exponents[j]);
                        }
                        CHECK(defect(table.image(m, static_cast<int>(c)), rhs, j, k)
                                  .term_count() == 0);
                    }
                }
            }
        }
    }
}

TEST_CASE("first-variable image in two variables") {
    // V(x1) = ((k+1) x1 + k x2) / (2k+1)
    const Multiplicity k(3, 4);
    const auto table = IntertwineTable::build_exact(2, k, 1);
    const Polynomial expected =
        (Polynomial::variable(2, 0) * Rational(7, 4) + Polynomial::variable(2, 1) * Rational(3, 4)) *
        Rational(2, 5);  // 1 / (2k+1) = 2/5
    const auto basis = monomials_of_degree(2, 1);
    const auto it = std::lower_bound(basis.begin(), basis.end(), MultiIndex({1, 0}));
    CHECK(table.image(1, static_cast<int>(it - basis.begin())) == expected);
}

TEST_CASE("vanishing multiplicity gives the identity map") {
    const Multiplicity k(1e-8);
    const auto table = IntertwineTable::build_float(3, k, 4);
    for (int m = 0; m <= 4; ++m) {
        const Eigen::MatrixXd diff =
            table.matrix(m) - Eigen::MatrixXd::Identity(table.matrix(m).rows(),
                                                        table.matrix(m).cols());
        CHECK(diff.cwiseAbs().maxCoeff() < 1e-7);
    }
}

TEST_CASE("apply fixes constants and the symmetric linear form") {
    const Multiplicity k(5, 2);
    const auto table = build_intertwine(3, k, 3);
    REQUIRE(table.mode() == IntertwineTable::Mode::exact);

    const Polynomial one = Polynomial::constant(3, Rational(1));
    CHECK(apply_intertwine(table, one) == one);

    Polynomial sym = Polynomial::zero(3);
    for (int i = 0; i < 3; ++i) sym += Polynomial::variable(3, i);
    CHECK(apply_intertwine(table, sym) == sym);

    // linearity and degree preservation
    const Polynomial p = Polynomial::variable(3, 0) * Polynomial::variable(3, 0);
    const Polynomial image = apply_intertwine(table, p);
    CHECK(image.degree() == 2);
    CHECK(apply_intertwine(table, p * Rational(5)) == image * Rational(5));

    CHECK_THROWS_AS(
        apply_intertwine(table, Polynomial::monomial(MultiIndex({4, 0, 0}), Rational(1))),
        std::invalid_argument);
}

TEST_CASE("floating tables match exact tables entrywise") {
    const Multiplicity k(2, 3);
    const auto exact = IntertwineTable::build_exact(3, k, 4);
    const auto floating = IntertwineTable::build_float(3, k, 4);
    for (int m = 0; m <= 4; ++m) {
        const auto basis = monomials_of_degree(3, m);
        for (std::size_t c = 0; c < basis.size(); ++c) {
            const Polynomial& img = exact.image(m, static_cast<int>(c));
            for (std::size_t r = 0; r < basis.size(); ++r) {
                const double want = img.coefficient(basis[r]).get_d();
                CHECK(floating.matrix(m)(static_cast<int>(r), static_cast<int>(c)) ==
                      doctest::Approx(want).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("series at the origin and at order zero is exactly one") {
    const std::vector<double> lambda{1.5, 0.25, -1.0};
    const std::vector<double> zero(3, 0.0);
    CHECK(kernel_series(zero, lambda, Multiplicity(3, 2), 12).value == 1.0);

    const std::vector<double> x{0.3, -0.2, 0.1};
    const EvalReport r = kernel_series(x, lambda, Multiplicity(3, 2), 0);
    CHECK(r.value == 1.0);
    CHECK(r.error_estimate > 0.0);
}

TEST_CASE("one-variable series is the partial exponential sum") {
    const std::vector<double> x{0.7};
    const std::vector<double> lambda{1.3};
    for (int order : {1, 3, 8}) {
        double partial = 0.0, term = 1.0;
        for (int m = 0; m <= order; ++m) {
            partial += term;
            term *= x[0] * lambda[0] / (m + 1);
        }
        const EvalReport r = kernel_series(x, lambda, Multiplicity(2, 1), order);
        CHECK(r.value == doctest::Approx(partial).epsilon(1e-14));
    }
}

TEST_CASE("series is symmetric in its two arguments within the tail bound") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> coord(-0.8, 0.8);
    const Multiplicity k(4, 5);
    for (int rep = 0; rep < 4; ++rep) {
        std::vector<double> x(3), lambda(3);
        for (auto& v : x) v = coord(rng);
        for (auto& v : lambda) v = coord(rng);
        const EvalReport a = kernel_series(x, lambda, k, 18);
        const EvalReport b = kernel_series(lambda, x, k, 18);
        CHECK(std::abs(a.value - b.value) <= 2 * a.error_estimate + 1e-13);
    }
}

TEST_CASE("series agrees with the reduction in three variables") {
    std::mt19937_64 rng(1234);
    const Multiplicity k(1, 1);
    KernelConfig cfg;
    cfg.nodes_per_level = {32, 24};
    for (int rep = 0; rep < 2; ++rep) {
        const auto lambda = random_dominant(rng, 3, 0.5, 1.0);
        std::uniform_real_distribution<double> coord(-0.3, 0.3);
        std::vector<double> x(3);
        for (auto& v : x) v = coord(rng);
        const EvalReport via_series = kernel_series(x, lambda, k, 30);
        const EvalReport via_reduce = kernel_reduce(x, lambda, k, cfg);
        CHECK(std::abs(via_series.value - via_reduce.value) < 1e-7);
    }
}

TEST_CASE("restriction substitutes the trailing variable") {
    const std::vector<double> lambda{2.0, 0.5, -1.0};
    const double total = 1.5;

    // sum of all variables becomes the constant sum(lambda)
    RealPolynomial sym = RealPolynomial::zero(3);
    for (int i = 0; i < 3; ++i) sym += RealPolynomial::variable(3, i);
    const RealPolynomial rsym = poly_restrict(sym, lambda);
    CHECK(rsym.degree() == 0);
    CHECK(rsym.evaluate(std::vector<double>{0.3, 0.1}) == doctest::Approx(total));

    // leading variable is untouched
    const RealPolynomial first = poly_restrict(RealPolynomial::variable(3, 0), lambda);
    CHECK(first == RealPolynomial::variable(2, 0));

    // trailing variable becomes sum(lambda) - sum(nu), for handles too
    const RealPolynomial last = poly_restrict(RealPolynomial::variable(3, 2), lambda);
    const std::vector<double> nu{0.7, -0.2};
    CHECK(last.evaluate(nu) == doctest::Approx(total - 0.5));
    const FunctionHandle h{3, [](const std::vector<double>& y) { return y[2]; }};
    CHECK(restrict_f_lambda(h, lambda).f(nu) == doctest::Approx(total - 0.5));
}

TEST_CASE("reduction of the constant is one") {
    KernelConfig cfg;
    const std::vector<double> lambda{1.2, 0.1, -0.9};
    const RealPolynomial one = RealPolynomial::constant(3, 1.0);
    const EvalReport r = intertwine_reduction(one, lambda, Multiplicity(3, 4), cfg);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.evals > 0);
}

TEST_CASE("reduction of a linear polynomial matches the table image") {
    const Multiplicity k(1, 1);
    const std::vector<double> lambda{1.0, -0.5};
    const RealPolynomial f = RealPolynomial::variable(2, 0);
    const EvalReport r = intertwine_reduction(f, lambda, k);
    const double expected = (2.0 * lambda[0] + 1.0 * lambda[1]) / 3.0;  // ((k+1)l1 + k l2)/(2k+1)
    CHECK(r.value == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("reduction of a product matches the table image in three variables") {
    const Multiplicity k(1, 1);
    const std::vector<double> lambda{1.4, 0.2, -1.1};
    const RealPolynomial f = RealPolynomial::variable(3, 0) * RealPolynomial::variable(3, 1);
    KernelConfig cfg;
    cfg.nodes_per_level = {32, 24};
    const EvalReport via_reduction = intertwine_reduction(f, lambda, k, cfg);

    const auto table = IntertwineTable::build_exact(3, k, 2);
    const RealPolynomial image = apply_intertwine_real(table, f);
    CHECK(via_reduction.value == doctest::Approx(image.evaluate(lambda)).epsilon(1e-7));
}

TEST_CASE("handle reduction of the exponential matches the kernel") {
    const Multiplicity k(3, 2);
    const std::vector<double> lambda{1.1, -0.2, -1.3};
    const std::vector<double> x{0.4, -0.1, 0.2};
    const FunctionHandle f{3, [&x](const std::vector<double>& y) {
                               double dot = 0.0;
                               for (int i = 0; i < 3; ++i) dot += x[i] * y[i];
                               return std::exp(dot);
                           }};
    KernelConfig cfg;
    cfg.nodes_per_level = {24, 16};
    const EvalReport via_v = intertwine_reduction(f, lambda, k, cfg);
    const EvalReport via_e = kernel_reduce(x, lambda, k, cfg);
    CHECK(via_v.value == doctest::Approx(via_e.value).epsilon(1e-7));
}

TEST_CASE("simplex functional of the constant is one for every coordinate") {
    KernelConfig cfg;
    cfg.nodes_per_level = {48};
    for (int n = 1; n <= 3; ++n) {
        std::mt19937_64 rng(n);
        const auto lambda = random_dominant(rng, n + 1);
        for (int j = 0; j <= n; ++j) {
            const EvalReport r =
                xu_univariate([](double) { return 1.0; }, j, lambda, Multiplicity(2, 3), cfg);
            CHECK(r.value == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("simplex functional of the identity gives the barycentric average") {
    const Multiplicity k(5, 4);
    const std::vector<double> lambda{0.9, -0.4};
    const EvalReport r = xu_univariate([](double s) { return s; }, 0, lambda, k);
    const double kk = k.value();
    const double expected = ((kk + 1) * lambda[0] + kk * lambda[1]) / (2 * kk + 1);
    CHECK(r.value == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("simplex functional of the exponential reproduces the one-point kernel") {
    const Multiplicity k(2, 1);
    const std::vector<double> lambda{1.0, 0.0, -1.0};
    const double x = 0.8;
    for (int j = 0; j <= 2; ++j) {
        const EvalReport via_f =
            xu_univariate([x](double s) { return std::exp(x * s); }, j, lambda, k);
        const EvalReport via_k = kernel_xu(x, j, lambda, k);
        CHECK(via_f.value == doctest::Approx(via_k.value).epsilon(1e-12));
    }
}
