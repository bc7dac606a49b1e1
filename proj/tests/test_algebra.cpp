#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "dunklkit/algebra.hpp"

using namespace dunklkit;

namespace {

Polynomial random_polynomial(std::mt19937& rng, int arity, int max_degree, int n_terms) {
    std::uniform_int_distribution<int> coeff(-9, 9);
    std::uniform_int_distribution<int> expo(0, max_degree);
    Polynomial p(arity);
    for (int t = 0; t < n_terms; ++t) {
        std::vector<int> e(arity);
        for (int& v : e) v = expo(rng);
        p += Polynomial::monomial(MultiIndex(std::move(e)), Rational(coeff(rng)));
    }
    return p;
}

std::vector<Rational> random_point(std::mt19937& rng, int arity) {
    std::uniform_int_distribution<int> num(-20, 20);
    std::uniform_int_distribution<int> den(1, 7);
    std::vector<Rational> x;
    for (int i = 0; i < arity; ++i) x.push_back(rational(num(rng), den(rng)));
    return x;
}

int bubble_sort_swap_count(std::vector<int> v) {
    int swaps = 0;
    for (std::size_t pass = 0; pass + 1 < v.size(); ++pass)
        for (std::size_t i = 0; i + 1 < v.size(); ++i)
            if (v[i] > v[i + 1]) {
                std::swap(v[i], v[i + 1]);
                ++swaps;
            }
    return swaps;
}

}  // namespace

TEST_CASE("polynomial arithmetic basics") {
    const Polynomial x0 = Polynomial::variable(2, 0);
    const Polynomial x1 = Polynomial::variable(2, 1);

    CHECK((x0 + x1) + (x0 - x1) == x0 * Rational(2));

    const Polynomial p = (x0 + x1) * (x0 - x1);
    CHECK(p == x0 * x0 - x1 * x1);
    CHECK(p.degree() == 2);
    CHECK(p.term_count() == 2);

    CHECK((p - p).is_zero());
    CHECK(Polynomial::zero(2).degree() == -1);

    const std::vector<Rational> pt = {rational(3), rational(2)};
    CHECK(p.evaluate(pt) == Rational(5));
    CHECK(p.evaluate(std::vector<double>{3.0, 2.0}) == doctest::Approx(5.0));
}

TEST_CASE("polynomial multiplication agrees with evaluation at random points") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 25; ++trial) {
        const int arity = 1 + trial % 4;
        const Polynomial a = random_polynomial(rng, arity, 4, 6);
        const Polynomial b = random_polynomial(rng, arity, 4, 6);
        const auto x = random_point(rng, arity);
        CHECK((a * b).evaluate(x) == a.evaluate(x) * b.evaluate(x));
        CHECK((a + b).evaluate(x) == a.evaluate(x) + b.evaluate(x));
    }
}

TEST_CASE("derivative satisfies the product rule") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const int arity = 2 + trial % 2;
        const Polynomial a = random_polynomial(rng, arity, 3, 5);
        const Polynomial b = random_polynomial(rng, arity, 3, 5);
        for (int v = 0; v < arity; ++v)
            CHECK((a * b).derivative(v) == a.derivative(v) * b + a * b.derivative(v));
    }
}

TEST_CASE("monomial enumeration is complete and ordered") {
    const auto mono = monomials_of_degree(3, 4);
    CHECK(mono.size() == 15);  // C(3+4-1, 4)
    CHECK(std::is_sorted(mono.begin(), mono.end()));
    for (const auto& m : mono) CHECK(m.degree() == 4);
    CHECK(monomials_of_degree(1, 0).size() == 1);
    CHECK(monomials_of_degree(4, 1).size() == 4);
}

TEST_CASE("permutation composition, inverse, and sign") {
    const auto s4 = symmetric_group(4);
    CHECK(s4.size() == 24);

    for (const auto& w : s4) {
        CHECK((w * w.inverse()).is_identity());
        CHECK((w.inverse() * w).is_identity());
        const int parity = bubble_sort_swap_count(w.images()) % 2 == 0 ? 1 : -1;
        CHECK(w.sign() == parity);
    }

    std::mt19937 rng(11);
    std::uniform_int_distribution<int> pick(0, 23);
    const std::vector<int> x = {10, 20, 30, 40};
    for (int trial = 0; trial < 40; ++trial) {
        const auto& a = s4[pick(rng)];
        const auto& b = s4[pick(rng)];
        CHECK(b.apply(a.apply(x)) == (a * b).apply(x));
        CHECK((a * b).sign() == a.sign() * b.sign());
    }
}

TEST_CASE("polynomial group action composes and matches point action") {
    std::mt19937 rng(13);
    const auto s3 = symmetric_group(3);
    std::uniform_int_distribution<int> pick(0, 5);
    for (int trial = 0; trial < 20; ++trial) {
        const Polynomial p = random_polynomial(rng, 3, 3, 5);
        const auto& w = s3[pick(rng)];
        const auto& v = s3[pick(rng)];
        const auto x = random_point(rng, 3);

        CHECK(permute_polynomial(w, p).evaluate(w.apply(x)) == p.evaluate(x));
        CHECK(permute_polynomial(v, permute_polynomial(w, p)) == permute_polynomial(w * v, p));
    }
    const Polynomial x0 = Polynomial::variable(2, 0);
    CHECK(permute_polynomial(Permutation::transposition(2, 0, 1), x0) == Polynomial::variable(2, 1));
}

TEST_CASE("divided difference of x_1^2 is x_1 + x_2") {
    const Polynomial p = Polynomial::variable(2, 0) * Polynomial::variable(2, 0);
    const Polynomial expected = Polynomial::variable(2, 0) + Polynomial::variable(2, 1);
    CHECK(divided_difference(p, 0, 1) == expected);
}

TEST_CASE("divided difference times the linear factor recovers the antisymmetrization") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const int arity = 2 + trial % 3;
        const Polynomial p = random_polynomial(rng, arity, 4, 6);
        for (int i = 0; i < arity; ++i) {
            for (int j = 0; j < arity; ++j) {
                if (i == j) continue;
                const Polynomial lhs =
                    (Polynomial::variable(arity, i) - Polynomial::variable(arity, j)) *
                    divided_difference(p, i, j);
                const Polynomial rhs =
                    p - permute_polynomial(Permutation::transposition(arity, i, j), p);
                CHECK(lhs == rhs);
            }
        }
    }
}

TEST_CASE("divided difference of a symmetric polynomial vanishes") {
    const Polynomial e2 = Polynomial::variable(3, 0) * Polynomial::variable(3, 1) +
                          Polynomial::variable(3, 0) * Polynomial::variable(3, 2) +
                          Polynomial::variable(3, 1) * Polynomial::variable(3, 2);
    CHECK(divided_difference(e2, 0, 1).is_zero());
    CHECK(divided_difference(e2, 1, 2).is_zero());
}

TEST_CASE("pi product") {
    const std::vector<double> x = {2.0, 1.0, 0.0};
    CHECK(pi_product(x) == doctest::Approx(2.0));

    const std::vector<Rational> xr = {rational(2), rational(1), rational(0)};
    CHECK(pi_product_exact(xr) == Rational(2));

    const std::vector<Rational> pt = {rational(5), rational(-1), rational(7, 2)};
    CHECK(vandermonde_polynomial(3).evaluate(pt) == pi_product_exact(pt));
}
