#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dunklkit/rational.hpp"

namespace dunklkit {

// Exponent vector of a monomial. Arity is fixed by the owning polynomial.
struct MultiIndex {
    std::vector<int> exponents;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> e) : exponents(std::move(e)) {}

    int arity() const { return static_cast<int>(exponents.size()); }

    int degree() const {
        int d = 0;
        for (int e : exponents) d += e;
        return d;
    }

    bool operator==(const MultiIndex& o) const { return exponents == o.exponents; }

    // Graded lexicographic order: by total degree, then lex on exponents.
    bool operator<(const MultiIndex& o) const {
        const int da = degree(), db = o.degree();
        if (da != db) return da < db;
        return exponents < o.exponents;
    }
};

namespace detail {

template <typename Coeff>
struct CoeffOps;

template <>
struct CoeffOps<Rational> {
    static bool is_zero(const Rational& c) { return sgn(c) == 0; }
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static double as_double(const Rational& c) { return c.get_d(); }
    static Rational from_int(long v) { return Rational(v); }
};

template <>
struct CoeffOps<double> {
    static bool is_zero(double c) { return c == 0.0; }
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double as_double(double c) { return c; }
    static double from_int(long v) { return static_cast<double>(v); }
};

}  // namespace detail

// Sparse multivariate polynomial over an exact rational or double
// coefficient ring. Terms are kept sorted in graded-lex order with no
// stored zero coefficients; every multi-index has the polynomial's arity.
template <typename Coeff>
class PolynomialT {
  public:
    using Ops = detail::CoeffOps<Coeff>;
    using Term = std::pair<MultiIndex, Coeff>;

    explicit PolynomialT(int arity = 0) : arity_(arity) {
        if (arity < 0) throw std::invalid_argument("polynomial arity must be >= 0");
    }

    static PolynomialT zero(int arity) { return PolynomialT(arity); }

    static PolynomialT constant(int arity, Coeff c) {
        PolynomialT p(arity);
        if (!Ops::is_zero(c)) p.terms_.emplace_back(MultiIndex(std::vector<int>(arity, 0)), std::move(c));
        return p;
    }

    // x_var, 0-based.
    static PolynomialT variable(int arity, int var) {
        if (var < 0 || var >= arity) throw std::invalid_argument("variable index out of range");
        PolynomialT p(arity);
        std::vector<int> e(arity, 0);
        e[var] = 1;
        p.terms_.emplace_back(MultiIndex(std::move(e)), Ops::one());
        return p;
    }

    static PolynomialT monomial(MultiIndex mi, Coeff c) {
        PolynomialT p(mi.arity());
        if (!Ops::is_zero(c)) p.terms_.emplace_back(std::move(mi), std::move(c));
        return p;
    }

    static PolynomialT from_terms(int arity, std::vector<Term> terms) {
        PolynomialT p(arity);
        for (auto& t : terms) {
            if (t.first.arity() != arity) throw std::invalid_argument("multi-index arity mismatch");
        }
        std::sort(terms.begin(), terms.end(),
                  [](const Term& a, const Term& b) { return a.first < b.first; });
        for (auto& t : terms) {
            if (!p.terms_.empty() && p.terms_.back().first == t.first)
                p.terms_.back().second += t.second;
            else
                p.terms_.push_back(std::move(t));
        }
        p.strip_zeros();
        return p;
    }

    int arity() const { return arity_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const std::vector<Term>& terms() const { return terms_; }

    int degree() const {  // total degree; -1 for the zero polynomial
        int d = -1;
        for (const auto& [mi, c] : terms_) d = std::max(d, mi.degree());
        return d;
    }

    Coeff coefficient(const MultiIndex& mi) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), mi,
                                   [](const Term& t, const MultiIndex& m) { return t.first < m; });
        if (it != terms_.end() && it->first == mi) return it->second;
        return Ops::zero();
    }

    PolynomialT& operator+=(const PolynomialT& o) {
        check_arity(o);
        std::vector<Term> merged;
        merged.reserve(terms_.size() + o.terms_.size());
        auto a = terms_.begin();
        auto b = o.terms_.begin();
        while (a != terms_.end() && b != o.terms_.end()) {
            if (a->first < b->first)
                merged.push_back(std::move(*a++));
            else if (b->first < a->first)
                merged.push_back(*b++);
            else {
                merged.emplace_back(a->first, a->second + b->second);
                ++a, ++b;
            }
        }
        merged.insert(merged.end(), std::make_move_iterator(a), std::make_move_iterator(terms_.end()));
        merged.insert(merged.end(), b, o.terms_.end());
        terms_ = std::move(merged);
        strip_zeros();
        return *this;
    }

    PolynomialT& operator-=(const PolynomialT& o) { return *this += o * Ops::from_int(-1); }

    PolynomialT operator+(const PolynomialT& o) const {
        PolynomialT r = *this;
        r += o;
        return r;
    }

    PolynomialT operator-(const PolynomialT& o) const {
        PolynomialT r = *this;
        r -= o;
        return r;
    }

    PolynomialT operator-() const { return *this * Ops::from_int(-1); }

    PolynomialT operator*(const Coeff& s) const {
        PolynomialT r(arity_);
        if (Ops::is_zero(s)) return r;
        r.terms_ = terms_;
        for (auto& t : r.terms_) t.second *= s;
        r.strip_zeros();
        return r;
    }

    PolynomialT operator*(const PolynomialT& o) const {
        check_arity(o);
        PolynomialT r(arity_);
        if (terms_.empty() || o.terms_.empty()) return r;
        std::map<MultiIndex, Coeff> acc;
        MultiIndex key;
        key.exponents.resize(arity_);
        for (const auto& [ma, ca] : terms_) {
            for (const auto& [mb, cb] : o.terms_) {
                for (int v = 0; v < arity_; ++v) key.exponents[v] = ma.exponents[v] + mb.exponents[v];
                auto [it, inserted] = acc.try_emplace(key, Ops::zero());
                it->second += ca * cb;
            }
        }
        r.terms_.reserve(acc.size());
        for (auto& [mi, c] : acc) r.terms_.emplace_back(mi, std::move(c));
        r.strip_zeros();
        return r;
    }

    PolynomialT& operator*=(const PolynomialT& o) { return *this = *this * o; }

    bool operator==(const PolynomialT& o) const { return arity_ == o.arity_ && terms_ == o.terms_; }

    PolynomialT derivative(int var) const {
        if (var < 0 || var >= arity_) throw std::invalid_argument("variable index out of range");
        PolynomialT r(arity_);
        r.terms_.reserve(terms_.size());
        for (const auto& [mi, c] : terms_) {
            if (mi.exponents[var] == 0) continue;
            MultiIndex m = mi;
            const int e = m.exponents[var]--;
            r.terms_.emplace_back(std::move(m), c * Ops::from_int(e));
        }
        std::sort(r.terms_.begin(), r.terms_.end(),
                  [](const Term& a, const Term& b) { return a.first < b.first; });
        return r;
    }

    template <typename Point>
    Point evaluate(std::span<const Point> x) const {
        if (static_cast<int>(x.size()) != arity_) throw std::invalid_argument("evaluation point arity mismatch");
        using R = Point;
        R total = R(0);
        for (const auto& [mi, c] : terms_) {
            R term = coeff_as<R>(c);
            for (int v = 0; v < arity_; ++v) {
                for (int e = 0; e < mi.exponents[v]; ++e) term *= x[v];
            }
            total += term;
        }
        return total;
    }

    double evaluate(std::span<const double> x) const { return evaluate<double>(x); }
    double evaluate(const std::vector<double>& x) const { return evaluate<double>(std::span<const double>(x)); }
    Rational evaluate(const std::vector<Rational>& x) const {
        return evaluate<Rational>(std::span<const Rational>(x));
    }

    // Slice of terms with the given total degree, as a polynomial.
    PolynomialT homogeneous_component(int deg) const {
        PolynomialT r(arity_);
        for (const auto& t : terms_)
            if (t.first.degree() == deg) r.terms_.push_back(t);
        return r;
    }

  private:
    template <typename R>
    static R coeff_as(const Coeff& c) {
        if constexpr (std::is_same_v<R, double>)
            return Ops::as_double(c);
        else
            return R(c);
    }

    void check_arity(const PolynomialT& o) const {
        if (arity_ != o.arity_) throw std::invalid_argument("polynomial arity mismatch");
    }

    void strip_zeros() {
        std::erase_if(terms_, [](const Term& t) { return Ops::is_zero(t.second); });
    }

    int arity_;
    std::vector<Term> terms_;
};

using Polynomial = PolynomialT<Rational>;
using RealPolynomial = PolynomialT<double>;

inline RealPolynomial to_real(const Polynomial& p) {
    std::vector<RealPolynomial::Term> terms;
    terms.reserve(p.term_count());
    for (const auto& [mi, c] : p.terms()) terms.emplace_back(mi, c.get_d());
    return RealPolynomial::from_terms(p.arity(), std::move(terms));
}

// All monomial exponent vectors of the given arity and total degree, in
// graded-lex order. The intertwining tables index their matrices by this
// ordering, so it must stay stable.
std::vector<MultiIndex> monomials_of_degree(int arity, int degree);

}  // namespace dunklkit
