#pragma once

#include <functional>
#include <span>
#include <vector>

#include "dunklkit/algebra.hpp"
#include "dunklkit/polynomial.hpp"
#include "dunklkit/rational.hpp"

namespace dunklkit {

// Multiplicity parameter k attached to every reflection (type A has a
// single orbit). Kept exact so polynomial-side operations stay exact;
// numeric code converts at the boundary.
class Multiplicity {
  public:
    Multiplicity(Rational k) : k_(std::move(k)) {
        if (sgn(k_) <= 0) throw std::invalid_argument("multiplicity k must be > 0");
    }
    Multiplicity(long num, long den = 1) : Multiplicity(rational(num, den)) {}
    explicit Multiplicity(double k) : Multiplicity(Rational(k)) {}

    const Rational& exact() const { return k_; }
    double value() const { return k_.get_d(); }

  private:
    Rational k_;
};

// Black-box scalar function of a real vector, with declared arity.
struct FunctionHandle {
    int arity = 0;
    std::function<double(const std::vector<double>&)> f;

    double operator()(const std::vector<double>& x) const { return f(x); }
};

// T_j p = d p/d x_j + k sum_{i != j} (p - s_ij p)/(x_j - x_i), exactly.
// j is 0-based. Degree drops by one on homogeneous input.
Polynomial dunkl_apply_poly(const Polynomial& p, int j, const Multiplicity& k);

struct DunklFnOptions {
    double h = 1e-5;
    bool richardson = true;
};

// Same operator on a black-box function at a single point: the partial
// derivative by central difference (optionally Richardson-extrapolated),
// the reflection terms by exact re-evaluation at swapped coordinates.
// Refuses when some |X_j - X_i| < 10 h, where the quotient loses digits.
double dunkl_apply_fn(const FunctionHandle& f, int j, const Multiplicity& k,
                      const std::vector<double>& x, const DunklFnOptions& opt = {});

// True iff T_i T_j p == T_j T_i p exactly. Requires i != j.
bool check_commutativity(const Polynomial& p, int i, int j, const Multiplicity& k);

}  // namespace dunklkit
