#include "dunklkit/dunkl.hpp"

#include <cmath>
#include <stdexcept>

namespace dunklkit {

Polynomial dunkl_apply_poly(const Polynomial& p, int j, const Multiplicity& k) {
    const int arity = p.arity();
    if (j < 0 || j >= arity) throw std::invalid_argument("dunkl operator index out of range");
    Polynomial out = p.derivative(j);
    for (int i = 0; i < arity; ++i) {
        if (i == j) continue;
        // divided_difference(p, j, i) = (p - s_ij p)/(x_j - x_i)
        out += divided_difference(p, j, i) * k.exact();
    }
    return out;
}

double dunkl_apply_fn(const FunctionHandle& f, int j, const Multiplicity& k,
                      const std::vector<double>& x, const DunklFnOptions& opt) {
    const int arity = f.arity;
    if (static_cast<int>(x.size()) != arity) throw std::invalid_argument("point arity mismatch");
    if (j < 0 || j >= arity) throw std::invalid_argument("dunkl operator index out of range");
    if (!(opt.h > 0)) throw std::invalid_argument("step h must be > 0");
    for (int i = 0; i < arity; ++i) {
        if (i != j && std::abs(x[j] - x[i]) < 10.0 * opt.h)
            throw std::domain_error("coordinate gap below 10*h; reflection quotient unstable");
    }

    const auto central = [&](double h) {
        std::vector<double> xp = x, xm = x;
        xp[j] += h;
        xm[j] -= h;
        return (f(xp) - f(xm)) / (2.0 * h);
    };
    double deriv = central(opt.h);
    if (opt.richardson) deriv = (4.0 * central(opt.h / 2.0) - deriv) / 3.0;

    const double fx = f(x);
    double reflections = 0.0;
    for (int i = 0; i < arity; ++i) {
        if (i == j) continue;
        std::vector<double> xs = x;
        std::swap(xs[i], xs[j]);
        reflections += (fx - f(xs)) / (x[j] - x[i]);
    }
    return deriv + k.value() * reflections;
}

bool check_commutativity(const Polynomial& p, int i, int j, const Multiplicity& k) {
    if (i == j) throw std::invalid_argument("commutativity check needs distinct indices");
    const Polynomial ij = dunkl_apply_poly(dunkl_apply_poly(p, j, k), i, k);
    const Polynomial ji = dunkl_apply_poly(dunkl_apply_poly(p, i, k), j, k);
    return ij == ji;
}

}  // namespace dunklkit
