#include "dunklkit/polynomial.hpp"

namespace dunklkit {

namespace {

void enumerate(int arity, int var, int remaining, std::vector<int>& e, std::vector<MultiIndex>& out) {
    if (var == arity - 1) {
        e[var] = remaining;
        out.emplace_back(e);
        return;
    }
    // Descending leading exponent keeps graded-lex order.
    for (int d = remaining; d >= 0; --d) {
        e[var] = d;
        enumerate(arity, var + 1, remaining - d, e, out);
    }
}

}  // namespace

std::vector<MultiIndex> monomials_of_degree(int arity, int degree) {
    if (arity <= 0 || degree < 0) throw std::invalid_argument("bad monomial enumeration request");
    std::vector<MultiIndex> out;
    std::vector<int> e(arity, 0);
    enumerate(arity, 0, degree, e, out);
    // enumerate() produces descending lex; the polynomial term order is
    // ascending lex within a degree, so flip.
    std::reverse(out.begin(), out.end());
    return out;
}

}  // namespace dunklkit
