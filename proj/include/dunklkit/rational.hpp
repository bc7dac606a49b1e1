#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace dunklkit {

// Exact rational coefficient type. GMP keeps every arithmetic identity
// check free of rounding; conversion to double happens only at the
// quadrature boundary.
using Rational = mpq_class;

inline Rational rational(long num, long den = 1) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

inline double to_double(const Rational& r) { return r.get_d(); }

inline bool is_integer_valued(const Rational& r) { return r.get_den() == 1; }

inline std::string to_string(const Rational& r) { return r.get_str(); }

}  // namespace dunklkit
