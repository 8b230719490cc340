#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace seqrule {

// Exact arbitrary-precision integers everywhere: level counts grow
// exponentially with depth and fixed-width arithmetic would silently wrap.
using BigInt = boost::multiprecision::cpp_int;

inline BigInt abs(const BigInt& v) { return v < 0 ? BigInt(-v) : v; }

// Ceiling of a/b for b > 0.
inline BigInt ceil_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    if (a % b != 0 && ((a < 0) == (b < 0))) ++q;
    return q;
}

}  // namespace seqrule
