#pragma once

// Arbitrary-precision number aliases and a few conversion helpers shared by
// the rest of the library. Thin layer over boost::multiprecision; nothing
// here implements numerics of its own.

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <stdexcept>

namespace dioph {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Wide-exponent float used where values like exp(3000) appear as
// intermediates. 100 decimal digits of mantissa is far more than any
// downstream tolerance needs.
using BigFloat = boost::multiprecision::cpp_bin_float_100;

// Natural log of a positive integer, accurate to double precision even when
// the value has thousands of digits (double conversion alone would overflow
// past ~1e308).
inline double log_big(const BigInt& n) {
    if (n <= 0) throw std::domain_error("log_big requires a positive integer.");
    const unsigned bits = boost::multiprecision::msb(n);
    if (bits <= 900) return std::log(n.convert_to<double>());
    const BigInt top = n >> (bits - 64);
    return std::log(top.convert_to<double>()) +
           static_cast<double>(bits - 64) * std::log(2.0);
}

// Natural log of a positive rational.
inline double log_rat(const BigRat& r) {
    if (r <= 0) throw std::domain_error("log_rat requires a positive rational.");
    return log_big(boost::multiprecision::numerator(r)) -
           log_big(boost::multiprecision::denominator(r));
}

// floor(exp(b)) as an exact integer. The result is computed from a
// 100-digit float, so for huge b the low digits are rounding, not truth;
// callers use these values as size targets, where only the leading digits
// and the order of magnitude matter.
inline BigInt floor_exp(double b) {
    if (b < 0.0) return 0;
    BigFloat e = exp(BigFloat(b));
    return boost::multiprecision::floor(e).convert_to<BigInt>();
}

}  // namespace dioph
