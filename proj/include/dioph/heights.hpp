#pragma once

// Height functions on rational points: a height applies max, min, product,
// or lcm to the reduced denominators of the coordinates. Also the closed-form
// exponent constants gamma_d, alpha_d, beta_d and the irrationality exponents
// attached to each height kind.

#include "bigint.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace dioph {

enum class HeightKind { Max, Min, Prod, Lcm };

// Coordinates are exact rationals; cpp_rational stores them reduced, so the
// denominators read off here are already in lowest terms.
using RationalPoint = std::vector<BigRat>;

inline const char* height_kind_name(HeightKind k) {
    switch (k) {
        case HeightKind::Max: return "max";
        case HeightKind::Min: return "min";
        case HeightKind::Prod: return "prod";
        case HeightKind::Lcm: return "lcm";
    }
    return "?";
}

inline BigInt height(HeightKind kind, const RationalPoint& r) {
    if (r.empty()) throw std::invalid_argument("Height of an empty point.");
    using boost::multiprecision::denominator;
    BigInt acc = denominator(r[0]);
    for (std::size_t i = 1; i < r.size(); ++i) {
        const BigInt d = denominator(r[i]);
        switch (kind) {
            case HeightKind::Max: if (d > acc) acc = d; break;
            case HeightKind::Min: if (d < acc) acc = d; break;
            case HeightKind::Prod: acc *= d; break;
            case HeightKind::Lcm: acc = boost::multiprecision::lcm(acc, d); break;
        }
    }
    return acc;
}

// gamma_d = (d-1)^(1/d). Equals 1 at d = 2 and grows past 1 from d = 3 on.
inline double gamma_d(int d) {
    if (d < 2) throw std::domain_error("gamma_d requires d >= 2.");
    return std::pow(static_cast<double>(d - 1), 1.0 / d);
}

// alpha_d = d (d-1)^(-(d-1)/d), which is also gamma_d + gamma_d^(-(d-1)).
inline double alpha_d(int d) {
    if (d < 2) throw std::domain_error("alpha_d requires d >= 2.");
    return d * std::pow(static_cast<double>(d - 1),
                        -static_cast<double>(d - 1) / d);
}

// Uniform-approximation exponent of the adversary game: 2 for max and min,
// 2/d for prod. Not defined for lcm.
inline double beta_d(HeightKind kind, int d) {
    if (d < 1) throw std::domain_error("beta_d requires d >= 1.");
    switch (kind) {
        case HeightKind::Max:
        case HeightKind::Min: return 2.0;
        case HeightKind::Prod: return 2.0 / d;
        case HeightKind::Lcm: break;
    }
    throw std::domain_error("beta_d is not defined for the lcm height.");
}

// Irrationality exponent of each height kind in dimension d. At d = 1 all
// four kinds coincide with the plain denominator height, exponent 2.
inline double omega_exponent(HeightKind kind, int d) {
    if (d < 1) throw std::domain_error("omega_exponent requires d >= 1.");
    if (d == 1) return 2.0;
    switch (kind) {
        case HeightKind::Max: return alpha_d(d);
        case HeightKind::Min: return 2.0;
        case HeightKind::Prod: return 2.0 / d;
        case HeightKind::Lcm: return 1.0 + 1.0 / d;
    }
    throw std::domain_error("Unknown height kind.");
}

struct HeightChain {
    BigInt min, max, lcm, prod;
    double prod_root = 0.0;  // prod^(1/d), for display
    bool holds = false;      // min <= prod^(1/d) <= max <= lcm <= prod
};

// Evaluates all four heights and verifies the chain of inequalities between
// them. The fractional comparison prod^(1/d) is done exactly on integers
// (min^d <= prod and prod <= max^d).
inline HeightChain check_height_chain(const RationalPoint& r) {
    HeightChain c;
    c.min = height(HeightKind::Min, r);
    c.max = height(HeightKind::Max, r);
    c.lcm = height(HeightKind::Lcm, r);
    c.prod = height(HeightKind::Prod, r);
    const int d = static_cast<int>(r.size());
    c.prod_root = std::exp(log_big(c.prod) / d);
    BigInt min_pow = 1, max_pow = 1;
    for (int i = 0; i < d; ++i) { min_pow *= c.min; max_pow *= c.max; }
    c.holds = min_pow <= c.prod && c.prod <= max_pow && c.max <= c.lcm &&
              c.lcm <= c.prod;
    return c;
}

}  // namespace dioph
