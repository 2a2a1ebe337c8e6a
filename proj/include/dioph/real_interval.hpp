#pragma once

// Certified real numbers: an exact rational interval [lo, hi] guaranteed to
// contain the represented value. Constructors for the irrationals used in
// experiments (square roots, golden ratio, pi, e) take a bit budget and
// return enclosures of width about 2^-bits. Operations that cannot be
// decided from an enclosure fail loudly instead of rounding.

#include "bigint.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace dioph {

// Raised when an enclosure is too wide to decide the question being asked
// (for example: which integer a real lies above, when the interval straddles
// an integer). Remedy: rebuild the input with more bits.
struct precision_exhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class RealInterval {
public:
    RealInterval(BigRat lo, BigRat hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
        if (lo_ > hi_)
            throw std::invalid_argument("RealInterval endpoints out of order.");
    }

    static RealInterval point(const BigRat& r) { return RealInterval(r, r); }

    // Encloses sqrt(n) for n >= 0 using the integer square root of n scaled
    // by 4^bits: if s = isqrt(n * 4^bits) then s <= sqrt(n) * 2^bits < s + 1.
    static RealInterval sqrt_of(const BigInt& n, unsigned bits) {
        if (n < 0) throw std::domain_error("sqrt_of requires n >= 0.");
        const BigInt scale = BigInt(1) << bits;
        const BigInt scaled = n * scale * scale;
        const BigInt s = boost::multiprecision::sqrt(scaled);
        return RealInterval(BigRat(s, scale), BigRat(s + 1, scale));
    }

    static RealInterval golden_ratio(unsigned bits) {
        RealInterval r5 = sqrt_of(5, bits + 2);
        return RealInterval((1 + r5.lo_) / 2, (1 + r5.hi_) / 2);
    }

    // Machin's formula pi = 16 arctan(1/5) - 4 arctan(1/239) with exact
    // rational partial sums. The arctan series alternates, so consecutive
    // partial sums bracket the true value.
    static RealInterval pi(unsigned bits) {
        const auto a5 = arctan_inv_brackets(5, bits + 8);
        const auto a239 = arctan_inv_brackets(239, bits + 8);
        return RealInterval(16 * a5.first - 4 * a239.second,
                            16 * a5.second - 4 * a239.first);
    }

    // e = sum 1/k! with remainder after the m-th term below 2/(m+1)!.
    static RealInterval e(unsigned bits) {
        BigRat sum = 0;
        BigInt fact = 1;
        unsigned m = 0;
        const BigRat eps = BigRat(1, BigInt(1) << (bits + 4));
        for (;;) {
            sum += BigRat(1, fact);
            ++m;
            fact *= m;
            if (BigRat(2, fact) < eps) break;
        }
        return RealInterval(sum, sum + BigRat(2, fact));
    }

    const BigRat& lo() const { return lo_; }
    const BigRat& hi() const { return hi_; }
    BigRat width() const { return hi_ - lo_; }
    bool is_point() const { return lo_ == hi_; }
    bool contains(const BigRat& r) const { return lo_ <= r && r <= hi_; }

    double to_double() const {
        return ((lo_ + hi_) / 2).convert_to<double>();
    }

    RealInterval operator+(const BigRat& r) const {
        return RealInterval(lo_ + r, hi_ + r);
    }
    RealInterval operator-(const BigRat& r) const {
        return RealInterval(lo_ - r, hi_ - r);
    }

    // |this - r| as an interval (attains 0 when r is inside).
    RealInterval abs_distance(const BigRat& r) const {
        if (contains(r)) {
            BigRat far = std::max(BigRat(hi_ - r), BigRat(r - lo_));
            return RealInterval(0, far);
        }
        if (r < lo_) return RealInterval(lo_ - r, hi_ - r);
        return RealInterval(r - hi_, r - lo_);
    }

private:
    // Brackets [lower, upper] for arctan(1/x), x >= 2, via the alternating
    // Taylor series truncated once the next term is below 2^-prec.
    static std::pair<BigRat, BigRat> arctan_inv_brackets(unsigned x, unsigned prec) {
        const BigRat eps = BigRat(1, BigInt(1) << prec);
        const BigInt x2 = BigInt(x) * x;
        BigRat sum = 0;
        BigInt xpow = x;  // x^(2k+1)
        unsigned k = 0;
        for (;;) {
            BigRat term(1, (2 * k + 1) * xpow);
            if (k % 2 == 0) sum += term; else sum -= term;
            ++k;
            xpow *= x2;
            BigRat next(1, (2 * k + 1) * xpow);
            if (next < eps) {
                // Sum alternates: the value lies between sum and sum +/- next.
                if (k % 2 == 0) return {sum, sum + next};
                return {sum - next, sum};
            }
        }
    }

    BigRat lo_, hi_;
};

}  // namespace dioph
