#pragma once

// Continued fractions in exact arithmetic: expansion of rationals and of
// certified reals, convergents with the standard three-term recursions,
// exact error brackets, a greedy constructor that hits prescribed
// denominator targets within a factor of two, and reduction of an arbitrary
// fraction to a dominating convergent.

#include "bigint.hpp"
#include "real_interval.hpp"

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace dioph {

struct invalid_sequence : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Partial quotients a[0], a[1], ... with a[n] >= 1 for n >= 1. `terminated`
// marks a complete expansion of a rational (canonical: the last quotient is
// never 1 unless it is the only one); otherwise the stored quotients are a
// certified prefix of a longer expansion.
struct ContinuedFraction {
    std::vector<BigInt> a;
    bool terminated = false;

    std::size_t size() const { return a.size(); }
};

struct Convergent {
    BigInt p;
    BigInt q;
    std::size_t index = 0;

    BigRat value() const { return BigRat(p, q); }
};

// Euclid's algorithm. The final convergent reconstructs r exactly.
inline ContinuedFraction expand_rational(const BigRat& r) {
    ContinuedFraction cf;
    cf.terminated = true;
    BigInt num = boost::multiprecision::numerator(r);
    BigInt den = boost::multiprecision::denominator(r);
    for (;;) {
        // Floor division (den > 0 always, num may be negative on the first step).
        BigInt quot = num / den;
        if (num % den != 0 && num < 0) --quot;
        cf.a.push_back(quot);
        BigInt rem = num - quot * den;
        if (rem == 0) break;
        num = den;
        den = rem;
    }
    // Euclid cannot emit a trailing 1 except for the single-entry case,
    // because each remainder is strictly smaller than its divisor.
    return cf;
}

// Floor-and-invert on an exact enclosure of x. Every returned quotient is
// certified: all reals inside the input interval share this prefix. Stops
// early (terminated = true) when the enclosure collapses onto a rational.
inline ContinuedFraction expand_real(const RealInterval& x, std::size_t count) {
    ContinuedFraction cf;
    BigRat lo = x.lo(), hi = x.hi();
    while (cf.size() < count) {
        using boost::multiprecision::numerator;
        using boost::multiprecision::denominator;
        BigInt flo = numerator(lo) / denominator(lo);
        if (numerator(lo) % denominator(lo) != 0 && numerator(lo) < 0) --flo;
        BigInt fhi = numerator(hi) / denominator(hi);
        if (numerator(hi) % denominator(hi) != 0 && numerator(hi) < 0) --fhi;
        if (flo != fhi)
            throw precision_exhausted(
                "Interval straddles an integer after " +
                std::to_string(cf.size()) + " quotients; rebuild the input "
                "with more bits.");
        cf.a.push_back(flo);
        BigRat frac_lo = lo - BigRat(flo);
        BigRat frac_hi = hi - BigRat(flo);
        if (frac_hi == 0) {  // exactly an integer: expansion complete
            cf.terminated = true;
            break;
        }
        if (frac_lo == 0)
            throw precision_exhausted(
                "Interval endpoint hits an integer exactly; cannot certify "
                "the next quotient.");
        lo = 1 / frac_hi;
        hi = 1 / frac_lo;
    }
    return cf;
}

// p_n = a_n p_{n-1} + p_{n-2}, q_n = a_n q_{n-1} + q_{n-2}, seeded with
// p_{-1} = 1, q_{-1} = 0, p_0 = a_0, q_0 = 1.
inline std::vector<Convergent> convergents(
    const ContinuedFraction& cf,
    std::size_t upto = std::numeric_limits<std::size_t>::max()) {
    std::vector<Convergent> out;
    if (cf.a.empty()) return out;
    const std::size_t n_max = std::min(upto, cf.size() - 1);
    out.reserve(n_max + 1);
    BigInt p_prev = 1, q_prev = 0;
    BigInt p = cf.a[0], q = 1;
    out.push_back({p, q, 0});
    for (std::size_t n = 1; n <= n_max; ++n) {
        if (cf.a[n] < 1)
            throw invalid_sequence("Partial quotient a[" + std::to_string(n) +
                                   "] must be >= 1.");
        BigInt p_next = cf.a[n] * p + p_prev;
        BigInt q_next = cf.a[n] * q + q_prev;
        p_prev = p; q_prev = q;
        p = p_next; q = q_next;
        out.push_back({p, q, n});
    }
    return out;
}

// Exact rational interval containing every real whose expansion begins with
// these quotients. Consecutive convergents straddle all such reals; with a
// single quotient the enclosure is [a0, a0 + 1].
inline RealInterval value_enclosure(const ContinuedFraction& cf) {
    if (cf.a.empty())
        throw invalid_sequence("Cannot enclose an empty continued fraction.");
    auto cv = convergents(cf);
    if (cf.terminated) return RealInterval::point(cv.back().value());
    if (cv.size() == 1)
        return RealInterval(BigRat(cv[0].p), BigRat(cv[0].p + 1));
    BigRat u = cv[cv.size() - 2].value();
    BigRat v = cv.back().value();
    return u <= v ? RealInterval(u, v) : RealInterval(v, u);
}

// Exact bounds on |x - p_n/q_n| for any x extending the expansion:
//   1/(q_n (q_n + q_{n+1})) <= |x - p_n/q_n| <= 1/(q_n q_{n+1}).
// Needs the (n+1)-th convergent. For a terminated expansion the error at the
// last index is exactly zero, and at the second-to-last index it is exactly
// the upper end of the bracket.
inline std::pair<BigRat, BigRat> convergent_error_bracket(
    const ContinuedFraction& cf, std::size_t n) {
    if (cf.terminated && n + 1 == cf.size())
        return {BigRat(0), BigRat(0)};
    if (n + 2 > cf.size())
        throw invalid_sequence(
            "Error bracket at index " + std::to_string(n) +
            " needs quotient a[" + std::to_string(n + 1) + "].");
    auto cv = convergents(cf, n + 1);
    const BigInt& qn = cv[n].q;
    const BigInt& qn1 = cv[n + 1].q;
    BigRat upper(1, qn * qn1);
    if (cf.terminated && n + 2 == cf.size()) return {upper, upper};
    return {BigRat(1, qn * (qn + qn1)), upper};
}

// Greedy construction: given targets t_0 = 1, t_{n+1} >= 2 t_n, choose each
// quotient as the largest a with a q_{n-1} + q_{n-2} <= t_n. The doubling
// condition makes every step feasible (a >= 1) and sandwiches the resulting
// denominators: t_n / 2 <= q_n <= t_n. Returned with a0 = 0, so the value
// lies in (0, 1) and q_0 = 1 matches t_0.
inline ContinuedFraction denominators_to_cf(const std::vector<BigInt>& targets) {
    if (targets.empty() || targets[0] != 1)
        throw invalid_sequence("Denominator targets must start at 1.");
    for (std::size_t n = 0; n + 1 < targets.size(); ++n)
        if (targets[n + 1] < 2 * targets[n])
            throw invalid_sequence(
                "Denominator targets must at least double at each step "
                "(violated at index " + std::to_string(n + 1) + ").");
    ContinuedFraction cf;
    cf.a.push_back(0);
    BigInt q_prev2 = 0, q_prev = 1;  // q_{-1}, q_0
    for (std::size_t n = 1; n < targets.size(); ++n) {
        BigInt a = (targets[n] - q_prev2) / q_prev;
        if (a < 1)
            throw invalid_sequence("Greedy step produced a quotient below 1; "
                                   "targets are inconsistent.");
        cf.a.push_back(a);
        BigInt q = a * q_prev + q_prev2;
        q_prev2 = q_prev;
        q_prev = q;
    }
    return cf;
}

struct DominationResult {
    bool found = false;
    std::size_t index = 0;       // smallest n passing both inequalities
    double error_ratio = 0.0;    // certified lower bound on err(p/q)/err(conv n)
    std::size_t scanned = 0;     // how many convergents were examined
};

// Finds the first convergent that dominates an arbitrary fraction p/q:
//   q >= c1 * q_n   and   |x - p/q| >= c2 * |x - p_n/q_n|.
// The error comparison is certified from exact brackets, so a returned index
// is a proof; found = false reports a counterexample to the chosen constants
// (or insufficient depth) rather than asserting.
inline DominationResult best_approx_reduce(const ContinuedFraction& cf,
                                           const BigRat& pq,
                                           double c1 = 0.5,
                                           double c2 = 0.125) {
    if (cf.size() < 2)
        throw invalid_sequence("best_approx_reduce needs at least two quotients.");
    const BigRat rc1(c1), rc2(c2);
    const BigRat q(boost::multiprecision::denominator(pq));
    const RealInterval x = value_enclosure(cf);
    const RealInterval err_pq = x.abs_distance(pq);
    DominationResult res;
    auto cv = convergents(cf);
    // Beyond q_n > q/c1 the first inequality can never hold again.
    for (std::size_t n = 0; n + 1 < cv.size(); ++n) {
        res.scanned = n + 1;
        if (BigRat(cv[n].q) * rc1 > q) break;
        auto bracket = convergent_error_bracket(cf, n);
        const BigRat& err_n_hi = bracket.second;
        bool dominated = false;
        if (err_n_hi == 0) {
            dominated = true;  // x is exactly this convergent
        } else if (err_pq.lo() >= rc2 * err_n_hi) {
            dominated = true;
        }
        if (dominated) {
            res.found = true;
            res.index = n;
            res.error_ratio =
                err_n_hi == 0 ? std::numeric_limits<double>::infinity()
                              : BigRat(err_pq.lo() / err_n_hi).convert_to<double>();
            return res;
        }
    }
    return res;
}

}  // namespace dioph
