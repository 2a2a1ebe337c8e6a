#pragma once

// Dirichlet-type verdicts and empirical approximation estimators.
//
// The first half decides whether an approximating function psi admits a
// uniform (Dirichlet-style) bound for the max height in dimension d >= 3,
// by reducing to the regularity of the derived form f_psi; it also carries
// the closed-form family threshold, the adversary-based uniform check for
// the min/prod heights, and the optimality scan for the growth exponent.
//
// The second half measures concrete points: given certified interval
// enclosures of the coordinates, it enumerates convergent tuples with
// exact error brackets and reports the best approximation constant in a
// height window and a liminf-style exponent estimate. It closes with the
// constructive converse: a rational point engineered so that the max
// height's uniform bound is tight along a geometric denominator ladder.

#include "bigint.hpp"
#include "cfrac.hpp"
#include "dataprog.hpp"
#include "funexpr.hpp"
#include "heights.hpp"
#include "real_interval.hpp"
#include "recint.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dioph {

// ---------------------------------------------------------------------------
// Dirichlet verdicts for the max height, d >= 3
// ---------------------------------------------------------------------------

enum class Dirichletness { Dirichlet, NotDirichlet, Undetermined };

inline const char* dirichletness_name(Dirichletness v) {
    switch (v) {
        case Dirichletness::Dirichlet: return "Dirichlet";
        case Dirichletness::NotDirichlet: return "NotDirichlet";
        case Dirichletness::Undetermined: return "Undetermined";
    }
    return "Undetermined";
}

struct DirichletVerdict {
    Dirichletness verdict = Dirichletness::Undetermined;
    std::string rule;  // decision trail, e.g. "fpsi-tail:GE;rr:family(C=2.0)"
    CompareResult fpsi_sign = CompareResult::MIXED;  // sampled tail sign of f_psi
    std::optional<RegularityDecision> basis;  // present when the RR decider ran
};

namespace detail {

// Sampled tail sign of f_psi against zero. The derived form subtracts
// Psi(b)/b from alpha_d, so its evaluation carries absolute cancellation
// noise of a few ulps of alpha_d regardless of how small the true value is;
// a plain relative comparison would read that noise as sign changes. Samples
// within the cancellation band count as ties, and ties resolve to LE.
inline CompareResult fpsi_tail_sign(const FuncExpr& f, int d) {
    const double band =
        1e-13 * (2.0 / (d * gamma_d(d))) * alpha_d(d);
    const double x_lo = std::max(1e4, f.t_domain() * 1.5 + 1e-9);
    const double x_hi = 1e12;
    const int samples = 512;
    bool any_less = false, any_greater = false;
    const double step = std::log(x_hi / x_lo) / (samples - 1);
    for (int i = 0; i < samples; ++i) {
        const double fv = f(x_lo * std::exp(i * step));
        if (fv < -band) any_less = true;
        if (fv > band) any_greater = true;
        if (any_less && any_greater) return CompareResult::MIXED;
    }
    if (any_greater) return CompareResult::GE;
    return CompareResult::LE;
}

}  // namespace detail

// Decides whether psi admits the uniform max-height property in dimension d:
// every point has a solution with height at most Q and error at most
// psi(Q), for all large Q. The route runs through the derived f_psi:
//
//   * tail of f_psi <= 0: psi sits at or beyond the critical power law
//     q^{-alpha_d}, where the uniform property already fails (shrinking psi
//     only strengthens the demand), so NotDirichlet;
//   * tail of f_psi >= 0: the property holds exactly when the tail
//     recursion driven by f_psi escapes, so decide_rr gives the verdict;
//   * mixed tail sign: no reduction applies, Undetermined.
inline DirichletVerdict dirichlet_decide(const PsiSpec& psi, int d,
                                         const DecideOptions& opts = {}) {
    if (d < 3)
        throw unsupported_dimension(
            "dirichlet_decide covers the max height for d >= 3; the d = 2 "
            "max and the min/prod heights are uniform for every psi "
            "(see minprod_uniform_check).");
    const PsiHypothesesReport hyp = validate_psi_hypotheses(psi);
    if (!hyp.increasing)
        throw std::invalid_argument(
            "psi must be nonincreasing (its negative log must not decrease "
            "on the validation window).");

    const DerivedForms forms = derive_forms(psi, d);
    DirichletVerdict out;
    out.fpsi_sign = detail::fpsi_tail_sign(forms.f_psi, d);

    if (out.fpsi_sign == CompareResult::LE) {
        out.verdict = Dirichletness::NotDirichlet;
        out.rule = "fpsi-tail:LE";
        return out;
    }
    if (out.fpsi_sign == CompareResult::MIXED) {
        out.verdict = Dirichletness::Undetermined;
        out.rule = "fpsi-tail:MIXED";
        return out;
    }

    out.basis = decide_rr(forms.f_psi, opts);
    switch (out.basis->verdict) {
        case Regularity::InRR:
            out.verdict = Dirichletness::NotDirichlet;
            break;
        case Regularity::NotInRR:
            out.verdict = Dirichletness::Dirichlet;
            break;
        case Regularity::Undetermined:
            out.verdict = Dirichletness::Undetermined;
            break;
    }
    out.rule = "fpsi-tail:GE;rr:" + out.basis->rule;
    return out;
}

// Family verdict with its closed-form threshold: psi_{N,C} is Dirichlet
// exactly when C > 1, for every N >= 1 and d >= 3. The generic decider runs
// as a cross-check; a decisive disagreement means one of the two routes is
// broken, which is a bug, not data.
inline DirichletVerdict dirichlet_decide_family(int d, int N, double C,
                                                const DecideOptions& opts = {}) {
    const PsiSpec psi = psi_NC(d, N, C);
    DirichletVerdict generic = dirichlet_decide(psi, d, opts);

    DirichletVerdict out = std::move(generic);
    const Dirichletness exact =
        C > 1.0 ? Dirichletness::Dirichlet : Dirichletness::NotDirichlet;
    if (out.verdict != Dirichletness::Undetermined && out.verdict != exact) {
        std::ostringstream os;
        os << "Family threshold (C = " << C << " => "
           << dirichletness_name(exact)
           << ") contradicts the generic decider (" << out.rule << ").";
        throw std::logic_error(os.str());
    }
    std::ostringstream os;
    os << "family-threshold(C=" << C << ");" << out.rule;
    out.rule = os.str();
    out.verdict = exact;
    return out;
}

// ---------------------------------------------------------------------------
// Uniform property for the min and prod heights: adversary plays
// ---------------------------------------------------------------------------

struct UniformCheckReport {
    HeightKind kind = HeightKind::Min;
    int d = 0;
    int trials = 0;
    int max_steps = 0;    // accepted moves in the longest play
    int max_k_steps = 0;  // largest count of maximum-raising moves
    int max_budget = 0;   // largest per-play variance budget
    double worst_budget_fraction = 0.0;  // max of k_steps / budget
};

// Plays the denominator-growth adversary repeatedly and demands that every
// play dies within its variance budget while obeying the per-move descent
// inequalities. These heights are uniform for every psi in every dimension,
// so a surviving play falsifies the bound and is treated as a bug.
inline UniformCheckReport minprod_uniform_check(HeightKind kind, int d,
                                                int trials,
                                                std::uint64_t seed0 = 1,
                                                int max_rounds = 20000) {
    if (kind == HeightKind::Max && d > 2)
        throw unsupported_dimension(
            "The max height is uniform only for d <= 2; use dirichlet_decide "
            "for d >= 3.");
    if (kind == HeightKind::Lcm)
        throw unsupported_dimension(
            "No uniform bound is implemented for the lcm height.");
    if (trials < 1) throw std::invalid_argument("trials must be positive.");

    UniformCheckReport rep;
    rep.kind = kind;
    rep.d = d;
    rep.trials = trials;
    for (int t = 0; t < trials; ++t) {
        const AdversaryPlayReport play =
            play_adversary_game(kind, d, seed0 + static_cast<std::uint64_t>(t),
                                max_rounds);
        if (!play.terminated || !play.k_steps_within_budget ||
            !play.stepwise_ok) {
            std::ostringstream os;
            os << "Adversary play " << t << " (seed " << seed0 + t
               << ") broke the uniform bound: terminated=" << play.terminated
               << " k_steps=" << play.k_steps << " budget=" << play.budget
               << " stepwise_ok=" << play.stepwise_ok;
            throw std::logic_error(os.str());
        }
        rep.max_steps = std::max(rep.max_steps, play.steps);
        rep.max_k_steps = std::max(rep.max_k_steps, play.k_steps);
        rep.max_budget = std::max(rep.max_budget, play.budget);
        if (play.budget > 0)
            rep.worst_budget_fraction =
                std::max(rep.worst_budget_fraction,
                         static_cast<double>(play.k_steps) / play.budget);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Optimality of the critical exponent
// ---------------------------------------------------------------------------

struct GammaOptimumReport {
    int d = 0;
    double grid_step = 0.0;
    double argmax = 0.0;     // grid argmax of (alpha_d - g) g^{d-1}
    double max_value = 0.0;  // grid maximum
    double refined_argmax = 0.0;  // after ternary refinement
    double refined_max = 0.0;
    double argmin = 0.0;     // refined argmin of g + g^{1-d}
    double min_value = 0.0;  // refined minimum, equals alpha_d at the optimum
    bool argmax_near_gamma_d = false;  // within one grid step of gamma_d
    bool max_is_one = false;           // refined max within 1e-9 of 1
    bool interior = false;             // neither optimum sits on the scan edge
};

// Scans g in (1, 3] and checks that the growth base gamma_d is the unique
// maximizer of (alpha_d - g) g^{d-1} with maximum value exactly 1, and the
// minimizer of g + g^{1-d} with minimum value alpha_d. Both facts pin down
// why the geometric ladder with base gamma_d is the extremal construction.
inline GammaOptimumReport gamma_optimum_check(int d, double grid_step = 1e-3) {
    if (d < 3) throw std::domain_error("gamma_optimum_check requires d >= 3.");
    if (!(grid_step > 0) || grid_step > 0.1)
        throw std::invalid_argument("grid_step must lie in (0, 0.1].");

    const double a = alpha_d(d);
    const auto f = [&](double g) { return (a - g) * std::pow(g, d - 1); };
    const auto h = [&](double g) { return g + std::pow(g, 1 - d); };

    GammaOptimumReport rep;
    rep.d = d;
    rep.grid_step = grid_step;
    rep.max_value = -1e300;
    double h_best = 1e300, h_arg = 0.0;
    for (double g = 1.0 + grid_step; g <= 3.0 + 1e-12; g += grid_step) {
        const double fg = f(g);
        if (fg > rep.max_value) {
            rep.max_value = fg;
            rep.argmax = g;
        }
        const double hg = h(g);
        if (hg < h_best) {
            h_best = hg;
            h_arg = g;
        }
    }

    // Ternary refinement; f is unimodal near the peak and h is convex.
    const auto refine = [&](auto fn, double c, bool maximize) {
        double lo = std::max(1.0 + 1e-12, c - grid_step);
        double hi = std::min(3.0, c + grid_step);
        for (int it = 0; it < 200; ++it) {
            const double m1 = lo + (hi - lo) / 3.0;
            const double m2 = hi - (hi - lo) / 3.0;
            const bool keep_left = maximize ? fn(m1) > fn(m2) : fn(m1) < fn(m2);
            if (keep_left)
                hi = m2;
            else
                lo = m1;
        }
        return 0.5 * (lo + hi);
    };
    rep.refined_argmax = refine(f, rep.argmax, true);
    rep.refined_max = f(rep.refined_argmax);
    rep.argmin = refine(h, h_arg, false);
    rep.min_value = h(rep.argmin);

    const double gd = gamma_d(d);
    rep.argmax_near_gamma_d = std::abs(rep.argmax - gd) <= grid_step + 1e-12;
    rep.max_is_one = std::abs(rep.refined_max - 1.0) <= 1e-9;
    rep.interior = rep.argmax > 1.0 + 1.5 * grid_step &&
                   rep.argmax < 3.0 - 1.5 * grid_step &&
                   rep.argmin > 1.0 + 1.5 * grid_step &&
                   rep.argmin < 3.0 - 1.5 * grid_step;
    return rep;
}

// ---------------------------------------------------------------------------
// Certified convergent tuples from interval data
// ---------------------------------------------------------------------------

struct ApproximationRecord {
    RationalPoint r;
    BigInt height = 0;
    BigFloat error = 0;  // certified upper end of the max-norm distance
    BigFloat ratio = 0;  // error / psi(height), or the log-ratio for omega
};

namespace detail {

// Longest expansion prefix the interval certifies, stopping once the last
// denominator passes q_stop (one convergent beyond the cap is kept so the
// deepest in-range candidates still have a certified successor). expand_real
// throws without returning a partial expansion, so probe increasing lengths
// and keep the last success.
inline ContinuedFraction certified_prefix(const RealInterval& x,
                                          const BigInt& q_stop,
                                          std::size_t cap = 4096) {
    ContinuedFraction best;
    bool any = false;
    for (std::size_t n = 1; n <= cap; ++n) {
        ContinuedFraction cur;
        try {
            cur = expand_real(x, n);
        } catch (const precision_exhausted&) {
            break;
        }
        best = std::move(cur);
        any = true;
        if (best.terminated) break;
        if (!best.a.empty()) {
            const auto conv = convergents(best);
            if (!conv.empty() && conv.back().q > q_stop) break;
        }
    }
    if (!any)
        throw precision_exhausted(
            "Interval too wide to certify a single partial quotient.");
    return best;
}

struct CoordCandidate {
    BigRat value;
    BigInt q = 1;
    BigRat err_lo = 0, err_hi = 0;  // |x_i - value| bracket from the interval
};

struct TupleCandidate {
    RationalPoint r;
    BigInt height = 1;
    BigRat err_lo = 0, err_hi = 0;  // max-norm bracket
    bool frontier = false;
};

// Convergents of each coordinate with exact error brackets. Candidates whose
// bracket cannot exclude zero are kept (a deep coordinate may sit inside the
// interval); the tuple stage drops tuples whose max-norm bracket stays
// uncertified. For the min height, integer-valued convergents (q = 1) are
// admitted only when the coordinate is exactly that integer: otherwise they
// freeze the min at height 1 without approximating anything.
inline std::vector<std::vector<CoordCandidate>> coordinate_candidates(
    const std::vector<RealInterval>& x, HeightKind kind, const BigInt& q_max) {
    if (x.empty()) throw std::invalid_argument("Point must have d >= 1.");
    if (q_max < 2) throw std::invalid_argument("q_max must be at least 2.");
    std::vector<std::vector<CoordCandidate>> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const ContinuedFraction cf = certified_prefix(x[i], q_max);
        const auto conv = convergents(cf);
        for (std::size_t n = 0; n < conv.size(); ++n) {
            if (kind == HeightKind::Min && conv[n].q == 1 &&
                !(cf.terminated && n + 1 == conv.size()))
                continue;
            CoordCandidate c;
            c.value = conv[n].value();
            c.q = conv[n].q;
            const RealInterval dist = x[i].abs_distance(c.value);
            c.err_lo = dist.lo();
            c.err_hi = dist.hi();
            out[i].push_back(std::move(c));
        }
        if (out[i].empty())
            throw precision_exhausted(
                "No admissible convergents for a coordinate.");
    }
    return out;
}

inline TupleCandidate assemble_tuple(const std::vector<CoordCandidate*>& pick,
                                 HeightKind kind) {
    TupleCandidate t;
    t.err_lo = 0;
    t.err_hi = 0;
    for (const CoordCandidate* c : pick) {
        t.r.push_back(c->value);
        t.err_lo = std::max(t.err_lo, c->err_lo);
        t.err_hi = std::max(t.err_hi, c->err_hi);
    }
    t.height = height(kind, t.r);
    return t;
}

// Certified tuple candidates for the given height kind. The max and min
// heights admit a dominance reduction: for a prescribed height only the
// componentwise-deepest admissible choice can sit on the error/height
// Pareto frontier, so one tuple per height class (max) or per
// height-setting convergent (min) suffices. The prod/lcm heights trade
// depth between coordinates, so they enumerate the full grid.
inline std::vector<TupleCandidate> tuple_candidates(
    std::vector<std::vector<CoordCandidate>>& coords, HeightKind kind) {
    const std::size_t d = coords.size();
    std::vector<TupleCandidate> out;

    if (kind == HeightKind::Max) {
        std::vector<BigInt> caps;
        for (const auto& list : coords)
            for (const auto& c : list) caps.push_back(c.q);
        std::sort(caps.begin(), caps.end());
        caps.erase(std::unique(caps.begin(), caps.end()), caps.end());
        for (const BigInt& cap : caps) {
            std::vector<CoordCandidate*> pick(d, nullptr);
            bool ok = true;
            for (std::size_t i = 0; i < d && ok; ++i) {
                for (auto& c : coords[i])
                    if (c.q <= cap) pick[i] = &c;
                ok = pick[i] != nullptr;
            }
            if (ok) out.push_back(assemble_tuple(pick, kind));
        }
        return out;
    }

    if (kind == HeightKind::Min) {
        for (std::size_t i = 0; i < d; ++i) {
            for (auto& own : coords[i]) {
                std::vector<CoordCandidate*> pick(d, nullptr);
                bool ok = true;
                for (std::size_t j = 0; j < d && ok; ++j) {
                    if (j == i) {
                        pick[j] = &own;
                        continue;
                    }
                    // Deepest partner at or above the prescribed height.
                    for (auto& c : coords[j])
                        if (c.q >= own.q) pick[j] = &c;
                    if (pick[j] == nullptr && !coords[j].empty())
                        pick[j] = &coords[j].back();
                    ok = pick[j] != nullptr;
                }
                if (ok) out.push_back(assemble_tuple(pick, kind));
            }
        }
        return out;
    }

    std::size_t grid = 1;
    for (const auto& list : coords) {
        grid *= list.size();
        if (grid > 10'000'000)
            throw std::invalid_argument(
                "Convergent grid too large to enumerate; lower q_max.");
    }
    std::vector<std::size_t> idx(d, 0);
    while (true) {
        std::vector<CoordCandidate*> pick(d);
        for (std::size_t i = 0; i < d; ++i) pick[i] = &coords[i][idx[i]];
        out.push_back(assemble_tuple(pick, kind));
        std::size_t i = 0;
        for (; i < d; ++i) {
            if (++idx[i] < coords[i].size()) break;
            idx[i] = 0;
        }
        if (i == d) break;
    }
    return out;
}

// Sorts by height and flags the error/height Pareto frontier: a tuple stays
// when no tuple of smaller or equal height has a strictly smaller certified
// error. Only tuples whose bracket is tight (relative slack 1e-6) count as
// certified; the rest are dropped.
inline std::vector<TupleCandidate> certified_frontier(
    std::vector<TupleCandidate>&& tuples) {
    std::vector<TupleCandidate> kept;
    kept.reserve(tuples.size());
    for (auto& t : tuples) {
        if (t.err_lo <= 0) continue;
        if (t.err_hi > t.err_lo * BigRat(1'000'001, 1'000'000)) continue;
        kept.push_back(std::move(t));
    }
    std::sort(kept.begin(), kept.end(),
              [](const TupleCandidate& a, const TupleCandidate& b) {
                  if (a.height != b.height) return a.height < b.height;
                  return a.err_hi < b.err_hi;
              });
    std::optional<BigRat> best;
    for (auto& t : kept) {
        if (!best || t.err_hi < *best) {
            t.frontier = true;
            best = t.err_hi;
        }
    }
    return kept;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Best-constant estimator
// ---------------------------------------------------------------------------

struct CEstimateReport {
    BigFloat c_min = 0;        // windowed min of error / psi(height)
    ApproximationRecord best;  // candidate attaining it
    std::vector<double> running_min;  // running min over all candidates, by height
    std::vector<double> running_height;  // height of the candidate at each step
    BigInt window_lo = 1, window_hi = 1;
    std::size_t tuples = 0;     // certified candidates enumerated
    std::size_t in_window = 0;  // candidates inside the height window
};

// Smallest ratio |x - r| / psi(H(r)) over certified convergent tuples with
// height in [sqrt(q_max), q_max]; the window keeps small-height noise out of
// the headline value while the running-min trace shows the full trend. A
// positive finite result bounds the best approximation constant from above
// on the explored range; the trace approaching a plateau suggests the
// liminf. Throws precision_exhausted when the intervals certify nothing in
// the window.
inline CEstimateReport estimate_C(const std::vector<RealInterval>& x,
                                  HeightKind kind, const PsiSpec& psi,
                                  const BigInt& q_max) {
    auto coords = detail::coordinate_candidates(x, kind, q_max);
    auto tuples =
        detail::certified_frontier(detail::tuple_candidates(coords, kind));

    const FuncExpr bpsi = big_psi_of(psi);
    CEstimateReport rep;
    rep.window_hi = q_max;
    rep.window_lo = boost::multiprecision::sqrt(q_max);
    if (rep.window_lo < 1) rep.window_lo = 1;

    bool have_best = false;
    BigFloat run_best = 0;
    for (const auto& t : tuples) {
        const double b = log_big(t.height);
        if (t.height > 1 && !(b > bpsi.t_domain())) continue;
        const double neg_log_psi = t.height == 1 ? 0.0 : bpsi(b);
        if (!std::isfinite(neg_log_psi)) continue;
        ++rep.tuples;

        const BigFloat err = static_cast<BigFloat>(t.err_hi);
        const BigFloat ratio =
            err * boost::multiprecision::exp(BigFloat(neg_log_psi));
        if (rep.running_min.empty() || ratio < run_best) run_best = ratio;
        rep.running_min.push_back(static_cast<double>(run_best));
        rep.running_height.push_back(static_cast<double>(t.height));

        if (t.height < rep.window_lo || t.height > rep.window_hi) continue;
        ++rep.in_window;
        if (!have_best || ratio < rep.c_min) {
            rep.c_min = ratio;
            rep.best.r = t.r;
            rep.best.height = t.height;
            rep.best.error = err;
            rep.best.ratio = ratio;
            have_best = true;
        }
    }
    if (!have_best)
        throw precision_exhausted(
            "No certified candidate inside the height window.");
    return rep;
}

// ---------------------------------------------------------------------------
// Exponent estimator
// ---------------------------------------------------------------------------

struct OmegaEstimateReport {
    double omega = 0.0;        // liminf estimate: min over the windowed frontier
    double omega_upper = 0.0;  // max over the same set, as a spread indicator
    BigInt window_lo = 1, window_hi = 1;
    std::size_t tuples = 0;    // certified candidates enumerated
    std::size_t frontier_in_window = 0;
    ApproximationRecord argmin;  // frontier candidate attaining the estimate
};

// Estimates the approximation exponent: the largest w such that
// |x - r| <= H(r)^{-w} holds along some sequence of candidates with
// H(r) -> infinity. Since the exponent is a liminf, the estimate takes the
// *minimum* log-ratio -log|x - r| / log H(r) over the error/height Pareto
// frontier restricted to heights in [sqrt(q_max), q_max]: off-frontier
// tuples are dominated and say nothing about the liminf, and heights below
// the window would inject small-sample bias. The max over the same set is
// reported as a spread indicator.
inline OmegaEstimateReport estimate_omega(const std::vector<RealInterval>& x,
                                          HeightKind kind,
                                          const BigInt& q_max) {
    auto coords = detail::coordinate_candidates(x, kind, q_max);
    auto tuples =
        detail::certified_frontier(detail::tuple_candidates(coords, kind));

    OmegaEstimateReport rep;
    rep.window_hi = q_max;
    rep.window_lo = boost::multiprecision::sqrt(q_max);
    if (rep.window_lo < 2) rep.window_lo = 2;
    rep.tuples = tuples.size();

    for (const auto& t : tuples) {
        if (!t.frontier || t.height < rep.window_lo || t.height > rep.window_hi)
            continue;
        const double ratio = -log_rat(t.err_hi) / log_big(t.height);
        if (rep.frontier_in_window == 0 || ratio < rep.omega) {
            rep.omega = ratio;
            rep.argmin.r = t.r;
            rep.argmin.height = t.height;
            rep.argmin.error = static_cast<BigFloat>(t.err_hi);
            rep.argmin.ratio = BigFloat(ratio);
        }
        rep.omega_upper = std::max(rep.omega_upper, ratio);
        ++rep.frontier_in_window;
    }
    if (rep.frontier_in_window == 0)
        throw precision_exhausted(
            "No certified frontier candidate inside the height window.");
    return rep;
}

// ---------------------------------------------------------------------------
// Constructive converse: a point that defeats psi's uniform max-height bound
// ---------------------------------------------------------------------------

struct BadPointOptions {
    int n_terms = 25;             // official denominator milestones
    double target_log_q = 92.0;   // log of the deepest official denominator
    int k0_floor = 10;            // earliest recursion index
    std::vector<double> c1_ladder{8.0, 16.0, 32.0, 64.0};  // cubic damping
    double cost_floor = -1e-9;    // audit tolerance for the cost series
    DecideOptions decide;         // options for the admission decider
};

struct BadPointConstruction {
    int d = 0;
    std::vector<RealInterval> x;   // certified coordinate enclosures
    PointFromProgression emitted;  // exact point and denominator expansions
    DataProgression heights;       // rescaled log-denominator schedule
    int official_entries = 0;      // schedule entries inside the stated horizon
    double scale_factor = 0.0;     // target_log_q / unscaled official depth
    std::vector<double> slack;     // S_k sequence driving the growth factors
    double c1 = 0.0;               // accepted cubic damping coefficient
    int k0 = 0;                    // first recursion index used
    double q_max_log = 0.0;        // == target_log_q
    BigInt q_max;                  // floor(exp(target_log_q))
    CostSeries cost;     // nonnegativity audit on the unscaled schedule
    RegularityDecision f_decision;  // admission verdict on f_psi
};

// Builds a rational point whose coordinatewise denominators follow a
// near-geometric ladder with base gamma_d, staggered cyclically across the
// d coordinates, so that inside the height window every convergent tuple
// leaves one coordinate a full period stale. Along that ladder the max
// height's error stays at the uniform bound up to the slack sequence S_k,
// which solves the damped tail recursion
//
//   S_{k+1} = S_k - S_k^2 - c1 S_k^3 - f_psi(k) - c1 / k^3
//
// with the smallest start that keeps every term nonnegative. The cost
// series of the resulting schedule is audited against psi before emission;
// a dip below cost_floor escalates c1, and exhausting the ladder throws.
// Requires f_psi inside the removable class (otherwise psi's uniform bound
// holds everywhere and no such point exists, reported as domain_error).
//
// Emission rescales the log-denominator schedule so the official horizon
// ends at target_log_q; the ladder's defect is scale-free, and the modest
// target keeps the exact denominators printable. Two guard milestones per
// coordinate are appended beyond the horizon so every official convergent
// has a certified successor in the emitted expansions.
inline BadPointConstruction build_bad_point_for_max(
    int d, const PsiSpec& psi, const BadPointOptions& opts = {}) {
    if (d < 3)
        throw unsupported_dimension(
            "build_bad_point_for_max requires d >= 3; for d <= 2 the max "
            "height is uniform for every psi and no bad point exists.");
    if (opts.n_terms < 2 * d)
        throw std::invalid_argument(
            "n_terms must cover at least two periods of the ladder.");
    if (!(opts.target_log_q > 1.0))
        throw std::invalid_argument("target_log_q must exceed 1.");

    const PsiHypothesesReport hyp = validate_psi_hypotheses(psi);
    if (!hyp.increasing)
        throw std::invalid_argument(
            "psi must be nonincreasing on the validation window.");

    const DerivedForms forms = derive_forms(psi, d);
    BadPointConstruction out;
    out.d = d;
    out.f_decision = decide_rr(forms.f_psi, opts.decide);
    if (out.f_decision.verdict == Regularity::NotInRR)
        throw std::domain_error(
            "psi's uniform max-height bound holds at every point (f_psi "
            "escapes the removable class); no bad point exists.");

    const double g = gamma_d(d);
    const int extra = 2 * d;               // guard milestones, 2 per coordinate
    const int K = opts.n_terms + extra;    // schedule entries

    std::string attempts;
    for (const double c1 : opts.c1_ladder) {
        const FuncExpr fp =
            forms.f_psi + FuncExpr::constant(c1) *
                              FuncExpr::pow(FuncExpr::arg(), -3.0);
        const int k0 = std::max(
            opts.k0_floor, static_cast<int>(std::ceil(fp.t_domain() * 1.5)) + 2);

        // Smallest start that keeps the damped recursion nonnegative across
        // the schedule. The backward minimal solution seeds the search; the
        // forward replay is exponentially unstable, so nudge up to find a
        // survivor, then bisect down to the boundary.
        const auto survives = [&](double s0) {
            return forward_sequence(fp, k0, s0, c1, K + 2).first_negative < 0;
        };
        const double cap = 1.0 / std::max(2.0, c1);
        const double seed =
            backward_sequence(fp, k0, k0 + 4096).front();
        double feasible = -1.0;
        for (double m = 1.0; m < 64.0; m *= 1.25) {
            const double s0 = std::min(seed * m + 1e-12, cap);
            if (survives(s0)) {
                feasible = s0;
                break;
            }
            if (s0 >= cap) break;
        }
        if (feasible < 0) {
            attempts += " c1=" + std::to_string(c1) + ": no surviving start;";
            continue;
        }
        double lo = 0.0, hi = feasible;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (survives(mid) ? hi : lo) = mid;
        }
        const ForwardRun run = forward_sequence(fp, k0, hi, c1, K + 2);

        // Unscaled log-denominator ladder A_{k+1} = A_k gamma (1 + S_k).
        std::vector<double> A(static_cast<std::size_t>(K) + 1);
        A[0] = std::pow(g, k0);
        for (int j = 0; j < K; ++j)
            A[static_cast<std::size_t>(j) + 1] =
                A[static_cast<std::size_t>(j)] * g *
                (1.0 + run.s[static_cast<std::size_t>(j)]);

        DataProgression raw{d, {}};
        for (int j = 0; j < opts.n_terms; ++j)
            raw.entries.push_back(ProgressionEntry{
                A[static_cast<std::size_t>(j) + 1], (k0 + j) % d + 1});
        const CostSeries cost =
            cost_series(raw, aggregate_for(HeightKind::Max), psi);
        if (cost.min_value < opts.cost_floor) {
            attempts += " c1=" + std::to_string(c1) +
                        ": cost dips to " + std::to_string(cost.min_value) +
                        ";";
            continue;
        }

        const double depth = A[static_cast<std::size_t>(opts.n_terms)];
        const double lambda = opts.target_log_q / depth;
        DataProgression emit{d, {}};
        for (int j = 0; j < K; ++j)
            emit.entries.push_back(ProgressionEntry{
                A[static_cast<std::size_t>(j) + 1] * lambda, (k0 + j) % d + 1});

        out.heights = emit;
        out.official_entries = opts.n_terms;
        out.scale_factor = lambda;
        out.slack.assign(run.s.begin(),
                         run.s.begin() + static_cast<std::ptrdiff_t>(K));
        out.c1 = c1;
        out.k0 = k0;
        out.q_max_log = opts.target_log_q;
        out.q_max = floor_exp(opts.target_log_q);
        out.cost = cost;
        out.emitted = point_from_progression(emit);
        out.x.clear();
        for (const auto& cf : out.emitted.expansions)
            out.x.push_back(value_enclosure(cf));
        return out;
    }
    throw std::runtime_error(
        "No damping coefficient kept the schedule's cost nonnegative:" +
        attempts);
}

inline BadPointConstruction build_bad_point_for_max(int d, int n_terms = 25) {
    BadPointOptions opts;
    opts.n_terms = n_terms;
    return build_bad_point_for_max(d, PowerLawPsi{alpha_d(d)}, opts);
}

}  // namespace dioph
