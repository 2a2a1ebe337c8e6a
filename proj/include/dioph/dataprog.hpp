#pragma once

// Data progressions: a d-coordinate state vector built up one entry at a
// time, the cost series a target function attaches to such a progression,
// the extraction of a progression from a point's continued fractions (and
// the reverse construction), and the bounded-play adversary game.
//
// Conventions. Entry k = 1, 2, ... carries a value A_k and a coordinate
// i_k in {1, ..., d}; after entry k the state b_k agrees with b_{k-1}
// except that coordinate i_k now holds A_k. States are on a logarithmic
// scale throughout: the aggregate for the product height is the *sum* of
// coordinates, and heights correspond to exp of aggregates.

#include "bigint.hpp"
#include "cfrac.hpp"
#include "funexpr.hpp"
#include "heights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

namespace dioph {

enum class Aggregate { Max, Min, Sum };

inline Aggregate aggregate_for(HeightKind kind) {
    switch (kind) {
        case HeightKind::Max: return Aggregate::Max;
        case HeightKind::Min: return Aggregate::Min;
        case HeightKind::Prod: return Aggregate::Sum;
        case HeightKind::Lcm:
            throw std::domain_error(
                "The lcm height has no coordinatewise aggregate.");
    }
    throw std::logic_error("Unhandled height kind.");
}

inline double apply_aggregate(Aggregate agg, const std::vector<double>& b) {
    if (b.empty()) throw std::invalid_argument("Empty state vector.");
    switch (agg) {
        case Aggregate::Max: return *std::max_element(b.begin(), b.end());
        case Aggregate::Min: return *std::min_element(b.begin(), b.end());
        case Aggregate::Sum: {
            double s = 0;
            for (double v : b) s += v;
            return s;
        }
    }
    throw std::logic_error("Unhandled aggregate.");
}

struct ProgressionEntry {
    double value;  // A_k
    int coord;     // i_k, 1-based
};

struct DataProgression {
    int d = 0;
    std::vector<ProgressionEntry> entries;
};

inline void validate(const DataProgression& prog) {
    if (prog.d < 1)
        throw std::invalid_argument("A progression needs d >= 1 coordinates.");
    for (const auto& e : prog.entries) {
        if (e.coord < 1 || e.coord > prog.d)
            throw std::invalid_argument(
                "Progression entry targets a coordinate outside 1..d.");
        if (!std::isfinite(e.value))
            throw std::invalid_argument("Progression entry is not finite.");
    }
}

struct StateSequence {
    // 1-based index of the first entry after which every coordinate has
    // been assigned; 0 if the progression never completes a full state.
    int first_complete = 0;
    // states[k-1] is the state after entry k; coordinates not yet assigned
    // hold NaN.
    std::vector<std::vector<double>> states;
};

inline StateSequence state_seq(const DataProgression& prog) {
    validate(prog);
    StateSequence out;
    std::vector<double> b(prog.d, std::numeric_limits<double>::quiet_NaN());
    int assigned = 0;
    std::vector<bool> seen(prog.d, false);
    for (std::size_t k = 0; k < prog.entries.size(); ++k) {
        const auto& e = prog.entries[k];
        if (!seen[e.coord - 1]) {
            seen[e.coord - 1] = true;
            ++assigned;
            if (assigned == prog.d && out.first_complete == 0)
                out.first_complete = static_cast<int>(k) + 1;
        }
        b[e.coord - 1] = e.value;
        out.states.push_back(b);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cost series: v_k = Psi(Xi(b_k)) - b_k^{(i_{k+1})} - A_{k+1}, the margin by
// which the target function at the current aggregate covers the coordinate
// about to be replaced together with its replacement.
// ---------------------------------------------------------------------------

enum class TailTrend { Rising, Falling, Flat };

struct CostSeries {
    int first_k = 0;             // 1-based k of values.front()
    std::vector<double> values;  // v_k for k = first_k, first_k+1, ...
    double min_value = 0.0;
    int argmin_k = 0;
    TailTrend tail = TailTrend::Flat;
};

inline CostSeries cost_series(const DataProgression& prog, Aggregate agg,
                              const PsiSpec& psi) {
    const StateSequence seq = state_seq(prog);
    if (seq.first_complete == 0)
        throw std::invalid_argument(
            "Cost series needs a progression that assigns every coordinate.");
    const FuncExpr big_psi = big_psi_of(psi);

    CostSeries out;
    const int K = static_cast<int>(prog.entries.size());
    for (int k = seq.first_complete; k <= K - 1; ++k) {
        const auto& b = seq.states[k - 1];
        const auto& next = prog.entries[k];  // entry k+1 (0-based k)
        double v;
        try {
            v = big_psi(apply_aggregate(agg, b)) - b[next.coord - 1] -
                next.value;
        } catch (const std::domain_error&) {
            // The aggregate is still below the target's domain guard; the
            // series starts once it has grown past it.
            if (out.values.empty()) continue;
            throw;
        }
        if (out.values.empty()) out.first_k = k;
        out.values.push_back(v);
    }
    if (out.values.empty())
        throw std::domain_error(
            "Cost series is empty: the target function was never defined at "
            "the sampled aggregates.");

    auto min_it = std::min_element(out.values.begin(), out.values.end());
    out.min_value = *min_it;
    out.argmin_k =
        out.first_k + static_cast<int>(min_it - out.values.begin());

    const std::size_t n = out.values.size();
    const std::size_t tail_len = std::max<std::size_t>(2, n / 4);
    if (n >= 2) {
        const double a = out.values[n - tail_len];
        const double z = out.values[n - 1];
        double scale = 0;
        for (std::size_t j = n - tail_len; j < n; ++j)
            scale = std::max(scale, std::abs(out.values[j]));
        const double tol = 1e-9 * (1.0 + scale);
        out.tail = z > a + tol   ? TailTrend::Rising
                   : z < a - tol ? TailTrend::Falling
                                 : TailTrend::Flat;
    }
    return out;
}

// ---------------------------------------------------------------------------
// The periodic geometric progression: A_k = gamma^k with coordinates visited
// round robin. Against a power law with exponent alpha its cost series is
// exactly (alpha - gamma - gamma^{-(d-1)}) gamma^k, so the sign of that
// coefficient decides the limit.
// ---------------------------------------------------------------------------

inline DataProgression periodic_geometric(int d, double gamma, int K) {
    if (d < 2) throw std::invalid_argument("periodic_geometric needs d >= 2.");
    if (!(gamma > 1))
        throw std::invalid_argument("periodic_geometric needs gamma > 1.");
    if (K < d)
        throw std::invalid_argument(
            "periodic_geometric needs at least one full round (K >= d).");
    if (!std::isfinite(std::pow(gamma, K)))
        throw std::invalid_argument("gamma^K overflows double range.");
    DataProgression prog;
    prog.d = d;
    for (int k = 1; k <= K; ++k)
        prog.entries.push_back({std::pow(gamma, k), (k - 1) % d + 1});
    return prog;
}

enum class CostLimit { NegInfinity, Zero, PosInfinity };

inline CostLimit classify_periodic_geometric(int d, double gamma, double alpha,
                                             double tol = 1e-9) {
    if (d < 2) throw std::invalid_argument("classification needs d >= 2.");
    if (!(gamma > 1)) throw std::invalid_argument("classification needs gamma > 1.");
    const double s = alpha - gamma - std::pow(gamma, -(d - 1));
    if (s > tol) return CostLimit::PosInfinity;
    if (s < -tol) return CostLimit::NegInfinity;
    return CostLimit::Zero;
}

// ---------------------------------------------------------------------------
// Progressions from points and back.
//
// Each coordinate contributes one warm-up entry (log q_1, i) and then, for
// n >= 1, an event with value log q_{n+1} ordered across coordinates by the
// exact key q_n q_{n+1} (the reciprocal of that coordinate's approximation
// error scale, so entries appear in the order the approximations tighten).
// ---------------------------------------------------------------------------

inline DataProgression progression_from_point(
    const std::vector<ContinuedFraction>& coords) {
    if (coords.empty())
        throw std::invalid_argument("progression_from_point needs d >= 1.");
    const int d = static_cast<int>(coords.size());

    struct Event {
        BigInt key;
        double value;
        int coord;
    };
    std::vector<Event> events;
    DataProgression prog;
    prog.d = d;

    for (int i = 0; i < d; ++i) {
        const auto conv = convergents(coords[i]);
        if (conv.size() < 2)
            throw std::invalid_argument(
                "Every coordinate needs at least two convergents.");
        prog.entries.push_back({log_big(conv[1].q), i + 1});
        for (std::size_t n = 1; n + 1 < conv.size(); ++n)
            events.push_back(
                {conv[n].q * conv[n + 1].q, log_big(conv[n + 1].q), i + 1});
    }
    std::stable_sort(events.begin(), events.end(),
                     [](const Event& a, const Event& b) {
                         if (a.key != b.key) return a.key < b.key;
                         return a.coord < b.coord;
                     });
    for (const auto& e : events) prog.entries.push_back({e.value, e.coord});
    return prog;
}

struct PointFromProgression {
    std::vector<BigRat> point;
    // The expansions whose denominators realize the milestones. These may
    // carry a trailing quotient of 1, so re-expanding the rational value can
    // merge the last two convergents; callers that care about the exact
    // denominator ladder should use these rather than re-expanding.
    std::vector<ContinuedFraction> expansions;
};

// Builds a rational point whose coordinatewise denominator growth replays
// the progression's entries. Values are thinned to milestones at least
// log 2 apart so the doubling-denominator construction applies; each
// resulting denominator q satisfies t/2 <= q <= t for its target t ~ e^A.
inline PointFromProgression point_from_progression(const DataProgression& prog) {
    validate(prog);
    const double kLog2 = std::log(2.0);
    PointFromProgression out;
    for (int i = 1; i <= prog.d; ++i) {
        std::vector<double> milestones;
        for (const auto& e : prog.entries) {
            if (e.coord != i) continue;
            if (milestones.empty() ? e.value >= kLog2 - 1e-12
                                   : e.value >= milestones.back() + kLog2 - 1e-12)
                milestones.push_back(e.value);
        }
        if (milestones.empty())
            throw std::invalid_argument(
                "A coordinate has no milestone at or above log 2.");
        std::vector<BigInt> targets{BigInt(1)};
        for (double a : milestones) {
            BigInt t = floor_exp(a);
            BigInt doubled = targets.back() * 2;
            targets.push_back(t >= doubled ? t : doubled);
        }
        ContinuedFraction cf = denominators_to_cf(targets);
        const auto conv = convergents(cf);
        out.point.push_back(conv.back().value());
        out.expansions.push_back(std::move(cf));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Adversary game. State b in R^d; a proposal (A, i) with A > b_i is accepted
// exactly when b_i + A <= beta_d * Xi(b) - 1, and acceptance overwrites b_i
// with A. Variance descent bounds the number of accepted max-raising moves.
// ---------------------------------------------------------------------------

inline bool adversary_step(HeightKind kind, const std::vector<double>& b,
                           double A, int coord) {
    const int d = static_cast<int>(b.size());
    if (coord < 1 || coord > d)
        throw std::invalid_argument("Coordinate outside 1..d.");
    if (!(A > b[coord - 1]))
        throw std::invalid_argument("Proposal must raise the coordinate.");
    const double beta = beta_d(kind, d);
    const double xi = apply_aggregate(aggregate_for(kind), b);
    return b[coord - 1] + A <= beta * xi - 1.0;
}

struct AdversaryPlayReport {
    HeightKind kind;
    int d = 0;
    bool terminated = false;  // reached a state with no feasible proposal
    int steps = 0;            // accepted moves
    int k_steps = 0;          // accepted moves that raised the maximum
    int budget = 0;           // ceil(var0 * max(4, d))
    double var0 = 0.0, var_end = 0.0;
    bool k_steps_within_budget = false;
    bool stepwise_ok = true;  // per-move descent inequalities held
};

namespace detail {
inline double population_variance(const std::vector<double>& b) {
    double mu = 0;
    for (double v : b) mu += v;
    mu /= b.size();
    double var = 0;
    for (double v : b) var += (v - mu) * (v - mu);
    return var / b.size();
}
}  // namespace detail

// Reference strategy: among coordinates that still admit a proposal, pick
// one uniformly; jump straight to the acceptance boundary when the feasible
// interval is short (which retires that coordinate), otherwise draw inside
// it, half the time at the boundary. Deterministic in the seed.
inline AdversaryPlayReport play_adversary_game(HeightKind kind, int d,
                                               std::uint64_t seed,
                                               int max_rounds = 20000) {
    if (d < 2) throw std::invalid_argument("The game needs d >= 2.");
    const double beta = beta_d(kind, d);
    const Aggregate agg = aggregate_for(kind);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> b(d);
    for (double& v : b) v = 20.0 * unif(rng);

    AdversaryPlayReport rep;
    rep.kind = kind;
    rep.d = d;
    rep.var0 = detail::population_variance(b);
    rep.budget = static_cast<int>(std::ceil(rep.var0 * std::max(4.0, double(d))));
    const double k_drop_floor = 1.0 / std::max(4.0, double(d));

    for (int round = 0; round < max_rounds; ++round) {
        const double xi = apply_aggregate(agg, b);
        const double bound = beta * xi - 1.0;
        // The feasibility slack is much wider than the proposal backoff
        // below, so a coordinate parked just under the boundary counts as
        // retired instead of flickering in and out on rounding noise.
        const double slack = 1e-6 * (1.0 + std::abs(bound));
        std::vector<int> feasible;
        for (int i = 0; i < d; ++i)
            if (2 * b[i] < bound - slack) feasible.push_back(i);
        if (feasible.empty()) {
            rep.terminated = true;
            break;
        }
        const int i = feasible[static_cast<std::size_t>(unif(rng) * feasible.size()) %
                               feasible.size()];
        const double x = b[i];
        const double cap_raw = bound - x;
        const double cap = cap_raw - 1e-12 * (1.0 + std::abs(cap_raw));
        const double width = cap - x;
        double A;
        if (width <= 1.0 || unif(rng) < 0.5)
            A = cap;
        else
            A = std::min(cap, x + width * unif(rng));
        if (!adversary_step(kind, b, A, i + 1)) {
            // By construction every proposal here is acceptable.
            rep.stepwise_ok = false;
            break;
        }
        const double old_max = *std::max_element(b.begin(), b.end());
        const double var_before = detail::population_variance(b);
        b[i] = A;
        const double var_after = detail::population_variance(b);
        ++rep.steps;
        const double drop = var_before - var_after;
        if (A > old_max) {
            ++rep.k_steps;
            if (drop < k_drop_floor - 1e-9) rep.stepwise_ok = false;
        }
        // Every accepted move of the sum game descends; max with d = 2 as
        // well. (Higher-dimensional max games may climb, so no check there.)
        if (agg == Aggregate::Sum || (agg == Aggregate::Max && d == 2))
            if (drop < -1e-9) rep.stepwise_ok = false;
    }
    rep.var_end = detail::population_variance(b);
    rep.k_steps_within_budget = rep.k_steps <= rep.budget;
    return rep;
}

}  // namespace dioph
