#pragma once

// Machine-readable output: JSON artifacts and CSV series. Every JSON
// artifact is an envelope {artifact_version, seed, config, result} so a run
// can be reproduced from its own output; identical configuration and seed
// give byte-identical bytes (keys are emitted in insertion order and no
// timestamps or hostnames are recorded). Exact integers wider than double's
// integer range are emitted as decimal strings rather than rounded.
//
// Requires the vendored single-header nlohmann/json on the include path.

#include "cfrac.hpp"
#include "dataprog.hpp"
#include "dirichlet.hpp"
#include "recint.hpp"

#include "json.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace dioph {

using OrderedJson = nlohmann::ordered_json;

// Run-wide knobs shared by every subcommand. Numeric fields must be
// positive; the seed and cache directory are recorded in artifacts even
// when a particular run never draws a random number or touches the cache.
struct RunConfig {
    int precision_bits = 256;          // interval width for named irrationals
    double ode_horizon = 1e6;          // integration horizon for the ODE route
    std::int64_t recurrence_n_max = std::int64_t(1) << 20;
    int k0 = 10;                       // first recursion index
    int grid = 800;                    // ODE start grid resolution
    std::string format = "json";       // json | csv | human
    std::uint64_t seed = 0;
    std::string cache_dir;
};

inline void validate(const RunConfig& cfg) {
    if (cfg.precision_bits <= 0 || cfg.ode_horizon <= 0 ||
        cfg.recurrence_n_max <= 0 || cfg.k0 <= 0 || cfg.grid <= 0)
        throw std::invalid_argument(
            "All numeric run parameters must be positive.");
    if (cfg.format != "json" && cfg.format != "csv" && cfg.format != "human")
        throw std::invalid_argument("Output format must be json, csv, or "
                                    "human, got '" + cfg.format + "'.");
}

inline const char* artifact_version() { return "0.1.0"; }

// ---------------------------------------------------------------------------
// Scalar conversions
// ---------------------------------------------------------------------------

// Integers up to 2^53 stay JSON numbers; anything wider becomes a decimal
// string so no reader silently rounds it.
inline OrderedJson to_ordered_json(const BigInt& n) {
    static const BigInt lim = BigInt(1) << 53;
    if (n > -lim && n < lim) return n.convert_to<std::int64_t>();
    return n.str();
}

inline OrderedJson to_ordered_json(const BigRat& r) {
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    if (denominator(r) == 1) return to_ordered_json(numerator(r));
    return numerator(r).str() + "/" + denominator(r).str();
}

inline const char* compare_result_name(CompareResult c) {
    switch (c) {
        case CompareResult::LE: return "LE";
        case CompareResult::GE: return "GE";
        case CompareResult::MIXED: return "MIXED";
    }
    return "MIXED";
}

inline const char* tail_trend_name(TailTrend t) {
    switch (t) {
        case TailTrend::Rising: return "rising";
        case TailTrend::Falling: return "falling";
        case TailTrend::Flat: return "flat";
    }
    return "flat";
}

// ---------------------------------------------------------------------------
// Result records
// ---------------------------------------------------------------------------

inline OrderedJson to_ordered_json(const RecurrenceDecision& d) {
    OrderedJson j;
    j["verdict"] = regularity_name(d.verdict);
    j["rule"] = d.rule;
    j["k0"] = d.k0;
    j["t_last"] = d.t_last;
    j["r"] = d.r;
    j["t_inf"] = d.t_inf;
    j["blowup_n"] = d.blowup_n;
    return j;
}

inline OrderedJson to_ordered_json(const OdeDecision& d) {
    OrderedJson j;
    j["verdict"] = regularity_name(d.verdict);
    j["rule"] = d.rule;
    j["x1"] = d.x1;
    j["any_survivor"] = d.any_survivor;
    j["h_end"] = d.h_end;
    j["h_fall"] = d.h_fall;
    j["settle"] = d.settle;
    return j;
}

inline OrderedJson to_ordered_json(const RegularityDecision& d) {
    OrderedJson j;
    j["verdict"] = regularity_name(d.verdict);
    j["method"] = d.method;
    j["rule"] = d.rule;
    j["conflict"] = d.conflict;
    if (d.recurrence) j["recurrence"] = to_ordered_json(*d.recurrence);
    if (d.ode) j["ode"] = to_ordered_json(*d.ode);
    return j;
}

inline OrderedJson to_ordered_json(const DirichletVerdict& v) {
    OrderedJson j;
    j["verdict"] = dirichletness_name(v.verdict);
    j["rule"] = v.rule;
    j["fpsi_sign"] = compare_result_name(v.fpsi_sign);
    if (v.basis) j["basis"] = to_ordered_json(*v.basis);
    return j;
}

inline OrderedJson to_ordered_json(const RationalPoint& r) {
    OrderedJson j = OrderedJson::array();
    for (const auto& c : r) j.push_back(to_ordered_json(c));
    return j;
}

inline OrderedJson to_ordered_json(const ApproximationRecord& rec) {
    OrderedJson j;
    j["point"] = to_ordered_json(rec.r);
    j["height"] = to_ordered_json(rec.height);
    j["error"] = static_cast<double>(rec.error);
    j["ratio"] = static_cast<double>(rec.ratio);
    return j;
}

inline OrderedJson to_ordered_json(const OmegaEstimateReport& rep) {
    OrderedJson j;
    j["omega"] = rep.omega;
    j["omega_upper"] = rep.omega_upper;
    j["window_lo"] = to_ordered_json(rep.window_lo);
    j["window_hi"] = to_ordered_json(rep.window_hi);
    j["tuples"] = rep.tuples;
    j["frontier_in_window"] = rep.frontier_in_window;
    j["argmin"] = to_ordered_json(rep.argmin);
    return j;
}

inline OrderedJson to_ordered_json(const CEstimateReport& rep) {
    OrderedJson j;
    j["c_min"] = static_cast<double>(rep.c_min);
    j["best"] = to_ordered_json(rep.best);
    j["window_lo"] = to_ordered_json(rep.window_lo);
    j["window_hi"] = to_ordered_json(rep.window_hi);
    j["tuples"] = rep.tuples;
    j["in_window"] = rep.in_window;
    j["running_height"] = rep.running_height;
    j["running_min"] = rep.running_min;
    return j;
}

inline OrderedJson to_ordered_json(const ContinuedFraction& cf) {
    OrderedJson j;
    OrderedJson quotients = OrderedJson::array();
    for (const auto& a : cf.a) quotients.push_back(to_ordered_json(a));
    j["quotients"] = quotients;
    j["terminated"] = cf.terminated;
    OrderedJson convs = OrderedJson::array();
    for (const auto& c : convergents(cf)) {
        OrderedJson e;
        e["n"] = c.index;
        e["p"] = to_ordered_json(c.p);
        e["q"] = to_ordered_json(c.q);
        convs.push_back(std::move(e));
    }
    j["convergents"] = convs;
    return j;
}

inline OrderedJson to_ordered_json(const CostSeries& s) {
    OrderedJson j;
    j["first_k"] = s.first_k;
    j["values"] = s.values;
    j["min_value"] = s.min_value;
    j["argmin_k"] = s.argmin_k;
    j["tail"] = tail_trend_name(s.tail);
    return j;
}

inline OrderedJson to_ordered_json(const UniformCheckReport& rep) {
    OrderedJson j;
    j["kind"] = height_kind_name(rep.kind);
    j["d"] = rep.d;
    j["trials"] = rep.trials;
    j["max_steps"] = rep.max_steps;
    j["max_k_steps"] = rep.max_k_steps;
    j["max_budget"] = rep.max_budget;
    j["worst_budget_fraction"] = rep.worst_budget_fraction;
    return j;
}

inline OrderedJson to_ordered_json(const GammaOptimumReport& rep) {
    OrderedJson j;
    j["d"] = rep.d;
    j["grid_step"] = rep.grid_step;
    j["argmax"] = rep.argmax;
    j["max_value"] = rep.max_value;
    j["refined_argmax"] = rep.refined_argmax;
    j["refined_max"] = rep.refined_max;
    j["argmin"] = rep.argmin;
    j["min_value"] = rep.min_value;
    j["argmax_near_gamma_d"] = rep.argmax_near_gamma_d;
    j["max_is_one"] = rep.max_is_one;
    j["interior"] = rep.interior;
    return j;
}

// ---------------------------------------------------------------------------
// Envelope
// ---------------------------------------------------------------------------

inline OrderedJson config_to_json(const RunConfig& cfg) {
    OrderedJson j;
    j["precision_bits"] = cfg.precision_bits;
    j["ode_horizon"] = cfg.ode_horizon;
    j["recurrence_n_max"] = cfg.recurrence_n_max;
    j["k0"] = cfg.k0;
    j["grid"] = cfg.grid;
    j["format"] = cfg.format;
    j["cache_dir"] = cfg.cache_dir;
    return j;
}

inline OrderedJson make_artifact(const RunConfig& cfg, OrderedJson result) {
    OrderedJson j;
    j["artifact_version"] = artifact_version();
    j["seed"] = cfg.seed;
    j["config"] = config_to_json(cfg);
    j["result"] = std::move(result);
    return j;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

// Plain CSV: header row then data rows. Cells are numbers or bare words, so
// no quoting is needed; a cell containing a comma is a caller bug and is
// rejected rather than mangled.
inline void write_csv(std::ostream& os,
                      const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
    auto emit = [&os](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (row[i].find(',') != std::string::npos ||
                row[i].find('\n') != std::string::npos)
                throw std::invalid_argument(
                    "CSV cell may not contain a comma or newline.");
            if (i) os << ',';
            os << row[i];
        }
        os << '\n';
    };
    emit(header);
    for (const auto& row : rows) emit(row);
}

}  // namespace dioph
