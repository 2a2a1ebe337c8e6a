// Command-line front end for the library: continued-fraction expansion,
// the recursive-integrability decider, Dirichlet verdicts, empirical
// exponent and constant estimation, and data-progression series for plots.
//
// Output formats: json (envelope {artifact_version, seed, config, result},
// byte-identical for identical configuration and seed), csv (stable columns,
// documented per subcommand below), and human (one-glance summaries). Each
// subcommand picks the format its output contract calls for when --format
// is not given: cfrac prints the quotient list, verdict subcommands print
// JSON, dataprog prints CSV.
//
// Exit codes: 0 success; 1 a decision subcommand returned Undetermined and
// --strict was set; 2 usage or domain errors.

#include <dioph/expr_parse.hpp>
#include <dioph/io_json.hpp>

#include "CLI11.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace dioph;

HeightKind parse_height_kind(const std::string& s) {
    if (s == "max") return HeightKind::Max;
    if (s == "min") return HeightKind::Min;
    if (s == "prod") return HeightKind::Prod;
    if (s == "lcm") return HeightKind::Lcm;
    throw std::invalid_argument("Unknown height kind '" + s +
                                "'; use max, min, prod, or lcm.");
}

// Accepts both exact decimal strings and scientific notation: "1000000",
// "1e6", "1e40". Scientific input is floored through a wide float, so only
// its leading digits are meaningful, which is all a size cap needs.
BigInt parse_qmax(const std::string& s) {
    if (!s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
            return std::isdigit(c);
        }))
        return BigInt(s);
    std::size_t idx = 0;
    double v = 0;
    try {
        v = std::stod(s, &idx);
    } catch (const std::exception&) {
        throw std::invalid_argument("Could not parse '" + s +
                                    "' as a height cap.");
    }
    if (idx != s.size() || !std::isfinite(v) || v < 2)
        throw std::invalid_argument("Height cap must be a finite number >= 2, "
                                    "got '" + s + "'.");
    return boost::multiprecision::floor(BigFloat(v)).convert_to<BigInt>();
}

DecideOptions decide_options_from(const RunConfig& cfg,
                                  const std::string& method) {
    DecideOptions opts;
    if (method == "auto")
        opts.method = DecideMethod::Auto;
    else if (method == "recurrence")
        opts.method = DecideMethod::Recurrence;
    else if (method == "ode")
        opts.method = DecideMethod::Ode;
    else if (method == "both")
        opts.method = DecideMethod::Both;
    else
        throw std::invalid_argument("Unknown method '" + method +
                                    "'; use auto, recurrence, ode, or both.");
    opts.backward.k0 = cfg.k0;
    opts.backward.n_max = cfg.recurrence_n_max;
    opts.ode.horizon = cfg.ode_horizon;
    opts.ode.grid_points = cfg.grid;
    return opts;
}

std::string num(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

// CSV cells may not contain commas; decision rules use them as separators,
// so they are swapped for semicolons in CSV output only.
std::string csv_safe(std::string s) {
    std::replace(s.begin(), s.end(), ',', ';');
    return s;
}

void print_artifact(const RunConfig& cfg, OrderedJson result) {
    std::cout << make_artifact(cfg, std::move(result)).dump(2) << "\n";
}

// Per-invocation state shared by the subcommand handlers.
struct CliState {
    RunConfig cfg;
    std::string format_flag;  // empty until --format is given
    bool strict = false;
    int exit_code = 0;

    // The effective format: an explicit --format wins, otherwise the
    // subcommand's own default.
    RunConfig effective(const std::string& default_format) const {
        RunConfig eff = cfg;
        eff.format = format_flag.empty() ? default_format : format_flag;
        validate(eff);
        return eff;
    }
};

// ---------------------------------------------------------------------------
// cfrac: expansions and the doubling-denominator constructor.
// ---------------------------------------------------------------------------

void run_cfrac(CliState& st, const std::string& expand_spec, int terms,
               const std::string& denoms_spec) {
    const RunConfig cfg = st.effective("human");

    if (!expand_spec.empty()) {
        auto coords = parse_point_spec(expand_spec, cfg.precision_bits);
        if (coords.size() != 1)
            throw std::invalid_argument(
                "--expand takes a single coordinate, got " +
                std::to_string(coords.size()) + ".");
        ContinuedFraction cf;
        if (coords[0].is_point()) {
            cf = expand_rational(coords[0].lo());
        } else {
            try {
                cf = expand_real(coords[0], terms);
            } catch (const precision_exhausted&) {
                throw std::invalid_argument(
                    "The enclosure cannot certify " + std::to_string(terms) +
                    " quotients; raise --precision or lower --terms.");
            }
        }
        if (cfg.format == "json") {
            OrderedJson result;
            result["input"] = expand_spec;
            result["expansion"] = to_ordered_json(cf);
            print_artifact(cfg, std::move(result));
        } else if (cfg.format == "csv") {
            std::vector<std::vector<std::string>> rows;
            const auto conv = convergents(cf);
            for (std::size_t n = 0; n < cf.size(); ++n)
                rows.push_back({std::to_string(n), cf.a[n].str(),
                                conv[n].p.str(), conv[n].q.str()});
            write_csv(std::cout, {"n", "a", "p", "q"}, rows);
        } else {
            std::cout << '[';
            for (std::size_t n = 0; n < cf.size(); ++n) {
                if (n) std::cout << ',';
                std::cout << cf.a[n].str();
            }
            std::cout << "]\n";
        }
        return;
    }

    // --from-denoms: strictly doubling targets starting at 1.
    std::vector<BigInt> targets;
    std::size_t start = 0;
    while (start <= denoms_spec.size()) {
        const std::size_t comma = denoms_spec.find(',', start);
        const std::string part = denoms_spec.substr(
            start, comma == std::string::npos ? std::string::npos
                                              : comma - start);
        if (part.empty() ||
            !std::all_of(part.begin(), part.end(), [](unsigned char c) {
                return std::isdigit(c);
            }))
            throw std::invalid_argument("--from-denoms takes a comma-separated "
                                        "list of positive integers.");
        targets.emplace_back(part);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    const ContinuedFraction cf = denominators_to_cf(targets);
    const auto conv = convergents(cf);

    if (cfg.format == "json") {
        OrderedJson result;
        result["targets"] = [&] {
            OrderedJson a = OrderedJson::array();
            for (const auto& t : targets) a.push_back(to_ordered_json(t));
            return a;
        }();
        result["expansion"] = to_ordered_json(cf);
        OrderedJson sandwich = OrderedJson::array();
        for (std::size_t n = 0; n < targets.size(); ++n) {
            OrderedJson row;
            row["n"] = n;
            row["target"] = to_ordered_json(targets[n]);
            row["q"] = to_ordered_json(conv[n].q);
            row["ratio"] = BigRat(conv[n].q, targets[n]).convert_to<double>();
            sandwich.push_back(std::move(row));
        }
        result["sandwich"] = std::move(sandwich);
        print_artifact(cfg, std::move(result));
    } else if (cfg.format == "csv") {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t n = 0; n < targets.size(); ++n)
            rows.push_back(
                {std::to_string(n), targets[n].str(), conv[n].q.str(),
                 num(BigRat(conv[n].q, targets[n]).convert_to<double>())});
        write_csv(std::cout, {"n", "target", "q", "ratio"}, rows);
    } else {
        std::cout << '[';
        for (std::size_t n = 0; n < cf.size(); ++n) {
            if (n) std::cout << ',';
            std::cout << cf.a[n].str();
        }
        std::cout << "]\n";
        for (std::size_t n = 0; n < targets.size(); ++n)
            std::cout << "n=" << n << " target=" << targets[n].str()
                      << " q=" << conv[n].q.str() << " ratio="
                      << num(BigRat(conv[n].q, targets[n]).convert_to<double>(),
                             4)
                      << "\n";
    }
}

// ---------------------------------------------------------------------------
// recint: membership of f in the recursively integrable class.
// ---------------------------------------------------------------------------

void run_recint(CliState& st, const std::string& func,
                const std::string& method) {
    const RunConfig cfg = st.effective("json");
    const FuncExpr f = parse_func_expr(func);
    const RegularityDecision dec =
        decide_rr(f, decide_options_from(cfg, method));
    if (st.strict && dec.verdict == Regularity::Undetermined) st.exit_code = 1;

    if (cfg.format == "json") {
        OrderedJson result;
        result["func"] = func;
        result["method_requested"] = method;
        result["decision"] = to_ordered_json(dec);
        print_artifact(cfg, std::move(result));
    } else if (cfg.format == "csv") {
        write_csv(std::cout, {"verdict", "method", "rule", "conflict"},
                  {{regularity_name(dec.verdict), dec.method,
                    csv_safe(dec.rule), dec.conflict ? "1" : "0"}});
    } else {
        std::cout << regularity_name(dec.verdict) << " (method=" << dec.method
                  << ", rule=" << dec.rule << ")\n";
    }
}

// ---------------------------------------------------------------------------
// dirichlet: verdicts for approximation functions, plus the two standalone
// checks (adversary uniformity lives under dataprog).
// ---------------------------------------------------------------------------

void run_dirichlet(CliState& st, int d, const std::string& psi_spec,
                   bool gamma_check) {
    const RunConfig cfg = st.effective("json");

    if (gamma_check) {
        const GammaOptimumReport rep = gamma_optimum_check(d);
        if (cfg.format == "json") {
            OrderedJson result;
            result["d"] = d;
            result["gamma_check"] = to_ordered_json(rep);
            print_artifact(cfg, std::move(result));
        } else if (cfg.format == "csv") {
            write_csv(std::cout,
                      {"d", "refined_argmax", "refined_max", "argmin",
                       "min_value"},
                      {{std::to_string(d), num(rep.refined_argmax, 12),
                        num(rep.refined_max, 12), num(rep.argmin, 12),
                        num(rep.min_value, 12)}});
        } else {
            std::cout << "d=" << d << ": growth-base score peaks at g="
                      << num(rep.refined_argmax, 10) << " (gamma_d="
                      << num(gamma_d(d), 10) << "), max=" << num(rep.refined_max, 10)
                      << "; g + g^(1-d) bottoms at " << num(rep.min_value, 10)
                      << " (alpha_d=" << num(alpha_d(d), 10) << ")\n";
        }
        return;
    }

    const PsiSpec psi = parse_psi_spec(psi_spec, d);
    const DecideOptions opts = decide_options_from(cfg, "auto");
    DirichletVerdict v;
    if (const auto* fam = std::get_if<FamilyNCPsi>(&psi))
        v = dirichlet_decide_family(d, fam->N, fam->C, opts);
    else
        v = dirichlet_decide(psi, d, opts);
    if (st.strict && v.verdict == Dirichletness::Undetermined)
        st.exit_code = 1;

    if (cfg.format == "json") {
        OrderedJson result;
        result["d"] = d;
        result["psi"] = psi_spec;
        result["decision"] = to_ordered_json(v);
        print_artifact(cfg, std::move(result));
    } else if (cfg.format == "csv") {
        write_csv(std::cout, {"verdict", "rule", "fpsi_sign"},
                  {{dirichletness_name(v.verdict), csv_safe(v.rule),
                    compare_result_name(v.fpsi_sign)}});
    } else {
        std::cout << dirichletness_name(v.verdict) << " (rule=" << v.rule
                  << ")\n";
    }
}

// ---------------------------------------------------------------------------
// omega: empirical exponent, or the approximation constant when an
// approximation function is supplied.
// ---------------------------------------------------------------------------

void run_omega(CliState& st, const std::string& point_spec,
               const std::string& height, const std::string& qmax_spec,
               const std::string& psi_spec) {
    const RunConfig cfg = st.effective("json");
    const HeightKind kind = parse_height_kind(height);
    const auto x = parse_point_spec(point_spec, cfg.precision_bits);
    const BigInt q_max = parse_qmax(qmax_spec);

    if (!psi_spec.empty()) {
        const PsiSpec psi =
            parse_psi_spec(psi_spec, std::max<int>(2, x.size()));
        const CEstimateReport rep = estimate_C(x, kind, psi, q_max);
        if (cfg.format == "json") {
            OrderedJson result;
            result["point"] = point_spec;
            result["height"] = height;
            result["psi"] = psi_spec;
            result["q_max"] = to_ordered_json(q_max);
            result["constant"] = to_ordered_json(rep);
            print_artifact(cfg, std::move(result));
        } else if (cfg.format == "csv") {
            std::vector<std::vector<std::string>> rows;
            for (std::size_t i = 0; i < rep.running_min.size(); ++i)
                rows.push_back({num(rep.running_height[i], 12),
                                num(rep.running_min[i], 12)});
            write_csv(std::cout, {"height", "running_c"}, rows);
        } else {
            std::cout << "C ~ " << num(static_cast<double>(rep.c_min), 8)
                      << " at height " << rep.best.height.str() << "; "
                      << rep.tuples << " certified tuples, " << rep.in_window
                      << " in window [" << rep.window_lo.str() << ", "
                      << rep.window_hi.str() << "]\n";
        }
        return;
    }

    const OmegaEstimateReport rep = estimate_omega(x, kind, q_max);
    if (cfg.format == "json") {
        OrderedJson result;
        result["point"] = point_spec;
        result["height"] = height;
        result["q_max"] = to_ordered_json(q_max);
        result["estimate"] = to_ordered_json(rep);
        print_artifact(cfg, std::move(result));
    } else if (cfg.format == "csv") {
        write_csv(std::cout,
                  {"omega", "omega_upper", "window_lo", "window_hi", "tuples",
                   "frontier_in_window"},
                  {{num(rep.omega, 12), num(rep.omega_upper, 12),
                    rep.window_lo.str(), rep.window_hi.str(),
                    std::to_string(rep.tuples),
                    std::to_string(rep.frontier_in_window)}});
    } else {
        std::cout << "omega ~ " << num(rep.omega, 6) << " (upper "
                  << num(rep.omega_upper, 6) << "); frontier="
                  << rep.frontier_in_window << " of " << rep.tuples
                  << " tuples in window [" << rep.window_lo.str() << ", "
                  << rep.window_hi.str() << "]\n";
    }
}

// ---------------------------------------------------------------------------
// dataprog: progression series for plots and the adversary batch check.
// ---------------------------------------------------------------------------

void run_dataprog(CliState& st, const std::vector<double>& pg,
                  int k_steps, const std::vector<std::string>& cost_spec,
                  const std::string& adversary_kind, int adversary_d,
                  int trials) {
    const RunConfig cfg = st.effective("csv");

    if (!adversary_kind.empty()) {
        const HeightKind kind = parse_height_kind(adversary_kind);
        const UniformCheckReport rep = minprod_uniform_check(
            kind, adversary_d, trials, static_cast<std::uint64_t>(cfg.seed));
        if (cfg.format == "json") {
            OrderedJson result;
            result["uniform_check"] = to_ordered_json(rep);
            print_artifact(cfg, std::move(result));
        } else if (cfg.format == "csv") {
            write_csv(std::cout,
                      {"kind", "d", "trials", "max_steps", "max_k_steps",
                       "max_budget", "worst_budget_fraction"},
                      {{height_kind_name(rep.kind), std::to_string(rep.d),
                        std::to_string(rep.trials),
                        std::to_string(rep.max_steps),
                        std::to_string(rep.max_k_steps),
                        std::to_string(rep.max_budget),
                        num(rep.worst_budget_fraction, 6)}});
        } else {
            std::cout << rep.trials << " plays of the " <<
                height_kind_name(rep.kind) << " adversary in d=" << rep.d
                      << " all terminated; longest play " << rep.max_steps
                      << " moves, worst budget use "
                      << num(100 * rep.worst_budget_fraction, 4) << "%\n";
        }
        return;
    }

    if (pg.size() != 2)
        throw std::invalid_argument(
            "--periodic-geometric takes two values: d gamma.");
    const int d = static_cast<int>(pg[0]);
    if (pg[0] != d)
        throw std::invalid_argument("The dimension must be an integer.");
    const DataProgression prog = periodic_geometric(d, pg[1], k_steps);

    if (cost_spec.empty()) {
        if (cfg.format == "json") {
            OrderedJson entries = OrderedJson::array();
            for (const auto& e : prog.entries) {
                OrderedJson row;
                row["value"] = e.value;
                row["coord"] = e.coord;
                entries.push_back(std::move(row));
            }
            OrderedJson result;
            result["d"] = prog.d;
            result["entries"] = std::move(entries);
            print_artifact(cfg, std::move(result));
        } else if (cfg.format == "csv") {
            std::vector<std::vector<std::string>> rows;
            for (std::size_t k = 0; k < prog.entries.size(); ++k)
                rows.push_back({std::to_string(k + 1),
                                num(prog.entries[k].value, 12),
                                std::to_string(prog.entries[k].coord)});
            write_csv(std::cout, {"k", "value", "coord"}, rows);
        } else {
            std::cout << "progression d=" << prog.d << ", "
                      << prog.entries.size() << " entries, last value "
                      << num(prog.entries.back().value, 6) << "\n";
        }
        return;
    }

    if (cost_spec.size() != 2)
        throw std::invalid_argument("--cost takes two values: kind alpha.");
    const HeightKind kind = parse_height_kind(cost_spec[0]);
    const double alpha = parse_constant_expr(cost_spec[1]);
    const PsiSpec psi = PowerLawPsi{alpha};
    const CostSeries series = cost_series(prog, aggregate_for(kind), psi);

    if (cfg.format == "json") {
        OrderedJson result;
        result["d"] = prog.d;
        result["kind"] = height_kind_name(kind);
        result["alpha"] = alpha;
        result["cost"] = to_ordered_json(series);
        print_artifact(cfg, std::move(result));
    } else if (cfg.format == "csv") {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < series.values.size(); ++i)
            rows.push_back({std::to_string(series.first_k + (int)i),
                            num(series.values[i], 12)});
        write_csv(std::cout, {"k", "cost"}, rows);
    } else {
        std::cout << "cost over k=" << series.first_k << ".."
                  << series.first_k + (int)series.values.size() - 1
                  << ": min=" << num(series.min_value, 6) << " at k="
                  << series.argmin_k << ", tail "
                  << tail_trend_name(series.tail) << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Diophantine approximation experiments with nonstandard height "
        "functions.\n"
        "Exit codes: 0 success; 1 Undetermined verdict under --strict; "
        "2 usage or domain errors."};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "Key=value file overriding defaults; command-line flags "
                   "override the file.");

    CliState st;
    app.add_option("--format", st.format_flag,
                   "Output format: json, csv, or human. Default depends on "
                   "the subcommand: cfrac human, dataprog csv, others json.")
        ->check(CLI::IsMember({"json", "csv", "human"}));
    app.add_option("--precision", st.cfg.precision_bits,
                   "Bits for irrational coordinate enclosures.")
        ->capture_default_str();
    app.add_option("--seed", st.cfg.seed,
                   "Seed for randomized checks; recorded in every artifact.")
        ->capture_default_str();
    app.add_option("--cache", st.cfg.cache_dir,
                   "Cache directory, recorded in artifacts. Reserved for "
                   "memoized expansions.")
        ->envname("DIOPH_CACHE_DIR");
    app.add_option("--horizon", st.cfg.ode_horizon,
                   "Integration horizon for the ODE decision route.")
        ->capture_default_str();
    app.add_option("--n-max", st.cfg.recurrence_n_max,
                   "Deepest start index for the recurrence decision route.")
        ->capture_default_str();
    app.add_option("--k0", st.cfg.k0, "First recursion index.")
        ->capture_default_str();
    app.add_option("--grid", st.cfg.grid,
                   "Start-value grid resolution for the ODE route.")
        ->capture_default_str();
    app.add_flag("--strict", st.strict,
                 "Exit with status 1 when the verdict is Undetermined.");

    // cfrac ------------------------------------------------------------
    auto* cfrac = app.add_subcommand(
        "cfrac",
        "Continued-fraction expansion and the doubling-denominator "
        "constructor. CSV columns: n,a,p,q (--expand) or n,target,q,ratio "
        "(--from-denoms).");
    std::string expand_spec, denoms_spec;
    int terms = 24;
    auto* opt_expand = cfrac->add_option(
        "--expand", expand_spec,
        "Coordinate to expand: a rational like 355/113 or a name like "
        "sqrt2-1, phi, pi, e.");
    cfrac->add_option("--terms", terms,
                      "Quotients to certify for irrational input.")
        ->capture_default_str();
    auto* opt_denoms = cfrac->add_option(
        "--from-denoms", denoms_spec,
        "Comma-separated doubling denominator targets starting at 1; prints "
        "the expansion hitting each target within a factor of 2.");
    opt_expand->excludes(opt_denoms);
    cfrac->callback([&] {
        if (expand_spec.empty() && denoms_spec.empty())
            throw std::invalid_argument(
                "cfrac needs --expand or --from-denoms.");
        run_cfrac(st, expand_spec, terms, denoms_spec);
    });

    // recint -----------------------------------------------------------
    auto* recint = app.add_subcommand(
        "recint",
        "Decide membership in the recursively integrable class. CSV "
        "columns: verdict,method,rule,conflict.");
    std::string func, method = "auto";
    recint->add_option("--func", func,
                       "Expression for f(x), e.g. \"0.2/x^2\" or "
                       "\"fNC(1,0.3)\".")
        ->required();
    recint->add_option("--method", method,
                       "Decision route: auto, recurrence, ode, or both.")
        ->capture_default_str()
        ->check(CLI::IsMember({"auto", "recurrence", "ode", "both"}));
    recint->callback([&] { run_recint(st, func, method); });

    // dirichlet ----------------------------------------------------------
    auto* dirichlet = app.add_subcommand(
        "dirichlet",
        "Verdict for an approximation function against the max height, or "
        "the growth-base optimum check. CSV columns: verdict,rule,fpsi_sign "
        "(--psi) or d,refined_argmax,refined_max,argmin,min_value "
        "(--gamma-check).");
    int dir_d = 3;
    std::string psi_spec;
    bool gamma_check = false;
    dirichlet->add_option("--d", dir_d, "Number of coordinates.")->required();
    auto* opt_psi = dirichlet->add_option(
        "--psi", psi_spec,
        "Approximation function: power:ALPHA, family:N,C, or custom:EXPR "
        "in q.");
    auto* opt_gamma = dirichlet->add_flag(
        "--gamma-check", gamma_check,
        "Check that the geometric growth base is the extremal one.");
    opt_psi->excludes(opt_gamma);
    dirichlet->callback([&] {
        if (psi_spec.empty() && !gamma_check)
            throw std::invalid_argument(
                "dirichlet needs --psi or --gamma-check.");
        run_dirichlet(st, dir_d, psi_spec, gamma_check);
    });

    // omega --------------------------------------------------------------
    auto* omega = app.add_subcommand(
        "omega",
        "Empirical approximation exponent at a point; with --psi, the "
        "approximation constant instead. CSV columns: omega,omega_upper,"
        "window_lo,window_hi,tuples,frontier_in_window; with --psi the "
        "running-minimum series height,running_c.");
    std::string point_spec, height_name, qmax_spec = "1e6", omega_psi;
    omega->add_option("--point", point_spec,
                      "Comma-separated coordinates, e.g. \"sqrt2-1,sqrt3-1\".")
        ->required();
    omega->add_option("--height", height_name,
                      "Height kind: max, min, prod, or lcm.")
        ->required()
        ->check(CLI::IsMember({"max", "min", "prod", "lcm"}));
    omega->add_option("--qmax", qmax_spec,
                      "Largest denominator explored, e.g. 1e6.")
        ->capture_default_str();
    omega->add_option("--psi", omega_psi,
                      "Approximation function; switches to constant "
                      "estimation.");
    omega->callback(
        [&] { run_omega(st, point_spec, height_name, qmax_spec, omega_psi); });

    // dataprog -----------------------------------------------------------
    auto* dataprog = app.add_subcommand(
        "dataprog",
        "Progression series for plots, and the adversary uniformity batch. "
        "CSV columns: k,cost (--cost), k,value,coord (schedule only), or "
        "kind,d,trials,max_steps,max_k_steps,max_budget,"
        "worst_budget_fraction (--adversary).");
    std::vector<double> pg_vals;
    std::vector<std::string> cost_spec;
    std::string adversary_kind;
    int k_steps = 40, adversary_d = 2, trials = 200;
    auto* opt_pg = dataprog->add_option(
        "--periodic-geometric", pg_vals,
        "Geometric schedule: d gamma (one entry per step, coordinates "
        "cycling).");
    opt_pg->expected(2);
    dataprog->add_option("--k", k_steps, "Number of schedule entries.")
        ->capture_default_str();
    dataprog->add_option("--cost", cost_spec,
                         "Cost series against a power law: KIND ALPHA, e.g. "
                         "max 1.889882 or max alpha_d(3).")
        ->expected(2);
    auto* opt_adv = dataprog->add_option(
        "--adversary", adversary_kind,
        "Run the denominator-growth adversary batch for this height kind.");
    dataprog->add_option("--d", adversary_d, "Dimension for --adversary.")
        ->capture_default_str();
    dataprog->add_option("--trials", trials, "Plays for --adversary.")
        ->capture_default_str();
    opt_adv->excludes(opt_pg);
    dataprog->callback([&] {
        if (pg_vals.empty() && adversary_kind.empty())
            throw std::invalid_argument(
                "dataprog needs --periodic-geometric or --adversary.");
        run_dataprog(st, pg_vals, k_steps, cost_spec, adversary_kind,
                     adversary_d, trials);
    });

    // Global options may appear before or after the subcommand name.
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return st.exit_code;
}
