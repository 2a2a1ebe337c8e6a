#pragma once

// Expression trees over the grammar {constants, argument, +, -, *, /, pow,
// exp, log}, evaluation templated on the real type, and the derived objects
// built from an approximation function psi: Psi(b) = -log psi(e^b),
// Phi(b) = alpha_d - Psi(b)/b, and f_psi(x) = (2/(d gamma_d)) Phi(gamma_d^x).
// Also the two-parameter family f_{N,C} of nested-log comparison functions.
//
// Construction is tagged: an expression remembers when it is a family
// member, a log transform of another expression, or a rescaling. The
// decision engine uses those tags for exact reductions instead of numerics.

#include "bigint.hpp"
#include "heights.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace dioph {

namespace detail {

enum class NodeKind { Const, Arg, Add, Sub, Mul, Div, Pow, Exp, Log };

struct Node {
    NodeKind kind;
    double value = 0.0;  // Const only
    std::shared_ptr<const Node> a, b;
};

using NodePtr = std::shared_ptr<const Node>;

inline NodePtr make_const(double v) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Const;
    n->value = v;
    return n;
}

inline NodePtr make_node(NodeKind k, NodePtr a, NodePtr b = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

// log with algebraic collapses applied at construction time. These keep the
// derived forms Psi/Phi/f_psi free of exp-then-log round trips, which would
// otherwise overflow doubles long before the interesting argument range.
inline NodePtr smart_log(const NodePtr& u) {
    switch (u->kind) {
        case NodeKind::Exp:
            return u->a;
        case NodeKind::Pow:
            return make_node(NodeKind::Mul, u->b, smart_log(u->a));
        case NodeKind::Mul:
            return make_node(NodeKind::Add, smart_log(u->a), smart_log(u->b));
        case NodeKind::Div:
            return make_node(NodeKind::Sub, smart_log(u->a), smart_log(u->b));
        case NodeKind::Const:
            if (u->value > 0.0) return make_const(std::log(u->value));
            throw std::domain_error("log of a nonpositive constant.");
        default:
            return make_node(NodeKind::Log, u);
    }
}

// Structural substitution of `inner` for the argument: builds f(g(x)).
inline NodePtr compose(const NodePtr& f, const NodePtr& inner) {
    switch (f->kind) {
        case NodeKind::Const: return f;
        case NodeKind::Arg: return inner;
        case NodeKind::Exp: return make_node(NodeKind::Exp, compose(f->a, inner));
        case NodeKind::Log: return smart_log(compose(f->a, inner));
        default:
            return make_node(f->kind, compose(f->a, inner),
                             f->b ? compose(f->b, inner) : nullptr);
    }
}

template <typename Real>
Real eval_node(const Node& n, const Real& x) {
    using std::exp;
    using std::log;
    using std::pow;
    switch (n.kind) {
        case NodeKind::Const: return Real(n.value);
        case NodeKind::Arg: return x;
        case NodeKind::Add: return eval_node(*n.a, x) + eval_node(*n.b, x);
        case NodeKind::Sub: return eval_node(*n.a, x) - eval_node(*n.b, x);
        case NodeKind::Mul: return eval_node(*n.a, x) * eval_node(*n.b, x);
        case NodeKind::Div: {
            Real den = eval_node(*n.b, x);
            if (den == 0)
                throw std::domain_error("Division by zero during evaluation.");
            return eval_node(*n.a, x) / den;
        }
        case NodeKind::Pow: {
            Real base = eval_node(*n.a, x);
            // Small integer exponents are the common case (squares in the
            // nested-log family); evaluate them by multiplication so that
            // negative bases stay exact and no log is taken.
            if (n.b->kind == NodeKind::Const) {
                double e = n.b->value;
                if (e == static_cast<long long>(e) && std::abs(e) <= 64) {
                    long long k = static_cast<long long>(e);
                    if (k == 0) return Real(1);
                    bool neg = k < 0;
                    if (neg) k = -k;
                    Real acc(1);
                    for (long long i = 0; i < k; ++i) acc *= base;
                    if (neg) {
                        if (acc == 0)
                            throw std::domain_error(
                                "Zero base with negative exponent.");
                        return Real(1) / acc;
                    }
                    return acc;
                }
            }
            if (base < 0)
                throw std::domain_error(
                    "Negative base with non-integer exponent.");
            if (base == 0) return Real(0);
            return pow(base, eval_node(*n.b, x));
        }
        case NodeKind::Exp: return exp(eval_node(*n.a, x));
        case NodeKind::Log: {
            Real v = eval_node(*n.a, x);
            if (v <= 0)
                throw std::domain_error(
                    "log of a nonpositive value during evaluation; argument "
                    "below the expression's domain guard.");
            return log(v);
        }
    }
    throw std::logic_error("Unhandled node kind.");
}

// Point beyond which u(x) stays above 1, found by a doubling search with a
// small lookahead so the search does not stop inside a transient dip. The
// grammar's expressions are eventually monotone, which is all this needs.
// Returns +inf when no such point exists within double range; expressions
// with an infinite guard are undefined at every representable argument and
// evaluation reports that at runtime.
inline double threshold_above_one(const NodePtr& u, double from) {
    double t = std::max(from, 1e-9);
    for (int step = 0; step < 1100; ++step) {
        bool ok = true;
        for (double m : {1.0, 2.0, 4.0}) {
            try {
                if (!(eval_node<double>(*u, t * m) > 1.0)) {
                    ok = false;
                    break;
                }
            } catch (const std::domain_error&) {
                ok = false;
                break;
            }
        }
        if (ok) return t;
        t *= 2;
        if (t > 1e300) break;
    }
    return std::numeric_limits<double>::infinity();
}

// Structural domain guard. Above the guard every Log operand exceeds 1, so
// nested logs are positive and reciprocal powers of them are finite. Zeros
// of general denominators are not tracked here; eval's runtime checks are
// the backstop for those.
inline double guard_node(const NodePtr& n) {
    switch (n->kind) {
        case NodeKind::Const:
        case NodeKind::Arg:
            return 0.0;
        case NodeKind::Exp:
            return guard_node(n->a);
        case NodeKind::Log:
            return threshold_above_one(n->a, guard_node(n->a));
        default: {
            double g = guard_node(n->a);
            if (n->b) g = std::max(g, guard_node(n->b));
            return g;
        }
    }
}

inline void print_node(const Node& n, std::ostream& os) {
    switch (n.kind) {
        case NodeKind::Const: os << n.value; return;
        case NodeKind::Arg: os << "x"; return;
        case NodeKind::Add: os << "(add "; break;
        case NodeKind::Sub: os << "(sub "; break;
        case NodeKind::Mul: os << "(mul "; break;
        case NodeKind::Div: os << "(div "; break;
        case NodeKind::Pow: os << "(pow "; break;
        case NodeKind::Exp: os << "(exp "; break;
        case NodeKind::Log: os << "(log "; break;
    }
    print_node(*n.a, os);
    if (n.b) {
        os << ' ';
        print_node(*n.b, os);
    }
    os << ')';
}

inline NodePtr make_arg() {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Arg;
    return n;
}

inline bool contains_arg(const Node& n) {
    if (n.kind == NodeKind::Arg) return true;
    if (n.a && contains_arg(*n.a)) return true;
    return n.b && contains_arg(*n.b);
}

// Symbolic quotient node / x. Sums split termwise, a bare argument factor
// cancels exactly, and opaque subtrees fall back to a literal division.
// The point is to keep linear leading terms like alpha * b from reaching
// the evaluator as inf/inf once b itself overflows double range.
inline NodePtr divide_by_arg(const NodePtr& n) {
    switch (n->kind) {
        case NodeKind::Arg:
            return make_const(1.0);
        case NodeKind::Add:
        case NodeKind::Sub:
            return make_node(n->kind, divide_by_arg(n->a), divide_by_arg(n->b));
        case NodeKind::Mul:
            if (n->b->kind == NodeKind::Arg) return n->a;
            if (n->a->kind == NodeKind::Arg) return n->b;
            if (contains_arg(*n->a))
                return make_node(NodeKind::Mul, divide_by_arg(n->a), n->b);
            if (contains_arg(*n->b))
                return make_node(NodeKind::Mul, n->a, divide_by_arg(n->b));
            [[fallthrough]];
        default:
            return make_node(NodeKind::Div, n, make_arg());
    }
}

}  // namespace detail


// Tag: this expression is f_{N,C}.
struct FamilyTag {
    int N;
    double C;
};

class FuncExpr {
public:
    FuncExpr() : root_(detail::make_const(0.0)) {}

    static FuncExpr constant(double c) { return FuncExpr(detail::make_const(c)); }
    static FuncExpr arg() {
        auto n = std::make_shared<detail::Node>();
        n->kind = detail::NodeKind::Arg;
        return FuncExpr(std::move(n));
    }

    friend FuncExpr operator+(const FuncExpr& a, const FuncExpr& b) {
        return FuncExpr(detail::make_node(detail::NodeKind::Add, a.root_, b.root_),
                        std::max(a.t_domain_, b.t_domain_));
    }
    friend FuncExpr operator-(const FuncExpr& a, const FuncExpr& b) {
        return FuncExpr(detail::make_node(detail::NodeKind::Sub, a.root_, b.root_),
                        std::max(a.t_domain_, b.t_domain_));
    }
    friend FuncExpr operator*(const FuncExpr& a, const FuncExpr& b) {
        return FuncExpr(detail::make_node(detail::NodeKind::Mul, a.root_, b.root_),
                        std::max(a.t_domain_, b.t_domain_));
    }
    friend FuncExpr operator/(const FuncExpr& a, const FuncExpr& b) {
        return FuncExpr(detail::make_node(detail::NodeKind::Div, a.root_, b.root_),
                        std::max(a.t_domain_, b.t_domain_));
    }

    static FuncExpr pow(const FuncExpr& base, const FuncExpr& exponent) {
        return FuncExpr(
            detail::make_node(detail::NodeKind::Pow, base.root_, exponent.root_),
            std::max(base.t_domain_, exponent.t_domain_));
    }
    static FuncExpr pow(const FuncExpr& base, double exponent) {
        return pow(base, constant(exponent));
    }
    static FuncExpr exp(const FuncExpr& u) {
        return FuncExpr(detail::make_node(detail::NodeKind::Exp, u.root_),
                        u.t_domain_);
    }

    // log with construction-time collapses; the domain guard is bumped to a
    // point where the operand has been observed to exceed 1 (doubling
    // search), so iterated logs stay positive above the guard.
    static FuncExpr log(const FuncExpr& u);

    // i-fold iterated log; i = 0 is the identity.
    static FuncExpr iterated_log(int i, const FuncExpr& u) {
        if (i < 0) throw std::invalid_argument("iterated_log needs i >= 0.");
        FuncExpr e = u;
        for (int k = 0; k < i; ++k) e = log(e);
        return e;
    }

    template <typename Real>
    Real eval(Real x) const {
        return detail::eval_node<Real>(*root_, x);
    }
    double operator()(double x) const { return eval<double>(x); }

    // Conservative threshold: evaluation is safe (all logs positive) for
    // arguments strictly above this value.
    double t_domain() const { return t_domain_; }

    std::string to_string() const {
        std::ostringstream os;
        detail::print_node(*root_, os);
        return os.str();
    }

    // Construction tags (see decide_rr): at most one of these is set by the
    // factory functions that know the provenance of the expression.
    const std::optional<FamilyTag>& family_tag() const { return family_; }
    std::shared_ptr<const FuncExpr> log_transform_of() const {
        return log_transform_of_;
    }
    std::shared_ptr<const FuncExpr> scaled_of() const { return scaled_of_; }
    double scale_lambda() const { return scale_lambda_; }

    void set_family_tag(FamilyTag t) { family_ = t; }
    void set_log_transform_of(FuncExpr inner) {
        log_transform_of_ = std::make_shared<const FuncExpr>(std::move(inner));
    }
    void set_scaled_of(FuncExpr base, double lambda) {
        scaled_of_ = std::make_shared<const FuncExpr>(std::move(base));
        scale_lambda_ = lambda;
    }

    void set_t_domain(double t) { t_domain_ = t; }

    const detail::NodePtr& root() const { return root_; }

    // f(g(x)) as a tree.
    static FuncExpr composed(const FuncExpr& f, const FuncExpr& g) {
        FuncExpr out(detail::compose(f.root_, g.root_));
        out.t_domain_ = std::max(g.t_domain_, detail::guard_node(out.root_));
        return out;
    }

    // Symbolic quotient by the argument (detail::divide_by_arg); keeps
    // ratios like Psi(b)/b evaluable when b overflows double range.
    FuncExpr divided_by_arg() const {
        return FuncExpr(detail::divide_by_arg(root_), t_domain_);
    }

private:
    explicit FuncExpr(detail::NodePtr root, double guard = 0.0)
        : root_(std::move(root)), t_domain_(guard) {}

    detail::NodePtr root_;
    double t_domain_ = 0.0;

    std::optional<FamilyTag> family_;
    std::shared_ptr<const FuncExpr> log_transform_of_;
    std::shared_ptr<const FuncExpr> scaled_of_;
    double scale_lambda_ = 1.0;
};

inline FuncExpr FuncExpr::log(const FuncExpr& u) {
    FuncExpr out(detail::smart_log(u.root_));
    out.t_domain_ = std::max(u.t_domain_, detail::guard_node(out.root_));
    return out;
}

// ---------------------------------------------------------------------------
// The nested-log family
//   f_{N,C}(x) = (1/4) sum_{n=0}^{N} prod_{i=0}^{n} ilog_i(x)^{-2}
//                + C prod_{i=0}^{N+1} ilog_i(x)^{-2},
// where ilog_i is the i-fold iterated log (ilog_0 the identity) and the sum
// is empty for N = -1, so f_{-1,C}(x) = C/x^2.
// ---------------------------------------------------------------------------
inline FuncExpr f_NC(int N, double C) {
    if (N < -1) throw std::invalid_argument("f_NC needs N >= -1.");
    if (C < 0) throw std::invalid_argument("f_NC needs C >= 0.");
    const FuncExpr x = FuncExpr::arg();
    FuncExpr sum = FuncExpr::constant(0.0);
    FuncExpr prod = FuncExpr::constant(1.0);
    for (int n = 0; n <= N; ++n) {
        prod = prod * FuncExpr::pow(FuncExpr::iterated_log(n, x), -2.0);
        sum = sum + prod;
    }
    FuncExpr full = prod * FuncExpr::pow(FuncExpr::iterated_log(N + 1, x), -2.0);
    FuncExpr result =
        FuncExpr::constant(0.25) * sum + FuncExpr::constant(C) * full;
    result.set_family_tag({N, C});
    return result;
}

// ---------------------------------------------------------------------------
// Decision-equivalent transforms. Both preserve membership in the regular
// regime, and the tags they attach let the decision engine reduce a
// transformed expression to its base instead of re-running numerics.
// ---------------------------------------------------------------------------

// lambda^2 f(lambda x) for lambda > 0.
inline FuncExpr scale(const FuncExpr& f, double lambda) {
    if (!(lambda > 0)) throw std::invalid_argument("scale needs lambda > 0.");
    FuncExpr inner =
        FuncExpr::composed(f, FuncExpr::constant(lambda) * FuncExpr::arg());
    FuncExpr out = FuncExpr::constant(lambda * lambda) * inner;
    out.set_t_domain(std::max(out.t_domain(), f.t_domain() / lambda));
    out.set_scaled_of(f, lambda);
    return out;
}

// (1/x^2)(1/4 + f(log x)). Applied to a family member it lands back in the
// family one level deeper, and that case is returned in its exact tagged
// form rather than as a raw tree.
inline FuncExpr log_transform(const FuncExpr& f) {
    if (f.family_tag()) {
        const auto& t = *f.family_tag();
        return f_NC(t.N + 1, t.C);
    }
    const FuncExpr x = FuncExpr::arg();
    FuncExpr inner = FuncExpr::composed(f, FuncExpr::log(x));
    FuncExpr out = FuncExpr::pow(x, -2.0) *
                   (FuncExpr::constant(0.25) + inner);
    double guard = std::exp(std::min(700.0, std::max(1.0, f.t_domain())));
    out.set_t_domain(std::max(out.t_domain(), guard));
    out.set_log_transform_of(f);
    return out;
}

// ---------------------------------------------------------------------------
// Approximation-function specifications
// ---------------------------------------------------------------------------

// psi_alpha(q) = q^(-alpha).
struct PowerLawPsi {
    double alpha;
};

// The family psi_{N,C}(q) = q^(-alpha_d + c8 [sum of nested-log corrections]),
// with c8 = d gamma_d log^2(gamma_d) / 8. Dirichlet exactly when C > 1.
struct FamilyNCPsi {
    int d;
    int N;
    double C;
};

// Arbitrary in-grammar expression for psi(q); the argument is q.
struct CustomPsi {
    FuncExpr expr;
};

using PsiSpec = std::variant<PowerLawPsi, FamilyNCPsi, CustomPsi>;

struct unsupported_dimension : std::domain_error {
    using std::domain_error::domain_error;
};

inline PsiSpec psi_NC(int d, int N, double C) {
    if (d < 3)
        throw unsupported_dimension(
            "psi_NC requires d >= 3 (lower dimensions have no such family).");
    if (N < 1) throw std::invalid_argument("psi_NC needs N >= 1.");
    if (C < 0) throw std::invalid_argument("psi_NC needs C >= 0.");
    return FamilyNCPsi{d, N, C};
}

// Leading constant of the family's exponent correction.
inline double c8_constant(int d) {
    const double g = gamma_d(d);
    const double lg = std::log(g);
    return d * g * lg * lg / 8.0;
}

// Psi(b) = -log psi(e^b), built symbolically (no exp/log round trip).
inline FuncExpr big_psi_of(const PsiSpec& psi) {
    if (const auto* p = std::get_if<PowerLawPsi>(&psi))
        return FuncExpr::constant(p->alpha) * FuncExpr::arg();
    if (const auto* fam = std::get_if<FamilyNCPsi>(&psi)) {
        // -log psi_{N,C}(e^b) = alpha_d b - c8 b [ sum_{n=2}^{N} prod_{i=2}^{n}
        //   ilog_{i-1}(b)^{-2} + C prod_{i=2}^{N+1} ilog_{i-1}(b)^{-2} ],
        // using log^{ (i) }(e^b) = ilog_{i-1}(b).
        const FuncExpr b = FuncExpr::arg();
        FuncExpr sum = FuncExpr::constant(0.0);
        FuncExpr prod = FuncExpr::constant(1.0);
        for (int n = 2; n <= fam->N; ++n) {
            prod = prod * FuncExpr::pow(FuncExpr::iterated_log(n - 1, b), -2.0);
            sum = sum + prod;
        }
        FuncExpr full =
            prod * FuncExpr::pow(FuncExpr::iterated_log(fam->N, b), -2.0);
        FuncExpr correction = sum + FuncExpr::constant(fam->C) * full;
        return FuncExpr::constant(alpha_d(fam->d)) * b -
               FuncExpr::constant(c8_constant(fam->d)) * b * correction;
    }
    const auto& custom = std::get<CustomPsi>(psi);
    FuncExpr psi_of_exp =
        FuncExpr::composed(custom.expr, FuncExpr::exp(FuncExpr::arg()));
    return FuncExpr::constant(0.0) - FuncExpr::log(psi_of_exp);
}

struct DerivedForms {
    FuncExpr big_psi;  // Psi(b) = -log psi(e^b)
    FuncExpr phi;      // Phi(b) = alpha_d - Psi(b)/b
    FuncExpr f_psi;    // f_psi(x) = (2/(d gamma_d)) Phi(gamma_d^x)
};

inline DerivedForms derive_forms(const PsiSpec& psi, int d) {
    if (d < 2) throw unsupported_dimension("derive_forms requires d >= 2.");
    DerivedForms out{big_psi_of(psi), FuncExpr(), FuncExpr()};
    const double a = alpha_d(d);
    const double g = gamma_d(d);

    if (const auto* p = std::get_if<PowerLawPsi>(&psi)) {
        out.phi = FuncExpr::constant(a - p->alpha);
        out.f_psi = FuncExpr::constant(2.0 / (d * g) * (a - p->alpha));
        return out;
    }
    if (const auto* fam = std::get_if<FamilyNCPsi>(&psi)) {
        if (fam->d != d)
            throw std::invalid_argument(
                "Family dimension disagrees with the requested dimension.");
        out.phi = FuncExpr::constant(a) - out.big_psi.divided_by_arg();
        // Exact reduction: f_{psi_{N,C}}(x) = log^2(g) f_{N-2,C/4}(x log g),
        // which is the lambda = log(g) rescaling of f_{N-2,C/4}.
        out.f_psi = scale(f_NC(fam->N - 2, fam->C / 4.0), std::log(g));
        return out;
    }
    out.phi = FuncExpr::constant(a) - out.big_psi.divided_by_arg();
    // gamma^x as exp(x log gamma).
    FuncExpr gamma_pow_x =
        FuncExpr::exp(FuncExpr::constant(std::log(g)) * FuncExpr::arg());
    out.f_psi = FuncExpr::constant(2.0 / (d * g)) *
                FuncExpr::composed(out.phi, gamma_pow_x);
    return out;
}

// ---------------------------------------------------------------------------
// Sampled eventual comparison (the desk-scale stand-in for the eventual-sign
// dichotomy of the function grammar).
// ---------------------------------------------------------------------------

enum class CompareResult { LE, GE, MIXED };

inline CompareResult eventually_compare(const FuncExpr& f, const FuncExpr& g,
                                        double x_lo = 1e4, double x_hi = 1e12,
                                        int samples = 512) {
    const double guard =
        std::max(f.t_domain(), g.t_domain()) * 1.5 + 1e-9;
    x_lo = std::max(x_lo, guard);
    if (!(x_hi > x_lo))
        throw std::domain_error("Comparison window is empty after the domain "
                                "guards are applied.");
    bool any_less = false, any_greater = false;
    const double step = std::log(x_hi / x_lo) / (samples - 1);
    for (int i = 0; i < samples; ++i) {
        const double x = x_lo * std::exp(i * step);
        const double fv = f(x), gv = g(x);
        const double tol = 1e-14 * (std::abs(fv) + std::abs(gv)) + 1e-300;
        if (fv < gv - tol) any_less = true;
        if (fv > gv + tol) any_greater = true;
        if (any_less && any_greater) return CompareResult::MIXED;
    }
    if (any_greater) return CompareResult::GE;
    return CompareResult::LE;  // ties count as <=
}

// Monotonicity and slope report for Psi over a sampled window in b.
struct PsiHypothesesReport {
    bool increasing = false;
    double max_slope = 0.0;
    int violations = 0;
    double b_lo = 0.0, b_hi = 0.0;
};

inline PsiHypothesesReport validate_psi_hypotheses(const PsiSpec& psi,
                                                   double b_lo = 0.0,
                                                   double b_hi = 1e6,
                                                   int samples = 512) {
    const FuncExpr big_psi = big_psi_of(psi);
    PsiHypothesesReport rep;
    rep.b_lo = std::max({b_lo, big_psi.t_domain() * 1.5, 1e-6});
    rep.b_hi = b_hi;
    if (!(rep.b_hi > rep.b_lo))
        throw std::domain_error("Validation window is empty.");
    const double step = std::log(rep.b_hi / rep.b_lo) / (samples - 1);
    rep.max_slope = -std::numeric_limits<double>::infinity();
    double prev_b = rep.b_lo;
    double prev_v = big_psi(prev_b);
    for (int i = 1; i < samples; ++i) {
        const double b = rep.b_lo * std::exp(i * step);
        const double v = big_psi(b);
        if (v <= prev_v) ++rep.violations;
        rep.max_slope = std::max(rep.max_slope, (v - prev_v) / (b - prev_b));
        prev_b = b;
        prev_v = v;
    }
    rep.increasing = rep.violations == 0;
    return rep;
}

}  // namespace dioph
