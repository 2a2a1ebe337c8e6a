#pragma once

// Text input for the library: an infix grammar for function expressions, a
// reader for the prefix form that FuncExpr::to_string prints (so printed
// expressions round-trip), and the short spec strings the command-line tool
// uses for approximation functions and coordinate lists. Unknown identifiers
// are hard errors everywhere; a typo that silently parsed as zero would
// poison every run built on top of it.
//
// Infix grammar, in decreasing precedence:
//   atom   := NUMBER | 'x' | 'q' | NAME '(' expr {',' expr} ')' | '(' expr ')'
//   power  := atom ['^' unary]            (right-associative)
//   unary  := '-' unary | power
//   term   := unary {('*' | '/') unary}
//   expr   := term {('+' | '-') term}
// Callable names: exp, log, ilog, pow, fNC, scale, log_transform, gamma_d,
// alpha_d. Arguments that select a family member or a scaling factor must be
// constant expressions (no x); gamma_d/alpha_d take an integer dimension and
// fold to constants, so "alpha_d(3) - 2" is a legal constant expression.

#include "funexpr.hpp"
#include "real_interval.hpp"

#include <cctype>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace dioph {

namespace detail {

struct ExprToken {
    enum Kind { Number, Ident, Punct, End };
    Kind kind = End;
    std::string text;
    double number = 0.0;
    std::size_t pos = 0;  // byte offset in the source, for error messages
};

inline std::vector<ExprToken> tokenize_expr(const std::string& s) {
    std::vector<ExprToken> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const std::size_t start = i;
            while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
                ++i;
            if (i < s.size() && s[i] == '.') {
                ++i;
                while (i < s.size() &&
                       std::isdigit(static_cast<unsigned char>(s[i])))
                    ++i;
            }
            if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
                std::size_t j = i + 1;
                if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
                if (j < s.size() &&
                    std::isdigit(static_cast<unsigned char>(s[j]))) {
                    i = j;
                    while (i < s.size() &&
                           std::isdigit(static_cast<unsigned char>(s[i])))
                        ++i;
                }
            }
            ExprToken t;
            t.kind = ExprToken::Number;
            t.text = s.substr(start, i - start);
            t.number = std::stod(t.text);
            t.pos = start;
            out.push_back(std::move(t));
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = i;
            while (i < s.size() &&
                   (std::isalnum(static_cast<unsigned char>(s[i])) ||
                    s[i] == '_'))
                ++i;
            ExprToken t;
            t.kind = ExprToken::Ident;
            t.text = s.substr(start, i - start);
            t.pos = start;
            out.push_back(std::move(t));
            continue;
        }
        if (std::string("+-*/^(),").find(c) != std::string::npos) {
            ExprToken t;
            t.kind = ExprToken::Punct;
            t.text = std::string(1, c);
            t.pos = i;
            out.push_back(std::move(t));
            ++i;
            continue;
        }
        throw std::invalid_argument("Unexpected character '" +
                                    std::string(1, c) + "' at position " +
                                    std::to_string(i) + ".");
    }
    ExprToken end;
    end.kind = ExprToken::End;
    end.pos = s.size();
    out.push_back(end);
    return out;
}

// Constant folding for arguments that must be plain numbers (family indices,
// scaling factors, dimensions). The expression may not mention the argument.
inline double fold_constant(const FuncExpr& e, const std::string& what) {
    if (contains_arg(*e.root()))
        throw std::invalid_argument(what +
                                    " must be a constant expression (it may "
                                    "not mention the argument x).");
    return e.eval<double>(1.0);
}

inline int fold_integer(const FuncExpr& e, const std::string& what) {
    const double v = fold_constant(e, what);
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9)
        throw std::invalid_argument(what + " must be an integer, got " +
                                    std::to_string(v) + ".");
    return static_cast<int>(r);
}

// Shared call-site builder: both grammars funnel their named calls here so
// arity and constant-argument rules live in one place.
inline FuncExpr build_call(const std::string& name,
                           const std::vector<FuncExpr>& args,
                           std::size_t pos) {
    auto arity = [&](std::size_t n) {
        if (args.size() != n)
            throw std::invalid_argument(
                name + " takes " + std::to_string(n) + " argument" +
                (n == 1 ? "" : "s") + ", got " + std::to_string(args.size()) +
                " (at position " + std::to_string(pos) + ").");
    };
    if (name == "exp") {
        arity(1);
        return FuncExpr::exp(args[0]);
    }
    if (name == "log") {
        arity(1);
        return FuncExpr::log(args[0]);
    }
    if (name == "ilog") {
        arity(2);
        const int i = fold_integer(args[0], "ilog's first argument");
        if (i < 0)
            throw std::invalid_argument("ilog's first argument must be >= 0.");
        return FuncExpr::iterated_log(i, args[1]);
    }
    if (name == "pow") {
        arity(2);
        return FuncExpr::pow(args[0], args[1]);
    }
    if (name == "fNC") {
        arity(2);
        const int N = fold_integer(args[0], "fNC's first argument");
        const double C = fold_constant(args[1], "fNC's second argument");
        return f_NC(N, C);
    }
    if (name == "scale") {
        arity(2);
        const double lambda = fold_constant(args[1], "scale's second argument");
        return scale(args[0], lambda);
    }
    if (name == "log_transform") {
        arity(1);
        return log_transform(args[0]);
    }
    if (name == "gamma_d") {
        arity(1);
        return FuncExpr::constant(
            gamma_d(fold_integer(args[0], "gamma_d's argument")));
    }
    if (name == "alpha_d") {
        arity(1);
        return FuncExpr::constant(
            alpha_d(fold_integer(args[0], "alpha_d's argument")));
    }
    throw std::invalid_argument(
        "Unknown identifier '" + name + "' at position " + std::to_string(pos) +
        ". Known names: x, q, exp, log, ilog, pow, fNC, scale, log_transform, "
        "gamma_d, alpha_d.");
}

class InfixExprParser {
public:
    explicit InfixExprParser(const std::string& text)
        : tokens_(tokenize_expr(text)) {}

    FuncExpr parse() {
        FuncExpr e = parse_expr();
        if (peek().kind != ExprToken::End)
            throw std::invalid_argument("Unexpected trailing input '" +
                                        peek().text + "' at position " +
                                        std::to_string(peek().pos) + ".");
        return e;
    }

private:
    const ExprToken& peek() const { return tokens_[i_]; }
    ExprToken take() { return tokens_[i_++]; }
    bool accept_punct(const char* p) {
        if (peek().kind == ExprToken::Punct && peek().text == p) {
            ++i_;
            return true;
        }
        return false;
    }
    void expect_punct(const char* p) {
        if (!accept_punct(p))
            throw std::invalid_argument("Expected '" + std::string(p) +
                                        "' at position " +
                                        std::to_string(peek().pos) + ".");
    }

    FuncExpr parse_expr() {
        FuncExpr e = parse_term();
        for (;;) {
            if (accept_punct("+"))
                e = e + parse_term();
            else if (accept_punct("-"))
                e = e - parse_term();
            else
                return e;
        }
    }

    FuncExpr parse_term() {
        FuncExpr e = parse_unary();
        for (;;) {
            if (accept_punct("*"))
                e = e * parse_unary();
            else if (accept_punct("/"))
                e = e / parse_unary();
            else
                return e;
        }
    }

    FuncExpr parse_unary() {
        if (accept_punct("-")) return FuncExpr::constant(0.0) - parse_unary();
        return parse_power();
    }

    FuncExpr parse_power() {
        FuncExpr base = parse_atom();
        // Right-associative, and the exponent may carry its own sign:
        // x^-2 and 2^3^2 = 2^(3^2) both parse.
        if (accept_punct("^")) return FuncExpr::pow(base, parse_unary());
        return base;
    }

    FuncExpr parse_atom() {
        const ExprToken t = take();
        if (t.kind == ExprToken::Number) return FuncExpr::constant(t.number);
        if (t.kind == ExprToken::Punct && t.text == "(") {
            FuncExpr e = parse_expr();
            expect_punct(")");
            return e;
        }
        if (t.kind == ExprToken::Ident) {
            if (t.text == "x" || t.text == "q") return FuncExpr::arg();
            if (accept_punct("(")) {
                std::vector<FuncExpr> args;
                if (!accept_punct(")")) {
                    args.push_back(parse_expr());
                    while (accept_punct(",")) args.push_back(parse_expr());
                    expect_punct(")");
                }
                return build_call(t.text, args, t.pos);
            }
            // Reuse the call builder's name check so a known function used
            // without parentheses reports its arity instead of "unknown".
            build_call(t.text, {}, t.pos);
            throw std::invalid_argument("'" + t.text +
                                        "' needs call syntax: " + t.text +
                                        "(...) at position " +
                                        std::to_string(t.pos) + ".");
        }
        throw std::invalid_argument("Expected a number, name, or '(' at "
                                    "position " +
                                    std::to_string(t.pos) + ".");
    }

    std::vector<ExprToken> tokens_;
    std::size_t i_ = 0;
};

// Reader for the prefix form: (op arg ...) with atoms NUMBER, x, q, and an
// optional leading '-' on numbers. This is the shape print_node emits.
class PrefixExprParser {
public:
    explicit PrefixExprParser(const std::string& text)
        : tokens_(tokenize_expr(text)) {}

    FuncExpr parse() {
        FuncExpr e = parse_form();
        if (peek().kind != ExprToken::End)
            throw std::invalid_argument("Unexpected trailing input '" +
                                        peek().text + "' at position " +
                                        std::to_string(peek().pos) + ".");
        return e;
    }

private:
    const ExprToken& peek() const { return tokens_[i_]; }
    ExprToken take() { return tokens_[i_++]; }

    FuncExpr parse_form() {
        const ExprToken t = take();
        if (t.kind == ExprToken::Number) return FuncExpr::constant(t.number);
        if (t.kind == ExprToken::Punct && t.text == "-") {
            const ExprToken n = take();
            if (n.kind != ExprToken::Number)
                throw std::invalid_argument(
                    "'-' in prefix form must precede a number (position " +
                    std::to_string(t.pos) + ").");
            return FuncExpr::constant(-n.number);
        }
        if (t.kind == ExprToken::Ident) {
            if (t.text == "x" || t.text == "q") return FuncExpr::arg();
            throw std::invalid_argument("Unknown atom '" + t.text +
                                        "' at position " +
                                        std::to_string(t.pos) + ".");
        }
        if (t.kind == ExprToken::Punct && t.text == "(") {
            const ExprToken op = take();
            if (op.kind != ExprToken::Ident)
                throw std::invalid_argument(
                    "Expected an operator name after '(' at position " +
                    std::to_string(op.pos) + ".");
            std::vector<FuncExpr> args;
            while (!(peek().kind == ExprToken::Punct && peek().text == ")")) {
                if (peek().kind == ExprToken::End)
                    throw std::invalid_argument(
                        "Unbalanced '(' at position " + std::to_string(t.pos) +
                        ".");
                args.push_back(parse_form());
            }
            take();  // ')'
            if (op.text == "neg") {
                if (args.size() != 1)
                    throw std::invalid_argument("neg takes 1 argument.");
                return FuncExpr::constant(0.0) - args[0];
            }
            if (op.text == "add" || op.text == "sub" || op.text == "mul" ||
                op.text == "div") {
                if (args.size() != 2)
                    throw std::invalid_argument(op.text +
                                                " takes 2 arguments.");
                if (op.text == "add") return args[0] + args[1];
                if (op.text == "sub") return args[0] - args[1];
                if (op.text == "mul") return args[0] * args[1];
                return args[0] / args[1];
            }
            return build_call(op.text, args, op.pos);
        }
        throw std::invalid_argument("Expected an atom or '(' at position " +
                                    std::to_string(t.pos) + ".");
    }

    std::vector<ExprToken> tokens_;
    std::size_t i_ = 0;
};

}  // namespace detail

// Parses an expression in the infix grammar; when that fails, retries the
// input as a prefix form. The fallback is unambiguous because a prefix form
// always starts with '(' followed by an operator name, which is never a
// well-formed infix prefix (infix calls attach '(' directly to the name).
inline FuncExpr parse_func_expr(const std::string& text) {
    try {
        return detail::InfixExprParser(text).parse();
    } catch (const std::invalid_argument& infix_err) {
        try {
            return detail::PrefixExprParser(text).parse();
        } catch (const std::invalid_argument& prefix_err) {
            throw std::invalid_argument(std::string(infix_err.what()) +
                                        " (Also tried the prefix form: " +
                                        prefix_err.what() + ")");
        }
    }
}

// Parses and folds an expression that must evaluate to a plain number, such
// as "1.8" or "alpha_d(3)".
inline double parse_constant_expr(const std::string& text) {
    return detail::fold_constant(parse_func_expr(text),
                                 "'" + text + "'");
}

// ---------------------------------------------------------------------------
// Approximation-function specs:
//   power:ALPHA      psi(q) = q^-ALPHA           (ALPHA a constant expression)
//   family:N,C       the nested-log family member for the given dimension
//   custom:EXPR      any in-grammar expression in q
// ---------------------------------------------------------------------------
inline PsiSpec parse_psi_spec(const std::string& text, int d) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument(
            "Approximation-function spec '" + text +
            "' needs one of the forms power:ALPHA, family:N,C, custom:EXPR.");
    const std::string head = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    if (head == "power") {
        const double alpha = parse_constant_expr(rest);
        if (alpha < 0)
            throw std::invalid_argument("power:ALPHA needs ALPHA >= 0.");
        return PowerLawPsi{alpha};
    }
    if (head == "family") {
        // Split at the first top-level comma; the C part may itself contain
        // commas inside calls like scale(...) so track parentheses.
        int depth = 0;
        std::size_t split = std::string::npos;
        for (std::size_t i = 0; i < rest.size(); ++i) {
            if (rest[i] == '(') ++depth;
            if (rest[i] == ')') --depth;
            if (rest[i] == ',' && depth == 0) {
                split = i;
                break;
            }
        }
        if (split == std::string::npos)
            throw std::invalid_argument(
                "family:N,C needs two comma-separated values.");
        const double n_val = parse_constant_expr(rest.substr(0, split));
        if (std::abs(n_val - std::round(n_val)) > 1e-9)
            throw std::invalid_argument("family:N,C needs integer N.");
        const double C = parse_constant_expr(rest.substr(split + 1));
        return psi_NC(d, static_cast<int>(std::round(n_val)), C);
    }
    if (head == "custom") return CustomPsi{parse_func_expr(rest)};
    throw std::invalid_argument(
        "Unknown approximation-function form '" + head +
        "'; use power:ALPHA, family:N,C, or custom:EXPR.");
}

// ---------------------------------------------------------------------------
// Coordinate lists: comma-separated coordinates, each of the form
//   BASE [(+|-) RATIONAL]
// with BASE one of sqrtK (K a nonnegative integer), phi, pi, e, or a
// RATIONAL, and RATIONAL one of N, N.D (exact decimal), or P/Q. Examples:
// "sqrt2-1,sqrt3-1", "phi", "355/113", "0.25+1/3".
// ---------------------------------------------------------------------------

namespace detail {

inline BigRat parse_exact_rational(const std::string& s, std::size_t& i) {
    const std::size_t start = i;
    bool neg = false;
    if (i < s.size() && s[i] == '-') {
        neg = true;
        ++i;
    }
    auto digits = [&]() {
        const std::size_t from = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
            ++i;
        if (i == from)
            throw std::invalid_argument("Expected digits at position " +
                                        std::to_string(from) + " of '" + s +
                                        "'.");
        return s.substr(from, i - from);
    };
    const std::string whole = digits();
    BigRat r;
    if (i < s.size() && s[i] == '.') {
        ++i;
        const std::string frac = digits();
        BigInt den = 1;
        for (std::size_t k = 0; k < frac.size(); ++k) den *= 10;
        r = BigRat(BigInt(whole) * den + BigInt(frac), den);
    } else if (i < s.size() && s[i] == '/') {
        ++i;
        const std::string den = digits();
        if (BigInt(den) == 0)
            throw std::invalid_argument("Zero denominator at position " +
                                        std::to_string(start) + " of '" + s +
                                        "'.");
        r = BigRat(BigInt(whole), BigInt(den));
    } else {
        r = BigRat(BigInt(whole));
    }
    return neg ? BigRat(-r) : r;
}

inline RealInterval parse_coordinate(std::string coord, unsigned bits) {
    // Whitespace is insignificant everywhere in a coordinate.
    std::string s;
    for (char c : coord)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw std::invalid_argument("Empty coordinate.");

    std::size_t i = 0;
    RealInterval base = RealInterval::point(BigRat(0));
    if (std::isalpha(static_cast<unsigned char>(s[0]))) {
        std::size_t j = 0;
        while (j < s.size() &&
               std::isalnum(static_cast<unsigned char>(s[j])))
            ++j;
        const std::string word = s.substr(0, j);
        i = j;
        if (word == "phi")
            base = RealInterval::golden_ratio(bits);
        else if (word == "pi")
            base = RealInterval::pi(bits);
        else if (word == "e")
            base = RealInterval::e(bits);
        else if (word.rfind("sqrt", 0) == 0 && word.size() > 4) {
            const std::string n = word.substr(4);
            for (char c : n)
                if (!std::isdigit(static_cast<unsigned char>(c)))
                    throw std::invalid_argument(
                        "sqrt needs an integer radicand, got '" + word + "'.");
            base = RealInterval::sqrt_of(BigInt(n), bits);
        } else {
            throw std::invalid_argument(
                "Unknown coordinate name '" + word +
                "'; use sqrtK, phi, pi, e, or a rational.");
        }
    } else {
        base = RealInterval::point(parse_exact_rational(s, i));
    }

    if (i < s.size()) {
        const char sign = s[i];
        if (sign != '+' && sign != '-')
            throw std::invalid_argument("Expected '+' or '-' at position " +
                                        std::to_string(i) + " of '" + s +
                                        "'.");
        ++i;
        const BigRat offset = parse_exact_rational(s, i);
        base = (sign == '+') ? base + offset : base - offset;
    }
    if (i != s.size())
        throw std::invalid_argument("Unexpected trailing input at position " +
                                    std::to_string(i) + " of '" + s + "'.");
    return base;
}

}  // namespace detail

inline std::vector<RealInterval> parse_point_spec(const std::string& text,
                                                  unsigned bits) {
    std::vector<RealInterval> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = text.find(',', start);
        const std::string coord =
            text.substr(start, comma == std::string::npos ? std::string::npos
                                                          : comma - start);
        out.push_back(detail::parse_coordinate(coord, bits));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace dioph
