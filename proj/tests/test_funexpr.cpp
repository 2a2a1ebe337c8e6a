#include <catch2/catch_amalgamated.hpp>

#include <dioph/funexpr.hpp>

#include <cmath>

using namespace dioph;

namespace {
// Relative closeness with an absolute floor, for values spanning many
// orders of magnitude.
bool close(double a, double b, double rel) {
    return std::abs(a - b) <= rel * (1.0 + std::max(std::abs(a), std::abs(b)));
}
}  // namespace

TEST_CASE("arithmetic nodes evaluate correctly in double and wide float") {
    const FuncExpr x = FuncExpr::arg();
    const FuncExpr e1 = (x + FuncExpr::constant(2.0)) * x -
                        FuncExpr::constant(5.0) / x;
    CHECK(e1(2.0) == Catch::Approx(8.0 - 2.5).epsilon(1e-15));

    const FuncExpr e2 = FuncExpr::pow(x, -2.0);
    CHECK(e2(-3.0) == Catch::Approx(1.0 / 9.0).epsilon(1e-15));
    CHECK_THROWS_AS(FuncExpr::pow(x, 0.5)(-1.0), std::domain_error);
    CHECK_THROWS_AS((FuncExpr::constant(1.0) / (x - x))(3.0),
                    std::domain_error);

    // Constants are stored as doubles, so wide evaluation reproduces the
    // double-rounded coefficient; agreement is to double precision only.
    const BigFloat wide = f_NC(-1, 0.3).eval<BigFloat>(BigFloat(10));
    CHECK(abs(wide - BigFloat("0.003")) < BigFloat("1e-18"));
}

TEST_CASE("log construction collapses exp/pow/mul and keeps huge ranges finite") {
    const FuncExpr x = FuncExpr::arg();
    CHECK(FuncExpr::log(FuncExpr::exp(x)).to_string() == "x");
    CHECK(FuncExpr::composed(FuncExpr::log(x), FuncExpr::exp(x)).to_string() ==
          "x");

    // Without the pow collapse this would be log(1e-600) = log(0) in double.
    const FuncExpr lp = FuncExpr::log(FuncExpr::pow(x, -2.0));
    CHECK(lp(1e300) == Catch::Approx(-1381.5510557964274).epsilon(1e-14));

    const FuncExpr lm = FuncExpr::log(x * x);
    CHECK(lm(1e200) == Catch::Approx(2 * std::log(1e200)).epsilon(1e-14));
}

TEST_CASE("nested-log family members match frozen values") {
    // Frozen from 40-digit arithmetic on the defining sum.
    CHECK(f_NC(-1, 0.3)(10.0) == Catch::Approx(0.003).epsilon(1e-15));
    CHECK(f_NC(0, 0.0)(std::exp(1.0)) ==
          Catch::Approx(0.033833820809153173).epsilon(1e-14));
    CHECK(f_NC(0, 0.2)(100.0) ==
          Catch::Approx(2.5943058485058070e-5).epsilon(1e-14));
    CHECK(f_NC(1, 0.3)(1000.0) ==
          Catch::Approx(2.5692244322276139e-7).epsilon(1e-14));
    CHECK(f_NC(2, 0.5)(1e6) ==
          Catch::Approx(2.5190745107099951e-13).epsilon(1e-14));

    CHECK_THROWS_AS(f_NC(-2, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(f_NC(0, -0.1), std::invalid_argument);
}

TEST_CASE("family members satisfy the one-level nesting identity") {
    for (int N : {0, 1, 2}) {
        for (double C : {0.0, 0.2, 1.0}) {
            const FuncExpr deep = f_NC(N, C);
            const FuncExpr shallow = f_NC(N - 1, C);
            for (double x : {50.0, 300.0, 2e4, 1e8}) {
                const double lhs = deep(x);
                const double rhs = (0.25 + shallow(std::log(x))) / (x * x);
                CHECK(close(lhs, rhs, 1e-14));
            }
        }
    }
}

TEST_CASE("domain guards track the nesting depth") {
    const double g0 = f_NC(0, 0.2).t_domain();
    CHECK(g0 > 1.0);
    CHECK(g0 < 1.5);
    const double g1 = f_NC(1, 0.2).t_domain();
    CHECK(g1 >= std::exp(1.0));
    CHECK(g1 < 6.0);
    const double g2 = f_NC(2, 0.2).t_domain();
    CHECK(g2 >= std::exp(std::exp(1.0)));
    CHECK(g2 < 40.0);
    const double g3 = f_NC(3, 0.2).t_domain();
    CHECK(g3 >= 3.8e6);
    CHECK(g3 < 1e7);
    // One more level of nesting exceeds double range entirely.
    CHECK(std::isinf(f_NC(4, 0.2).t_domain()));

    CHECK_NOTHROW(f_NC(2, 0.2)(g2 * 1.01));
    // x = 1 sits on the log singularity, below the guard.
    CHECK_THROWS_AS(f_NC(0, 0.2)(1.0), std::domain_error);
    CHECK_THROWS_AS(f_NC(0, 0.2)(-2.0), std::domain_error);
}

TEST_CASE("scale and log_transform act pointwise and tag their results") {
    const FuncExpr base = f_NC(0, 0.2);
    const FuncExpr scaled = scale(base, 2.5);
    REQUIRE(scaled.scaled_of() != nullptr);
    CHECK(scaled.scale_lambda() == Catch::Approx(2.5));
    for (double x : {10.0, 123.0, 5e5})
        CHECK(close(scaled(x), 2.5 * 2.5 * base(2.5 * x), 1e-14));

    // On a family member the log transform lands one level deeper, exactly.
    const FuncExpr shifted = log_transform(base);
    REQUIRE(shifted.family_tag().has_value());
    CHECK(shifted.family_tag()->N == 1);
    CHECK(shifted.family_tag()->C == Catch::Approx(0.2));

    // On an untagged tree it is applied literally and tagged as a transform.
    const FuncExpr x = FuncExpr::arg();
    const FuncExpr plain = FuncExpr::constant(0.3) * FuncExpr::pow(x, -2.0);
    const FuncExpr lifted = log_transform(plain);
    REQUIRE(lifted.log_transform_of() != nullptr);
    for (double t : {20.0, 400.0, 1e6}) {
        const double expect = (0.25 + 0.3 / std::pow(std::log(t), 2)) / (t * t);
        CHECK(close(lifted(t), expect, 1e-14));
    }

    CHECK_THROWS_AS(scale(base, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(scale(base, -1.0), std::invalid_argument);
}

TEST_CASE("power-law specifications derive constant forms") {
    const DerivedForms forms = derive_forms(PowerLawPsi{2.0}, 3);
    CHECK(forms.big_psi(7.0) == Catch::Approx(14.0).epsilon(1e-15));
    const double a3 = alpha_d(3);
    const double expect_phi = a3 - 2.0;
    CHECK(forms.phi(123.0) == Catch::Approx(expect_phi).epsilon(1e-14));
    const double expect_f = 2.0 / (3.0 * gamma_d(3)) * expect_phi;
    CHECK(forms.f_psi(5.0) == Catch::Approx(expect_f).epsilon(1e-14));
    // At the critical exponent everything collapses to zero.
    CHECK(derive_forms(PowerLawPsi{a3}, 3).f_psi(9.0) ==
          Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("family specifications match frozen exponent sums") {
    CHECK(c8_constant(3) == Catch::Approx(0.025222202738374019).epsilon(1e-14));
    CHECK(c8_constant(4) == Catch::Approx(0.049638567571420479).epsilon(1e-14));

    const auto p312 = std::get<FamilyNCPsi>(psi_NC(3, 1, 2.0));
    CHECK(big_psi_of(PsiSpec{p312})(100.0) ==
          Catch::Approx(188.75029736118819).epsilon(1e-13));
    const auto p32h = std::get<FamilyNCPsi>(psi_NC(3, 2, 0.5));
    CHECK(big_psi_of(PsiSpec{p32h})(1000.0) ==
          Catch::Approx(1889.2822388684239).epsilon(1e-13));
    const auto p421 = std::get<FamilyNCPsi>(psi_NC(4, 2, 1.0));
    CHECK(big_psi_of(PsiSpec{p421})(50.0) ==
          Catch::Approx(87.488930439798971).epsilon(1e-13));

    CHECK_THROWS_AS(psi_NC(2, 1, 1.0), unsupported_dimension);
    CHECK_THROWS_AS(psi_NC(3, 0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(psi_NC(3, 1, -0.5), std::invalid_argument);
}

TEST_CASE("derived f_psi of a family member reduces exactly to a rescaled family member") {
    // The reduction under test: for psi_{N,C} in dimension d,
    //   f_psi(x) = log^2(g) f_{N-2, C/4}(x log g),  g = gamma_d.
    // Check it against the defining formula (2/(d g)) Phi(g^x) built from
    // the symbolic Psi, over a spread of dimensions, depths, and levels.
    for (int d : {3, 4, 5}) {
        const double g = gamma_d(d);
        const double a = alpha_d(d);
        for (int N : {1, 2, 3}) {
            for (double C : {0.0, 0.5, 1.0, 2.0}) {
                const PsiSpec psi = psi_NC(d, N, C);
                const DerivedForms forms = derive_forms(psi, d);
                REQUIRE(forms.f_psi.scaled_of() != nullptr);
                CHECK(forms.f_psi.scale_lambda() ==
                      Catch::Approx(std::log(g)).epsilon(1e-14));
                const auto& inner_tag = forms.f_psi.scaled_of()->family_tag();
                REQUIRE(inner_tag.has_value());
                CHECK(inner_tag->N == N - 2);
                CHECK(inner_tag->C == Catch::Approx(C / 4.0));

                for (double x : {25.0, 40.0, 60.0}) {
                    const double b = std::pow(g, x);
                    const double defn =
                        2.0 / (d * g) * (a - forms.big_psi(b) / b);
                    CHECK(close(forms.f_psi(x), defn, 1e-10));
                }
            }
        }
    }

    // Spot values frozen from 40-digit arithmetic.
    CHECK(derive_forms(psi_NC(3, 2, 1.0), 3).f_psi(25.0) ==
          Catch::Approx(5.3005418095165276e-4).epsilon(1e-12));
    CHECK(derive_forms(psi_NC(4, 3, 2.0), 4).f_psi(40.0) ==
          Catch::Approx(2.5466608274049014e-4).epsilon(1e-12));

    // Depth one lands on C' / x^2, which is scale invariant: the rescaling
    // must cancel identically.
    const DerivedForms one = derive_forms(psi_NC(3, 1, 2.0), 3);
    for (double x : {7.0, 31.0, 900.0})
        CHECK(one.f_psi(x) == Catch::Approx(2.0 / (4.0 * x * x)).epsilon(1e-13));

    CHECK_THROWS_AS(derive_forms(psi_NC(3, 1, 1.0), 4), std::invalid_argument);
    CHECK_THROWS_AS(derive_forms(PowerLawPsi{2.0}, 1), unsupported_dimension);
}

TEST_CASE("custom specifications run through the symbolic pipeline") {
    // psi(q) = q^(-2) written as an expression; Psi(b) must collapse to 2b
    // with no exp/log round trip, so huge b stays finite.
    const CustomPsi quad{FuncExpr::pow(FuncExpr::arg(), -2.0)};
    const FuncExpr psi_b = big_psi_of(PsiSpec{quad});
    CHECK(psi_b(1e250) == Catch::Approx(2e250).epsilon(1e-14));

    const DerivedForms forms = derive_forms(PsiSpec{quad}, 3);
    const double expect =
        2.0 / (3.0 * gamma_d(3)) * (alpha_d(3) - 2.0);
    CHECK(forms.f_psi(11.0) == Catch::Approx(expect).epsilon(1e-12));
    // Psi(b)/b is divided out symbolically, so f_psi stays evaluable far
    // past the x where gamma^x overflows double.
    CHECK(forms.f_psi(1e6) == Catch::Approx(expect).epsilon(1e-12));

    // A log-corrected exponent written out longhand:
    //   psi(q) = exp(-alpha_3 log q + 2 c8 log q / log^2(log q)).
    // Its derived f_psi collapses to (1/2) / x^2.
    const FuncExpr q = FuncExpr::arg();
    const FuncExpr lq = FuncExpr::log(q);
    const FuncExpr corr = FuncExpr::constant(2.0 * c8_constant(3)) * lq *
                          FuncExpr::pow(FuncExpr::log(lq), -2.0);
    const CustomPsi fancy{FuncExpr::exp(
        FuncExpr::constant(0.0) - FuncExpr::constant(alpha_d(3)) * lq + corr)};
    const FuncExpr fp = derive_forms(PsiSpec{fancy}, 3).f_psi;
    // The alpha terms cancel numerically rather than symbolically, so the
    // far-field error is absolute (~ulp of alpha), not relative.
    for (double x : {10.0, 100.0, 1e5}) {
        CHECK(fp(x) ==
              Catch::Approx(0.5 / (x * x)).epsilon(1e-10).margin(1e-15));
    }
}

TEST_CASE("sampled comparison classifies ordered, reversed, and mixed pairs") {
    CHECK(eventually_compare(f_NC(0, 0.2), f_NC(0, 0.3)) == CompareResult::LE);
    CHECK(eventually_compare(f_NC(0, 0.3), f_NC(0, 0.2)) == CompareResult::GE);
    CHECK(eventually_compare(f_NC(0, 0.2), f_NC(-1, 0.2)) == CompareResult::GE);
    CHECK(eventually_compare(f_NC(0, 0.2), f_NC(-1, 0.3)) == CompareResult::LE);
    // Ties count as both-compatible and resolve to LE.
    CHECK(eventually_compare(f_NC(1, 0.7), f_NC(1, 0.7)) == CompareResult::LE);

    // Sign change inside the window.
    const FuncExpr x = FuncExpr::arg();
    const FuncExpr crossing =
        (x - FuncExpr::constant(1e6)) * FuncExpr::pow(x, -3.0);
    CHECK(eventually_compare(crossing, FuncExpr::constant(0.0)) ==
          CompareResult::MIXED);
}

TEST_CASE("hypothesis validation reports monotonicity and slope") {
    const auto power = validate_psi_hypotheses(PowerLawPsi{2.0});
    CHECK(power.increasing);
    CHECK(power.max_slope == Catch::Approx(2.0).epsilon(1e-9));
    CHECK(power.violations == 0);

    const auto fam = validate_psi_hypotheses(psi_NC(3, 1, 2.0));
    CHECK(fam.increasing);
    CHECK(fam.max_slope > alpha_d(3));
    CHECK(fam.max_slope < 3.5);

    // An increasing psi gives a decreasing Psi: every sampled step violates.
    const auto bad = validate_psi_hypotheses(PsiSpec{CustomPsi{FuncExpr::arg()}});
    CHECK_FALSE(bad.increasing);
    CHECK(bad.violations > 0);
    CHECK(bad.max_slope < 0.0);
}
