#include <catch2/catch_amalgamated.hpp>

#include <dioph/dataprog.hpp>

#include <cmath>
#include <random>

using namespace dioph;

TEST_CASE("state sequence applies entries one coordinate at a time") {
    DataProgression prog;
    prog.d = 2;
    prog.entries = {{1.0, 1}, {2.0, 2}, {3.0, 1}, {4.0, 2}};
    const StateSequence seq = state_seq(prog);
    REQUIRE(seq.states.size() == 4);
    CHECK(seq.first_complete == 2);
    CHECK(seq.states[0][0] == 1.0);
    CHECK(std::isnan(seq.states[0][1]));
    CHECK(seq.states[1] == std::vector<double>{1.0, 2.0});
    CHECK(seq.states[2] == std::vector<double>{3.0, 2.0});
    CHECK(seq.states[3] == std::vector<double>{3.0, 4.0});

    DataProgression bad = prog;
    bad.entries[1].coord = 3;
    CHECK_THROWS_AS(state_seq(bad), std::invalid_argument);
    bad = prog;
    bad.d = 0;
    CHECK_THROWS_AS(state_seq(bad), std::invalid_argument);
}

TEST_CASE("periodic geometric cost series is exactly geometric") {
    const int d = 3, K = 20;
    const double gamma = 1.3, alpha = 2.0;
    const DataProgression prog = periodic_geometric(d, gamma, K);
    const CostSeries cs =
        cost_series(prog, Aggregate::Max, PowerLawPsi{alpha});

    REQUIRE(cs.first_k == d);
    REQUIRE(cs.values.size() == static_cast<std::size_t>(K - d));
    const double s = alpha - gamma - std::pow(gamma, -(d - 1));
    for (int k = cs.first_k; k <= K - 1; ++k)
        CHECK(cs.values[k - cs.first_k] ==
              Catch::Approx(s * std::pow(gamma, k)).epsilon(1e-12));
    CHECK(cs.tail == TailTrend::Rising);  // s > 0 here
    CHECK(cs.argmin_k == cs.first_k);

    CHECK_THROWS_AS(periodic_geometric(1, 1.3, 10), std::invalid_argument);
    CHECK_THROWS_AS(periodic_geometric(3, 1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(periodic_geometric(3, 1.3, 2), std::invalid_argument);
}

TEST_CASE("cost series skips aggregates below the target's domain guard") {
    // Family targets are undefined at nonpositive aggregates (the innermost
    // log); the series must start at the first k whose aggregate clears 0.
    DataProgression prog;
    prog.d = 3;
    prog.entries = {{-0.5, 1}, {-0.3, 2}, {-0.1, 3}, {1.5, 1},
                    {2.5, 2},  {4.0, 3},  {7.0, 1}};
    const PsiSpec psi = psi_NC(3, 1, 1.0);
    const CostSeries cs = cost_series(prog, Aggregate::Max, psi);
    // k = 3 has aggregate -0.1; the first defined term is k = 4 (max = 1.5).
    CHECK(cs.first_k == 4);
    REQUIRE(cs.values.size() == 3);
    const double v4 = big_psi_of(psi)(1.5) - (-0.3) - 2.5;
    CHECK(cs.values[0] == Catch::Approx(v4).epsilon(1e-12));
    for (double v : cs.values) CHECK(std::isfinite(v));
}

TEST_CASE("cost limit classification matches the sign of the coefficient") {
    CHECK(classify_periodic_geometric(3, 1.3, 2.0) == CostLimit::PosInfinity);
    CHECK(classify_periodic_geometric(3, 1.3, 1.8) == CostLimit::NegInfinity);
    // At the optimizing ratio the coefficient vanishes identically.
    CHECK(classify_periodic_geometric(3, gamma_d(3), alpha_d(3)) ==
          CostLimit::Zero);
    CHECK(classify_periodic_geometric(5, gamma_d(5), alpha_d(5)) ==
          CostLimit::Zero);

    // Trend of the realized cost series agrees with the classification.
    struct Case {
        double gamma, alpha;
        CostLimit expect;
        TailTrend trend;
    };
    for (const Case& c :
         {Case{1.3, 2.0, CostLimit::PosInfinity, TailTrend::Rising},
          Case{1.3, 1.8, CostLimit::NegInfinity, TailTrend::Falling},
          Case{gamma_d(3), alpha_d(3), CostLimit::Zero, TailTrend::Flat}}) {
        CHECK(classify_periodic_geometric(3, c.gamma, c.alpha) == c.expect);
        const CostSeries cs = cost_series(periodic_geometric(3, c.gamma, 60),
                                          Aggregate::Max,
                                          PowerLawPsi{c.alpha});
        CHECK(cs.tail == c.trend);
    }
}

TEST_CASE("adversary acceptance matches the boundary rule") {
    // max height, d = 2: accept iff b_i + A <= 2 max(b) - 1.
    const std::vector<double> b{0.0, 10.0};
    CHECK(adversary_step(HeightKind::Max, b, 19.0, 1));
    CHECK_FALSE(adversary_step(HeightKind::Max, b, 19.5, 1));
    CHECK_THROWS_AS(adversary_step(HeightKind::Max, b, -0.5, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(adversary_step(HeightKind::Max, b, 5.0, 3),
                    std::invalid_argument);

    // min height: would need b_i < min(b) - 1/2, which is impossible.
    CHECK_FALSE(adversary_step(HeightKind::Min, b, 5.0, 1));
    CHECK_FALSE(adversary_step(HeightKind::Min, b, 100.0, 1));

    // product height, d = 3: boundary at b_i + A = (2/3) sum(b) - 1.
    const std::vector<double> c{0.0, 5.0, 10.0};
    CHECK(adversary_step(HeightKind::Prod, c, 9.0, 1));
    CHECK_FALSE(adversary_step(HeightKind::Prod, c, 9.0001, 1));

    CHECK_THROWS_AS(adversary_step(HeightKind::Lcm, b, 5.0, 1),
                    std::domain_error);
}

TEST_CASE("accepted sum-aggregate moves drop variance by the closed form") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int d = 4;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> b(d);
        for (double& v : b) v = 30.0 * unif(rng);
        const int i = static_cast<int>(unif(rng) * d) % d;
        const double x = b[i];
        double sum = 0, mu;
        for (double v : b) sum += v;
        mu = sum / d;
        const double cap = (2.0 / d) * sum - 1.0 - x;
        if (!(cap > x)) continue;
        const double A = x + (cap - x) * unif(rng) + 1e-9;
        if (!adversary_step(HeightKind::Prod, b, A, i + 1)) continue;

        const double before = dioph::detail::population_variance(b);
        std::vector<double> after = b;
        after[i] = A;
        const double drop =
            before - dioph::detail::population_variance(after);
        const double closed =
            (A - x) * (2 * mu - (A + x) + (A - x) / d) / d;
        CHECK(drop == Catch::Approx(closed).margin(1e-9));
        CHECK(drop > 0.0);  // acceptance forces 2 mu - (A + x) >= 1
    }
}

TEST_CASE("reference plays terminate with max-raising steps inside the variance budget") {
    struct Combo {
        HeightKind kind;
        int d;
    };
    const Combo combos[] = {{HeightKind::Min, 2}, {HeightKind::Min, 3},
                            {HeightKind::Min, 5}, {HeightKind::Prod, 2},
                            {HeightKind::Prod, 3}, {HeightKind::Prod, 5},
                            {HeightKind::Max, 2}};
    for (const auto& combo : combos) {
        for (std::uint64_t seed = 1; seed <= 25; ++seed) {
            const AdversaryPlayReport rep =
                play_adversary_game(combo.kind, combo.d, seed);
            INFO("kind " << height_kind_name(combo.kind) << " d " << combo.d
                         << " seed " << seed);
            CHECK(rep.terminated);
            CHECK(rep.k_steps_within_budget);
            CHECK(rep.stepwise_ok);
            if (combo.kind == HeightKind::Min) CHECK(rep.steps == 0);
        }
    }
}

TEST_CASE("progressions extracted from points order events by error scale") {
    const std::vector<ContinuedFraction> coords{
        expand_rational(BigRat(1, 3)), expand_rational(BigRat(2, 5))};
    const DataProgression prog = progression_from_point(coords);
    CHECK(prog.d == 2);
    REQUIRE(prog.entries.size() == 3);
    // Warm-ups in coordinate order carry log q_1, then the single event of
    // the second coordinate (key q_1 q_2 = 10) carries log q_2.
    CHECK(prog.entries[0].coord == 1);
    CHECK(prog.entries[0].value == Catch::Approx(std::log(3.0)));
    CHECK(prog.entries[1].coord == 2);
    CHECK(prog.entries[1].value == Catch::Approx(std::log(2.0)));
    CHECK(prog.entries[2].coord == 2);
    CHECK(prog.entries[2].value == Catch::Approx(std::log(5.0)));

    // Irrational pair: events must arrive with nondecreasing keys, which on
    // the value side means each coordinate's values increase.
    const std::vector<ContinuedFraction> irr{
        expand_real(RealInterval::golden_ratio(256), 12),
        expand_real(RealInterval::sqrt_of(BigInt(2), 256), 12)};
    const DataProgression p2 = progression_from_point(irr);
    CHECK(p2.d == 2);
    std::vector<double> last(3, -1.0);
    int warmups = 0;
    for (std::size_t k = 0; k < p2.entries.size(); ++k) {
        const auto& e = p2.entries[k];
        if (k < 2) ++warmups;
        CHECK(e.value > last[e.coord]);
        last[e.coord] = e.value;
    }
    CHECK(warmups == 2);
}

TEST_CASE("points rebuilt from a progression replay its milestones") {
    const double g3 = std::cbrt(2.0);
    const DataProgression prog = periodic_geometric(3, g3, 12);
    const PointFromProgression rebuilt = point_from_progression(prog);
    REQUIRE(rebuilt.point.size() == 3);
    for (const BigRat& r : rebuilt.point) {
        CHECK(r > 0);
        CHECK(r < 1);
    }
    // The stated value is exactly the last convergent of the expansion.
    for (std::size_t i = 0; i < 3; ++i)
        CHECK(convergents(rebuilt.expansions[i]).back().value() ==
              rebuilt.point[i]);

    const DataProgression back = progression_from_point(rebuilt.expansions);

    // Compare per-coordinate value lists: same count, each within the
    // doubling-construction slack of log 2 (plus rounding).
    for (int i = 1; i <= 3; ++i) {
        std::vector<double> orig, rec;
        for (const auto& e : prog.entries)
            if (e.coord == i) orig.push_back(e.value);
        for (const auto& e : back.entries)
            if (e.coord == i) rec.push_back(e.value);
        REQUIRE(orig.size() == rec.size());
        for (std::size_t j = 0; j < orig.size(); ++j) {
            CHECK(rec[j] <= orig[j] + 1e-9);
            CHECK(rec[j] >= orig[j] - std::log(2.0) - 1e-9);
        }
    }
}
