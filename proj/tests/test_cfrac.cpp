#include <catch2/catch_amalgamated.hpp>

#include <dioph/cfrac.hpp>

#include <random>

using namespace dioph;

namespace {

ContinuedFraction from_ints(std::initializer_list<long long> quotients,
                            bool terminated = false) {
    ContinuedFraction cf;
    for (long long v : quotients) cf.a.emplace_back(v);
    cf.terminated = terminated;
    return cf;
}

std::vector<BigInt> quotients_of(const ContinuedFraction& cf) { return cf.a; }

}  // namespace

TEST_CASE("expand_rational matches hand-run Euclid") {
    auto cf = expand_rational(BigRat(355, 113));
    CHECK(quotients_of(cf) == std::vector<BigInt>{3, 7, 16});
    CHECK(cf.terminated);

    CHECK(quotients_of(expand_rational(BigRat(7))) == std::vector<BigInt>{7});
    CHECK(quotients_of(expand_rational(BigRat(3, 2))) == std::vector<BigInt>{1, 2});
    // Negative values take the floor on the first step.
    CHECK(quotients_of(expand_rational(BigRat(-7, 2))) == std::vector<BigInt>{-4, 2});
}

TEST_CASE("expand_rational round-trips through its convergents") {
    std::mt19937_64 rng(20240901);
    std::uniform_int_distribution<long long> num(-1000000000LL, 1000000000LL);
    std::uniform_int_distribution<long long> den(1, 1000000000LL);
    for (int trial = 0; trial < 300; ++trial) {
        BigRat r(num(rng), den(rng));
        auto cf = expand_rational(r);
        REQUIRE(cf.terminated);
        auto cv = convergents(cf);
        CHECK(cv.back().value() == r);
        // Canonical form: no trailing quotient of 1 (unless it is a0 itself).
        if (cf.size() > 1) CHECK(cf.a.back() >= 2);
    }
}

TEST_CASE("expand_real certifies quotients of classic irrationals") {
    auto golden = expand_real(RealInterval::golden_ratio(256), 6);
    CHECK(quotients_of(golden) == std::vector<BigInt>{1, 1, 1, 1, 1, 1});

    auto root2 = expand_real(RealInterval::sqrt_of(2, 256), 5);
    CHECK(quotients_of(root2) == std::vector<BigInt>{1, 2, 2, 2, 2});

    auto pi5 = expand_real(RealInterval::pi(256), 5);
    CHECK(quotients_of(pi5) == std::vector<BigInt>{3, 7, 15, 1, 292});

    auto e10 = expand_real(RealInterval::e(256), 10);
    CHECK(quotients_of(e10) == std::vector<BigInt>{2, 1, 2, 1, 1, 4, 1, 1, 6, 1});
}

TEST_CASE("expand_real terminates on exact rationals and guards precision") {
    auto cf = expand_real(RealInterval::point(BigRat(355, 113)), 50);
    CHECK(cf.terminated);
    CHECK(quotients_of(cf) == std::vector<BigInt>{3, 7, 16});

    // 16 bits cannot certify 40 quotients of the golden ratio.
    CHECK_THROWS_AS(expand_real(RealInterval::golden_ratio(16), 40),
                    precision_exhausted);
}

TEST_CASE("convergents follow the three-term recursions") {
    auto cv = convergents(from_ints({3, 7, 15, 1}));
    REQUIRE(cv.size() == 4);
    CHECK(cv[0].p == 3);   CHECK(cv[0].q == 1);
    CHECK(cv[1].p == 22);  CHECK(cv[1].q == 7);
    CHECK(cv[2].p == 333); CHECK(cv[2].q == 106);
    CHECK(cv[3].p == 355); CHECK(cv[3].q == 113);

    auto fib = convergents(from_ints({1, 1, 1, 1, 1}));
    std::vector<BigInt> qs;
    for (const auto& c : fib) qs.push_back(c.q);
    CHECK(qs == std::vector<BigInt>{1, 1, 2, 3, 5});

    auto single = convergents(from_ints({7}));
    REQUIRE(single.size() == 1);
    CHECK(single[0].p == 7);
    CHECK(single[0].q == 1);
}

TEST_CASE("determinant identity and denominator growth on random expansions") {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> quot(1, 9);
    for (int trial = 0; trial < 50; ++trial) {
        ContinuedFraction cf;
        cf.a.emplace_back(quot(rng));
        for (int n = 1; n < 40; ++n) cf.a.emplace_back(quot(rng));
        auto cv = convergents(cf);
        BigInt fib_prev = 0, fib = 1;  // Fibonacci lower bound on q_n
        for (std::size_t n = 1; n < cv.size(); ++n) {
            BigInt det = cv[n].p * cv[n - 1].q - cv[n - 1].p * cv[n].q;
            CHECK(det == ((n % 2 == 1) ? 1 : -1));
            CHECK(cv[n].q > cv[n - 1].q - (n == 1 ? 1 : 0));  // strict for n >= 2
            BigInt next = fib + fib_prev;
            fib_prev = fib;
            fib = next;
            CHECK(cv[n].q >= fib_prev);
        }
    }
}

TEST_CASE("error brackets contain the true error") {
    // pi at n = 1, the 22/7 approximation: |pi - 22/7| ~ 1.264e-3.
    auto pi_cf = expand_real(RealInterval::pi(512), 8);
    auto bracket = convergent_error_bracket(pi_cf, 1);
    auto err = RealInterval::pi(512).abs_distance(BigRat(22, 7));
    CHECK(bracket.first <= err.lo());
    CHECK(err.hi() <= bracket.second);
    CHECK(std::abs(err.to_double() - 1.2645e-3) < 1e-6);

    // Golden ratio at n = 4: q_4 = 5, q_5 = 8 give [1/65, 1/40].
    auto g = expand_real(RealInterval::golden_ratio(512), 10);
    auto gb = convergent_error_bracket(g, 4);
    CHECK(gb.first == BigRat(1, 65));
    CHECK(gb.second == BigRat(1, 40));

    // Terminated expansions: degenerate bracket at the last index, exact
    // value one step earlier.
    auto r = expand_rational(BigRat(355, 113));
    auto last = convergent_error_bracket(r, 2);
    CHECK(last.first == 0);
    CHECK(last.second == 0);
    auto prev = convergent_error_bracket(r, 1);
    CHECK(prev.first == prev.second);
    CHECK(prev.first == BigRat(1, 791));  // |355/113 - 22/7|
}

TEST_CASE("denominators_to_cf hits the worked example") {
    auto cf = denominators_to_cf({1, 2, 4, 8, 16});
    CHECK(quotients_of(cf) == std::vector<BigInt>{0, 2, 1, 2, 1});
    auto cv = convergents(cf);
    std::vector<BigInt> qs;
    for (const auto& c : cv) qs.push_back(c.q);
    CHECK(qs == std::vector<BigInt>{1, 2, 3, 8, 11});

    // First step always attains the target exactly.
    auto small = denominators_to_cf({1, 2, 4});
    CHECK(convergents(small)[1].q == 2);
}

TEST_CASE("denominators_to_cf sandwich on doubling sequences") {
    // Powers of two.
    std::vector<BigInt> pow2{1};
    for (int n = 1; n <= 20; ++n) pow2.push_back(BigInt(1) << n);
    auto cf = denominators_to_cf(pow2);
    auto cv = convergents(cf);
    for (std::size_t n = 0; n < cv.size(); ++n) {
        CHECK(2 * cv[n].q >= pow2[n]);
        CHECK(cv[n].q <= pow2[n]);
    }

    // Random doubling sequences.
    std::mt19937_64 rng(4242);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<BigInt> t{1};
        std::uniform_int_distribution<int> len(2, 24);
        const int m = len(rng);
        for (int n = 0; n < m; ++n) {
            BigInt prev = t.back();
            BigInt slack = prev > 1 ? BigInt(rng() % 1000) * prev / 1000 : 0;
            t.push_back(2 * prev + slack);
        }
        auto cfr = denominators_to_cf(t);
        auto cvr = convergents(cfr);
        REQUIRE(cvr.size() == t.size());
        for (std::size_t n = 0; n < cvr.size(); ++n) {
            CHECK(2 * cvr[n].q >= t[n]);
            CHECK(cvr[n].q <= t[n]);
        }
    }
}

TEST_CASE("denominators_to_cf rejects malformed targets") {
    CHECK_THROWS_AS(denominators_to_cf({2, 4}), invalid_sequence);
    CHECK_THROWS_AS(denominators_to_cf({1, 2, 3}), invalid_sequence);
}

TEST_CASE("best_approx_reduce finds a dominating convergent") {
    auto pi_cf = expand_real(RealInterval::pi(512), 12);

    auto own = best_approx_reduce(pi_cf, BigRat(22, 7));
    REQUIRE(own.found);
    CHECK(own.index == 1);

    auto dec = best_approx_reduce(pi_cf, BigRat(314, 100));
    REQUIRE(dec.found);
    CHECK(dec.index <= 1);

    auto g = expand_real(RealInterval::golden_ratio(512), 12);
    auto four_thirds = best_approx_reduce(g, BigRat(4, 3));
    REQUIRE(four_thirds.found);
    CHECK(four_thirds.index <= 3);

    // Constants set absurdly high produce a counterexample report, not a lie.
    auto impossible = best_approx_reduce(pi_cf, BigRat(22, 7), 1000.0, 0.125);
    CHECK_FALSE(impossible.found);
}
