#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fsdim/checks.hpp"
#include "fsdim/gambler.hpp"

using namespace fsdim;

namespace {

// single state, stakes everything on 0
GamblerSpec all_on_zero(int lookahead = 0) {
    GamblerSpec g;
    g.lookahead = lookahead;
    g.state_names = {"s0"};
    g.resize_bets();
    for (uint64_t w = 0; w < g.window_count(); ++w)
        g.slot(0, w) = GamblerSpec::Bet{Rat(1), 0, 0};
    return g;
}

GamblerSpec fair_gambler(int lookahead = 0) {
    GamblerSpec g;
    g.lookahead = lookahead;
    g.state_names = {"s0"};
    g.resize_bets();
    for (uint64_t w = 0; w < g.window_count(); ++w)
        g.slot(0, w) = GamblerSpec::Bet{Rat(1, 2), 0, 0};
    return g;
}

// c=1; bets everything on the window's last bit
GamblerSpec lookahead_follower() {
    GamblerSpec g;
    g.lookahead = 1;
    g.state_names = {"s0"};
    g.resize_bets();
    for (uint64_t w = 0; w < 4; ++w)
        g.slot(0, w) = GamblerSpec::Bet{(w & 1) ? Rat(0) : Rat(1), 0, 0};
    return g;
}

} // namespace

TEST_CASE("validate_gambler") {
    CHECK(validate_gambler(fair_gambler()).ok);

    GamblerSpec bad = fair_gambler();
    bad.slot(0, 1)->stake0 = Rat(3, 2);
    auto v = validate_gambler(bad);
    CHECK(!v.ok);
    CHECK(v.error.find("stake out of range") != std::string::npos);

    GamblerSpec missing = fair_gambler(1);
    missing.slot(0, 3).reset();
    auto v2 = validate_gambler(missing);
    CHECK(!v2.ok);
    CHECK(v2.error.find("missing transition") != std::string::npos);
}

TEST_CASE("run_gambler: extreme strategies") {
    size_t n = 12;
    BitString zeros = BitString::zeros(n);
    auto traj = run_gambler(all_on_zero(), zeros, zeros, n);
    BigUint want(1);
    want.shl(n);
    CHECK(traj.values[n].to_rat() == Rat(want, BigUint(1)));
    CHECK(traj.log2_values[n] == doctest::Approx(double(n)).epsilon(1e-12));

    BitString a = generate(SequenceSpec::bernoulli(1, 2, 3), n);
    auto fair = run_gambler(fair_gambler(), a, a, n);
    for (size_t i = 0; i <= n; ++i) {
        CHECK(fair.values[i].to_rat() == Rat(1));
        CHECK(fair.log2_values[i] == 0.0);
    }

    // losing everything on the first round is absorbing
    auto broke = run_gambler(all_on_zero(), BitString::from_string("1000"),
                             BitString::zeros(4), 4);
    for (size_t i = 1; i <= 4; ++i) {
        CHECK(broke.values[i].to_rat() == Rat());
        CHECK(std::isinf(broke.log2_values[i]));
    }
}

TEST_CASE("run_gambler: shift example wins every round") {
    size_t n = 64;
    BitString a = generate(SequenceSpec::bernoulli(1, 2, 1), n + 1);
    BitString b = shift_oracle(a, 1, 0);
    auto traj = run_gambler(lookahead_follower(), a, b, n);
    for (size_t i = 0; i <= n; ++i)
        CHECK(traj.log2_values[i] == double(i));
}

TEST_CASE("run_gambler: oracle length precondition") {
    BitString a = BitString::zeros(8);
    CHECK_THROWS(run_gambler(lookahead_follower(), a, BitString::zeros(8), 8));
    CHECK_NOTHROW(run_gambler(lookahead_follower(), a, BitString::zeros(9), 8));
}

TEST_CASE("run_gambler: exact window then log domain agree") {
    Rng rng(5);
    GamblerSpec g = checkgen::random_gambler(rng, 3, 1);
    BitString a = rng.bits(64);
    BitString b = rng.bits(65);
    auto full = run_gambler(g, a, b, 64, 4096);
    auto split = run_gambler(g, a, b, 64, 16);
    CHECK(split.values.size() == 17);
    for (size_t i = 0; i <= 64; ++i) {
        if (std::isinf(full.log2_values[i])) {
            CHECK(std::isinf(split.log2_values[i]));
        } else {
            CHECK(split.log2_values[i] ==
                  doctest::Approx(full.log2_values[i]).epsilon(1e-10));
        }
    }
    for (size_t i = 0; i <= 16; ++i)
        CHECK(exact_eq(split.values[i], full.values[i]));
}

TEST_CASE("exponent_estimates") {
    size_t n = 16;
    BitString zeros = BitString::zeros(n);
    auto traj = run_gambler(all_on_zero(), zeros, zeros, n);
    auto est = exponent_estimates(traj, 1);
    CHECK(est.limsup_est == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(est.liminf_est == doctest::Approx(1.0).epsilon(1e-12));

    auto fair = run_gambler(fair_gambler(), zeros, zeros, n);
    auto est2 = exponent_estimates(fair, 1);
    CHECK(est2.limsup_est == 0.0);
    CHECK(est2.liminf_est == 0.0);

    auto broke = run_gambler(all_on_zero(), BitString::from_string("1111"),
                             BitString::zeros(4), 4);
    auto est3 = exponent_estimates(broke, 1);
    CHECK(std::isinf(est3.limsup_est));
    CHECK(est3.limsup_est < 0);
    CHECK(std::isinf(est3.liminf_est));

    CHECK_THROWS(exponent_estimates(fair, 99));
}

TEST_CASE("sgale_values") {
    size_t n = 16;
    BitString zeros = BitString::zeros(n);
    auto winning = run_gambler(all_on_zero(), zeros, zeros, n);

    auto s1 = sgale_values(winning, Rat(1));
    for (size_t i = 0; i <= n; ++i)
        CHECK(s1.values[i] == winning.log2_values[i]);
    CHECK(s1.unbounded);

    auto s0 = sgale_values(winning, Rat(0));
    for (size_t i = 0; i <= n; ++i)
        CHECK(s0.values[i] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(!s0.unbounded);
    CHECK(!s0.tends_to_infinity);

    auto fair = run_gambler(fair_gambler(), zeros, zeros, n);
    auto sh = sgale_values(fair, Rat(1, 2));
    for (size_t i = 0; i <= n; ++i)
        CHECK(sh.values[i] == doctest::Approx(-0.5 * double(i)).epsilon(1e-12));
    CHECK(!sh.unbounded);

    // linear shift property: value_i(s) - value_i(s') = (s - s') * i
    Rng rng(9);
    GamblerSpec g = checkgen::random_gambler(rng, 2, 0);
    auto traj = run_gambler(g, rng.bits(20), rng.bits(20), 20);
    auto v34 = sgale_values(traj, Rat(3, 4));
    auto v14 = sgale_values(traj, Rat(1, 4));
    for (size_t i = 0; i <= 20; ++i) {
        if (std::isinf(traj.log2_values[i])) continue;
        CHECK(v34.values[i] - v14.values[i] ==
              doctest::Approx(0.5 * double(i)).epsilon(1e-9));
    }
}

TEST_CASE("martingale_check: fairness holds by construction") {
    Rng rng(17);
    BitString b = rng.bits(16);
    CHECK(martingale_check(fair_gambler(), b, 6).ok);
    CHECK(martingale_check(all_on_zero(), b, 4).ok);
    for (int trial = 0; trial < 10; ++trial) {
        GamblerSpec g = checkgen::random_gambler(rng, 3);
        BitString oracle = rng.bits(16);
        auto res = martingale_check(g, oracle, 6);
        CHECK(res.ok);
    }
    CHECK_THROWS(martingale_check(fair_gambler(1), BitString::zeros(3), 6));
}

TEST_CASE("combine_accounts: degenerate combinations") {
    Rng rng(23);
    GamblerSpec g = checkgen::random_gambler(rng, 2, 0);
    BitString a = rng.bits(10), b = rng.bits(10);

    for (uint64_t period : {1, 2, 3}) {
        auto single = combine_accounts({g}, period);
        auto t1 = run_gambler(single, a, b, 10);
        auto t0 = run_gambler(g, a, b, 10);
        for (size_t i = 0; i <= 10; ++i)
            CHECK(exact_eq(t1.values[i], t0.values[i]));

        auto twin = combine_accounts({g, g}, period);
        auto t2 = run_gambler(twin, a, b, 10);
        for (size_t i = 0; i <= 10; ++i)
            CHECK(exact_eq(t2.values[i], t0.values[i]));
    }

    CHECK_THROWS(combine_accounts({}, 2));
    CHECK_THROWS(combine_accounts({g}, 0));
    GamblerSpec other = checkgen::random_gambler(rng, 2, 1);
    CHECK_THROWS(combine_accounts({g, other}, 2));
    // tiny cap trips on a two-gambler combination
    GamblerSpec h = checkgen::random_gambler(rng, 2, 0);
    CHECK_THROWS_AS(combine_accounts({g, h}, 3, 2), std::runtime_error);
}

TEST_CASE("combine_accounts: matches the reference simulation exactly") {
    auto rep = check_combiner_suite(20, 321);
    CHECK(rep.ok());
}

TEST_CASE("combine_accounts: longer run with three distinct gamblers") {
    Rng rng(4242);
    std::vector<GamblerSpec> gs;
    for (int j = 0; j < 3; ++j) gs.push_back(checkgen::random_gambler(rng, 3, 1));
    const uint64_t period = 3, n = 30;
    BitString a = rng.bits(n), b = rng.bits(n + 1);
    GamblerSpec combined = combine_accounts(gs, period);
    CHECK(validate_gambler(combined).ok);
    auto traj = run_gambler(combined, a, b, n);
    auto ref = simulate_multi_account(gs, a, b, n, period);
    for (uint64_t t = 0; t <= n; ++t)
        CHECK(exact_eq(traj.values[t], ref.total[t]));
}

TEST_CASE("capital never negative, zero absorbing") {
    Rng rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        GamblerSpec g = checkgen::random_gambler(rng, 3, 0);
        BitString a = rng.bits(24), b = rng.bits(24);
        auto traj = run_gambler(g, a, b, 24);
        bool seen_zero = false;
        for (size_t i = 0; i < traj.values.size(); ++i) {
            Rat v = traj.values[i].to_rat();
            CHECK(v >= Rat());
            if (seen_zero) CHECK(v == Rat());
            if (v == Rat()) seen_zero = true;
        }
    }
}
