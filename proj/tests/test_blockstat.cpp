#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fsdim/blockstat.hpp"
#include "fsdim/checks.hpp"

using namespace fsdim;

namespace {

JointBlockDist dist_from_pairs(size_t k,
                               const std::vector<std::pair<uint64_t, uint64_t>>& pairs) {
    JointBlockDist d;
    d.k = k;
    d.total = pairs.size();
    for (auto [a, b] : pairs) {
        ++d.counts[(a << k) | b];
        ++d.cond_counts[b];
    }
    return d;
}

} // namespace

TEST_CASE("joint_block_dist: aligned and sliding splits") {
    BitString a = BitString::from_string("0101");
    BitString b = BitString::from_string("1111");
    auto d = joint_block_dist(a, b, 2, 2, BlockMode::aligned);
    CHECK(d.total == 2);
    CHECK(d.counts.size() == 1);
    CHECK(d.count(BitString::from_string("01"), BitString::from_string("11")) == 2);

    auto s = joint_block_dist(BitString::from_string("0101"),
                              BitString::from_string("0101"), 2, 3,
                              BlockMode::sliding);
    CHECK(s.count(BitString::from_string("01"), BitString::from_string("01")) == 2);
    CHECK(s.count(BitString::from_string("10"), BitString::from_string("10")) == 1);

    auto z = joint_block_dist(BitString::from_string("000000"),
                              BitString::from_string("010101"), 2, 3,
                              BlockMode::aligned);
    CHECK(z.count(BitString::from_string("00"), BitString::from_string("01")) == 3);

    CHECK_THROWS(joint_block_dist(a, b, 2, 3, BlockMode::aligned));
    CHECK_THROWS(joint_block_dist(a, b, 0, 1, BlockMode::aligned));
}

TEST_CASE("cond_entropy: hand values") {
    // condition determines content
    auto same = dist_from_pairs(2, {{1, 1}, {2, 2}, {1, 1}});
    CHECK(cond_entropy(same) == 0.0);

    // uniform bit under either condition
    auto uni = dist_from_pairs(1, {{0, 0}, {1, 0}, {0, 1}, {1, 1}});
    CHECK(cond_entropy(uni) == doctest::Approx(1.0).epsilon(1e-12));

    // {(0,0):2,(1,0):1,(0,1):1} -> (3/4) H(2/3,1/3)
    auto mixed = dist_from_pairs(1, {{0, 0}, {0, 0}, {1, 0}, {0, 1}});
    double expected = 0.75 * (std::log2(3.0) - 2.0 / 3.0);
    CHECK(cond_entropy(mixed) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(cond_entropy(mixed) == doctest::Approx(0.688721875540867).epsilon(1e-12));
}

TEST_CASE("cond_entropy: invariant to pair order, bounded by k") {
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        size_t k = 1 + rng.below(3);
        std::vector<std::pair<uint64_t, uint64_t>> pairs;
        size_t n = 1 + rng.below(40);
        for (size_t i = 0; i < n; ++i)
            pairs.emplace_back(rng.below(uint64_t{1} << k),
                               rng.below(uint64_t{1} << k));
        double h = cond_entropy(dist_from_pairs(k, pairs));
        CHECK(h >= 0.0);
        CHECK(h <= static_cast<double>(k));
        // reversal leaves the counts unchanged
        std::vector<std::pair<uint64_t, uint64_t>> rev(pairs.rbegin(), pairs.rend());
        CHECK(cond_entropy(dist_from_pairs(k, rev)) == h);
    }
}

TEST_CASE("entropy_profile") {
    BitString a = generate(SequenceSpec::periodic(BitString::from_string("01")), 16);
    BitString zeros = BitString::zeros(16);

    auto same = entropy_profile(a, a, 2, {1, 2, 4}, BlockMode::aligned);
    for (auto [n, h] : same.points) CHECK(h == 0.0);

    auto p = entropy_profile(a, zeros, 1, {2, 4}, BlockMode::aligned);
    REQUIRE(p.points.size() == 2);
    CHECK(p.points[0].second == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.points[1].second == doctest::Approx(1.0).epsilon(1e-12));

    BitString z30 = BitString::zeros(30);
    auto q = entropy_profile(z30, z30, 3, {10}, BlockMode::aligned);
    CHECK(q.points[0].second == 0.0);

    CHECK_THROWS(entropy_profile(a, zeros, 1, {4, 2}, BlockMode::aligned));
    CHECK_THROWS(entropy_profile(a, zeros, 1, {}, BlockMode::aligned));
}

TEST_CASE("dim_estimate_entropy: self-condition is exactly zero") {
    BitString a = generate(SequenceSpec::champernowne(), 1 << 10);
    auto est = dim_estimate_entropy(a, a, 4, 256, 16, BlockMode::aligned);
    CHECK(est.dim_est == 0.0);
    CHECK(est.Dim_est == 0.0);
    for (const auto& [k, pk] : est.per_k) {
        CHECK(pk.inf == 0.0);
        CHECK(pk.sup == 0.0);
    }
}

TEST_CASE("dim_estimate_entropy: champernowne vs zeros, oracle-frozen value") {
    // fixture from tests/oracle/entropy_oracle.py (independent Python
    // counting script): dim_est = 0.949757982781 at k_max=4, N_max=16384,
    // burn_in=256
    BitString a = generate(SequenceSpec::champernowne(), 1 << 16);
    BitString zeros = BitString::zeros(1 << 16);
    auto est = dim_estimate_entropy(a, zeros, 4, 16384, 256, BlockMode::aligned);
    CHECK(est.dim_est >= 0.949757);
    CHECK(est.dim_est == doctest::Approx(0.949757982781).epsilon(1e-6));
    CHECK(est.dim_est <= est.Dim_est);
}

TEST_CASE("dim_estimate_entropy: shift example strong dimension") {
    // beta carries every bit of alpha one step later, so each content
    // block has at most one unknown bit given its condition block
    BitString a = generate(SequenceSpec::bernoulli(1, 2, 1), 1 << 14);
    BitString b = shift_oracle(a, 1, 0);
    auto est = dim_estimate_entropy(a, b, 8, (1 << 14) / 8, 64, BlockMode::aligned);
    CHECK(est.Dim_est <= 0.25);
    for (const auto& [k, pk] : est.per_k)
        CHECK(pk.sup <= 1.0 / static_cast<double>(k) + 1e-9);
    CHECK(est.dim_est <= est.Dim_est);
}

TEST_CASE("dim_estimate_entropy: argument validation") {
    BitString a = BitString::zeros(64);
    CHECK_THROWS(dim_estimate_entropy(a, a, 2, 16, 16, BlockMode::aligned));
    CHECK_THROWS(dim_estimate_entropy(a, a, 2, 64, 4, BlockMode::aligned));
}

TEST_CASE("check_doubling: trivial and random cases") {
    BitString z = BitString::zeros(64);
    auto c = check_doubling(z, z, 2, 4);
    CHECK(c.lhs == 0.0);
    CHECK(c.rhs == 0.0);
    CHECK(c.holds);

    BitString a = generate(SequenceSpec::champernowne(), 64);
    auto c2 = check_doubling(a, a, 2, 4);
    CHECK(c2.holds);

    auto rep = check_doubling_suite(60, 2024);
    CHECK(rep.ok());
    CHECK(rep.cases == 60);
}

TEST_CASE("mixture_bound_check: k=1 collapses, random cases hold") {
    BitString a = generate(SequenceSpec::bernoulli(1, 2, 5), 40);
    BitString b = generate(SequenceSpec::bernoulli(1, 2, 6), 40);
    auto c1 = mixture_bound_check(a, b, 1, 30);
    CHECK(c1.h_sliding == doctest::Approx(c1.avg_offsets).epsilon(1e-12));
    CHECK(c1.holds);

    auto cz = mixture_bound_check(BitString::zeros(64), BitString::zeros(64), 4, 8);
    CHECK(cz.h_sliding == 0.0);
    CHECK(cz.avg_offsets == 0.0);
    CHECK(cz.holds);

    auto rep = check_mixture_suite(40, 77);
    CHECK(rep.ok());
}

TEST_CASE("single-pair perturbation moves entropy by at most 4k log2(N)/N") {
    Rng rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        size_t k = 1 + rng.below(3);
        size_t n = 8 + rng.below(120);
        std::vector<std::pair<uint64_t, uint64_t>> pairs;
        for (size_t i = 0; i < n; ++i)
            pairs.emplace_back(rng.below(uint64_t{1} << k),
                               rng.below(uint64_t{1} << k));
        double h1 = cond_entropy(dist_from_pairs(k, pairs));
        auto edited = pairs;
        edited[rng.below(n)] = {rng.below(uint64_t{1} << k),
                                rng.below(uint64_t{1} << k)};
        double h2 = cond_entropy(dist_from_pairs(k, edited));
        double bound = 4.0 * static_cast<double>(k) *
                       std::log2(static_cast<double>(n)) /
                       static_cast<double>(n);
        CHECK(std::abs(h1 - h2) <= bound + 1e-9);
    }
}
