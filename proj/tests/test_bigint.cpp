#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "fsdim/bigint.hpp"
#include "fsdim/bitseq.hpp"
#include "fsdim/rational.hpp"

using fsdim::BigUint;
using fsdim::Rat;

TEST_CASE("BigUint small-value round trips") {
    CHECK(BigUint(0).is_zero());
    CHECK(BigUint(0).to_decimal() == "0");
    CHECK(BigUint(1234567890123456789ull).to_decimal() == "1234567890123456789");
    CHECK(BigUint::from_decimal("1234567890123456789").to_u64() ==
          1234567890123456789ull);
    CHECK(BigUint::from_decimal("0").is_zero());
    CHECK_THROWS(BigUint::from_decimal("12x"));
}

TEST_CASE("BigUint arithmetic agrees with 128-bit reference") {
    uint64_t state = 42;
    for (int i = 0; i < 2000; ++i) {
        uint64_t a = fsdim::splitmix64_next(state) >> (state % 32);
        uint64_t b = fsdim::splitmix64_next(state) >> (state % 32);
        unsigned __int128 sum = (unsigned __int128)a + b;
        unsigned __int128 prod = (unsigned __int128)a * b;
        BigUint ba(a), bb(b);
        BigUint bsum = ba + bb;
        BigUint bprod = ba * bb;
        CHECK(bsum.to_u64() == (uint64_t)sum);
        BigUint hi = bprod;
        hi.shr(64);
        CHECK(hi.to_u64() == (uint64_t)(prod >> 64));
        if (a >= b) {
            CHECK((ba - bb).to_u64() == a - b);
        }
        CHECK(BigUint::gcd(ba, bb).to_u64() == std::gcd(a, b));
    }
}

TEST_CASE("BigUint multi-limb identities") {
    // (2^200 - 1) + 1 == 2^200
    BigUint big(1);
    big.shl(200);
    BigUint m1 = big - BigUint(1);
    CHECK(m1 + BigUint(1) == big);
    CHECK(big.bit_length() == 201);
    CHECK(m1.bit_length() == 200);
    // (a*b)/b == a via gcd-based normalization in Rat
    BigUint a = BigUint::from_decimal("987654321987654321987654321");
    BigUint b = BigUint::from_decimal("123456789123456789");
    Rat q(a * b, b);
    CHECK(q.num() == a);
    CHECK(q.den() == BigUint(1));
}

TEST_CASE("BigUint log2 accuracy") {
    CHECK(BigUint(1).log2() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(BigUint(1024).log2() == doctest::Approx(10.0).epsilon(1e-14));
    BigUint p = BigUint(1);
    p.shl(400);
    CHECK(p.log2() == doctest::Approx(400.0).epsilon(1e-14));
    // 3^100: log2 = 100*log2(3)
    BigUint three(3);
    BigUint acc(1);
    for (int i = 0; i < 100; ++i) acc = acc * three;
    CHECK(acc.log2() == doctest::Approx(100.0 * std::log2(3.0)).epsilon(1e-13));
    CHECK(std::isinf(BigUint(0).log2()));
}

TEST_CASE("Rat normalization and arithmetic") {
    CHECK(Rat(2, 4) == Rat(1, 2));
    CHECK(Rat(0, 7) == Rat());
    CHECK((Rat(1, 3) + Rat(1, 6)) == Rat(1, 2));
    CHECK((Rat(3, 4) - Rat(1, 4)) == Rat(1, 2));
    CHECK((Rat(2, 3) * Rat(3, 4)) == Rat(1, 2));
    CHECK((Rat(1, 3) / Rat(2, 3)) == Rat(1, 2));
    CHECK(Rat(1, 3) < Rat(1, 2));
    CHECK(Rat(5, 10).str() == "1/2");
    CHECK(Rat(4, 2).str() == "2");
    CHECK(Rat::parse("7/21") == Rat(1, 3));
    CHECK(Rat::parse("5") == Rat(5));
    CHECK_THROWS(Rat(1, 0));
    CHECK_THROWS(Rat(1, 3) - Rat(1, 2));
    CHECK(Rat(1, 2).to_double() == doctest::Approx(0.5));
    CHECK(Rat(1, 8).log2() == doctest::Approx(-3.0).epsilon(1e-14));
}

TEST_CASE("Rat products stay exact over many steps") {
    // capital-style product: multiply 60 small odds, divide back down
    Rat cap(1);
    uint64_t state = 7;
    std::vector<Rat> factors;
    for (int i = 0; i < 60; ++i) {
        uint64_t den = 2 + fsdim::splitmix64_next(state) % 5;
        uint64_t num = 1 + fsdim::splitmix64_next(state) % den;
        factors.emplace_back(num, den);
        cap = cap * factors.back();
    }
    for (int i = 59; i >= 0; --i) cap = cap / factors[static_cast<size_t>(i)];
    CHECK(cap == Rat(1));
}
