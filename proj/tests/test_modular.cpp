#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

#include "kbt/modular.hpp"
#include "kbt/rng.hpp"

using namespace kbt;

namespace {

// Trial-division oracle, valid far past the test range.
bool is_prime_oracle(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Exhaustive-scan inverse oracle.
u64 inverse_oracle(u64 m, u64 p) {
    for (u64 k = 1; k < p; ++k)
        if (mulmod(m % p, k, p) == 1) return k;
    return 0;
}

}  // namespace

TEST_CASE("is_prime on the pinned examples") {
    CHECK(is_prime(2));
    CHECK_FALSE(is_prime(561));  // 3 * 11 * 17
    CHECK(is_prime(47));
    CHECK_FALSE(is_prime(1));
    CHECK(is_prime((1ULL << 61) - 1));  // Mersenne
    CHECK_FALSE(is_prime((1ULL << 61) - 3));
}

TEST_CASE("is_prime agrees with trial division") {
    for (u64 n = 1; n <= 20000; ++n) CHECK(is_prime(n) == is_prime_oracle(n));
    SplitMix64 rng(0xC0FFEE);
    for (int i = 0; i < 200; ++i) {
        u64 n = rng.range(1u << 20, 1u << 24);
        CHECK(is_prime(n) == is_prime_oracle(n));
    }
}

TEST_CASE("PrimeModulus validation") {
    CHECK_THROWS_AS(PrimeModulus(2), RangeError);
    CHECK_THROWS_AS(PrimeModulus(1), RangeError);
    CHECK_THROWS_AS(PrimeModulus(91), RangeError);
    CHECK_NOTHROW(PrimeModulus(3));
}

TEST_CASE("mod_inverse pinned examples") {
    CHECK(mod_inverse(1, PrimeModulus(7)) == 1);
    CHECK(mod_inverse(3, PrimeModulus(7)) == 5);  // 3*5 = 15 = 1 mod 7
    CHECK(mod_inverse(2, PrimeModulus(5)) == 3);  // 2*3 = 6 = 1 mod 5
    CHECK_THROWS_AS(mod_inverse(7, PrimeModulus(7)), ZeroResidue);
}

TEST_CASE("mod_inverse is an involution and matches the scan oracle") {
    PrimeModulus p(101);
    for (u64 m = 1; m < 101; ++m) {
        u64 inv = mod_inverse(m, p);
        CHECK(inv == inverse_oracle(m, 101));
        CHECK(mod_inverse(inv, p) == m);
    }
}

TEST_CASE("batch_inverse pinned examples") {
    PrimeModulus p7(7);
    CHECK(batch_inverse({1, 2, 3, 4, 5, 6}, p7) ==
          std::vector<u64>{1, 4, 5, 2, 3, 6});
    CHECK(batch_inverse({1}, PrimeModulus(5)) == std::vector<u64>{1});
    CHECK(batch_inverse({}, p7).empty());
    try {
        batch_inverse({5}, PrimeModulus(5));
        FAIL("expected ZeroResidue");
    } catch (const ZeroResidue& e) {
        CHECK(e.index == 0);
    }
    try {
        batch_inverse({1, 2, 14, 3}, p7);
        FAIL("expected ZeroResidue");
    } catch (const ZeroResidue& e) {
        CHECK(e.index == 2);
    }
}

TEST_CASE("batch_inverse equals element-wise inversion on random input") {
    SplitMix64 rng(0xBA7C4);
    PrimeModulus p(99991);
    std::vector<u64> ms;
    ms.reserve(10000);
    for (int i = 0; i < 10000; ++i) ms.push_back(rng.range(1, 99990));
    auto batch = batch_inverse(ms, p);
    for (std::size_t i = 0; i < ms.size(); ++i)
        CHECK(batch[i] == mod_inverse(ms[i], p));
}

TEST_CASE("exp_residue pinned values") {
    PrimeModulus p7(7);
    auto one = exp_residue(p7, 0);
    CHECK(one.re == Catch::Approx(1.0).margin(1e-15));
    CHECK(one.im == Catch::Approx(0.0).margin(1e-15));

    auto periodic = exp_residue(PrimeModulus(5), 5);
    CHECK(periodic.re == Catch::Approx(1.0).margin(1e-15));
    CHECK(periodic.im == Catch::Approx(0.0).margin(1e-15));

    auto z = exp_residue(p7, 1);  // cos(2 pi / 7) + i sin(2 pi / 7)
    CHECK(z.re == Catch::Approx(0.6234898018587335).margin(1e-12));
    CHECK(z.im == Catch::Approx(0.7818314824680298).margin(1e-12));

    auto neg = exp_residue(p7, -1);
    CHECK(neg.re == Catch::Approx(z.re).margin(1e-15));
    CHECK(neg.im == Catch::Approx(-z.im).margin(1e-15));
}

TEST_CASE("exp_residue is a homomorphism and unit modulus") {
    SplitMix64 rng(7);
    PrimeModulus p(10007);
    for (int i = 0; i < 300; ++i) {
        i64 a = static_cast<i64>(rng.below(10007));
        i64 b = static_cast<i64>(rng.below(10007));
        auto za = exp_residue(p, a).value();
        auto zb = exp_residue(p, b).value();
        auto zab = exp_residue(p, a + b).value();
        CHECK(std::abs(za * zb - zab) < 1e-13);
        CHECK(std::abs(std::abs(za) - 1.0) < 0x1.0p-50);
    }
}

TEST_CASE("character orthogonality") {
    for (u64 pv : {5ULL, 13ULL, 101ULL}) {
        PrimeModulus p(pv);
        for (i64 x : {i64{0}, i64{1}, i64{3}, static_cast<i64>(pv)}) {
            ComplexAccumulator acc;
            for (u64 r = 1; r <= pv; ++r) {
                auto z = exp_residue(p, static_cast<i64>(r) * x);
                acc.add(z.re, z.im);
            }
            ComplexSum s = acc.finish();
            double expected = (p.reduce(x) == 0) ? static_cast<double>(pv) : 0.0;
            CHECK(std::abs(s.re - expected) <=
                  static_cast<double>(pv) * 0x1.0p-48 + 1e-12);
            CHECK(std::abs(s.im) <=
                  static_cast<double>(pv) * 0x1.0p-48 + 1e-12);
            CHECK(s.err <= static_cast<double>(pv) * 0x1.0p-48);
        }
    }
}
