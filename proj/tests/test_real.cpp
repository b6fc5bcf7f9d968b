#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "kbt/irrational.hpp"
#include "kbt/real.hpp"

using namespace kbt;

namespace {

// High-precision direct oracle for floor(n*alpha + beta): one 1024-bit
// evaluation, midpoint floor.  Independent of the certify-and-escalate
// production path.
long long floor_oracle(const Real& alpha, const Real& beta, long long n) {
    Interval iv = alpha.linear(n, beta).eval(1024);
    BigFloat f(1024);
    mpfr_floor(f.get(), iv.lo());
    return mpfr_get_si(f.get(), MPFR_RNDN);
}

}  // namespace

TEST_CASE("parse grammar round trips") {
    CHECK(Real::parse("pi").spec_string() == "pi");
    CHECK(Real::parse("e").spec_string() == "e");
    CHECK(Real::parse("golden").spec_string() == "golden");
    CHECK(Real::parse("sqrt:2").spec_string() == "sqrt:2");
    CHECK(Real::parse("cf:1,2,3").spec_string() == "cf:1,2,3");
    CHECK(Real::parse("dec:3.14").spec_string() == "dec:3.14");
    CHECK(Real::parse("rat:3/10").spec_string() == "rat:3/10");
    CHECK(Real::parse("0.5").exact_rational()->equals(Rational{1, 2}));
    CHECK(Real::parse("2").exact_rational()->equals(Rational{2, 1}));
    CHECK_THROWS_AS(Real::parse("sqrt:4"), RangeError);  // perfect square
    CHECK_THROWS_AS(Real::parse("sqrt:1"), RangeError);
    CHECK_THROWS_AS(Real::parse("bogus"), RangeError);
    CHECK_THROWS_AS(Real::parse("dec:3.1.4"), RangeError);
}

TEST_CASE("approximate values of the named constants") {
    CHECK(Real::pi().approx() == Catch::Approx(3.14159265358979).epsilon(1e-14));
    CHECK(Real::e().approx() == Catch::Approx(2.71828182845905).epsilon(1e-14));
    CHECK(Real::golden().approx() ==
          Catch::Approx(1.61803398874989).epsilon(1e-14));
    CHECK(Real::sqrt(2).approx() ==
          Catch::Approx(1.41421356237310).epsilon(1e-14));
    // cf:8,2 = 7 + sqrt 2 by the repeat-last rule
    CHECK(Real::parse("cf:8,2").approx() ==
          Catch::Approx(7.0 + std::sqrt(2.0)).epsilon(1e-14));
    CHECK(Real::parse("cf:1").approx() ==
          Catch::Approx(1.61803398874989).epsilon(1e-14));
}

TEST_CASE("eval_floor pinned examples") {
    CHECK(eval_floor(Real::sqrt(2), Real::integer(0), 5) == 7);
    CHECK(eval_floor(Real::golden(), Real::integer(0), 1) == 1);
    CHECK(eval_floor(Real::pi(), Real::e(), 14) == 46);
    CHECK_THROWS_AS(eval_floor(Real::sqrt(2), Real::integer(0), 0),
                    RangeError);
}

TEST_CASE("eval_floor matches the high-precision oracle") {
    std::vector<Real> alphas = {Real::sqrt(2), Real::golden(), Real::pi(),
                                Real::e(), Real::parse("cf:8,2")};
    std::vector<Real> betas = {Real::integer(0), Real::parse("0.3"),
                               Real::e()};
    for (const auto& a : alphas)
        for (const auto& b : betas)
            for (long long n : {1, 2, 3, 17, 144, 987, 5000})
                CHECK(eval_floor(a, b, n) == floor_oracle(a, b, n));
}

TEST_CASE("symbolic cancellation certifies exact integers") {
    // beta = 2 - sqrt 2, so alpha + beta = 2 exactly.
    Real alpha = Real::sqrt(2);
    Real beta = Real::integer(2).sub(Real::sqrt(2));
    CHECK(eval_floor(alpha, beta, 1) == 2);
    // The fractional part is exactly 0: no certificate can place it away
    // from the integers, so frac_part must refuse.
    CHECK_THROWS_AS(frac_part(alpha, beta, 1), PrecisionExhausted);
}

TEST_CASE("frac_part pinned examples") {
    CHECK(frac_part(Real::sqrt(2), Real::integer(0), 1) ==
          Catch::Approx(0.41421356237309515).margin(1e-12));
    CHECK(frac_part(Real::sqrt(2), Real::integer(0), 2) ==
          Catch::Approx(0.82842712474619029).margin(1e-12));
}

TEST_CASE("frac_part and eval_floor reconstruct n*alpha+beta") {
    Real alpha = Real::pi();
    Real beta = Real::parse("0.125");
    for (long long n : {1, 7, 100}) {
        double reconstructed =
            static_cast<double>(eval_floor(alpha, beta, n)) +
            frac_part(alpha, beta, n);
        double direct = alpha.linear(n, beta).eval(256).mid();
        CHECK(reconstructed == Catch::Approx(direct).margin(1e-12));
    }
}

TEST_CASE("decimal specs exhaust instead of guessing") {
    // dec:1.41 certifies small floors but cannot separate 100*alpha from
    // integers since the uncertainty is half an ulp of the last digit.
    Real a = Real::parse("dec:1.41");
    CHECK(eval_floor(a, Real::integer(0), 2) == 2);  // 2.82 +- 0.01 is safe
    CHECK_THROWS_AS(eval_floor(a, Real::parse("0.59"), 1),
                    PrecisionExhausted);  // 1.41+0.59 = 2.00 +- 0.005
}

TEST_CASE("continued fraction pinned expansions") {
    auto cf_sqrt2 = continued_fraction(Real::sqrt(2), 4);
    CHECK(cf_sqrt2.quotients ==
          std::vector<unsigned long long>{1, 2, 2, 2, 2});

    auto cf_golden = continued_fraction(Real::golden(), 3);
    CHECK(cf_golden.quotients == std::vector<unsigned long long>{1, 1, 1, 1});

    auto cf_e = continued_fraction(Real::e(), 5);
    CHECK(cf_e.quotients == std::vector<unsigned long long>{2, 1, 2, 1, 1, 4});

    auto cf_pi = continued_fraction(Real::pi(), 4);
    CHECK(cf_pi.quotients == std::vector<unsigned long long>{3, 7, 15, 1, 292});

    // Interval path agrees with the exact path for e.
    auto cf_e_iv = continued_fraction(Real::parse("dec:2.718281828459045235360287471353"), 5);
    CHECK(cf_e_iv.quotients == cf_e.quotients);
}

namespace {

kbt::BigFloat u128_to_bf(unsigned __int128 v, mpfr_prec_t prec) {
    kbt::BigFloat b(prec);
    mpfr_set_ui(b.get(), static_cast<unsigned long>(v >> 64), MPFR_RNDN);
    mpfr_mul_2ui(b.get(), b.get(), 64, MPFR_RNDN);
    mpfr_add_ui(b.get(), b.get(), 0, MPFR_RNDN);
    kbt::BigFloat lo(prec);
    mpfr_set_ui(lo.get(), static_cast<unsigned long>(v & 0xFFFFFFFFFFFFFFFFULL), MPFR_RNDN);
    mpfr_add(b.get(), b.get(), lo.get(), MPFR_RNDN);
    return b;
}

}  // namespace

TEST_CASE("convergents satisfy the recurrence and the error law") {
    for (const Real& a : {Real::sqrt(2), Real::golden(), Real::pi(), Real::e(),
                          Real::parse("cf:1,3,5")}) {
        unsigned K = 14;
        auto cf = continued_fraction(a, K + 1);
        for (std::size_t k = 2; k <= K; ++k) {
            CHECK(cf.p[k] == cf.quotients[k] * cf.p[k - 1] + cf.p[k - 2]);
            CHECK(cf.q[k] == cf.quotients[k] * cf.q[k - 1] + cf.q[k - 2]);
            CHECK(cf.q[k] > cf.q[k - 1]);
        }
        // |alpha - p_k/q_k| < 1/(q_k q_{k+1}), i.e. q_{k+1} |q_k a - p_k| < 1,
        // checked at 768 bits (convergents are far larger than the rounding
        // noise at that precision).
        const mpfr_prec_t prec = 768;
        Interval av = a.eval(prec);
        for (std::size_t k = 0; k + 1 < cf.q.size(); ++k) {
            BigFloat qk = u128_to_bf(cf.q[k], prec);
            BigFloat pk = u128_to_bf(cf.p[k], prec);
            BigFloat qk1 = u128_to_bf(cf.q[k + 1], prec);
            BigFloat t(prec);
            mpfr_mul(t.get(), qk.get(), av.lo(), MPFR_RNDN);
            mpfr_sub(t.get(), t.get(), pk.get(), MPFR_RNDN);
            mpfr_abs(t.get(), t.get(), MPFR_RNDN);
            mpfr_mul(t.get(), t.get(), qk1.get(), MPFR_RNDN);
            CHECK(mpfr_cmp_ui(t.get(), 1) < 0);
        }
    }
}

TEST_CASE("golden convergents are consecutive Fibonacci numbers") {
    auto cf = continued_fraction(Real::golden(), 15);
    unsigned long long fib[18] = {1, 1};
    for (int i = 2; i < 18; ++i) fib[i] = fib[i - 1] + fib[i - 2];
    for (std::size_t k = 0; k < cf.p.size(); ++k) {
        CHECK(static_cast<unsigned long long>(cf.p[k]) == fib[k + 1]);
        CHECK(static_cast<unsigned long long>(cf.q[k]) == fib[k]);
    }
}

TEST_CASE("estimate_type pinned values") {
    CHECK(estimate_type(Real::golden(), 20) == 1.0);

    // sqrt 2: the first admissible convergent pair is (q_2 = 5, a_3 = 2),
    // so tau_hat = 1 + ln 2 / ln 5, and later pairs only decay.
    double t2 = estimate_type(Real::sqrt(2), 20);
    CHECK(t2 == Catch::Approx(1.0 + std::log(2.0) / std::log(5.0)).margin(1e-12));
    CHECK(t2 >= 1.0);
    CHECK(t2 <= 1.5);

    // A huge quotient right after a denominator >= 3 dominates the estimate.
    double tbig = estimate_type(Real::parse("cf:1,3,1000000,1,1"), 5);
    CHECK(tbig > 5.0);

    CHECK_THROWS_AS(estimate_type(Real::sqrt(2), 2), RangeError);
}

TEST_CASE("slope validation") {
    CHECK(RealOps::certified_greater_than(Real::sqrt(2), Rational{1, 1}));
    CHECK_FALSE(
        RealOps::certified_greater_than(Real::parse("0.5"), Rational{1, 1}));
    CHECK_FALSE(
        RealOps::certified_greater_than(Real::integer(1), Rational{1, 1}));
}
