#pragma once

// Certified Beatty building blocks on top of Real: floors and fractional
// parts of n*alpha + beta, continued fractions with exact convergents, and
// the finite-sample type estimate.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kbt/errors.hpp"
#include "kbt/real.hpp"

namespace kbt {

struct ContinuedFraction {
    std::vector<unsigned long long> quotients;  // a_0 .. a_K
    // Exact convergents p_k/q_k, same indexing as quotients.
    std::vector<unsigned __int128> p;
    std::vector<unsigned __int128> q;
};

inline std::string u128_str(unsigned __int128 x) {
    if (x == 0) return "0";
    std::string s;
    while (x) {
        s += static_cast<char>('0' + static_cast<int>(x % 10));
        x /= 10;
    }
    return {s.rbegin(), s.rend()};
}

// floor(n*alpha + beta), exact.
inline long long eval_floor(const Real& alpha, const Real& beta,
                            long long n) {
    if (n < 1) throw RangeError("eval_floor: n must be >= 1");
    return RealOps::certified_floor(alpha.linear(n, beta));
}

// {n*alpha + beta} to within 2^-60, certified away from 0 and 1.
inline double frac_part(const Real& alpha, const Real& beta, long long n) {
    if (n < 1) throw RangeError("frac_part: n must be >= 1");
    return RealOps::certified_frac(alpha.linear(n, beta));
}

namespace detail {

inline void push_convergent(ContinuedFraction& cf, unsigned long long a) {
    using u128t = unsigned __int128;
    constexpr u128t kMax = ~static_cast<u128t>(0);
    std::size_t k = cf.quotients.size();
    cf.quotients.push_back(a);
    u128t pk, qk;
    if (k == 0) {
        pk = a;
        qk = 1;
    } else {
        u128t p1 = cf.p[k - 1], q1 = cf.q[k - 1];
        u128t p2 = k >= 2 ? cf.p[k - 2] : 1;
        u128t q2 = k >= 2 ? cf.q[k - 2] : 0;
        if (p1 != 0 && a > (kMax - p2) / p1)
            throw PrecisionExhausted("continued_fraction: convergents "
                                     "overflow 128-bit integers");
        pk = static_cast<u128t>(a) * p1 + p2;
        if (q1 != 0 && a > (kMax - q2) / q1)
            throw PrecisionExhausted("continued_fraction: convergents "
                                     "overflow 128-bit integers");
        qk = static_cast<u128t>(a) * q1 + q2;
    }
    cf.p.push_back(pk);
    cf.q.push_back(qk);
}

inline unsigned long long isqrt_u64(unsigned long long v) {
    auto r =
        static_cast<unsigned long long>(std::sqrt(static_cast<double>(v)));
    while (r > 0 && r * r > v) --r;
    while ((r + 1) * (r + 1) <= v) ++r;
    return r;
}

// Exact period-free expansion of sqrt(d) by the classical integer recurrence.
inline void sqrt_quotients(unsigned long long d, unsigned K,
                           ContinuedFraction& out) {
    unsigned long long a0 = isqrt_u64(d);
    unsigned long long m = 0, den = 1, a = a0;
    push_convergent(out, a);
    for (unsigned k = 1; k <= K; ++k) {
        m = den * a - m;
        den = (d - m * m) / den;
        a = (a0 + m) / den;
        push_convergent(out, a);
    }
}

// e = [2; 1, 2, 1, 1, 4, 1, 1, 6, ...]: a_k = 2(k+1)/3 when k = 2 mod 3.
inline unsigned long long e_quotient(unsigned k) {
    if (k == 0) return 2;
    return (k % 3 == 2) ? 2ULL * (k / 3 + 1) : 1ULL;
}

// Generic certified expansion: peel floors off interval evaluations,
// escalating the working precision whenever a floor or a reciprocal fails
// to certify.
inline void interval_quotients(const Real& alpha, unsigned K,
                               ContinuedFraction& out) {
    for (mpfr_prec_t prec = 4 * Real::kStartPrecBits;
         prec <= static_cast<mpfr_prec_t>(alpha.budget_bits()) * 4;
         prec *= 2) {
        ContinuedFraction cf;
        Interval x = alpha.eval(prec);
        bool ok = true;
        for (unsigned k = 0; k <= K; ++k) {
            auto fl = x.certified_floor();
            if (!fl) {
                ok = false;
                break;
            }
            push_convergent(cf, static_cast<unsigned long long>(*fl));
            if (k == K) break;
            x.add_int(-*fl);
            if (mpfr_sgn(x.lo()) <= 0) {
                ok = false;  // cannot certify the remainder is positive
                break;
            }
            x.invert_positive();
        }
        if (ok) {
            out = std::move(cf);
            return;
        }
    }
    throw PrecisionExhausted(
        "continued_fraction: budget exhausted expanding " +
        alpha.spec_string());
}

}  // namespace detail

// First K+1 partial quotients of alpha with exact convergents.  Exact
// integer recurrences are used for sqrt(d), the golden ratio, e, and
// cf-given values; pi and decimal specs go through certified intervals.
inline ContinuedFraction continued_fraction(const Real& alpha, unsigned K) {
    ContinuedFraction out;
    switch (alpha.leaf_kind()) {
        case Real::LeafKind::Golden:
            for (unsigned k = 0; k <= K; ++k) detail::push_convergent(out, 1);
            return out;
        case Real::LeafKind::E:
            for (unsigned k = 0; k <= K; ++k)
                detail::push_convergent(out, detail::e_quotient(k));
            return out;
        case Real::LeafKind::Sqrt:
            detail::sqrt_quotients(alpha.sqrt_arg(), K, out);
            return out;
        case Real::LeafKind::Cf: {
            auto terms = *alpha.cf_terms();
            for (unsigned k = 0; k <= K; ++k) {
                unsigned long long a =
                    k < terms.size() ? terms[k] : terms.back();
                detail::push_convergent(out, a);
            }
            return out;
        }
        default:
            detail::interval_quotients(alpha, K, out);
            return out;
    }
}

// Finite-sample type estimate
//   tau_hat = max(1, 1 + max_{k : q_k >= 3} log a_{k+1} / log q_k),
// an estimate of how well alpha is rationally approximable at the sampled
// depths.  This is a measurement, not a certificate: the true type is a
// liminf over all q and cannot be decided from finitely many convergents.
inline double estimate_type(const Real& alpha, unsigned K) {
    if (K < 3) throw RangeError("estimate_type: K must be >= 3");
    ContinuedFraction cf = continued_fraction(alpha, K);
    double best = 0.0;
    for (std::size_t k = 0; k + 1 < cf.quotients.size(); ++k) {
        if (cf.q[k] < 3) continue;  // log q too small to carry information
        double lq = std::log(static_cast<double>(
            static_cast<long double>(cf.q[k])));
        double la = std::log(static_cast<double>(cf.quotients[k + 1]));
        best = std::max(best, la / lq);
    }
    return std::max(1.0, 1.0 + best);
}

}  // namespace kbt
