#pragma once

// Beatty sequences: exact enumeration and membership, the pigeonhole
// gamma-finder over the critical window positions, and the N/K set
// splitting that feeds the floor-splitting identity.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "kbt/errors.hpp"
#include "kbt/irrational.hpp"
#include "kbt/real.hpp"

namespace kbt {

namespace detail {

// A positive double as an exact dyadic rational num/den with den <= 2^63.
inline std::pair<long long, unsigned long long> double_to_dyadic(double t) {
    if (!(t > 0.0) || t > 1.0)
        throw RangeError("threshold must lie in (0, 1]");
    int e;
    double f = std::frexp(t, &e);                 // t = f * 2^e, f in [0.5, 1)
    auto mant = static_cast<long long>(std::ldexp(f, 53));  // exact
    int s = 53 - e;
    while (mant % 2 == 0 && s > 0) {
        mant /= 2;
        --s;
    }
    if (s > 63)
        throw RangeError("threshold too small for exact dyadic handling "
                         "(need t >= 2^-10)");
    if (s < 0) return {mant << (-s), 1ULL};
    return {mant, 1ULL << s};
}

inline void require_slope(const Real& alpha) {
    if (!RealOps::certified_greater_than(alpha, Rational{1, 1}))
        throw RangeError("Beatty slope must satisfy alpha > 1, got " +
                         alpha.spec_string());
}

}  // namespace detail

// Materialized prefix of B(alpha, beta).  Rational slopes are accepted for
// testing but flagged; the theorem-checking operations refuse them.
struct BeattyWindow {
    Real alpha;
    Real beta;
    long long N = 0;
    std::vector<long long> values;  // floor(n*alpha+beta), n = 1..N
    bool rational_slope = false;

    bool contains_value(long long m) const {
        return std::binary_search(values.begin(), values.end(), m);
    }
};

inline BeattyWindow beatty_enumerate(const Real& alpha, const Real& beta,
                                     long long N) {
    if (N < 0) throw RangeError("beatty_enumerate: N must be >= 0");
    detail::require_slope(alpha);
    BeattyWindow w{alpha, beta, N, {}, alpha.is_rational()};
    w.values.reserve(static_cast<std::size_t>(N));
    for (long long n = 1; n <= N; ++n)
        w.values.push_back(eval_floor(alpha, beta, n));
    return w;
}

// Membership via the interval test: the least n with n*alpha + beta >= m
// is ceil((m - beta)/alpha); m is a member iff that n floors back to m.
inline bool beatty_contains(const Real& alpha, const Real& beta,
                            long long m) {
    detail::require_slope(alpha);
    if (m < 1) return false;
    Real num = Real::integer(m).sub(beta);
    long long n = RealOps::certified_ceil_div(num, alpha);
    if (n < 1) return false;
    return eval_floor(alpha, beta, n) == m;
}

// #(B(alpha,beta) \cap [1, M]), exact: members below M+1 are indexed by
// n < (M+1-beta)/alpha.
inline long long beatty_count_upto(const Real& alpha, const Real& beta,
                                   long long M) {
    detail::require_slope(alpha);
    if (M <= 0) return 0;
    Real num = Real::integer(M + 1).sub(beta);
    long long c = RealOps::certified_ceil_div(num, alpha) - 1;
    return std::max(0LL, c);
}

struct GammaCertificate {
    Real gamma_exact;   // 0 or (floor(j*alpha)+1) - j*alpha, exact
    double gamma = 0;   // numeric value of the above
    long long K = 0;
    double delta = 0;
    long long hit_count = 0;
    std::vector<long long> hits;  // the k <= K with {k*alpha + gamma} < delta
};

// Maximizes #{k <= K : {k*alpha + gamma} < delta} over the critical window
// positions gamma = 0 and gamma = -{j*alpha} mod 1, j <= K.  The sliding
// window only needs to start at a sample point, so this finite candidate
// set attains the supremum; the pigeonhole bound 0.5*K*delta follows.
// Deterministic: the first maximizer in candidate order (0, then j
// ascending) wins.
inline GammaCertificate find_gamma(const Real& alpha, long long K,
                                   double delta) {
    detail::require_slope(alpha);
    if (alpha.is_rational())
        throw RangeError("find_gamma: slope must be irrational");
    if (K < 1) throw RangeError("find_gamma: K must be >= 1");
    auto [dnum, dden] = detail::double_to_dyadic(delta);

    // Certified fractional parts {k*alpha}, plus floors for the exact form.
    std::vector<double> frac(static_cast<std::size_t>(K) + 1, 0.0);
    std::vector<long long> floors(static_cast<std::size_t>(K) + 1, 0);
    for (long long k = 1; k <= K; ++k) {
        Real expr = alpha.scale(k);
        floors[static_cast<std::size_t>(k)] = RealOps::certified_floor(expr);
        frac[static_cast<std::size_t>(k)] = RealOps::certified_frac(expr);
    }

    constexpr double kMargin = 1e-9;
    double dd = static_cast<double>(dnum) / static_cast<double>(dden);

    // Count hits for candidate j (j = 0 means gamma = 0):
    //   {k*alpha + gamma_j} = {(k-j)*alpha}.
    auto hits_for = [&](long long j, std::vector<long long>* out) {
        long long count = 0;
        for (long long k = 1; k <= K; ++k) {
            bool hit;
            if (k == j) {
                hit = true;  // exact zero
            } else {
                long long d = k - j;
                double f = d > 0 ? frac[static_cast<std::size_t>(d)]
                                 : 1.0 - frac[static_cast<std::size_t>(-d)];
                if (std::fabs(f - dd) > kMargin && f > kMargin &&
                    f < 1.0 - kMargin) {
                    hit = f < dd;
                } else {
                    hit = RealOps::certified_frac_less(alpha.scale(d), dnum,
                                                       dden);
                }
            }
            if (hit) {
                ++count;
                if (out) out->push_back(k);
            }
        }
        return count;
    };

    long long best_j = 0;
    long long best_count = hits_for(0, nullptr);
    for (long long j = 1; j <= K; ++j) {
        long long c = hits_for(j, nullptr);
        if (c > best_count) {
            best_count = c;
            best_j = j;
        }
    }

    GammaCertificate cert;
    cert.K = K;
    cert.delta = delta;
    cert.hit_count = best_count;
    if (best_j == 0) {
        cert.gamma_exact = Real::integer(0);
        cert.gamma = 0.0;
    } else {
        long long c = floors[static_cast<std::size_t>(best_j)] + 1;
        cert.gamma_exact = Real::integer(c).sub(alpha.scale(best_j));
        cert.gamma = 1.0 - frac[static_cast<std::size_t>(best_j)];
    }
    hits_for(best_j, &cert.hits);
    return cert;
}

struct SplitSets {
    std::vector<long long> n_set;          // {n <= N : {n a + b - g} < 1 - d}
    unsigned long long n_complement_size = 0;
    std::vector<long long> k_set;          // {k <= K : {k a + g} < d}
};

inline SplitSets split_sets(const Real& alpha, const Real& beta,
                            const Real& gamma, double delta, long long N,
                            long long K) {
    detail::require_slope(alpha);
    if (N < 1 || K < 1) throw RangeError("split_sets: need N, K >= 1");
    auto [dnum, dden] = detail::double_to_dyadic(delta);
    // 1 - delta, exact.
    long long cnum = static_cast<long long>(dden) - dnum;

    SplitSets out;
    Real shift = beta.sub(gamma);
    for (long long n = 1; n <= N; ++n) {
        if (cnum > 0 &&
            RealOps::certified_frac_less(alpha.linear(n, shift), cnum, dden))
            out.n_set.push_back(n);
    }
    out.n_complement_size =
        static_cast<unsigned long long>(N) - out.n_set.size();
    for (long long k = 1; k <= K; ++k) {
        if (RealOps::certified_frac_less(alpha.scale(k).add(gamma), dnum,
                                         dden))
            out.k_set.push_back(k);
    }
    return out;
}

}  // namespace kbt
