#pragma once

// The exponential sums: full and incomplete Kloosterman sums, the
// Beatty-restricted sum K(p,alpha,beta;N;x,y), the shifted-inverse
// correlation sums S(x,y,w;p), the fourth-moment average Sigma, and the
// congruence-solution counts #X_u behind it.  Two independent X_u counters
// are provided: the p^4 exhaustive scan (the oracle) and the O(p^3)
// structured counter that solves for m_1 per triple.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include "kbt/beatty.hpp"
#include "kbt/errors.hpp"
#include "kbt/modular.hpp"
#include "kbt/real.hpp"

namespace kbt {

namespace detail {

// Apply f(m, inv_m) for m = from..to (inclusive), using the dense table for
// small p and chunked batch inversion otherwise.
template <typename F>
void for_each_inverse(const PrimeModulus& p, u64 from, u64 to, F&& f) {
    if (from > to) return;
    if (p.value() <= PrimeModulus::kTableLimit) {
        const auto& inv = p.inverse_table();
        for (u64 m = from; m <= to; ++m) f(m, inv[m]);
        return;
    }
    constexpr u64 kChunk = 1 << 15;
    std::vector<u64> ms;
    for (u64 base = from; base <= to; base += kChunk) {
        u64 end = std::min(to, base + kChunk - 1);
        ms.clear();
        for (u64 m = base; m <= end; ++m) ms.push_back(m);
        auto invs = batch_inverse(ms, p);
        for (std::size_t i = 0; i < ms.size(); ++i) f(ms[i], invs[i]);
    }
}

inline u64 phase(const PrimeModulus& p, u64 a, u64 m, u64 b, u64 minv) {
    // a*m + b*minv mod p with 62-bit operands
    return (mulmod(a, m, p.value()) + mulmod(b, minv, p.value())) % p.value();
}

}  // namespace detail

// Kl_p(x, y) = sum_{m=1}^{p-1} e_p(x m + y m^-1).
inline ComplexSum kloosterman(const PrimeModulus& p, i64 x, i64 y) {
    const u64 a = p.reduce(x), b = p.reduce(y);
    ComplexAccumulator acc;
    detail::for_each_inverse(p, 1, p.value() - 1, [&](u64 m, u64 inv) {
        auto z = p.root(detail::phase(p, a, m, b, inv));
        acc.add(z.real(), z.imag());
    });
    return acc.finish();
}

// sum_{m=1}^{M} e_p(x m + y m^-1), 0 <= M <= p-1.
inline ComplexSum incomplete_kloosterman(const PrimeModulus& p, u64 M, i64 x,
                                         i64 y) {
    if (M > p.value() - 1)
        throw RangeError("incomplete_kloosterman: need M <= p-1");
    const u64 a = p.reduce(x), b = p.reduce(y);
    ComplexAccumulator acc;
    detail::for_each_inverse(p, 1, M, [&](u64 m, u64 inv) {
        auto z = p.root(detail::phase(p, a, m, b, inv));
        acc.add(z.real(), z.imag());
    });
    return acc.finish();
}

// K(p,alpha,beta;N;x,y): the Kloosterman phase along the Beatty sequence,
// terms with p | floor(n*alpha+beta) skipped, floors reduced mod p before
// inversion.
inline ComplexSum beatty_kloosterman(const PrimeModulus& p, const Real& alpha,
                                     const Real& beta, long long N, i64 x,
                                     i64 y) {
    if (N < 0 || static_cast<u64>(N) > p.value())
        throw RangeError("beatty_kloosterman: need 0 <= N <= p");
    if (p.reduce(y) == 0)
        throw YDivisible("beatty_kloosterman: p divides y");
    const u64 a = p.reduce(x), b = p.reduce(y);

    std::vector<u64> reduced;
    reduced.reserve(static_cast<std::size_t>(N));
    for (long long n = 1; n <= N; ++n) {
        long long f = eval_floor(alpha, beta, n);
        u64 r = p.reduce(f);
        if (r != 0) reduced.push_back(r);
    }
    auto invs = batch_inverse(reduced, p);
    ComplexAccumulator acc;
    for (std::size_t i = 0; i < reduced.size(); ++i) {
        auto z = p.root(detail::phase(p, a, reduced[i], b, invs[i]));
        acc.add(z.real(), z.imag());
    }
    return acc.finish();
}

// S(x,y,w;p) = sum over m in [1,p) with p not dividing m+w of
// e_p(x m^-1 + y (m+w)^-1).
inline ComplexSum correlation_sum(const PrimeModulus& p, i64 x, i64 y,
                                  i64 w) {
    const u64 P = p.value();
    const u64 a = p.reduce(x), b = p.reduce(y), wr = p.reduce(w);
    const auto& inv = p.inverse_table();
    ComplexAccumulator acc;
    for (u64 m = 1; m < P; ++m) {
        u64 mw = m + wr >= P ? m + wr - P : m + wr;
        if (mw == 0) continue;
        auto z = p.root((mulmod(a, inv[m], P) + mulmod(b, inv[mw], P)) % P);
        acc.add(z.real(), z.imag());
    }
    return acc.finish();
}

struct XuCount {
    u64 p = 0;
    u64 u = 0;  // in [1, p]
    unsigned long long count = 0;
};

namespace detail {

inline void check_xu_range(const PrimeModulus& p, u64 u) {
    if (p.value() > 31)
        throw SizeLimit("X_u counting: p must be <= 31");
    if (u < 1 || u > p.value())
        throw RangeError("X_u counting: need 1 <= u <= p");
}

}  // namespace detail

// Exhaustive p^4 oracle for
//   X_u = { m in {1..p}^4 : A(m,0) = A(m,u) = 0 mod p },
// where A(m,u) = sum_k (-1)^k (m_k+u)^-1 when no factor vanishes mod p
// (tuples with a vanishing factor are excluded, which matches the A = 1
// convention since 1 != 0 mod p).
inline XuCount count_xu(const PrimeModulus& p, u64 u) {
    detail::check_xu_range(p, u);
    const u64 P = p.value();
    const auto& inv = p.inverse_table();

    // Valid m in {1..p}: m != 0 and m+u != 0 mod p; signed inverse pairs.
    std::vector<u64> vals;
    std::vector<u64> inv0, invu;
    for (u64 m = 1; m <= P; ++m) {
        u64 r = m % P;
        u64 ru = (m + u) % P;
        if (r == 0 || ru == 0) continue;
        vals.push_back(m);
        inv0.push_back(inv[r]);
        invu.push_back(inv[ru]);
    }

    unsigned long long count = 0;
    const std::size_t n = vals.size();
    for (std::size_t i1 = 0; i1 < n; ++i1)
        for (std::size_t i2 = 0; i2 < n; ++i2) {
            u64 s0 = (inv0[i2] + P - inv0[i1]) % P;  // -1^k signs: -m1 +m2
            u64 su = (invu[i2] + P - invu[i1]) % P;
            for (std::size_t i3 = 0; i3 < n; ++i3) {
                u64 t0 = (s0 + P - inv0[i3]) % P;
                u64 tu = (su + P - invu[i3]) % P;
                for (std::size_t i4 = 0; i4 < n; ++i4) {
                    if ((t0 + inv0[i4]) % P == 0 &&
                        (tu + invu[i4]) % P == 0)
                        ++count;
                }
            }
        }
    return XuCount{P, u, count};
}

// Structured counter: for each (m2, m3, m4) the two congruences determine
// m_1 uniquely (when solvable), so counting is O(p^3) per u.
inline unsigned long long count_xu_structured(const PrimeModulus& p, u64 u) {
    detail::check_xu_range(p, u);
    const u64 P = p.value();
    const auto& inv = p.inverse_table();

    std::vector<u64> vals, inv0, invu;
    for (u64 m = 1; m <= P; ++m) {
        u64 r = m % P;
        u64 ru = (m + u) % P;
        if (r == 0 || ru == 0) continue;
        vals.push_back(m);
        inv0.push_back(inv[r]);
        invu.push_back(inv[ru]);
    }

    const bool u_zero = (u % P) == 0;
    unsigned long long count = 0;
    const std::size_t n = vals.size();
    for (std::size_t i2 = 0; i2 < n; ++i2)
        for (std::size_t i3 = 0; i3 < n; ++i3) {
            u64 c0_23 = (inv0[i2] + P - inv0[i3]) % P;
            u64 cu_23 = (invu[i2] + P - invu[i3]) % P;
            for (std::size_t i4 = 0; i4 < n; ++i4) {
                u64 c1 = (c0_23 + inv0[i4]) % P;  // required value of m1^-1
                if (c1 == 0) continue;
                u64 m1 = inv[c1];
                if (u_zero) {
                    ++count;  // both conditions coincide
                    continue;
                }
                u64 c2 = (cu_23 + invu[i4]) % P;  // required (m1+u)^-1
                if (c2 == 0) continue;
                if ((m1 + u) % P == inv[c2] % P) ++count;
            }
        }
    return count;
}

struct XuTotal {
    unsigned long long total_u_le_p = 0;  // sum over u = 1..p
    unsigned long long total_u_lt_p = 0;  // sum over u = 1..p-1
    unsigned long long paper_bound = 0;   // p(2p^2 + 4(p-1)^2)
};

inline XuTotal xu_total(const PrimeModulus& p) {
    const u64 P = p.value();
    XuTotal t;
    for (u64 u = 1; u <= P; ++u) {
        unsigned long long c = count_xu(p, u).count;
        t.total_u_le_p += c;
        if (u < P) t.total_u_lt_p += c;
    }
    t.paper_bound = P * (2 * P * P + 4 * (P - 1) * (P - 1));
    return t;
}

// Sigma = sum_{r<=p} sum_{t<=p} sum_{u<p} |S(r,t,u;p)|^4.
inline double fourth_moment_sigma(const PrimeModulus& p) {
    const u64 P = p.value();
    if (P > 31) throw SizeLimit("fourth_moment_sigma: p must be <= 31");
    const auto& inv = p.inverse_table();

    double sigma = 0.0, comp = 0.0;
    for (u64 r = 1; r <= P; ++r)
        for (u64 t = 1; t <= P; ++t)
            for (u64 u = 1; u < P; ++u) {
                ComplexAccumulator acc;
                for (u64 m = 1; m < P; ++m) {
                    u64 mu = m + u >= P ? m + u - P : m + u;
                    if (mu == 0) continue;
                    auto z = p.root(
                        (mulmod(r % P, inv[m], P) + mulmod(t % P, inv[mu], P)) %
                        P);
                    acc.add(z.real(), z.imag());
                }
                ComplexSum s = acc.finish();
                double a2 = s.re * s.re + s.im * s.im;
                double v = a2 * a2;
                double x = sigma + v;  // Neumaier step
                if (std::fabs(sigma) >= std::fabs(v))
                    comp += (sigma - x) + v;
                else
                    comp += (v - x) + sigma;
                sigma = x;
            }
    return sigma + comp;
}

struct CorrelationAverage {
    double sum_abs = 0.0;     // sum over W of |S|
    double fourth_sum = 0.0;  // sum over W of |S|^4
    double ratio_prop1 = 0.0; // sum_abs / ((#W)^{3/4} p)
    double ratio_fourth = 0.0;  // fourth_sum / p^4
};

inline CorrelationAverage correlation_average(const PrimeModulus& p, i64 x,
                                              i64 y,
                                              const std::vector<i64>& W) {
    if (p.reduce(y) == 0)
        throw YDivisible("correlation_average: p divides y");
    std::set<u64> seen;
    for (i64 w : W)
        if (!seen.insert(p.reduce(w)).second)
            throw DuplicateResidue(
                "correlation_average: W has congruent elements mod p");
    CorrelationAverage out;
    double c1 = 0.0, c4 = 0.0;
    for (i64 w : W) {
        ComplexSum s = correlation_sum(p, x, y, w);
        double a = s.abs();
        double a4 = (a * a) * (a * a);
        double t = out.sum_abs + a;
        c1 += std::fabs(out.sum_abs) >= a ? (out.sum_abs - t) + a
                                          : (a - t) + out.sum_abs;
        out.sum_abs = t;
        t = out.fourth_sum + a4;
        c4 += std::fabs(out.fourth_sum) >= a4 ? (out.fourth_sum - t) + a4
                                              : (a4 - t) + out.fourth_sum;
        out.fourth_sum = t;
    }
    out.sum_abs += c1;
    out.fourth_sum += c4;
    if (!W.empty()) {
        double pd = static_cast<double>(p.value());
        out.ratio_prop1 =
            out.sum_abs /
            (std::pow(static_cast<double>(W.size()), 0.75) * pd);
        out.ratio_fourth = out.fourth_sum / (pd * pd * pd * pd);
    }
    return out;
}

}  // namespace kbt
