#pragma once

// Modular hyperbolas m*mt = z (mod p): point enumeration, the minimizer
// F(z mod p) = min max{m, mt} with and without the Beatty restriction on m,
// the incomplete-inverse-sum detector, and the closing bound/exponent
// arithmetic.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kbt/beatty.hpp"
#include "kbt/errors.hpp"
#include "kbt/modular.hpp"
#include "kbt/real.hpp"

namespace kbt {

enum class LogBase { natural, base2 };

inline double log_of(double x, LogBase base) {
    return base == LogBase::natural ? std::log(x) : std::log2(x);
}

struct HyperbolaPoint {
    u64 m = 0;
    u64 m_tilde = 0;
    u64 z = 0;
    std::optional<bool> in_beatty;
};

inline std::vector<HyperbolaPoint> hyperbola_points(const PrimeModulus& p,
                                                    i64 z) {
    const u64 zr = p.reduce(z);
    if (zr == 0) throw ZeroResidue("hyperbola_points: p divides z");
    std::vector<HyperbolaPoint> pts;
    pts.reserve(static_cast<std::size_t>(p.value() - 1));
    detail::for_each_inverse(p, 1, p.value() - 1, [&](u64 m, u64 inv) {
        pts.push_back({m, mulmod(zr, inv, p.value()), zr, std::nullopt});
    });
    return pts;
}

struct LeastMaxResult {
    u64 F = 0;
    HyperbolaPoint witness;
};

// min over H_z of max{m, mt}, witness at the smallest attaining m.  Scans m
// ascending with an incrementally grown inverse table and stops once
// m >= current best.
inline LeastMaxResult least_max(const PrimeModulus& p, i64 z) {
    const u64 P = p.value();
    const u64 zr = p.reduce(z);
    if (zr == 0) throw ZeroResidue("least_max: p divides z");

    std::vector<u64> inv;
    inv.reserve(1024);
    inv.push_back(0);  // index 0 unused
    inv.push_back(1 % P);

    LeastMaxResult best;
    best.F = P;  // sentinel above any achievable max
    for (u64 m = 1; m < P && m < best.F; ++m) {
        if (m >= inv.size())
            inv.push_back(P - mulmod(P / m, inv[static_cast<std::size_t>(
                                                  P % m)],
                                     P));
        u64 mt = mulmod(zr, inv[static_cast<std::size_t>(m)], P);
        u64 v = std::max(m, mt);
        if (v < best.F) best = {v, {m, mt, zr, std::nullopt}};
    }
    return best;
}

// Restricted minimizer: m must lie in B(alpha, beta).  Returns nullopt when
// the Beatty sequence has no member below p.
inline std::optional<LeastMaxResult> least_max_beatty(const PrimeModulus& p,
                                                      i64 z,
                                                      const Real& alpha,
                                                      const Real& beta) {
    const u64 P = p.value();
    const u64 zr = p.reduce(z);
    if (zr == 0) throw ZeroResidue("least_max_beatty: p divides z");
    detail::require_slope(alpha);

    const bool use_table = P <= PrimeModulus::kTableLimit;
    LeastMaxResult best;
    best.F = P;
    bool found = false;
    for (long long n = 1;; ++n) {
        long long f = eval_floor(alpha, beta, n);
        if (f <= 0) continue;  // impossible for alpha > 1, beta >= 0
        u64 m = static_cast<u64>(f);
        if (m >= P || m >= best.F) break;
        u64 inv = use_table ? p.inverse_table()[m] : mod_inverse(m, p);
        u64 mt = mulmod(zr, inv, P);
        u64 v = std::max(m, mt);
        if (v < best.F) best = {v, {m, mt, zr, true}};
        found = true;
    }
    if (!found && best.F == P) return std::nullopt;
    return best;
}

struct DetectorReport {
    u64 p = 0;
    std::string alpha_spec;
    std::string beta_spec;
    u64 M = 0;
    double lhs = 0.0;          // max over y in [1, p-1]
    double lhs_with_y0 = 0.0;  // same max with the y = 0 term included
    u64 argmax_y = 0;
    double rhs = 0.0;          // M(M - beta - alpha) / (p log(p) alpha)
    bool holds = false;
    bool degenerate = false;   // rhs <= 0, nothing to test
    u64 member_count = 0;
};

// The incomplete Beatty inverse-sum test: when max_y |sum_{m<=M, m in B}
// e_p(y m^-1)| <= M(M-beta-alpha)/(p log(p) alpha), every residue class z
// has a hyperbola point with m in B(alpha,beta) and max{m, mt} <= M.  The
// y = 0 term is the completing main term and is excluded from the max; its
// value (the member count) is reported separately.
inline DetectorReport detector(const PrimeModulus& p, const Real& alpha,
                               const Real& beta, u64 M,
                               LogBase base = LogBase::natural) {
    const u64 P = p.value();
    if (M >= P || M < 1) throw RangeError("detector: need 1 <= M < p");
    detail::require_slope(alpha);

    DetectorReport rep;
    rep.p = P;
    rep.alpha_spec = alpha.spec_string();
    rep.beta_spec = beta.spec_string();
    rep.M = M;

    const double a = alpha.approx();
    const double b = beta.approx();
    const double Md = static_cast<double>(M);
    rep.rhs = Md * (Md - b - a) /
              (static_cast<double>(P) * log_of(static_cast<double>(P), base) *
               a);
    if (rep.rhs <= 0.0) {
        rep.degenerate = true;
        rep.holds = false;
        return rep;
    }

    std::vector<u64> members;
    for (long long n = 1;; ++n) {
        long long f = eval_floor(alpha, beta, n);
        if (f > static_cast<long long>(M)) break;
        if (f >= 1) members.push_back(static_cast<u64>(f));
    }
    rep.member_count = members.size();
    auto invs = batch_inverse(members, p);

    for (u64 y = 1; y < P; ++y) {
        ComplexAccumulator acc;
        for (u64 inv : invs) {
            auto zv = p.root(mulmod(y, inv, P));
            acc.add(zv.real(), zv.imag());
        }
        double mag = acc.finish().abs();
        if (mag > rep.lhs) {
            rep.lhs = mag;
            rep.argmax_y = y;
        }
    }
    rep.lhs_with_y0 =
        std::max(rep.lhs, static_cast<double>(members.size()));
    rep.holds = rep.lhs <= rep.rhs;
    return rep;
}

struct TheoremBound {
    long long N = 0;           // floor(p^{684/727} log p)
    double bound = 0.0;        // alpha p^{684/727} log p + beta
    double simplified_lhs = 0.0;  // (log p) N^{-2+297/512} p^{1+43/128}
    bool trivial_at_scale = false;  // bound >= p: asserts nothing new
};

inline TheoremBound theorem_bound(const PrimeModulus& p, const Real& alpha,
                                  const Real& beta,
                                  LogBase base = LogBase::natural) {
    TheoremBound out;
    const double P = static_cast<double>(p.value());
    const double L = log_of(P, base);
    const double p_pow = std::pow(P, 684.0 / 727.0);
    out.N = static_cast<long long>(std::floor(p_pow * L));
    out.bound = alpha.approx() * p_pow * L + beta.approx();
    const double Nd = static_cast<double>(out.N);
    out.simplified_lhs = L * std::pow(Nd, -2.0 + 297.0 / 512.0) *
                         std::pow(P, 1.0 + 43.0 / 128.0);
    out.trivial_at_scale = out.bound >= P;
    return out;
}

struct ExponentCheck {
    Rational p_exponent;    // (-2 + 297/512)(684/727) + 1 + 43/128
    Rational log_exponent;  // residual power of log p: 1 + (-2 + 297/512)
    bool decays = false;    // the chosen N drives the detector lhs to zero
};

// Exact exponent bookkeeping for the closing bound.  The N choice balances
// the power of p exactly (the p-exponent is 0); the decay comes from the
// residual negative power of log p.
inline ExponentCheck exponent_check() {
    ExponentCheck out;
    Rational e1 = Rational::make(-2 * 512 + 297, 512);   // -727/512
    Rational a = Rational::make(684, 727);
    Rational e2 = Rational::make(128 + 43, 128);         // 171/128
    // e1 * a with small denominators, exact.
    Rational prod = Rational::make(e1.num * a.num,
                                   e1.den * a.den);
    out.p_exponent = prod.add(e2);
    out.log_exponent = Rational::make(512 - 727, 512);   // 1 + e1
    Rational zero{0, 1};
    out.decays = out.p_exponent.less(zero) ||
                 (out.p_exponent.equals(zero) && out.log_exponent.less(zero));
    return out;
}

// Unrestricted minimizer bound: 2 (log p) p^{3/4}.
inline double thm1_bound(u64 p, LogBase base = LogBase::natural) {
    double pd = static_cast<double>(p);
    return 2.0 * log_of(pd, base) * std::pow(pd, 0.75);
}

}  // namespace kbt
