#pragma once

// Exact arithmetic modulo an odd prime p < 2^62: deterministic primality,
// extended-gcd inversion, prefix-product batch inversion, and evaluation of
// the additive characters e_p(t) = exp(2*pi*i*t/p).

#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "kbt/errors.hpp"

namespace kbt {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 powmod(u64 base, u64 exp, u64 m) {
    u64 r = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

namespace detail {

inline bool miller_rabin_witness(u64 n, u64 a, u64 d, int r) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < r; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

}  // namespace detail

// Deterministic for all n < 2^62: the first twelve primes are a valid
// witness set for n < 3.18e23 (Sorenson & Webster).
inline bool is_prime(u64 n) {
    if (n >= (1ULL << 62)) throw RangeError("is_prime: n must be < 2^62");
    if (n < 2) return false;
    for (u64 q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                  29ULL, 31ULL, 37ULL}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    u64 d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL,
                  29ULL, 31ULL, 37ULL}) {
        if (!detail::miller_rabin_witness(n, a, d, r)) return false;
    }
    return true;
}

// Complex value of an exponential sum together with an accumulated rounding
// bound: for a sum of T unit-modulus terms err <= T * 2^-48.
struct ComplexSum {
    double re = 0.0;
    double im = 0.0;
    double err = 0.0;

    double abs() const { return std::hypot(re, im); }
    std::complex<double> value() const { return {re, im}; }
};

// Neumaier-compensated accumulation of unit-modulus terms.
class ComplexAccumulator {
  public:
    void add(double re, double im) {
        add_one(sum_re_, comp_re_, re);
        add_one(sum_im_, comp_im_, im);
        ++terms_;
    }

    std::size_t terms() const { return terms_; }

    ComplexSum finish() const {
        ComplexSum s;
        s.re = sum_re_ + comp_re_;
        s.im = sum_im_ + comp_im_;
        s.err = static_cast<double>(terms_) * 0x1.0p-48;
        return s;
    }

  private:
    static void add_one(double& sum, double& comp, double v) {
        double t = sum + v;
        if (std::fabs(sum) >= std::fabs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }

    double sum_re_ = 0.0, comp_re_ = 0.0;
    double sum_im_ = 0.0, comp_im_ = 0.0;
    std::size_t terms_ = 0;
};

// Validated odd prime with shared lazily-built tables (roots of unity and
// inverses for small p).  Copies share the tables; everything is logically
// immutable after construction, so values can be used from many threads.
class PrimeModulus {
  public:
    static constexpr u64 kTableLimit = 1ULL << 22;

    explicit PrimeModulus(u64 p) : p_(p), tables_(std::make_shared<Tables>()) {
        if (p < 3 || p >= (1ULL << 62))
            throw RangeError("PrimeModulus: need 3 <= p < 2^62, got " +
                             std::to_string(p));
        if (!is_prime(p))
            throw RangeError("PrimeModulus: " + std::to_string(p) +
                             " is not prime");
    }

    u64 value() const { return p_; }

    u64 reduce(i64 t) const {
        i64 r = t % static_cast<i64>(p_);
        if (r < 0) r += static_cast<i64>(p_);
        return static_cast<u64>(r);
    }

    // cos/sin of 2*pi*r/p for a residue r in [0, p).  The angle is formed in
    // long double so the table meets the 2^-50 accuracy contract.
    std::complex<double> root(u64 r) const {
        if (p_ <= kTableLimit) {
            const auto& t = root_table();
            return {t[2 * r], t[2 * r + 1]};
        }
        return compute_root(r);
    }

    // Inverse table for r in [1, p); built once, only for p <= kTableLimit.
    const std::vector<u64>& inverse_table() const {
        if (p_ > kTableLimit)
            throw SizeLimit("inverse_table: p too large for a dense table");
        std::call_once(tables_->inv_once, [this] {
            auto& inv = tables_->inv;
            inv.assign(p_, 0);
            if (p_ > 1) inv[1] = 1;
            for (u64 i = 2; i < p_; ++i)
                inv[i] = p_ - mulmod(p_ / i, inv[p_ % i], p_);
        });
        return tables_->inv;
    }

  private:
    struct Tables {
        std::once_flag roots_once;
        std::vector<double> roots;  // interleaved cos, sin
        std::once_flag inv_once;
        std::vector<u64> inv;
    };

    std::complex<double> compute_root(u64 r) const {
        long double angle = 2.0L * 3.14159265358979323846264338327950288L *
                            static_cast<long double>(r) /
                            static_cast<long double>(p_);
        return {static_cast<double>(std::cos(angle)),
                static_cast<double>(std::sin(angle))};
    }

    const std::vector<double>& root_table() const {
        std::call_once(tables_->roots_once, [this] {
            auto& t = tables_->roots;
            t.resize(2 * p_);
            for (u64 r = 0; r < p_; ++r) {
                auto z = compute_root(r);
                t[2 * r] = z.real();
                t[2 * r + 1] = z.imag();
            }
        });
        return tables_->roots;
    }

    u64 p_;
    std::shared_ptr<Tables> tables_;
};

// e_p(t); t is reduced mod p internally, so any integer argument is fine.
inline ComplexSum exp_residue(const PrimeModulus& p, i64 t) {
    auto z = p.root(p.reduce(t));
    return {z.real(), z.imag(), 0x1.0p-50};
}

// m with p | m has no inverse.
inline u64 mod_inverse(u64 m, const PrimeModulus& p) {
    u64 a = m % p.value();
    if (a == 0) throw ZeroResidue("mod_inverse: residue divisible by p");
    // Extended gcd on (a, p); p prime so gcd is 1.
    i64 t = 0, new_t = 1;
    i64 r = static_cast<i64>(p.value()), new_r = static_cast<i64>(a);
    while (new_r != 0) {
        i64 q = r / new_r;
        t = std::exchange(new_t, t - q * new_t);
        r = std::exchange(new_r, r - q * new_r);
    }
    if (t < 0) t += static_cast<i64>(p.value());
    return static_cast<u64>(t);
}

// Prefix-product trick: n inverses for the price of one extended gcd and
// 3(n-1) multiplications.
inline std::vector<u64> batch_inverse(const std::vector<u64>& ms,
                                      const PrimeModulus& p) {
    const u64 P = p.value();
    std::vector<u64> prefix(ms.size());
    u64 acc = 1;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        u64 v = ms[i] % P;
        if (v == 0)
            throw ZeroResidue(
                "batch_inverse: residue divisible by p at index " +
                    std::to_string(i),
                i);
        acc = mulmod(acc, v, P);
        prefix[i] = acc;
    }
    std::vector<u64> out(ms.size());
    u64 inv = ms.empty() ? 1 : mod_inverse(acc, p);
    for (std::size_t i = ms.size(); i-- > 1;) {
        out[i] = mulmod(prefix[i - 1], inv, P);
        inv = mulmod(inv, ms[i] % P, P);
    }
    if (!ms.empty()) out[0] = inv;
    return out;
}

}  // namespace kbt
