#pragma once

// Thin RAII layer over MPFR plus directed-rounding intervals.  Everything
// the certified-evaluation machinery needs lives here: interval versions of
// the arithmetic we use, the named constants, and floor/comparison queries
// that either answer definitively or report "not at this precision".

#include <mpfr.h>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "kbt/errors.hpp"

namespace kbt {

class BigFloat {
  public:
    explicit BigFloat(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
    BigFloat(const BigFloat& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    BigFloat(BigFloat&& o) noexcept {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_swap(v_, o.v_);
    }
    BigFloat& operator=(const BigFloat& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    BigFloat& operator=(BigFloat&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

  private:
    mpfr_t v_;
};

// Closed interval [lo, hi] containing the represented real.
class Interval {
  public:
    explicit Interval(mpfr_prec_t prec) : lo_(prec), hi_(prec) {}

    mpfr_ptr lo() { return lo_.get(); }
    mpfr_ptr hi() { return hi_.get(); }
    mpfr_srcptr lo() const { return lo_.get(); }
    mpfr_srcptr hi() const { return hi_.get(); }

    static Interval from_int(long long n, mpfr_prec_t prec) {
        Interval r(prec);
        mpfr_set_si(r.lo(), n, MPFR_RNDD);
        mpfr_set_si(r.hi(), n, MPFR_RNDU);
        return r;
    }

    static Interval from_rational(long long num, unsigned long long den,
                                  mpfr_prec_t prec) {
        Interval r(prec);
        mpfr_set_si(r.lo(), num, MPFR_RNDD);
        mpfr_div_ui(r.lo(), r.lo(), den, MPFR_RNDD);
        mpfr_set_si(r.hi(), num, MPFR_RNDU);
        mpfr_div_ui(r.hi(), r.hi(), den, MPFR_RNDU);
        return r;
    }

    static Interval pi(mpfr_prec_t prec) {
        Interval r(prec);
        mpfr_const_pi(r.lo(), MPFR_RNDD);
        mpfr_const_pi(r.hi(), MPFR_RNDU);
        return r;
    }

    static Interval euler_e(mpfr_prec_t prec) {
        Interval r(prec);
        BigFloat one(prec);
        mpfr_set_ui(one.get(), 1, MPFR_RNDN);
        mpfr_exp(r.lo(), one.get(), MPFR_RNDD);
        mpfr_exp(r.hi(), one.get(), MPFR_RNDU);
        return r;
    }

    static Interval sqrt_ui(unsigned long long d, mpfr_prec_t prec) {
        Interval r(prec);
        mpfr_set_ui(r.lo(), d, MPFR_RNDD);   // exact for d < 2^62
        mpfr_sqrt(r.lo(), r.lo(), MPFR_RNDD);
        mpfr_set_ui(r.hi(), d, MPFR_RNDU);
        mpfr_sqrt(r.hi(), r.hi(), MPFR_RNDU);
        return r;
    }

    static Interval golden(mpfr_prec_t prec) {
        Interval r = sqrt_ui(5, prec);
        mpfr_add_ui(r.lo(), r.lo(), 1, MPFR_RNDD);
        mpfr_div_2ui(r.lo(), r.lo(), 1, MPFR_RNDD);
        mpfr_add_ui(r.hi(), r.hi(), 1, MPFR_RNDU);
        mpfr_div_2ui(r.hi(), r.hi(), 1, MPFR_RNDU);
        return r;
    }

    // Decimal midpoint string (e.g. "3.14159") widened by half an ulp of
    // its last digit, the declared uncertainty.
    static Interval from_decimal(const std::string& digits,
                                 unsigned frac_digits, mpfr_prec_t prec) {
        Interval r(prec);
        if (mpfr_set_str(r.lo(), digits.c_str(), 10, MPFR_RNDD) != 0 ||
            mpfr_set_str(r.hi(), digits.c_str(), 10, MPFR_RNDU) != 0)
            throw RangeError("invalid decimal literal: " + digits);
        BigFloat hw(prec);
        mpfr_ui_pow_ui(hw.get(), 10, frac_digits, MPFR_RNDD);
        mpfr_ui_div(hw.get(), 1, hw.get(), MPFR_RNDU);
        mpfr_div_2ui(hw.get(), hw.get(), 1, MPFR_RNDU);
        mpfr_sub(r.lo(), r.lo(), hw.get(), MPFR_RNDD);
        mpfr_add(r.hi(), r.hi(), hw.get(), MPFR_RNDU);
        return r;
    }

    void add(const Interval& o) {
        mpfr_add(lo(), lo(), o.lo(), MPFR_RNDD);
        mpfr_add(hi(), hi(), o.hi(), MPFR_RNDU);
    }

    void sub(const Interval& o) {
        // lo' = lo - o.hi, hi' = hi - o.lo; needs a temporary for aliasing.
        mpfr_prec_t prec = mpfr_get_prec(lo());
        Interval r(prec);
        mpfr_sub(r.lo(), lo(), o.hi(), MPFR_RNDD);
        mpfr_sub(r.hi(), hi(), o.lo(), MPFR_RNDU);
        *this = std::move(r);
    }

    // Multiply by an integer scalar (either sign).
    void mul_int(long long c) {
        if (c >= 0) {
            mpfr_mul_si(lo(), lo(), c, MPFR_RNDD);
            mpfr_mul_si(hi(), hi(), c, MPFR_RNDU);
        } else {
            mpfr_prec_t prec = mpfr_get_prec(lo());
            Interval r(prec);
            mpfr_mul_si(r.lo(), hi(), c, MPFR_RNDD);
            mpfr_mul_si(r.hi(), lo(), c, MPFR_RNDU);
            *this = std::move(r);
        }
    }

    // 1/x for intervals with lo > 0.
    void invert_positive() {
        mpfr_prec_t prec = mpfr_get_prec(lo());
        Interval r(prec);
        mpfr_ui_div(r.lo(), 1, hi(), MPFR_RNDD);
        mpfr_ui_div(r.hi(), 1, lo(), MPFR_RNDU);
        *this = std::move(r);
    }

    void add_int(long long c) {
        mpfr_add_si(lo(), lo(), static_cast<long>(c), MPFR_RNDD);
        mpfr_add_si(hi(), hi(), static_cast<long>(c), MPFR_RNDU);
    }

    // Divide by a positive interval (den.lo > 0 required).
    static Interval div(const Interval& num, const Interval& den,
                        mpfr_prec_t prec) {
        Interval r(prec);
        // Sign-aware: pick endpoint pairings that bound the quotient.
        if (mpfr_sgn(num.lo()) >= 0) {
            mpfr_div(r.lo(), num.lo(), den.hi(), MPFR_RNDD);
            mpfr_div(r.hi(), num.hi(), den.lo(), MPFR_RNDU);
        } else if (mpfr_sgn(num.hi()) <= 0) {
            mpfr_div(r.lo(), num.lo(), den.lo(), MPFR_RNDD);
            mpfr_div(r.hi(), num.hi(), den.hi(), MPFR_RNDU);
        } else {
            mpfr_div(r.lo(), num.lo(), den.lo(), MPFR_RNDD);
            mpfr_div(r.hi(), num.hi(), den.lo(), MPFR_RNDU);
        }
        return r;
    }

    double width() const {
        BigFloat w(mpfr_get_prec(lo()));
        mpfr_sub(w.get(), hi(), lo(), MPFR_RNDU);
        return mpfr_get_d(w.get(), MPFR_RNDU);
    }

    double mid() const {
        BigFloat m(mpfr_get_prec(lo()));
        mpfr_add(m.get(), lo(), hi(), MPFR_RNDN);
        mpfr_div_2ui(m.get(), m.get(), 1, MPFR_RNDN);
        return mpfr_get_d(m.get(), MPFR_RNDN);
    }

    // Floor shared by every point of the interval, if determined.
    std::optional<long long> certified_floor() const {
        BigFloat flo(mpfr_get_prec(lo())), fhi(mpfr_get_prec(hi()));
        mpfr_floor(flo.get(), lo());
        mpfr_floor(fhi.get(), hi());
        if (!mpfr_equal_p(flo.get(), fhi.get())) return std::nullopt;
        if (!mpfr_fits_slong_p(flo.get(), MPFR_RNDN))
            throw RangeError("certified_floor: value out of 64-bit range");
        return mpfr_get_si(flo.get(), MPFR_RNDN);
    }

    // Certified strict comparison of the interval against num/den:
    // true/false when separated, nullopt when the interval straddles it.
    std::optional<bool> certified_less_than(long long num,
                                            unsigned long long den) const {
        mpfr_prec_t prec = mpfr_get_prec(lo());
        Interval q = from_rational(num, den, prec);
        if (mpfr_less_p(hi(), q.lo())) return true;
        if (mpfr_greaterequal_p(lo(), q.hi())) return false;
        return std::nullopt;
    }

  private:
    BigFloat lo_, hi_;
};

}  // namespace kbt
