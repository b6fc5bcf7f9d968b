#pragma once

// Exact-enough real numbers: slopes and shifts are immutable expression
// values (named constants, quadratic surds, continued fractions, decimal
// intervals, rationals, and integer-linear combinations of those) that can
// be evaluated to a shrinking interval at any working precision.  Certified
// queries escalate the precision until the answer is determined or the
// budget runs out.
//
// Normalized linear combinations cancel symbolically, so an expression like
// 1*sqrt(2) + (2 - 1*sqrt(2)) is recognized as the exact rational 2.  This
// matters: interval arithmetic alone can never certify the floor of an
// exactly-integer value.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "kbt/bigfloat.hpp"
#include "kbt/errors.hpp"

namespace kbt {

struct Rational {
    long long num = 0;
    unsigned long long den = 1;

    static Rational make(long long n, unsigned long long d) {
        if (d == 0) throw RangeError("Rational: zero denominator");
        unsigned long long g =
            std::gcd(static_cast<unsigned long long>(n < 0 ? -n : n), d);
        if (g > 1) {
            n /= static_cast<long long>(g);
            d /= g;
        }
        return Rational{n, d};
    }

    static Rational from_int(long long n) { return Rational{n, 1}; }

    bool is_zero() const { return num == 0; }
    bool is_integer() const { return den == 1; }

    Rational add(const Rational& o) const {
        __int128 n = static_cast<__int128>(num) * o.den +
                     static_cast<__int128>(o.num) * den;
        unsigned __int128 d =
            static_cast<unsigned __int128>(den) * o.den;
        return reduce128(n, d);
    }

    Rational sub(const Rational& o) const { return add(o.neg()); }
    Rational neg() const { return Rational{-num, den}; }

    Rational scale(long long c) const {
        __int128 n = static_cast<__int128>(num) * c;
        return reduce128(n, den);
    }

    // this < o
    bool less(const Rational& o) const {
        return static_cast<__int128>(num) * o.den <
               static_cast<__int128>(o.num) * den;
    }
    bool equals(const Rational& o) const {
        return num == o.num && den == o.den;
    }

    long long floor() const {
        long long q = num / static_cast<long long>(den);
        if (num % static_cast<long long>(den) != 0 && num < 0) --q;
        return q;
    }

    double to_double() const {
        return static_cast<double>(num) / static_cast<double>(den);
    }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }

  private:
    static Rational reduce128(__int128 n, unsigned __int128 d) {
        bool neg = n < 0;
        unsigned __int128 un = neg ? static_cast<unsigned __int128>(-n)
                                   : static_cast<unsigned __int128>(n);
        // gcd on 128-bit magnitudes
        unsigned __int128 a = un, b = d;
        while (b) {
            unsigned __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            un /= a;
            d /= a;
        }
        if (un > static_cast<unsigned __int128>(INT64_MAX) ||
            d > static_cast<unsigned __int128>(UINT64_MAX))
            throw RangeError("Rational: overflow in exact arithmetic");
        return Rational{neg ? -static_cast<long long>(un)
                            : static_cast<long long>(un),
                        static_cast<unsigned long long>(d)};
    }
};

class Real {
  public:
    static constexpr unsigned kDefaultBudgetBits = 16384;
    static constexpr unsigned kStartPrecBits = 128;

    Real() : Real(rational(0, 1)) {}

    static Real pi() { return Real(std::make_shared<Node>(Kind::Pi)); }
    static Real e() { return Real(std::make_shared<Node>(Kind::E)); }
    static Real golden() { return Real(std::make_shared<Node>(Kind::Golden)); }

    static Real sqrt(unsigned long long d) {
        if (d < 2) throw RangeError("sqrt spec needs d >= 2");
        unsigned long long r = isqrt(d);
        if (r * r == d)
            throw RangeError("sqrt spec rejects perfect square " +
                             std::to_string(d));
        auto n = std::make_shared<Node>(Kind::Sqrt);
        n->d = d;
        return Real(std::move(n));
    }

    // Value with the given partial quotients, continued by repeating the
    // last quotient forever (so cf:1 is the golden ratio, cf:2 is 1+sqrt 2,
    // and cf:8,2 is 7+sqrt 2).
    static Real cf(std::vector<unsigned long long> terms) {
        if (terms.empty()) throw RangeError("cf spec needs at least one term");
        for (std::size_t i = 1; i < terms.size(); ++i)
            if (terms[i] == 0)
                throw RangeError("cf spec: partial quotients a_k (k>=1) must "
                                 "be positive");
        if (terms.back() == 0)
            throw RangeError("cf spec: final quotient must be positive");
        auto n = std::make_shared<Node>(Kind::Cf);
        n->cf = std::move(terms);
        return Real(std::move(n));
    }

    // Decimal literal with declared precision: the value is only known to
    // lie within half an ulp of the last given digit.
    static Real decimal(const std::string& digits) {
        validate_decimal(digits);
        auto n = std::make_shared<Node>(Kind::Decimal);
        n->dec_digits = digits;
        std::size_t dot = digits.find('.');
        n->dec_frac_digits =
            dot == std::string::npos
                ? 0
                : static_cast<unsigned>(digits.size() - dot - 1);
        return Real(std::move(n));
    }

    static Real rational(long long num, unsigned long long den) {
        auto n = std::make_shared<Node>(Kind::Rat);
        n->rat = Rational::make(num, den);
        return Real(std::move(n));
    }

    static Real integer(long long v) { return rational(v, 1); }

    // Spec grammar: pi | e | golden | sqrt:D | cf:a0,a1,... | dec:DIGITS |
    // rat:P/Q | bare decimal literal (exact rational).
    static Real parse(const std::string& spec);

    unsigned budget_bits() const { return budget_; }
    Real with_budget(unsigned bits) const {
        Real r = *this;
        r.budget_ = bits == 0 ? kDefaultBudgetBits : bits;
        return r;
    }

    bool is_rational() const { return node_->kind == Kind::Rat; }
    std::optional<Rational> exact_rational() const {
        if (node_->kind == Kind::Rat) return node_->rat;
        return std::nullopt;
    }

    // n*this + other, symbolically normalized.
    Real linear(long long n, const Real& other) const {
        std::vector<std::pair<long long, Real>> terms;
        terms.emplace_back(n, *this);
        terms.emplace_back(1, other);
        return combine(terms, Rational{0, 1});
    }

    Real add(const Real& o) const { return linear(1, o); }
    Real sub(const Real& o) const {
        std::vector<std::pair<long long, Real>> terms;
        terms.emplace_back(1, *this);
        terms.emplace_back(-1, o);
        return combine(terms, Rational{0, 1});
    }
    Real scale(long long c) const {
        std::vector<std::pair<long long, Real>> terms;
        terms.emplace_back(c, *this);
        return combine(terms, Rational{0, 1});
    }
    Real add_rational(const Rational& q) const {
        std::vector<std::pair<long long, Real>> terms;
        terms.emplace_back(1, *this);
        return combine(terms, q);
    }

    static Real combine(const std::vector<std::pair<long long, Real>>& terms,
                        const Rational& constant);

    Interval eval(mpfr_prec_t prec) const { return eval_node(*node_, prec); }

    // Grammar-style echo of the value, for CSV/JSON columns and logs.
    std::string spec_string() const { return node_str(*node_); }

    double approx() const {
        if (auto q = exact_rational()) return q->to_double();
        return eval(96).mid();
    }

    // The continued-fraction partial quotients when the value was given as
    // one (extended by the repeat-last rule); nullopt otherwise.
    std::optional<std::vector<unsigned long long>> cf_terms() const {
        if (node_->kind == Kind::Cf) return node_->cf;
        return std::nullopt;
    }

    enum class LeafKind { Pi, E, Golden, Sqrt, Cf, Decimal, Rational, Affine };
    LeafKind leaf_kind() const {
        switch (node_->kind) {
            case Kind::Pi: return LeafKind::Pi;
            case Kind::E: return LeafKind::E;
            case Kind::Golden: return LeafKind::Golden;
            case Kind::Sqrt: return LeafKind::Sqrt;
            case Kind::Cf: return LeafKind::Cf;
            case Kind::Decimal: return LeafKind::Decimal;
            case Kind::Rat: return LeafKind::Rational;
            case Kind::Affine: return LeafKind::Affine;
        }
        return LeafKind::Affine;
    }
    unsigned long long sqrt_arg() const { return node_->d; }

    // Width of the tightest interval this expression can ever reach, zero
    // unless a decimal leaf is involved.  Used to fail fast instead of
    // escalating precision against an irreducible uncertainty.
    bool has_decimal_leaf() const { return node_has_decimal(*node_); }

  private:
    enum class Kind { Rat, Pi, E, Golden, Sqrt, Cf, Decimal, Affine };

    struct Node {
        explicit Node(Kind k) : kind(k) {}
        Kind kind;
        Rational rat;                         // Rat payload / Affine constant
        unsigned long long d = 0;             // Sqrt payload
        std::vector<unsigned long long> cf;   // Cf payload
        std::string dec_digits;               // Decimal payload
        unsigned dec_frac_digits = 0;         // Decimal payload
        std::vector<std::pair<long long, std::shared_ptr<const Node>>> terms;
    };

    explicit Real(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static unsigned long long isqrt(unsigned long long v) {
        auto r = static_cast<unsigned long long>(std::sqrt(static_cast<double>(v)));
        while (r > 0 && r * r > v) --r;
        while ((r + 1) * (r + 1) <= v) ++r;
        return r;
    }

    static void validate_decimal(const std::string& s) {
        if (s.empty()) throw RangeError("dec spec: empty literal");
        std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
        bool digit = false, dot = false;
        for (; i < s.size(); ++i) {
            if (s[i] == '.') {
                if (dot) throw RangeError("dec spec: bad literal " + s);
                dot = true;
            } else if (s[i] >= '0' && s[i] <= '9') {
                digit = true;
            } else {
                throw RangeError("dec spec: bad literal " + s);
            }
        }
        if (!digit) throw RangeError("dec spec: bad literal " + s);
    }

    static std::string node_str(const Node& n) {
        switch (n.kind) {
            case Kind::Pi: return "pi";
            case Kind::E: return "e";
            case Kind::Golden: return "golden";
            case Kind::Sqrt: return "sqrt:" + std::to_string(n.d);
            case Kind::Cf: {
                std::string s = "cf:";
                for (std::size_t i = 0; i < n.cf.size(); ++i) {
                    if (i) s += ',';
                    s += std::to_string(n.cf[i]);
                }
                return s;
            }
            case Kind::Decimal: return "dec:" + n.dec_digits;
            case Kind::Rat: return "rat:" + n.rat.str();
            case Kind::Affine: {
                std::string s = "affine(" + n.rat.str();
                for (const auto& [c, child] : n.terms)
                    s += (c < 0 ? "" : "+") + std::to_string(c) + "*" +
                         node_str(*child);
                return s + ")";
            }
        }
        return "?";
    }

    static bool node_has_decimal(const Node& n) {
        if (n.kind == Kind::Decimal) return true;
        for (const auto& [c, child] : n.terms)
            if (node_has_decimal(*child)) return true;
        return false;
    }

    static Interval eval_leaf(const Node& n, mpfr_prec_t prec) {
        switch (n.kind) {
            case Kind::Rat:
                return Interval::from_rational(n.rat.num, n.rat.den, prec);
            case Kind::Pi: return Interval::pi(prec);
            case Kind::E: return Interval::euler_e(prec);
            case Kind::Golden: return Interval::golden(prec);
            case Kind::Sqrt: return Interval::sqrt_ui(n.d, prec);
            case Kind::Cf: return eval_cf(n.cf, prec);
            case Kind::Decimal:
                return Interval::from_decimal(n.dec_digits,
                                              n.dec_frac_digits, prec);
            default: throw RangeError("eval_leaf: not a leaf");
        }
    }

    // Fold [a_0; a_1, ..., a_K, a_K, ...]: the tail x = a_K + 1/x solves to
    // (a_K + sqrt(a_K^2 + 4)) / 2, then x_k = a_k + 1/x_{k+1}.
    static Interval eval_cf(const std::vector<unsigned long long>& a,
                            mpfr_prec_t prec) {
        unsigned long long last = a.back();
        if (last >= (1ULL << 31))
            throw RangeError("cf spec: final quotient too large");
        Interval x = Interval::sqrt_ui(last * last + 4, prec);
        Interval l = Interval::from_int(static_cast<long long>(last), prec);
        x.add(l);
        mpfr_div_2ui(x.lo(), x.lo(), 1, MPFR_RNDD);  // exact halving
        mpfr_div_2ui(x.hi(), x.hi(), 1, MPFR_RNDU);
        for (std::size_t i = a.size(); i-- > 1;) {
            // x = x_i >= 1, so the quotient 1/x is well defined
            x.invert_positive();
            x.add_int(static_cast<long long>(a[i - 1]));
        }
        return x;
    }

    static Interval eval_node(const Node& n, mpfr_prec_t prec) {
        if (n.kind != Kind::Affine) return eval_leaf(n, prec);
        Interval acc =
            Interval::from_rational(n.rat.num, n.rat.den, prec);
        for (const auto& [c, child] : n.terms) {
            Interval t = eval_node(*child, prec);
            t.mul_int(c);
            acc.add(t);
        }
        return acc;
    }

    std::shared_ptr<const Node> node_;
    unsigned budget_ = kDefaultBudgetBits;

    friend class RealOps;
};

// Normalization: flatten nested affines, merge coefficients of structurally
// identical leaves, fold rationals into the constant, and collapse back to
// a plain rational when everything cancels.
inline Real Real::combine(
    const std::vector<std::pair<long long, Real>>& terms,
    const Rational& constant) {
    Rational c = constant;
    std::map<std::string, std::pair<long long, std::shared_ptr<const Node>>>
        merged;
    unsigned budget = kDefaultBudgetBits;

    auto absorb = [&](long long coeff, const std::shared_ptr<const Node>& node,
                      auto&& self) -> void {
        if (coeff == 0) return;
        if (node->kind == Kind::Rat) {
            c = c.add(node->rat.scale(coeff));
            return;
        }
        if (node->kind == Kind::Affine) {
            c = c.add(node->rat.scale(coeff));
            for (const auto& [cc, child] : node->terms) {
                __int128 prod = static_cast<__int128>(cc) * coeff;
                if (prod > INT64_MAX || prod < INT64_MIN)
                    throw RangeError("Real::combine: coefficient overflow");
                self(static_cast<long long>(prod), child, self);
            }
            return;
        }
        auto key = node_str(*node);
        auto it = merged.find(key);
        if (it == merged.end()) {
            merged.emplace(key, std::make_pair(coeff, node));
        } else {
            __int128 sum = static_cast<__int128>(it->second.first) + coeff;
            if (sum > INT64_MAX || sum < INT64_MIN)
                throw RangeError("Real::combine: coefficient overflow");
            it->second.first = static_cast<long long>(sum);
            if (it->second.first == 0) merged.erase(it);
        }
    };

    for (const auto& [coeff, r] : terms) {
        budget = std::max(budget, r.budget_);
        absorb(coeff, r.node_, absorb);
    }

    if (merged.empty()) {
        Real r = rational(c.num, c.den);
        r.budget_ = budget;
        return r;
    }
    if (merged.size() == 1 && c.is_zero() &&
        merged.begin()->second.first == 1) {
        Real r{merged.begin()->second.second};
        r.budget_ = budget;
        return r;
    }
    auto n = std::make_shared<Node>(Kind::Affine);
    n->rat = c;
    for (auto& [key, term] : merged) n->terms.emplace_back(term);
    Real r{std::shared_ptr<const Node>(std::move(n))};
    r.budget_ = budget;
    return r;
}

inline Real Real::parse(const std::string& spec) {
    auto starts = [&](const char* pfx) {
        return spec.rfind(pfx, 0) == 0;
    };
    if (spec == "pi") return pi();
    if (spec == "e") return e();
    if (spec == "golden") return golden();
    if (starts("sqrt:")) {
        try {
            return sqrt(std::stoull(spec.substr(5)));
        } catch (const std::invalid_argument&) {
            throw RangeError("bad sqrt spec: " + spec);
        } catch (const std::out_of_range&) {
            throw RangeError("bad sqrt spec: " + spec);
        }
    }
    if (starts("cf:")) {
        std::vector<unsigned long long> terms;
        std::stringstream ss(spec.substr(3));
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                terms.push_back(std::stoull(tok));
            } catch (...) {
                throw RangeError("bad cf spec: " + spec);
            }
        }
        return cf(std::move(terms));
    }
    if (starts("dec:")) return decimal(spec.substr(4));
    if (starts("rat:")) {
        std::string body = spec.substr(4);
        auto slash = body.find('/');
        try {
            if (slash == std::string::npos)
                return rational(std::stoll(body), 1);
            return rational(std::stoll(body.substr(0, slash)),
                            std::stoull(body.substr(slash + 1)));
        } catch (...) {
            throw RangeError("bad rat spec: " + spec);
        }
    }
    // Bare numeric literal: exact rational over a power of ten.
    validate_decimal(spec);
    std::string digits = spec;
    bool neg = !digits.empty() && digits[0] == '-';
    if (!digits.empty() && (digits[0] == '-' || digits[0] == '+'))
        digits.erase(0, 1);
    auto dot = digits.find('.');
    unsigned long long den = 1;
    if (dot != std::string::npos) {
        std::size_t frac = digits.size() - dot - 1;
        digits.erase(dot, 1);
        for (std::size_t i = 0; i < frac; ++i) {
            if (den > UINT64_MAX / 10)
                throw RangeError("numeric literal too long: " + spec);
            den *= 10;
        }
    }
    long long num;
    try {
        num = std::stoll(digits);
    } catch (...) {
        throw RangeError("bad numeric literal: " + spec);
    }
    return rational(neg ? -num : num, den);
}

// ---------------------------------------------------------------------------
// Certified queries.

class RealOps {
  public:
    // Exactly floor(x); interval evaluation escalated until no integer can
    // hide in the interval, with a symbolic fast path for rationals.
    static long long certified_floor(const Real& x) {
        if (auto q = x.exact_rational()) return q->floor();
        double prev_width = -1.0;
        for (mpfr_prec_t prec = Real::kStartPrecBits;
             prec <= static_cast<mpfr_prec_t>(x.budget_bits()); prec *= 2) {
            Interval iv = x.eval(prec);
            if (auto f = iv.certified_floor()) return *f;
            double w = iv.width();
            if (prev_width >= 0.0 && w > 0.25 * prev_width)
                break;  // irreducible width (decimal spec): escalation is futile
            prev_width = w;
        }
        throw PrecisionExhausted(
            "certified_floor: cannot separate " + x.spec_string() +
            " from an integer within the precision budget");
    }

    // {x} with absolute error < 2^-60 plus a certificate that the value is
    // not within 2^-60 of 0 or 1.
    static double certified_frac(const Real& x) {
        static constexpr double kMargin = 0x1.0p-60;
        if (auto q = x.exact_rational()) {
            Rational f = q->sub(Rational::from_int(q->floor()));
            // distance to 0resp. 1 at least 2^-60
            Rational lo{1, 1ULL << 60};
            Rational hi{(1LL << 60) - 1, 1ULL << 60};
            if (f.less(lo) || hi.less(f))
                throw PrecisionExhausted(
                    "certified_frac: fractional part of " + x.spec_string() +
                    " is within 2^-60 of an integer");
            return f.to_double();
        }
        long long fl = certified_floor(x);
        Real frac = x.add_rational(Rational::from_int(-fl));
        double prev_width = -1.0;
        for (mpfr_prec_t prec = Real::kStartPrecBits;
             prec <= static_cast<mpfr_prec_t>(x.budget_bits()); prec *= 2) {
            Interval iv = frac.eval(prec);
            double w = iv.width();
            if (w < kMargin) {
                auto below = iv.certified_less_than(1, 1ULL << 60);
                auto above = iv.certified_less_than((1LL << 60) - 1,
                                                    1ULL << 60);
                if (below.has_value() && above.has_value()) {
                    if (*below || !*above)
                        throw PrecisionExhausted(
                            "certified_frac: fractional part of " +
                            x.spec_string() + " is within 2^-60 of an integer");
                    return iv.mid();
                }
            }
            if (prev_width >= 0.0 && w > 0.25 * prev_width) break;
            prev_width = w;
        }
        throw PrecisionExhausted("certified_frac: precision budget exhausted for " +
                                 x.spec_string());
    }

    // Certified {x} < num/den.  Thresholds >= 1 are trivially true.
    static bool certified_frac_less(const Real& x, long long num,
                                    unsigned long long den) {
        if (num >= 0 && static_cast<unsigned long long>(num) >= den)
            return true;
        if (num <= 0) return false;  // {x} >= 0; strict < needs positive rhs
        if (auto q = x.exact_rational()) {
            Rational f = q->sub(Rational::from_int(q->floor()));
            return f.less(Rational::make(num, den));
        }
        long long fl = certified_floor(x);
        Real frac = x.add_rational(Rational::from_int(-fl));
        for (mpfr_prec_t prec = Real::kStartPrecBits;
             prec <= static_cast<mpfr_prec_t>(x.budget_bits()); prec *= 2) {
            Interval iv = frac.eval(prec);
            if (auto r = iv.certified_less_than(num, den)) return *r;
        }
        throw PrecisionExhausted("certified_frac_less: budget exhausted for " +
                                 x.spec_string());
    }

    // Exactly ceil(num / den) for den certifiably positive.
    static long long certified_ceil_div(const Real& num, const Real& den) {
        auto qn = num.exact_rational();
        auto qd = den.exact_rational();
        if (qn && qd) {
            if (qd->num <= 0)
                throw RangeError("certified_ceil_div: denominator <= 0");
            __int128 a = static_cast<__int128>(qn->num) * qd->den;
            __int128 b = static_cast<__int128>(qd->num) * qn->den;
            __int128 q = a / b;
            if (a % b != 0 && ((a < 0) == (b < 0))) ++q;
            return static_cast<long long>(q);
        }
        unsigned budget = std::max(num.budget_bits(), den.budget_bits());
        double prev_width = -1.0;
        for (mpfr_prec_t prec = Real::kStartPrecBits;
             prec <= static_cast<mpfr_prec_t>(budget); prec *= 2) {
            Interval n = num.eval(prec);
            Interval d = den.eval(prec);
            if (mpfr_sgn(d.lo()) <= 0) continue;  // escalate until sign is clear
            Interval q = Interval::div(n, d, prec);
            BigFloat clo(prec), chi(prec);
            mpfr_ceil(clo.get(), q.lo());
            mpfr_ceil(chi.get(), q.hi());
            if (mpfr_equal_p(clo.get(), chi.get())) {
                if (!mpfr_fits_slong_p(clo.get(), MPFR_RNDN))
                    throw RangeError("certified_ceil_div: out of range");
                return mpfr_get_si(clo.get(), MPFR_RNDN);
            }
            double w = q.width();
            if (prev_width >= 0.0 && w > 0.25 * prev_width) break;
            prev_width = w;
        }
        throw PrecisionExhausted("certified_ceil_div: budget exhausted");
    }

    // Certified strict x > q.
    static bool certified_greater_than(const Real& x, const Rational& q) {
        if (auto r = x.exact_rational()) return q.less(*r);
        for (mpfr_prec_t prec = Real::kStartPrecBits;
             prec <= static_cast<mpfr_prec_t>(x.budget_bits()); prec *= 2) {
            Interval iv = x.eval(prec);
            Interval qv = Interval::from_rational(q.num, q.den, prec);
            if (mpfr_greater_p(iv.lo(), qv.hi())) return true;
            if (mpfr_lessequal_p(iv.hi(), qv.lo())) return false;
        }
        throw PrecisionExhausted("certified_greater_than: budget exhausted for " +
                                 x.spec_string());
    }
};

}  // namespace kbt
