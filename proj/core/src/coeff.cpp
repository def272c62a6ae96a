#include "volpic/coeff.hpp"

#include <gmp.h>
#include <mpfr.h>

#include <cassert>
#include <cctype>
#include <cmath>
#include <sstream>

namespace volpic {

namespace {

// Decimal digits -> mpfr bits, with guard bits so the final decimal
// rounding stays within the advertised precision.
mpfr_prec_t bits_for(int digits) {
    return static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873626)) + 32;
}

}  // namespace

const char* trans_fn_name(TransFn fn) {
    switch (fn) {
        case TransFn::sin: return "sin";
        case TransFn::cos: return "cos";
        case TransFn::exp: return "exp";
        case TransFn::ln: return "ln";
        case TransFn::tan: return "tan";
        case TransFn::arccot: return "arccot";
        case TransFn::cot: return "cot";
    }
    return "?";
}

struct Coefficient::Impl {
    bool rational;
    mpq_t q;
    mpfr_t f;

    explicit Impl(bool is_rational, mpfr_prec_t prec = 64) : rational(is_rational) {
        if (rational)
            mpq_init(q);
        else
            mpfr_init2(f, prec);
    }
    ~Impl() {
        if (rational)
            mpq_clear(q);
        else
            mpfr_clear(f);
    }
    Impl(const Impl&) = delete;
    Impl& operator=(const Impl&) = delete;
};

// Access hatch for same-TU helpers.
class CoeffAccess {
  public:
    static const mpq_t& q(const Coefficient& c) { return c.impl_->q; }
    static const mpfr_t& f(const Coefficient& c) { return c.impl_->f; }
    static Coefficient make_rational(std::unique_ptr<Coefficient::Impl> impl) {
        return Coefficient(std::move(impl), Backend::rational, 0);
    }
    static Coefficient make_float(std::unique_ptr<Coefficient::Impl> impl, int digits) {
        return Coefficient(std::move(impl), Backend::bigfloat, digits);
    }
    static std::unique_ptr<Coefficient::Impl> new_rational() {
        return std::make_unique<Coefficient::Impl>(true);
    }
    static std::unique_ptr<Coefficient::Impl> new_float(int digits) {
        return std::make_unique<Coefficient::Impl>(false, bits_for(digits));
    }
};

namespace {

void require_same_backend(const Coefficient& x, const Coefficient& y, const char* op) {
    if (x.backend() != y.backend())
        throw backend_mismatch(std::string("coefficient backend mismatch in ") + op +
                               " (promote explicitly)");
}

int common_digits(const Coefficient& x, const Coefficient& y) {
    return std::max(x.digits(), y.digits());
}

}  // namespace

Coefficient::Coefficient(std::unique_ptr<Impl> impl, Backend backend, int digits)
    : backend_(backend), digits_(digits), impl_(std::move(impl)) {}

Coefficient::Coefficient() : Coefficient(0L) {}

Coefficient::Coefficient(long value)
    : backend_(Backend::rational), digits_(0), impl_(CoeffAccess::new_rational()) {
    mpq_set_si(impl_->q, value, 1);
}

Coefficient::Coefficient(long num, long den)
    : backend_(Backend::rational), digits_(0), impl_(CoeffAccess::new_rational()) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    mpq_set_si(impl_->q, num, den);
    mpq_canonicalize(impl_->q);
}

Coefficient::Coefficient(const Coefficient& other)
    : backend_(other.backend_), digits_(other.digits_) {
    if (backend_ == Backend::rational) {
        impl_ = CoeffAccess::new_rational();
        mpq_set(impl_->q, other.impl_->q);
    } else {
        impl_ = CoeffAccess::new_float(digits_);
        mpfr_set(impl_->f, other.impl_->f, MPFR_RNDN);
    }
}

Coefficient::Coefficient(Coefficient&&) noexcept = default;

Coefficient& Coefficient::operator=(const Coefficient& other) {
    if (this != &other) *this = Coefficient(other);
    return *this;
}

Coefficient& Coefficient::operator=(Coefficient&&) noexcept = default;

Coefficient::~Coefficient() = default;

Coefficient Coefficient::from_string(std::string_view text) {
    std::string s(text);
    auto impl = CoeffAccess::new_rational();
    if (s.find('/') != std::string::npos) {
        if (mpq_set_str(impl->q, s.c_str(), 10) != 0)
            throw std::invalid_argument("bad rational literal: " + s);
        if (mpz_sgn(mpq_denref(impl->q)) == 0)
            throw std::domain_error("rational with zero denominator: " + s);
        mpq_canonicalize(impl->q);
        return CoeffAccess::make_rational(std::move(impl));
    }
    // Integer or decimal literal, parsed exactly.
    bool neg = false;
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = s[i++] == '-';
    std::string int_part, frac_part;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) int_part += s[i++];
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) frac_part += s[i++];
    }
    if (i != s.size() || (int_part.empty() && frac_part.empty()))
        throw std::invalid_argument("bad numeric literal: " + s);
    std::string digits = (int_part.empty() ? "0" : int_part) + frac_part;
    mpz_set_str(mpq_numref(impl->q), digits.c_str(), 10);
    mpz_ui_pow_ui(mpq_denref(impl->q), 10, frac_part.size());
    mpq_canonicalize(impl->q);
    if (neg) mpq_neg(impl->q, impl->q);
    return CoeffAccess::make_rational(std::move(impl));
}

Coefficient Coefficient::float_from_string(std::string_view text, int digits) {
    if (digits < min_digits) digits = min_digits;
    std::string s(text);
    if (s.find('/') != std::string::npos)
        return from_string(s).promote(digits);
    auto impl = CoeffAccess::new_float(digits);
    if (mpfr_set_str(impl->f, s.c_str(), 10, MPFR_RNDN) != 0)
        throw std::invalid_argument("bad float literal: " + s);
    return CoeffAccess::make_float(std::move(impl), digits);
}

Coefficient Coefficient::zero(Backend backend, int digits) {
    if (backend == Backend::rational) return Coefficient(0L);
    auto impl = CoeffAccess::new_float(digits);
    mpfr_set_zero(impl->f, 1);
    return CoeffAccess::make_float(std::move(impl), digits);
}

bool Coefficient::is_zero() const {
    return backend_ == Backend::rational ? mpq_sgn(impl_->q) == 0
                                         : mpfr_zero_p(impl_->f) != 0;
}

bool Coefficient::is_integer() const {
    return backend_ == Backend::rational
               ? mpz_cmp_ui(mpq_denref(impl_->q), 1) == 0
               : mpfr_integer_p(impl_->f) != 0;
}

int Coefficient::sign() const {
    return backend_ == Backend::rational ? mpq_sgn(impl_->q) : mpfr_sgn(impl_->f);
}

Coefficient Coefficient::promote(int digits) const {
    if (digits < min_digits) digits = min_digits;
    auto impl = CoeffAccess::new_float(digits);
    if (backend_ == Backend::rational)
        mpfr_set_q(impl->f, impl_->q, MPFR_RNDN);
    else
        mpfr_set(impl->f, impl_->f, MPFR_RNDN);
    return CoeffAccess::make_float(std::move(impl), digits);
}

Coefficient Coefficient::to_backend(Backend backend, int digits) const {
    if (backend == Backend::bigfloat) return promote(digits);
    if (backend_ == Backend::rational) return *this;
    throw backend_mismatch("cannot demote a big float to the rational backend");
}

Coefficient Coefficient::operator-() const {
    if (backend_ == Backend::rational) {
        auto impl = CoeffAccess::new_rational();
        mpq_neg(impl->q, impl_->q);
        return CoeffAccess::make_rational(std::move(impl));
    }
    auto impl = CoeffAccess::new_float(digits_);
    mpfr_neg(impl->f, impl_->f, MPFR_RNDN);
    return CoeffAccess::make_float(std::move(impl), digits_);
}

Coefficient operator+(const Coefficient& x, const Coefficient& y) {
    require_same_backend(x, y, "add");
    if (x.backend() == Backend::rational) {
        auto impl = CoeffAccess::new_rational();
        mpq_add(impl->q, CoeffAccess::q(x), CoeffAccess::q(y));
        return CoeffAccess::make_rational(std::move(impl));
    }
    int d = common_digits(x, y);
    auto impl = CoeffAccess::new_float(d);
    mpfr_add(impl->f, CoeffAccess::f(x), CoeffAccess::f(y), MPFR_RNDN);
    return CoeffAccess::make_float(std::move(impl), d);
}

Coefficient operator-(const Coefficient& x, const Coefficient& y) {
    require_same_backend(x, y, "sub");
    if (x.backend() == Backend::rational) {
        auto impl = CoeffAccess::new_rational();
        mpq_sub(impl->q, CoeffAccess::q(x), CoeffAccess::q(y));
        return CoeffAccess::make_rational(std::move(impl));
    }
    int d = common_digits(x, y);
    auto impl = CoeffAccess::new_float(d);
    mpfr_sub(impl->f, CoeffAccess::f(x), CoeffAccess::f(y), MPFR_RNDN);
    return CoeffAccess::make_float(std::move(impl), d);
}

Coefficient operator*(const Coefficient& x, const Coefficient& y) {
    require_same_backend(x, y, "mul");
    if (x.backend() == Backend::rational) {
        auto impl = CoeffAccess::new_rational();
        mpq_mul(impl->q, CoeffAccess::q(x), CoeffAccess::q(y));
        return CoeffAccess::make_rational(std::move(impl));
    }
    int d = common_digits(x, y);
    auto impl = CoeffAccess::new_float(d);
    mpfr_mul(impl->f, CoeffAccess::f(x), CoeffAccess::f(y), MPFR_RNDN);
    return CoeffAccess::make_float(std::move(impl), d);
}

Coefficient operator/(const Coefficient& x, const Coefficient& y) {
    require_same_backend(x, y, "div");
    if (y.is_zero()) throw std::domain_error("division by zero");
    if (x.backend() == Backend::rational) {
        auto impl = CoeffAccess::new_rational();
        mpq_div(impl->q, CoeffAccess::q(x), CoeffAccess::q(y));
        return CoeffAccess::make_rational(std::move(impl));
    }
    int d = common_digits(x, y);
    auto impl = CoeffAccess::new_float(d);
    mpfr_div(impl->f, CoeffAccess::f(x), CoeffAccess::f(y), MPFR_RNDN);
    return CoeffAccess::make_float(std::move(impl), d);
}

Coefficient Coefficient::abs() const {
    return sign() < 0 ? -*this : *this;
}

Coefficient Coefficient::pow(long exponent) const {
    if (exponent == 0) {
        return backend_ == Backend::rational ? Coefficient(1L)
                                             : Coefficient(1L).promote(digits_);
    }
    if (backend_ == Backend::bigfloat) {
        auto impl = CoeffAccess::new_float(digits_);
        mpfr_pow_si(impl->f, impl_->f, exponent, MPFR_RNDN);
        return CoeffAccess::make_float(std::move(impl), digits_);
    }
    bool invert = exponent < 0;
    unsigned long e = invert ? -static_cast<unsigned long>(exponent) : exponent;
    if (invert && is_zero()) throw std::domain_error("zero to a negative power");
    auto impl = CoeffAccess::new_rational();
    mpz_pow_ui(mpq_numref(impl->q), mpq_numref(impl_->q), e);
    mpz_pow_ui(mpq_denref(impl->q), mpq_denref(impl_->q), e);
    if (invert) mpq_inv(impl->q, impl->q);
    mpq_canonicalize(impl->q);
    return CoeffAccess::make_rational(std::move(impl));
}

int Coefficient::cmp(const Coefficient& other) const {
    require_same_backend(*this, other, "cmp");
    if (backend_ == Backend::rational) return mpq_cmp(impl_->q, other.impl_->q);
    return mpfr_cmp(impl_->f, other.impl_->f);
}

bool Coefficient::within(const Coefficient& x, const Coefficient& y,
                         const Coefficient& tol) {
    return (x - y).abs().cmp(tol) <= 0;
}

Coefficient Coefficient::pow10(int e, Backend backend, int digits) {
    Coefficient ten(10L);
    if (backend == Backend::bigfloat) ten = ten.promote(digits);
    return ten.pow(e);
}

std::string Coefficient::str() const {
    if (backend_ == Backend::rational) {
        char* raw = mpq_get_str(nullptr, 10, impl_->q);
        std::string out(raw);
        void (*freefn)(void*, size_t);
        mp_get_memory_functions(nullptr, nullptr, &freefn);
        freefn(raw, out.size() + 1);
        return out;
    }
    if (mpfr_zero_p(impl_->f)) return "0";
    if (!mpfr_number_p(impl_->f)) return mpfr_nan_p(impl_->f) ? "nan" : "inf";
    mpfr_exp_t exp10 = 0;
    char* raw = mpfr_get_str(nullptr, &exp10, 10, digits_, impl_->f, MPFR_RNDN);
    std::string mant(raw);
    mpfr_free_str(raw);
    bool neg = !mant.empty() && mant[0] == '-';
    if (neg) mant.erase(0, 1);
    // Trim trailing zeros but keep at least one digit.
    while (mant.size() > 1 && mant.back() == '0') mant.pop_back();
    std::string out;
    long e = static_cast<long>(exp10);  // value = 0.mant * 10^e
    if (e > 0 && e <= digits_ + 4) {
        if (static_cast<std::size_t>(e) >= mant.size())
            out = mant + std::string(e - mant.size(), '0');
        else
            out = mant.substr(0, e) + "." + mant.substr(e);
    } else if (e <= 0 && e > -5) {
        out = "0." + std::string(-e, '0') + mant;
    } else {
        out = mant.substr(0, 1);
        if (mant.size() > 1) out += "." + mant.substr(1);
        out += "e" + std::to_string(e - 1);
    }
    return neg ? "-" + out : out;
}

std::string Coefficient::decimal(int places) const {
    // Scale, round half away from zero to an integer, then re-insert the
    // decimal point.
    std::string intstr;
    if (backend_ == Backend::rational) {
        mpz_t scaled, q, r, den;
        mpz_inits(scaled, q, r, den, nullptr);
        mpz_ui_pow_ui(scaled, 10, places);
        mpz_mul(scaled, scaled, mpq_numref(impl_->q));
        mpz_set(den, mpq_denref(impl_->q));
        mpz_tdiv_qr(q, r, scaled, den);
        mpz_abs(r, r);
        mpz_mul_ui(r, r, 2);
        if (mpz_cmp(r, den) >= 0) {
            if (mpz_sgn(scaled) >= 0)
                mpz_add_ui(q, q, 1);
            else
                mpz_sub_ui(q, q, 1);
        }
        char* raw = mpz_get_str(nullptr, 10, q);
        intstr = raw;
        void (*freefn)(void*, size_t);
        mp_get_memory_functions(nullptr, nullptr, &freefn);
        freefn(raw, intstr.size() + 1);
        mpz_clears(scaled, q, r, den, nullptr);
    } else {
        mpfr_t scaled;
        mpfr_init2(scaled, mpfr_get_prec(impl_->f) + 64);
        mpfr_set(scaled, impl_->f, MPFR_RNDN);
        mpfr_t p10;
        mpfr_init2(p10, 64);
        mpfr_ui_pow_ui(p10, 10, places, MPFR_RNDN);
        mpfr_mul(scaled, scaled, p10, MPFR_RNDN);
        mpfr_round(scaled, scaled);  // ties away from zero
        mpz_t z;
        mpz_init(z);
        mpfr_get_z(z, scaled, MPFR_RNDN);
        char* raw = mpz_get_str(nullptr, 10, z);
        intstr = raw;
        void (*freefn)(void*, size_t);
        mp_get_memory_functions(nullptr, nullptr, &freefn);
        freefn(raw, intstr.size() + 1);
        mpz_clear(z);
        mpfr_clears(scaled, p10, nullptr);
    }
    bool neg = !intstr.empty() && intstr[0] == '-';
    if (neg) intstr.erase(0, 1);
    if (intstr.size() <= static_cast<std::size_t>(places))
        intstr = std::string(places + 1 - intstr.size(), '0') + intstr;
    std::string out = intstr.substr(0, intstr.size() - places);
    if (places > 0) out += "." + intstr.substr(intstr.size() - places);
    if (neg && out.find_first_not_of("0.") != std::string::npos) out = "-" + out;
    return out;
}

double Coefficient::to_double() const {
    return backend_ == Backend::rational ? mpq_get_d(impl_->q)
                                         : mpfr_get_d(impl_->f, MPFR_RNDN);
}

Coefficient transcendental_constant(TransFn fn, const Coefficient& argument,
                                    int digits) {
    if (digits < Coefficient::min_digits) digits = Coefficient::min_digits;
    Coefficient arg = argument.backend() == Backend::bigfloat
                          ? argument
                          : argument.promote(digits + 8);
    // Work with extra digits, then round down to the target.
    mpfr_prec_t prec = bits_for(digits + 8);
    mpfr_t x, r;
    mpfr_init2(x, prec);
    mpfr_init2(r, prec);
    mpfr_set(x, CoeffAccess::f(arg), MPFR_RNDN);
    switch (fn) {
        case TransFn::sin: mpfr_sin(r, x, MPFR_RNDN); break;
        case TransFn::cos: mpfr_cos(r, x, MPFR_RNDN); break;
        case TransFn::exp: mpfr_exp(r, x, MPFR_RNDN); break;
        case TransFn::tan: mpfr_tan(r, x, MPFR_RNDN); break;
        case TransFn::cot: mpfr_cot(r, x, MPFR_RNDN); break;
        case TransFn::ln:
            if (mpfr_sgn(x) <= 0) {
                mpfr_clears(x, r, nullptr);
                throw std::domain_error("ln of a non-positive value");
            }
            mpfr_log(r, x, MPFR_RNDN);
            break;
        case TransFn::arccot: {
            // arccot(x) = pi/2 - atan(x), continuous with range (0, pi).
            mpfr_t halfpi;
            mpfr_init2(halfpi, prec);
            mpfr_const_pi(halfpi, MPFR_RNDN);
            mpfr_div_ui(halfpi, halfpi, 2, MPFR_RNDN);
            mpfr_atan(r, x, MPFR_RNDN);
            mpfr_sub(r, halfpi, r, MPFR_RNDN);
            mpfr_clear(halfpi);
            break;
        }
    }
    if (!mpfr_number_p(r)) {
        mpfr_clears(x, r, nullptr);
        throw std::domain_error(std::string(trans_fn_name(fn)) +
                                " undefined at the given argument");
    }
    auto impl = CoeffAccess::new_float(digits);
    mpfr_set(impl->f, r, MPFR_RNDN);
    mpfr_clears(x, r, nullptr);
    return CoeffAccess::make_float(std::move(impl), digits);
}

}  // namespace volpic
