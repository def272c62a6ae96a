// Scalar coefficient field: exact rationals or big floats at a configured
// decimal precision. All series arithmetic in the engine runs on these.
#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace volpic {

enum class Backend { rational, bigfloat };

/// Thrown when two coefficients of different backends meet without an
/// explicit promotion.
struct backend_mismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Transcendental functions evaluable as constants.
enum class TransFn { sin, cos, exp, ln, tan, arccot, cot };

const char* trans_fn_name(TransFn fn);

/// Immutable arbitrary-precision scalar. Rational values are kept in lowest
/// terms with positive denominator; big floats carry their decimal precision
/// (>= 32 digits). Backends never mix silently: promote() is the only bridge.
class Coefficient {
  public:
    Coefficient();                       // rational zero
    Coefficient(long value);             // rational integer
    Coefficient(long num, long den);     // rational num/den
    Coefficient(const Coefficient&);
    Coefficient(Coefficient&&) noexcept;
    Coefficient& operator=(const Coefficient&);
    Coefficient& operator=(Coefficient&&) noexcept;
    ~Coefficient();

    /// Parses "num/den", an integer, or a decimal string, exactly.
    static Coefficient from_string(std::string_view text);
    /// Parses the same forms but lands on the big-float backend.
    static Coefficient float_from_string(std::string_view text, int digits);
    static Coefficient zero(Backend backend, int digits = default_digits);

    Backend backend() const { return backend_; }
    /// Decimal precision of a big float; 0 for rationals.
    int digits() const { return digits_; }

    bool is_zero() const;
    bool is_integer() const;
    int sign() const;

    /// Rational -> big float at the requested precision. Promoting a float
    /// re-rounds it to the requested precision.
    Coefficient promote(int digits) const;
    Coefficient to_backend(Backend backend, int digits) const;

    Coefficient operator-() const;
    friend Coefficient operator+(const Coefficient& x, const Coefficient& y);
    friend Coefficient operator-(const Coefficient& x, const Coefficient& y);
    friend Coefficient operator*(const Coefficient& x, const Coefficient& y);
    friend Coefficient operator/(const Coefficient& x, const Coefficient& y);

    Coefficient abs() const;
    /// Integer power, exponent may be negative for nonzero values.
    Coefficient pow(long exponent) const;

    /// Exact comparison on rationals, value comparison on floats.
    /// Mixing backends throws.
    int cmp(const Coefficient& other) const;
    bool operator==(const Coefficient& other) const { return cmp(other) == 0; }
    bool operator<(const Coefficient& other) const { return cmp(other) < 0; }

    /// True when |x - y| <= tol, all on one backend.
    static bool within(const Coefficient& x, const Coefficient& y,
                       const Coefficient& tol);

    /// 10^e on the given backend.
    static Coefficient pow10(int e, Backend backend, int digits = default_digits);

    /// "num/den" (or plain integer) for rationals; round-trippable decimal
    /// for floats.
    std::string str() const;
    /// Fixed-point decimal with the given number of places, ties away from
    /// zero: -1/30 at 5 places is "-0.03333".
    std::string decimal(int places) const;

    double to_double() const;

    static constexpr int default_digits = 64;
    static constexpr int min_digits = 32;

  private:
    struct Impl;
    Backend backend_;
    int digits_;
    std::unique_ptr<Impl> impl_;

    explicit Coefficient(std::unique_ptr<Impl> impl, Backend backend, int digits);
    friend Coefficient transcendental_constant(TransFn, const Coefficient&, int);
    friend class CoeffAccess;
};

/// Evaluates fn(argument) as a big float correctly rounded to `digits`
/// decimal digits. Throws std::domain_error outside the function's domain.
Coefficient transcendental_constant(TransFn fn, const Coefficient& argument,
                                    int digits);

}  // namespace volpic
