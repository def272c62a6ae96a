// Truncated power series in u = t - a: the iterate representation of the
// Picard engine. Fixed order N for a whole computation; every operation
// truncates back to N.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "volpic/coeff.hpp"

namespace volpic {

/// Thrown when two series disagree on expansion point, backend, or order.
struct series_mismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

class Series {
  public:
    /// Zero series of the given order.
    Series(Coefficient point, int order, Backend backend, int digits);
    /// Constant series: c + 0*u + ... + 0*u^N.
    static Series constant(const Coefficient& c, const Coefficient& point, int order);

    int order() const { return static_cast<int>(coeffs_.size()) - 1; }
    const Coefficient& point() const { return point_; }
    Backend backend() const { return coeffs_[0].backend(); }
    int digits() const { return coeffs_[0].digits(); }

    const Coefficient& operator[](int j) const { return coeffs_.at(j); }
    void set(int j, Coefficient c);
    const std::vector<Coefficient>& coeffs() const { return coeffs_; }

    friend Series operator+(const Series& p, const Series& q);
    friend Series operator-(const Series& p, const Series& q);
    /// Truncated Cauchy product.
    friend Series operator*(const Series& p, const Series& q);

    Series scaled(const Coefficient& c) const;
    /// Definite integral from the expansion point: zero constant term,
    /// input degrees 0..N-1 land on 1..N.
    Series integrated() const;
    /// Termwise derivative, top coefficient zero-filled.
    Series differentiated() const;

    /// Horner evaluation at x (same backend as the coefficients).
    Coefficient evaluate(const Coefficient& x) const;

    /// Coefficients as fixed-point decimal strings, ties away from zero.
    std::vector<std::string> rounded_coeffs(int places) const;

    bool identical(const Series& other) const;

  private:
    Coefficient point_;
    std::vector<Coefficient> coeffs_;
};

}  // namespace volpic
