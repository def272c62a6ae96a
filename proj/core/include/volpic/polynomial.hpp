// Sparse multivariate polynomials over the system variables
// {y, v_1..v_r, t}: the right-hand-side language of the augmented system.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "volpic/coeff.hpp"

namespace volpic {

using VarId = std::uint32_t;
inline constexpr VarId kYVar = 0;              // the unknown y
inline constexpr VarId kTimeVar = 0xFFFFFFFF;  // the scalar t (s inside integrands)

/// Product of variable powers; factors sorted by variable id, exponents >= 1.
struct Monomial {
    std::vector<std::pair<VarId, unsigned>> factors;

    unsigned total_degree() const;
    Monomial times(const Monomial& other) const;
    bool operator==(const Monomial& other) const { return factors == other.factors; }
    bool operator<(const Monomial& other) const;
};

class Polynomial {
  public:
    Polynomial() = default;  // zero

    static Polynomial constant(Coefficient c);
    static Polynomial variable(VarId v);

    bool is_zero() const { return terms_.empty(); }
    /// Nonempty only for constant polynomials (zero excluded: use is_zero).
    bool is_constant() const;
    unsigned degree() const;
    std::size_t term_count() const { return terms_.size(); }
    const std::vector<std::pair<Monomial, Coefficient>>& terms() const { return terms_; }

    Polynomial operator+(const Polynomial& other) const;
    Polynomial operator-(const Polynomial& other) const;
    Polynomial operator*(const Polynomial& other) const;
    Polynomial operator-() const;
    Polynomial scaled(const Coefficient& c) const;
    Polynomial pow(unsigned e) const;

    /// Evaluates with scalar values for the variables.
    Coefficient eval(const std::function<Coefficient(VarId)>& value_of,
                     Backend backend, int digits) const;

    /// Deterministic rendering, e.g. "3 - 1/2*v2^2 + y*v1".
    std::string str(const std::function<std::string(VarId)>& name_of) const;

    /// Adds c * m; used by the builders.
    void add_term(Monomial m, Coefficient c);

  private:
    // Canonically sorted, no zero coefficients.
    std::vector<std::pair<Monomial, Coefficient>> terms_;
    void normalize();
};

/// Default variable naming: y, v1..vr, t.
std::string default_var_name(VarId v);

}  // namespace volpic
