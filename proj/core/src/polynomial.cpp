#include "volpic/polynomial.hpp"

#include <algorithm>
#include <map>

namespace volpic {

unsigned Monomial::total_degree() const {
    unsigned d = 0;
    for (const auto& [v, e] : factors) d += e;
    return d;
}

Monomial Monomial::times(const Monomial& other) const {
    Monomial out;
    auto a = factors.begin(), b = other.factors.begin();
    while (a != factors.end() || b != other.factors.end()) {
        if (b == other.factors.end() || (a != factors.end() && a->first < b->first))
            out.factors.push_back(*a++);
        else if (a == factors.end() || b->first < a->first)
            out.factors.push_back(*b++);
        else {
            out.factors.emplace_back(a->first, a->second + b->second);
            ++a;
            ++b;
        }
    }
    return out;
}

bool Monomial::operator<(const Monomial& other) const {
    unsigned da = total_degree(), db = other.total_degree();
    if (da != db) return da < db;
    return factors < other.factors;
}

Polynomial Polynomial::constant(Coefficient c) {
    Polynomial p;
    if (!c.is_zero()) p.terms_.emplace_back(Monomial{}, std::move(c));
    return p;
}

Polynomial Polynomial::variable(VarId v) {
    Polynomial p;
    p.terms_.emplace_back(Monomial{{{v, 1}}}, Coefficient(1L));
    return p;
}

bool Polynomial::is_constant() const {
    return terms_.size() == 1 && terms_[0].first.factors.empty();
}

unsigned Polynomial::degree() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
    return d;
}

void Polynomial::normalize() {
    std::map<Monomial, Coefficient> acc;
    for (auto& [m, c] : terms_) {
        auto it = acc.find(m);
        if (it == acc.end())
            acc.emplace(std::move(m), std::move(c));
        else
            it->second = it->second + c;
    }
    terms_.clear();
    for (auto& [m, c] : acc)
        if (!c.is_zero()) terms_.emplace_back(m, c);
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
    Polynomial out;
    out.terms_ = terms_;
    out.terms_.insert(out.terms_.end(), other.terms_.begin(), other.terms_.end());
    out.normalize();
    return out;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
    return *this + (-other);
}

Polynomial Polynomial::operator-() const {
    Polynomial out = *this;
    for (auto& [m, c] : out.terms_) c = -c;
    return out;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
    Polynomial out;
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : other.terms_)
            out.terms_.emplace_back(ma.times(mb), ca * cb);
    out.normalize();
    return out;
}

Polynomial Polynomial::scaled(const Coefficient& c) const {
    if (c.is_zero()) return Polynomial();
    Polynomial out = *this;
    for (auto& [m, coeff] : out.terms_) coeff = coeff * c;
    return out;
}

Polynomial Polynomial::pow(unsigned e) const {
    Polynomial out = Polynomial::constant(Coefficient(1L));
    for (unsigned i = 0; i < e; ++i) out = out * *this;
    return out;
}

Coefficient Polynomial::eval(const std::function<Coefficient(VarId)>& value_of,
                             Backend backend, int digits) const {
    Coefficient acc = Coefficient::zero(backend, digits);
    for (const auto& [m, c] : terms_) {
        Coefficient term = c.backend() == backend ? c : c.to_backend(backend, digits);
        for (const auto& [v, e] : m.factors) {
            Coefficient val = value_of(v);
            if (val.backend() != backend) val = val.to_backend(backend, digits);
            term = term * val.pow(e);
        }
        acc = acc + term;
    }
    return acc;
}

void Polynomial::add_term(Monomial m, Coefficient c) {
    terms_.emplace_back(std::move(m), std::move(c));
    normalize();
}

std::string default_var_name(VarId v) {
    if (v == kYVar) return "y";
    if (v == kTimeVar) return "t";
    return "v" + std::to_string(v);
}

std::string Polynomial::str(const std::function<std::string(VarId)>& name_of) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Coefficient mag = c.abs();
        bool neg = c.sign() < 0;
        if (first) {
            if (neg) out += "-";
            first = false;
        } else {
            out += neg ? " - " : " + ";
        }
        bool unit = !m.factors.empty() && mag.backend() == Backend::rational &&
                    mag == Coefficient(1L);
        if (!unit) out += mag.str();
        bool star = !unit;
        for (const auto& [v, e] : m.factors) {
            if (star) out += "*";
            star = true;
            out += name_of(v);
            if (e > 1) out += "^" + std::to_string(e);
        }
    }
    return out;
}

}  // namespace volpic
