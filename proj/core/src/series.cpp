#include "volpic/series.hpp"

namespace volpic {

namespace {

void require_compatible(const Series& p, const Series& q, const char* op) {
    if (p.backend() != q.backend())
        throw series_mismatch(std::string("series backend mismatch in ") + op);
    if (p.order() != q.order())
        throw series_mismatch(std::string("series order mismatch in ") + op);
    if (!(p.point() == q.point()))
        throw series_mismatch(std::string("series expansion point mismatch in ") + op);
}

}  // namespace

Series::Series(Coefficient point, int order, Backend backend, int digits)
    : point_(std::move(point)) {
    if (order < 0) throw std::invalid_argument("series order must be >= 0");
    coeffs_.assign(order + 1, Coefficient::zero(backend, digits));
}

Series Series::constant(const Coefficient& c, const Coefficient& point, int order) {
    Series s(point, order, c.backend(), c.digits());
    s.coeffs_[0] = c;
    return s;
}

void Series::set(int j, Coefficient c) {
    if (c.backend() != backend())
        throw series_mismatch("coefficient backend mismatch in set");
    coeffs_.at(j) = std::move(c);
}

Series operator+(const Series& p, const Series& q) {
    require_compatible(p, q, "add");
    Series r = p;
    for (int j = 0; j <= r.order(); ++j) r.coeffs_[j] = p.coeffs_[j] + q.coeffs_[j];
    return r;
}

Series operator-(const Series& p, const Series& q) {
    require_compatible(p, q, "sub");
    Series r = p;
    for (int j = 0; j <= r.order(); ++j) r.coeffs_[j] = p.coeffs_[j] - q.coeffs_[j];
    return r;
}

Series operator*(const Series& p, const Series& q) {
    require_compatible(p, q, "mul");
    int n = p.order();
    Series r(p.point(), n, p.backend(), p.digits());
    for (int i = 0; i <= n; ++i) {
        if (p.coeffs_[i].is_zero()) continue;
        for (int j = 0; i + j <= n; ++j) {
            if (q.coeffs_[j].is_zero()) continue;
            r.coeffs_[i + j] = r.coeffs_[i + j] + p.coeffs_[i] * q.coeffs_[j];
        }
    }
    return r;
}

Series Series::scaled(const Coefficient& c) const {
    if (c.backend() != backend())
        throw series_mismatch("scalar backend mismatch in scale");
    Series r = *this;
    for (auto& cj : r.coeffs_) cj = cj * c;
    return r;
}

Series Series::integrated() const {
    int n = order();
    Series r(point_, n, backend(), digits());
    for (int j = 0; j < n; ++j) {
        Coefficient div(static_cast<long>(j) + 1);
        if (backend() == Backend::bigfloat) div = div.promote(digits());
        r.coeffs_[j + 1] = coeffs_[j] / div;
    }
    return r;
}

Series Series::differentiated() const {
    int n = order();
    Series r(point_, n, backend(), digits());
    for (int j = 0; j < n; ++j) {
        Coefficient mul(static_cast<long>(j) + 1);
        if (backend() == Backend::bigfloat) mul = mul.promote(digits());
        r.coeffs_[j] = coeffs_[j + 1] * mul;
    }
    return r;
}

Coefficient Series::evaluate(const Coefficient& x) const {
    Coefficient u = x - point_;
    Coefficient acc = coeffs_.back();
    for (int j = order() - 1; j >= 0; --j) acc = acc * u + coeffs_[j];
    return acc;
}

std::vector<std::string> Series::rounded_coeffs(int places) const {
    std::vector<std::string> out;
    out.reserve(coeffs_.size());
    for (const auto& c : coeffs_) out.push_back(c.decimal(places));
    return out;
}

bool Series::identical(const Series& other) const {
    if (order() != other.order() || backend() != other.backend()) return false;
    if (!(point_ == other.point_)) return false;
    for (int j = 0; j <= order(); ++j)
        if (!(coeffs_[j] == other.coeffs_[j])) return false;
    return true;
}

}  // namespace volpic
