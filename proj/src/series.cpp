#include "bergman/series.hpp"

#include <algorithm>
#include <cmath>

namespace bergman {

PowerSeries::PowerSeries(std::size_t degree, cplx constant) : c_(degree + 1, cplx{0.0}) {
  c_[0] = constant;
}

PowerSeries PowerSeries::variable(std::size_t degree) {
  PowerSeries s(degree);
  if (degree >= 1) s.c_[1] = 1.0;
  return s;
}

PowerSeries& PowerSeries::operator+=(const PowerSeries& o) {
  require(o.c_.size() == c_.size(), "series degree mismatch");
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

PowerSeries& PowerSeries::operator-=(const PowerSeries& o) {
  require(o.c_.size() == c_.size(), "series degree mismatch");
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

PowerSeries& PowerSeries::operator*=(cplx s) {
  for (auto& v : c_) v *= s;
  return *this;
}

PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
  require(a.c_.size() == b.c_.size(), "series degree mismatch");
  const std::size_t n = a.c_.size();
  PowerSeries r(a.degree());
  for (std::size_t i = 0; i < n; ++i) {
    if (a.c_[i] == cplx{0.0}) continue;
    for (std::size_t j = 0; i + j < n; ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
  }
  return r;
}

PowerSeries operator/(const PowerSeries& a, const PowerSeries& b) {
  require(a.c_.size() == b.c_.size(), "series degree mismatch");
  if (b.c_[0] == cplx{0.0}) fail(ErrorKind::ZeroSymbol, "series division by a function vanishing at 0");
  const std::size_t n = a.c_.size();
  PowerSeries q(a.degree());
  for (std::size_t k = 0; k < n; ++k) {
    cplx acc = a.c_[k];
    for (std::size_t j = 1; j <= k; ++j) acc -= b.c_[j] * q.c_[k - j];
    q.c_[k] = acc / b.c_[0];
  }
  return q;
}

PowerSeries PowerSeries::pow(double s) const {
  if (c_[0] == cplx{0.0}) fail(ErrorKind::ZeroSymbol, "real power of a series vanishing at 0");
  const std::size_t n = c_.size();
  PowerSeries r(degree());
  r.c_[0] = std::pow(c_[0], s);
  // Miller's recurrence for b = a^s.
  for (std::size_t k = 1; k < n; ++k) {
    cplx acc{0.0};
    for (std::size_t j = 1; j <= k; ++j) {
      acc += ((s + 1.0) * static_cast<double>(j) - static_cast<double>(k)) * c_[j] * r.c_[k - j];
    }
    r.c_[k] = acc / (static_cast<double>(k) * c_[0]);
  }
  return r;
}

PowerSeries PowerSeries::ipow(unsigned n) const {
  PowerSeries result(degree(), cplx{1.0});
  PowerSeries base = *this;
  while (n > 0) {
    if (n & 1U) result = result * base;
    n >>= 1U;
    if (n > 0) base = base * base;
  }
  return result;
}

PowerSeries PowerSeries::compose(const PowerSeries& inner) const {
  require(inner.c_.size() == c_.size(), "series degree mismatch");
  // Horner in the series ring.
  PowerSeries r(degree());
  for (std::size_t k = c_.size(); k-- > 0;) {
    r = r * inner;
    r.c_[0] += c_[k];
  }
  return r;
}

cplx PowerSeries::evaluate(cplx z) const {
  cplx acc{0.0};
  for (std::size_t k = c_.size(); k-- > 0;) acc = acc * z + c_[k];
  return acc;
}

}  // namespace bergman
