#pragma once

#include <cstddef>
#include <vector>

#include "bergman/core.hpp"

namespace bergman {

/// Truncated Taylor series about 0 in one complex variable. All arithmetic
/// keeps coefficients up to a fixed degree; operands must share it.
class PowerSeries {
 public:
  PowerSeries() = default;
  explicit PowerSeries(std::size_t degree) : c_(degree + 1, cplx{0.0}) {}
  PowerSeries(std::size_t degree, cplx constant);

  static PowerSeries variable(std::size_t degree);

  std::size_t degree() const noexcept { return c_.empty() ? 0 : c_.size() - 1; }
  cplx operator[](std::size_t k) const { return k < c_.size() ? c_[k] : cplx{0.0}; }
  cplx& operator[](std::size_t k) { return c_.at(k); }
  const std::vector<cplx>& coefficients() const noexcept { return c_; }

  PowerSeries& operator+=(const PowerSeries& o);
  PowerSeries& operator-=(const PowerSeries& o);
  PowerSeries& operator*=(cplx s);

  friend PowerSeries operator+(PowerSeries a, const PowerSeries& b) { return a += b; }
  friend PowerSeries operator-(PowerSeries a, const PowerSeries& b) { return a -= b; }
  friend PowerSeries operator*(PowerSeries a, cplx s) { return a *= s; }
  friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b);
  friend PowerSeries operator/(const PowerSeries& a, const PowerSeries& b);
  PowerSeries operator-() const { return *this * cplx{-1.0}; }

  /// Principal-branch real power; requires a nonzero constant term. The
  /// result is the branch continuous from a0^s at the origin.
  PowerSeries pow(double s) const;
  PowerSeries ipow(unsigned n) const;

  /// Substitute `inner` (whose constant term must vanish for exactness at
  /// every order) into this series.
  PowerSeries compose(const PowerSeries& inner) const;

  cplx evaluate(cplx z) const;

 private:
  std::vector<cplx> c_;
};

}  // namespace bergman
