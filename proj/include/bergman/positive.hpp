#pragma once

#include <limits>
#include <utility>
#include <vector>

#include "bergman/box_integral.hpp"
#include "bergman/dyadic.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/weights.hpp"

namespace bergman {

/// Nonnegative combination sum c_i 1_{Q_i} of half-plane box indicators.
class BoxFunction {
 public:
  BoxFunction() = default;
  static BoxFunction indicator(const CarlesonBox& Q) { return BoxFunction().add(Q, 1.0); }

  BoxFunction& add(const CarlesonBox& Q, double c);

  double operator()(cplx z) const;
  const std::vector<std::pair<CarlesonBox, double>>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  /// Exact integral over Q against y^alpha dx dy.
  double integral_over(const CarlesonBox& Q, double alpha) const;
  /// Smallest interval containing every base interval.
  Interval support() const;

 private:
  std::vector<std::pair<CarlesonBox, double>> terms_;
};

/// P+ f(z) = int f(w) |z - conj(w)|^-(2+alpha) dV_alpha(w) by quadrature
/// centered at z. Throws NonFiniteIntegrand.
double positive_project(const RealFn& f, double alpha, cplx z, const QuadratureRule& rule = {});

/// P+ of a box function: the x-integral is done in closed form, the height
/// integral by graded Gauss panels.
double positive_project(const BoxFunction& f, double alpha, cplx z, int nodes = 16);

/// Finite family of one shifted grid: levels min_level..max_level, intervals
/// meeting [window_left, window_right).
struct DyadicOperatorSpec {
  GridShift beta = GridShift::Zero;
  double alpha = 0.0;
  int min_level = -40;
  int max_level = 40;
  double window_left = -std::numeric_limits<double>::infinity();
  double window_right = std::numeric_limits<double>::infinity();

  void validate() const;
  bool in_family(const DyadicInterval& I) const;
};

/// Q f(z) = sum over family boxes Q_I containing z of |Q_I|_f / |I|^(2+alpha),
/// with |Q_I|_f = int_{Q_I} f dV_alpha.
double dyadic_apply(const DyadicOperatorSpec& spec, const BoxFunction& f, cplx z);
double dyadic_apply(const DyadicOperatorSpec& spec, const RealFn& f, cplx z, const BoxRule& rule = {});

/// Family intervals whose boxes meet the base interval `span`.
std::vector<DyadicInterval> family_over(const DyadicOperatorSpec& spec, const Interval& span);

/// <Q f, g>_alpha computed as sum_k d_k int_{Q_k} Q f over the terms of g.
double dyadic_pairing(const DyadicOperatorSpec& spec, const BoxFunction& f, const BoxFunction& g);

/// |<Q f, g> - <f, Q g>| relative to the larger side.
double self_adjoint_residual(const DyadicOperatorSpec& spec, const BoxFunction& f, const BoxFunction& g);

/// max over family boxes containing z of int_Q |f| w dV_alpha / int_Q w dV_alpha.
double dyadic_maximal(const Weight& w, const DyadicOperatorSpec& spec, const RealFn& f, cplx z,
                      const BoxRule& rule = {});

struct DominationReport {
  /// Max of P+ f(z) / sum over both grids of Q f(z).
  double max_ratio = 0.0;
  cplx worst{0.0, 1.0};
  std::size_t evaluated = 0;
  /// Samples where both sides vanish.
  std::size_t skipped = 0;
};

DominationReport domination_check(const BoxFunction& f, double alpha, const std::vector<cplx>& samples);

}  // namespace bergman
