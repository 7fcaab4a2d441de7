#pragma once

#include <functional>
#include <vector>

#include "bergman/core.hpp"
#include "bergman/dyadic.hpp"

namespace bergman {

/// Layered rule for integrals over a Carleson box. Heights (half-plane) or
/// t = 1 - |z|^2 (disc) are split into geometric layers toward the boundary;
/// the remainder below the last layer is extrapolated from the ratio of the
/// last two layer totals.
struct BoxRule {
  int nodes = 8;
  /// Uniform panels across the base interval.
  int panels = 4;
  int layers = 48;
  double ratio = 0.5;
  /// A layer ratio at or above this marks the integral as divergent.
  double divergence_ratio = 0.999;
  /// Boundary points (x on the half-plane, angle on the disc) where the
  /// integrand may be singular; panels are graded toward them per layer.
  std::vector<double> singular;

  void validate() const;
};

struct BoxIntegral {
  double value = 0.0;
  /// Extrapolated contribution below the last layer.
  double tail = 0.0;
  bool divergent = false;
};

using RealFn = std::function<double(cplx)>;

/// Integral of a nonnegative f over Q against y^alpha dx dy (half-plane) or
/// the normalized disc measure.
BoxIntegral integrate_box(const RealFn& f, const CarlesonBox& Q, double alpha,
                          const BoxRule& rule = {});

}  // namespace bergman
