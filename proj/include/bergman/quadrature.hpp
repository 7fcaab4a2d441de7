#pragma once

#include <cstddef>
#include <vector>

#include "bergman/core.hpp"

namespace bergman {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

/// Cached rule with n points.
const GaussRule& gauss_legendre(int n);

/// Discretization parameters. Half-plane windows are relative to the scale of
/// the focus they are built around: x spans center +- scale*X, y spans
/// (0, scale*Y] with geometric layers down to scale*eps.
struct QuadratureRule {
  enum class Kind { TensorGauss, GradedBoundary };

  Kind kind = Kind::GradedBoundary;
  int nodes = 8;
  double X = 1e6;
  double eps = 1e-6;
  double Y = 1e6;
  double ratio = 0.5;
  /// Minimum number of angular nodes on the disc.
  int angular = 128;

  void validate() const;
  /// Same rule with twice the nodes per panel.
  QuadratureRule refined() const;
};

/// Where a one-dimensional integrand concentrates: a point of the domain and
/// a length scale (half-plane) or the point itself (disc).
struct Focus {
  cplx point{0.0, 1.0};
  double scale = 1.0;

  static Focus halfplane(cplx w) { return {w, w.imag()}; }
  static Focus disc(cplx w) { return {w, 1.0 - std::abs(w)}; }
  static Focus none_halfplane() { return {cplx{0.0, 1.0}, 1.0}; }
  static Focus none_disc() { return {cplx{0.0}, 1.0}; }
};

/// Points and weights; the weights already include the measure density, so
/// an integral is sum w_i f(z_i).
struct NodeSet {
  std::vector<cplx> z;
  std::vector<double> w;
  std::size_t size() const noexcept { return z.size(); }
};

/// Append the n-point Gauss rule on [a, b].
void append_panel(double a, double b, int n, std::vector<double>& x, std::vector<double>& w);

/// Geometric breakpoints a*r^-k from `first` up to `last` (inclusive of both).
std::vector<double> geometric_breaks(double first, double last, double ratio);

/// Nodes for dV_alpha = y^alpha dx dy on the upper half-plane.
NodeSet halfplane_nodes(double alpha, const QuadratureRule& rule, const Focus& focus);
/// Nodes for the normalized measure dnu_alpha on the unit disc.
NodeSet disc_nodes(double alpha, const QuadratureRule& rule, const Focus& focus);

/// One-dimensional nodes for y^alpha dy on (0, top], graded toward 0 with
/// layers down to `floor`; the innermost layer uses u = y^(alpha+1).
void graded_height_nodes(double alpha, double floor, double top, const QuadratureRule& rule,
                         std::vector<double>& y, std::vector<double>& w);

}  // namespace bergman
