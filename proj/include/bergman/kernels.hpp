#pragma once

#include <vector>

#include "bergman/core.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/symbol.hpp"

namespace bergman {

/// Reproducing kernel with pole parameter w. Evaluation uses the analytic
/// convention: (1 - z conj(w))^-(2+alpha) on the disc, (z - conj(w))^-(2+alpha)
/// on the half-plane, products over the axes in several variables.
struct KernelSpec {
  DomainSpec domain;
  DomainPoint w;

  KernelSpec(DomainSpec d, DomainPoint pole);
};

cplx kernel_eval(const KernelSpec& spec, const DomainPoint& z);

/// Exact |K_w|^2_{2,alpha}.
double kernel_norm_sq(const KernelSpec& spec);

/// |K_{iv}|^2 on the half-plane equals this constant times v^-(2+alpha):
/// pi / ((alpha+1) 4^(alpha+1)).
double halfplane_kernel_constant(double alpha);

/// k_w = K_w / |K_w|.
struct NormalizedKernel {
  KernelSpec base;
  double constant;

  cplx operator()(const DomainPoint& z) const { return constant * kernel_eval(base, z); }
};

NormalizedKernel normalize(const KernelSpec& spec);

/// Numeric |k_w|_{p,alpha}. Product domains factor over the axes. Throws
/// NonConvergence when the refined rule disagrees by more than 1e-4.
double kernel_pnorm(const KernelSpec& spec, double p, const QuadratureRule& rule = {});

/// ((2+alpha)/2)(2/p - 1).
double kernel_pnorm_exponent(double p, double alpha);

struct PointwiseBound {
  double lhs;
  double rhs;
  double ratio;
};

/// |f(z)|^p against |k_z|_p^-p |f k_z|_p^p on a one-dimensional domain.
PointwiseBound pointwise_bound_check(const Symbol& f, double p, const DomainSpec& d,
                                     cplx z, const QuadratureRule& rule = {});

/// Quadrature foci at the pole of a kernel, one per axis.
std::vector<Focus> kernel_foci(const KernelSpec& spec);

}  // namespace bergman
