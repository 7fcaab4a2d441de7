#include "bergman/kernels.hpp"

#include <cmath>

#include "bergman/domains.hpp"

namespace bergman {

KernelSpec::KernelSpec(DomainSpec d, DomainPoint pole) : domain(std::move(d)), w(std::move(pole)) {
  require(is_interior(domain, w), "kernel pole must be an interior point of the domain");
}

namespace {

cplx axis_kernel(bool bounded, double alpha, cplx z, cplx w) {
  // Principal branch: 1 - z conj(w) has positive real part on the disc and
  // z - conj(w) positive imaginary part on the half-plane.
  const cplx base = bounded ? 1.0 - z * std::conj(w) : z - std::conj(w);
  const double s = 2.0 + alpha;
  if (s == std::floor(s) && s <= 64.0) {
    cplx acc = 1.0;
    for (int k = 0; k < static_cast<int>(s); ++k) acc *= base;
    return 1.0 / acc;
  }
  return std::pow(base, -s);
}

double axis_norm_sq(bool bounded, double alpha, cplx w) {
  if (bounded) return std::pow(1.0 - std::norm(w), -(2.0 + alpha));
  return halfplane_kernel_constant(alpha) * std::pow(w.imag(), -(2.0 + alpha));
}

}  // namespace

cplx kernel_eval(const KernelSpec& spec, const DomainPoint& z) {
  const DomainSpec& d = spec.domain;
  if (z.dim() != d.dim()) fail(ErrorKind::DomainMismatch, "point dimension does not match the domain");
  cplx acc = 1.0;
  for (std::size_t k = 0; k < d.dim(); ++k) acc *= axis_kernel(d.is_bounded(), d.alpha(k), z[k], spec.w[k]);
  return acc;
}

double halfplane_kernel_constant(double alpha) {
  require(alpha > -1.0, "alpha must exceed -1");
  return kPi / ((alpha + 1.0) * std::pow(4.0, alpha + 1.0));
}

double kernel_norm_sq(const KernelSpec& spec) {
  double acc = 1.0;
  for (std::size_t k = 0; k < spec.domain.dim(); ++k) {
    acc *= axis_norm_sq(spec.domain.is_bounded(), spec.domain.alpha(k), spec.w[k]);
  }
  return acc;
}

NormalizedKernel normalize(const KernelSpec& spec) {
  return {spec, 1.0 / std::sqrt(kernel_norm_sq(spec))};
}

std::vector<Focus> kernel_foci(const KernelSpec& spec) {
  std::vector<Focus> out;
  for (std::size_t k = 0; k < spec.domain.dim(); ++k) {
    out.push_back(spec.domain.is_bounded() ? Focus::disc(spec.w[k]) : Focus::halfplane(spec.w[k]));
  }
  return out;
}

double kernel_pnorm(const KernelSpec& spec, double p, const QuadratureRule& rule) {
  require(p > 1.0, "kernel p-norms need p > 1");
  double acc = 1.0;
  for (std::size_t k = 0; k < spec.domain.dim(); ++k) {
    const DomainSpec ax = spec.domain.axis(k);
    const KernelSpec one(ax, DomainPoint{spec.w[k]});
    const NormalizedKernel kn = normalize(one);
    const Focus focus = kernel_foci(one).front();
    const auto f = [&kn, p](std::span<const cplx> z) {
      return cplx{std::pow(std::abs(kn(DomainPoint{z[0]})), p)};
    };
    const IntegralEstimate est = integrate_with_estimate(f, ax, rule, std::span<const Focus>(&focus, 1));
    const double v = est.value.real();
    if (!(v > 0.0) || est.error > 1e-4 * v) {
      fail(ErrorKind::NonConvergence, "kernel p-norm integral did not stabilize under refinement");
    }
    acc *= std::pow(v, 1.0 / p);
  }
  return acc;
}

double kernel_pnorm_exponent(double p, double alpha) {
  require(p > 1.0, "exponent needs p > 1");
  return 0.5 * (2.0 + alpha) * (2.0 / p - 1.0);
}

PointwiseBound pointwise_bound_check(const Symbol& f, double p, const DomainSpec& d, cplx z,
                                     const QuadratureRule& rule) {
  require(d.dim() == 1, "pointwise bound check is one-dimensional");
  require(p >= 1.0, "p must be at least 1");
  const KernelSpec spec(d, DomainPoint{z});
  const NormalizedKernel kn = normalize(spec);
  const Focus focus = kernel_foci(spec).front();
  const auto fk = [&](std::span<const cplx> u) { return f(u) * kn(DomainPoint{u[0]}); };
  const double weighted = lp_norm(fk, p, d, rule, std::span<const Focus>(&focus, 1));
  const double knorm = p > 1.0 ? kernel_pnorm(spec, p, rule)
                               : lp_norm([&kn](std::span<const cplx> u) { return kn(DomainPoint{u[0]}); },
                                         1.0, d, rule, std::span<const Focus>(&focus, 1));
  PointwiseBound out;
  out.lhs = std::pow(std::abs(f(z)), p);
  out.rhs = std::pow(knorm, -p) * std::pow(weighted, p);
  out.ratio = out.lhs / out.rhs;
  return out;
}

}  // namespace bergman
