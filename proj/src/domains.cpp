#include "bergman/domains.hpp"

#include <cmath>

namespace bergman {

void BlockSum::add(cplx v) {
  current_ += v;
  if (++count_ == kBlock) {
    partial_.push_back(current_);
    current_ = 0.0;
    count_ = 0;
  }
}

cplx BlockSum::total() const {
  std::vector<cplx> level = partial_;
  level.push_back(current_);
  while (level.size() > 1) {
    std::vector<cplx> next;
    for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(level[i] + level[i + 1]);
    if (level.size() % 2 == 1) next.push_back(level.back());
    level.swap(next);
  }
  return level.front();
}

Focus default_focus(const DomainSpec& axis) {
  return axis.is_bounded() ? Focus::none_disc() : Focus::none_halfplane();
}

NodeSet axis_nodes(const DomainSpec& axis, const QuadratureRule& rule, const Focus& focus) {
  require(axis.dim() == 1, "axis nodes need a one-dimensional domain");
  return axis.is_bounded() ? disc_nodes(axis.alpha(0), rule, focus)
                           : halfplane_nodes(axis.alpha(0), rule, focus);
}

namespace {

void check_finite(cplx v) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    fail(ErrorKind::NonFiniteIntegrand, "integrand is not finite at a quadrature node");
  }
}

}  // namespace

cplx integrate(const PointFn& f, const DomainSpec& d, const QuadratureRule& rule,
               std::span<const Focus> foci) {
  require(foci.empty() || foci.size() == d.dim(), "need one focus per axis");
  std::vector<NodeSet> sets;
  for (std::size_t k = 0; k < d.dim(); ++k) {
    const DomainSpec ax = d.axis(k);
    sets.push_back(axis_nodes(ax, rule, foci.empty() ? default_focus(ax) : foci[k]));
  }
  BlockSum sum;
  std::vector<cplx> z(d.dim());
  // Odometer over the tensor product of the per-axis node sets.
  std::vector<std::size_t> idx(d.dim(), 0);
  for (;;) {
    double w = 1.0;
    for (std::size_t k = 0; k < d.dim(); ++k) {
      z[k] = sets[k].z[idx[k]];
      w *= sets[k].w[idx[k]];
    }
    const cplx v = f(z);
    check_finite(v);
    sum.add(w * v);
    std::size_t k = 0;
    while (k < d.dim() && ++idx[k] == sets[k].size()) idx[k++] = 0;
    if (k == d.dim()) break;
  }
  return sum.total();
}

cplx integrate(const Symbol& f, const DomainSpec& d, const QuadratureRule& rule,
               std::span<const Focus> foci) {
  if (f.min_dim() > d.dim()) {
    fail(ErrorKind::DomainMismatch, "symbol needs more variables than the domain has");
  }
  return integrate([&f](std::span<const cplx> z) { return f(z); }, d, rule, foci);
}

IntegralEstimate integrate_with_estimate(const PointFn& f, const DomainSpec& d,
                                         const QuadratureRule& rule,
                                         std::span<const Focus> foci) {
  const cplx coarse = integrate(f, d, rule, foci);
  const cplx fine = integrate(f, d, rule.refined(), foci);
  return {fine, std::abs(fine - coarse)};
}

double lp_norm(const PointFn& f, double p, const DomainSpec& d, const QuadratureRule& rule,
               std::span<const Focus> foci) {
  require(p >= 1.0, "lp_norm needs p >= 1");
  const cplx v = integrate(
      [&f, p](std::span<const cplx> z) { return cplx{std::pow(std::abs(f(z)), p)}; }, d, rule,
      foci);
  return std::pow(v.real(), 1.0 / p);
}

double lp_norm(const Symbol& f, double p, const DomainSpec& d, const QuadratureRule& rule,
               std::span<const Focus> foci) {
  if (f.min_dim() > d.dim()) {
    fail(ErrorKind::DomainMismatch, "symbol needs more variables than the domain has");
  }
  return lp_norm([&f](std::span<const cplx> z) { return f(z); }, p, d, rule, foci);
}

double monomial_norm_sq(std::size_t k, double alpha) {
  double v = 1.0;
  for (std::size_t j = 0; j < k; ++j) {
    v *= static_cast<double>(j + 1) / (static_cast<double>(j) + alpha + 2.0);
  }
  return v;
}

std::vector<double> monomial_norms(std::size_t n, double alpha) {
  std::vector<double> out(n + 1);
  double v = 1.0;
  for (std::size_t k = 0; k <= n; ++k) {
    out[k] = std::sqrt(v);
    v *= static_cast<double>(k + 1) / (static_cast<double>(k) + alpha + 2.0);
  }
  return out;
}

std::string_view to_string(GridStrategy s) {
  switch (s) {
    case GridStrategy::LogHeight: return "log-height";
    case GridStrategy::MobiusOrbit: return "mobius-orbit";
    case GridStrategy::Uniform: return "uniform";
  }
  return "unknown";
}

GridStrategy grid_strategy_from_string(std::string_view s) {
  if (s == "log-height") return GridStrategy::LogHeight;
  if (s == "mobius-orbit") return GridStrategy::MobiusOrbit;
  if (s == "uniform") return GridStrategy::Uniform;
  fail(ErrorKind::InvalidArgument, "unknown grid strategy '" + std::string(s) + "'");
}

namespace {

double geometric_at(double lo, double hi, std::size_t k, std::size_t count) {
  if (count == 1) return std::sqrt(lo * hi);
  const double t = static_cast<double>(k) / static_cast<double>(count - 1);
  return lo * std::pow(hi / lo, t);
}

// One coordinate for a given axis.
cplx sample_axis(bool bounded, GridStrategy strategy, std::size_t k, std::size_t count,
                 std::size_t axis, std::mt19937_64& rng, const GridOptions& o) {
  constexpr double kGolden = 2.399963229728653;
  if (bounded) {
    const double lo = std::clamp(o.lo, 1e-9, 1.0);
    const double hi = std::clamp(o.hi, lo, 1.0);
    switch (strategy) {
      case GridStrategy::LogHeight: {
        const double d = geometric_at(hi, lo, k, count);
        const double theta = kGolden * static_cast<double>(k + axis) + 2.0 * kPi * unit_uniform(rng);
        return std::polar(1.0 - d, theta);
      }
      case GridStrategy::MobiusOrbit: {
        // Hyperbolic translation by b applied k times to the origin.
        const cplx b = std::polar(0.5, 2.0 * kPi * unit_uniform(rng) + 0.7 * static_cast<double>(axis));
        cplx z = 0.0;
        for (std::size_t j = 0; j < k; ++j) z = (z + b) / (1.0 + std::conj(b) * z);
        if (1.0 - std::abs(z) < lo) z *= (1.0 - lo) / std::abs(z);
        return z;
      }
      case GridStrategy::Uniform: {
        const double r = std::sqrt(unit_uniform(rng)) * (1.0 - lo);
        return std::polar(r, 2.0 * kPi * unit_uniform(rng));
      }
    }
  } else {
    const double lo = o.lo, hi = std::max(o.hi, o.lo);
    switch (strategy) {
      case GridStrategy::LogHeight:
        return {0.0, geometric_at(lo, hi, k, count)};
      case GridStrategy::MobiusOrbit: {
        // Dilations composed with a fixed translation: z -> lambda (z + t).
        const double t = (unit_uniform(rng) - 0.5) * 0.5;
        cplx z{0.0, lo};
        const double lambda = count > 1 ? std::pow(hi / lo, 1.0 / static_cast<double>(count - 1)) : 1.0;
        for (std::size_t j = 0; j < k; ++j) z = lambda * (z + t * z.imag());
        return z;
      }
      case GridStrategy::Uniform: {
        const double x = (2.0 * unit_uniform(rng) - 1.0) * o.x_half;
        const double y = lo * std::pow(hi / lo, unit_uniform(rng));
        return {x, y};
      }
    }
  }
  return {};
}

}  // namespace

SampleGrid sample_grid(const DomainSpec& d, GridStrategy strategy, std::size_t count,
                       std::uint64_t seed, const GridOptions& options) {
  require(count >= 1, "sample grid needs at least one point");
  require(options.lo > 0.0 && options.hi >= options.lo, "grid range must satisfy 0 < lo <= hi");
  SampleGrid g;
  g.strategy = strategy;
  g.seed = seed;
  g.options = options;
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<cplx> z(d.dim());
    for (std::size_t a = 0; a < d.dim(); ++a) {
      z[a] = sample_axis(d.is_bounded(), strategy, k, count, a, rng, options);
    }
    g.points.emplace_back(std::move(z));
  }
  return g;
}

}  // namespace bergman
