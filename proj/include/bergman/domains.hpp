#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "bergman/core.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/symbol.hpp"

namespace bergman {

using PointFn = std::function<cplx(std::span<const cplx>)>;

/// Deterministic summation: sequential blocks, pairwise over block totals.
class BlockSum {
 public:
  void add(cplx v);
  cplx total() const;

 private:
  static constexpr std::size_t kBlock = 1024;
  std::vector<cplx> partial_;
  cplx current_{0.0};
  std::size_t count_ = 0;
};

/// Node set of a one-dimensional domain (disc or half-plane) around a focus.
NodeSet axis_nodes(const DomainSpec& axis, const QuadratureRule& rule, const Focus& focus);
Focus default_focus(const DomainSpec& axis);

/// Integral of f against the domain measure (normalized on the disc,
/// y^alpha dx dy on the half-plane, products in several variables). `foci`
/// may hold one focus per axis or be empty.
cplx integrate(const PointFn& f, const DomainSpec& d, const QuadratureRule& rule = {},
               std::span<const Focus> foci = {});
cplx integrate(const Symbol& f, const DomainSpec& d, const QuadratureRule& rule = {},
               std::span<const Focus> foci = {});

struct IntegralEstimate {
  cplx value;
  /// |I(2n) - I(n)|, reported alongside the refined value.
  double error;
};
IntegralEstimate integrate_with_estimate(const PointFn& f, const DomainSpec& d,
                                         const QuadratureRule& rule = {},
                                         std::span<const Focus> foci = {});

/// (integral |f|^p)^(1/p).
double lp_norm(const PointFn& f, double p, const DomainSpec& d, const QuadratureRule& rule = {},
               std::span<const Focus> foci = {});
double lp_norm(const Symbol& f, double p, const DomainSpec& d, const QuadratureRule& rule = {},
               std::span<const Focus> foci = {});

/// |z^k|^2 in A^2_alpha of the disc: k! Gamma(alpha+2) / Gamma(k+alpha+2).
double monomial_norm_sq(std::size_t k, double alpha);
/// Square roots of the above for k = 0..n.
std::vector<double> monomial_norms(std::size_t n, double alpha);

enum class GridStrategy { LogHeight, MobiusOrbit, Uniform };
std::string_view to_string(GridStrategy s);
GridStrategy grid_strategy_from_string(std::string_view s);

struct GridOptions {
  /// Heights (half-plane) or boundary distances 1-|z| (disc) span [lo, hi].
  double lo = 0.01;
  double hi = 100.0;
  /// Half-width of the x-range for uniform half-plane sampling.
  double x_half = 10.0;
};

struct SampleGrid {
  std::vector<DomainPoint> points;
  GridStrategy strategy = GridStrategy::LogHeight;
  std::uint64_t seed = 0;
  GridOptions options;
};

SampleGrid sample_grid(const DomainSpec& d, GridStrategy strategy, std::size_t count,
                       std::uint64_t seed, const GridOptions& options = {});

/// Uniform double in [0, 1) from a 64-bit engine, independent of the
/// standard library's distribution implementation.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace bergman
