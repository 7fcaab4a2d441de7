#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bergman/box_integral.hpp"
#include "bergman/core.hpp"
#include "bergman/dyadic.hpp"
#include "bergman/symbol.hpp"

namespace bergman {

/// Positive function on a domain. Power weights y^t on the half-plane carry
/// their exponent so box integrals can use the closed form.
class Weight {
 public:
  using Fn = std::function<double(std::span<const cplx>)>;

  Weight(Fn fn, std::string name, std::size_t dim = 1);

  static Weight constant(double c = 1.0);
  /// y^t on the half-plane.
  static Weight power(double t);
  /// Product of one-variable weights, one per axis.
  static Weight product(const std::vector<Weight>& factors);

  double operator()(std::span<const cplx> z) const { return fn_(z); }
  double operator()(cplx z) const { return fn_(std::span<const cplx>(&z, 1)); }

  const std::string& name() const noexcept { return name_; }
  std::size_t dim() const noexcept { return dim_; }
  const std::optional<double>& power_exponent() const noexcept { return power_; }

  /// Boundary points where the weight may vanish or blow up; used to grade
  /// box quadrature.
  const std::vector<double>& singular() const noexcept { return singular_; }
  Weight with_singular(std::vector<double> points) const;

  /// omega^e, keeping the power tag.
  Weight pow(double e) const;
  /// sigma = omega^(1-q) with q = p/(p-1).
  Weight dual(double p) const;
  /// One-variable weight obtained by freezing every axis except `axis` at
  /// the coordinates of `frozen`.
  Weight slice(std::size_t axis, const DomainPoint& frozen) const;

 private:
  Fn fn_;
  std::string name_;
  std::size_t dim_ = 1;
  std::optional<double> power_;
  std::vector<double> singular_;
};

/// omega = |f|^p.
Weight weight_from_symbol(const Symbol& f, double p);

/// Box integral of a weight; closed form for power weights when allowed.
BoxIntegral weight_box_integral(const Weight& w, const CarlesonBox& Q, double alpha,
                                const BoxRule& rule = {}, bool closed_form = true);

struct CharacteristicReport {
  double value = 0.0;
  CarlesonBox extremal = CarlesonBox::halfplane({0.0, 1.0});
  /// Describes the enumerated family.
  std::string resolution;
  /// The value is a maximum over a finite family, so a lower bound for the
  /// supremum.
  bool lower_bound = true;
  std::vector<double> per_box;
};

struct CharacteristicOptions {
  BoxRule rule;
  /// Use closed-form box integrals for power weights.
  bool closed_form = true;
  /// Keep the per-box values in the report.
  bool keep_per_box = false;
};

/// max over the family of (|Q|_w / N)(|Q|_sigma / N)^(p-1) with sigma the
/// dual weight and N = |I|^(2+alpha) on the half-plane, |Q|_alpha on the
/// disc. Throws DualNonIntegrable when a sigma box integral diverges.
CharacteristicReport bb_characteristic(const Weight& w, double p, double alpha,
                                       const std::vector<CarlesonBox>& family,
                                       const CharacteristicOptions& options = {});

/// max over the family of |Q|_omega |Q|_sigma^(p-1) / |Q|_alpha^p.
CharacteristicReport joint_characteristic(const Weight& sigma, const Weight& omega, double p,
                                          double alpha, const std::vector<CarlesonBox>& family,
                                          const CharacteristicOptions& options = {});

/// (1+alpha)^p: joint value of (omega^(1-q), omega) over the bb value.
double normalization_factor(double p, double alpha);

/// Max over axes and frozen coordinates of the one-variable characteristic
/// of the slices.
CharacteristicReport product_bb_check(const Weight& w, double p, const std::vector<double>& alpha,
                                      const std::vector<DomainPoint>& frozen,
                                      const std::vector<CarlesonBox>& family,
                                      const CharacteristicOptions& options = {});

/// |T|_alpha <= |T|_sigma^(1/q) |T|_omega^(1/p) within 1e-10 relative slack,
/// all three integrals on the same nodes.
bool tent_holder_check(const Weight& sigma, const Weight& omega, double p, double alpha,
                       const TentTop& T, int nodes = 16);

/// |Q_I|_alpha / |T_I|_alpha.
double box_top_comparability(double alpha);

}  // namespace bergman
