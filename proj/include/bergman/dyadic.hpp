#pragma once

#include <cstdint>
#include <vector>

#include "bergman/core.hpp"

namespace bergman {

/// Half-open interval [left, left + length).
struct Interval {
  double left = 0.0;
  double length = 1.0;

  double right() const noexcept { return left + length; }
  double center() const noexcept { return left + 0.5 * length; }
  bool contains(double x) const noexcept { return left <= x && x < right(); }
  bool contains(const Interval& o) const noexcept { return left <= o.left && o.right() <= right(); }
  bool operator==(const Interval&) const = default;
};

/// The two shifted grids.
enum class GridShift { Zero, Third };

double shift_value(GridShift beta) noexcept;

/// 2^j ([0,1) + m + (-1)^j beta).
struct DyadicInterval {
  GridShift beta = GridShift::Zero;
  int level = 0;
  std::int64_t translation = 0;

  Interval interval() const;
  DyadicInterval parent() const;
  bool operator==(const DyadicInterval&) const = default;
};

/// The interval of the given grid and level that contains x.
DyadicInterval grid_member(GridShift beta, int level, double x);

/// Smallest interval from either grid that contains `I` with |J| <= 6|I|,
/// searching the levels ceil(log2 |I|) .. ceil(log2 |I|) + 3. Throws NoCover
/// when the window is exhausted.
DyadicInterval dominating_dyadic(const Interval& I);

/// Carleson box over an interval of the real line, or over an arc of the
/// circle. Arc lengths are normalized so the full circle has length 1.
class CarlesonBox {
 public:
  static CarlesonBox halfplane(const Interval& I);
  /// Arc centered at angle `center_angle` (radians) with normalized length
  /// in (0, 1]; the box is {1 - length < r < 1} over the arc.
  static CarlesonBox disc(double center_angle, double length);

  DomainKind domain() const noexcept { return domain_; }
  bool on_disc() const noexcept { return domain_ == DomainKind::Disc; }
  /// Base interval (half-plane) or [start, start + length) in normalized
  /// angle units (disc).
  const Interval& interval() const noexcept { return interval_; }
  double length() const noexcept { return interval_.length; }
  double center_angle() const noexcept;

  bool contains(cplx z) const;
  /// Exact |Q|_alpha: L^(2+alpha)/(1+alpha) on the half-plane and
  /// L (2L - L^2)^(1+alpha) for the normalized disc measure.
  double measure(double alpha) const;
  /// x_I + i|I|/2, or the point at radius 1 - |I|/2 over the arc midpoint.
  cplx center() const;

  bool operator==(const CarlesonBox&) const = default;

 private:
  CarlesonBox(DomainKind d, Interval I) : domain_(d), interval_(I) {}
  DomainKind domain_;
  Interval interval_;
};

inline CarlesonBox box_of(const Interval& I) { return CarlesonBox::halfplane(I); }
inline cplx center_of(const CarlesonBox& Q) { return Q.center(); }

/// Upper half {x in I, |I|/2 < y <= |I|} of a half-plane box.
struct TentTop {
  CarlesonBox box;

  bool contains(cplx z) const;
  double measure(double alpha) const;
  double lower() const noexcept { return 0.5 * box.length(); }
  double upper() const noexcept { return box.length(); }
};

TentTop top_of(const CarlesonBox& Q);

/// |Q_I|_alpha / |T_I|_alpha = 1 / (1 - 2^-(1+alpha)).
double box_top_ratio(double alpha);

/// Exact |Q_A cap Q_B|_alpha for two half-plane boxes.
double box_intersection_measure(const CarlesonBox& a, const CarlesonBox& b, double alpha);

struct TilingWindow {
  int min_level = -2;
  int max_level = 2;
  Interval x{0.0, 1.0};
  double y_low = 0.25;
  double y_high = 4.0;
};

/// True when the tops of the grid within the level window are pairwise
/// disjoint and their closures cover the window rectangle.
bool tiling_check(GridShift beta, const TilingWindow& window);

/// Enumeration window for box families.
struct FamilySpec {
  int min_level = -20;
  int max_level = 20;
  /// Translations |m| <= max_translation on each level, both grids.
  int max_translation = 2;
  /// Random non-dyadic intervals with log-uniform lengths.
  std::size_t random_count = 1000;
  double random_min_length = 1e-3;
  double decades = 6.0;
  /// Centers of random intervals are drawn from [-center_spread, center_spread]
  /// times the length.
  double center_spread = 4.0;
  std::uint64_t seed = 1;
  /// Boxes shorter than this are excluded.
  double min_length = 0.0;
};

std::vector<CarlesonBox> halfplane_family(const FamilySpec& spec);
/// Dyadic arcs down to 2^-max_level (all translations while there are at
/// most 64 of them) plus random arcs.
std::vector<CarlesonBox> disc_family(int max_level, std::size_t random_count, std::uint64_t seed);

}  // namespace bergman
