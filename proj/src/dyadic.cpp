#include "bergman/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "bergman/domains.hpp"

namespace bergman {

double shift_value(GridShift beta) noexcept { return beta == GridShift::Zero ? 0.0 : 1.0 / 3.0; }

namespace {

double signed_shift(GridShift beta, int level) {
  const double b = shift_value(beta);
  return (level % 2 == 0) ? b : -b;
}

}  // namespace

Interval DyadicInterval::interval() const {
  const double len = std::ldexp(1.0, level);
  return {len * (static_cast<double>(translation) + signed_shift(beta, level)), len};
}

DyadicInterval DyadicInterval::parent() const {
  return grid_member(beta, level + 1, interval().center());
}

DyadicInterval grid_member(GridShift beta, int level, double x) {
  require(std::isfinite(x), "grid_member needs a finite point");
  const double len = std::ldexp(1.0, level);
  DyadicInterval d{beta, level, static_cast<std::int64_t>(std::floor(x / len - signed_shift(beta, level)))};
  // Rounding near an endpoint can put x one cell off.
  for (int guard = 0; guard < 2; ++guard) {
    const Interval I = d.interval();
    if (x < I.left) {
      --d.translation;
    } else if (x >= I.right()) {
      ++d.translation;
    } else {
      break;
    }
  }
  return d;
}

DyadicInterval dominating_dyadic(const Interval& I) {
  require(I.length > 0.0 && std::isfinite(I.left) && std::isfinite(I.length),
          "dominating_dyadic needs a nondegenerate interval");
  const int start = static_cast<int>(std::ceil(std::log2(I.length)));
  for (int level = start; level <= start + 3; ++level) {
    if (std::ldexp(1.0, level) > 6.0 * I.length) break;
    for (GridShift beta : {GridShift::Zero, GridShift::Third}) {
      DyadicInterval J = grid_member(beta, level, I.left);
      if (J.interval().contains(I)) return J;
    }
  }
  fail(ErrorKind::NoCover, "no dyadic interval of comparable length covers the interval");
}

CarlesonBox CarlesonBox::halfplane(const Interval& I) {
  require(I.length > 0.0 && std::isfinite(I.left) && std::isfinite(I.length),
          "Carleson box needs a nondegenerate interval");
  return {DomainKind::HalfPlane, I};
}

CarlesonBox CarlesonBox::disc(double center_angle, double length) {
  require(length > 0.0 && length <= 1.0, "disc arcs have normalized length in (0, 1]");
  require(std::isfinite(center_angle), "arc center must be finite");
  double start = center_angle / (2.0 * kPi) - 0.5 * length;
  start -= std::floor(start);
  return {DomainKind::Disc, {start, length}};
}

double CarlesonBox::center_angle() const noexcept {
  return 2.0 * kPi * interval_.center();
}

bool CarlesonBox::contains(cplx z) const {
  if (!on_disc()) return interval_.contains(z.real()) && z.imag() > 0.0 && z.imag() < interval_.length;
  const double r = std::abs(z);
  if (!(r > 1.0 - interval_.length && r < 1.0)) return false;
  double a = std::arg(z) / (2.0 * kPi) - interval_.left;
  a -= std::floor(a);
  return a < interval_.length;
}

double CarlesonBox::measure(double alpha) const {
  const double L = interval_.length;
  if (!on_disc()) return std::pow(L, 2.0 + alpha) / (1.0 + alpha);
  return L * std::pow(2.0 * L - L * L, 1.0 + alpha);
}

cplx CarlesonBox::center() const {
  if (!on_disc()) return {interval_.center(), 0.5 * interval_.length};
  return std::polar(1.0 - 0.5 * interval_.length, center_angle());
}

bool TentTop::contains(cplx z) const {
  require(!box.on_disc(), "tent tops are defined for half-plane boxes");
  return box.interval().contains(z.real()) && z.imag() > lower() && z.imag() <= upper();
}

double TentTop::measure(double alpha) const {
  const double L = box.length();
  return L * (std::pow(upper(), 1.0 + alpha) - std::pow(lower(), 1.0 + alpha)) / (1.0 + alpha);
}

TentTop top_of(const CarlesonBox& Q) {
  require(!Q.on_disc(), "tent tops are defined for half-plane boxes");
  return TentTop{Q};
}

double box_top_ratio(double alpha) {
  require(alpha > -1.0, "alpha must exceed -1");
  return 1.0 / (1.0 - std::pow(2.0, -(1.0 + alpha)));
}

double box_intersection_measure(const CarlesonBox& a, const CarlesonBox& b, double alpha) {
  require(!a.on_disc() && !b.on_disc(), "intersection measure is for half-plane boxes");
  const double lo = std::max(a.interval().left, b.interval().left);
  const double hi = std::min(a.interval().right(), b.interval().right());
  if (hi <= lo) return 0.0;
  const double h = std::min(a.length(), b.length());
  return (hi - lo) * std::pow(h, 1.0 + alpha) / (1.0 + alpha);
}

bool tiling_check(GridShift beta, const TilingWindow& w) {
  require(w.min_level <= w.max_level, "empty level window");
  require(w.y_low > 0.0 && w.y_high > w.y_low, "empty height window");
  struct Top {
    int level;
    Interval I;
  };
  std::vector<Top> tops;
  for (int j = w.min_level; j <= w.max_level; ++j) {
    DyadicInterval d = grid_member(beta, j, w.x.left);
    while (d.interval().left < w.x.right()) {
      tops.push_back({j, d.interval()});
      ++d.translation;
    }
  }
  // Pairwise disjointness: overlap in x and in the height bands (L/2, L].
  for (std::size_t a = 0; a < tops.size(); ++a) {
    for (std::size_t b = a + 1; b < tops.size(); ++b) {
      const double xo = std::min(tops[a].I.right(), tops[b].I.right()) -
                        std::max(tops[a].I.left, tops[b].I.left);
      const double yo = std::min(tops[a].I.length, tops[b].I.length) -
                        std::max(0.5 * tops[a].I.length, 0.5 * tops[b].I.length);
      const double tol = 1e-12 * std::max(tops[a].I.length, tops[b].I.length);
      if (xo > tol && yo > tol) return false;
    }
  }
  // Cover: the height bands reach from 2^(min-1) to 2^max, and every level
  // whose band meets the window covers [x.left, x.right) without gaps.
  if (std::ldexp(1.0, w.min_level - 1) > w.y_low || std::ldexp(1.0, w.max_level) < w.y_high) {
    return false;
  }
  for (int j = w.min_level; j <= w.max_level; ++j) {
    double reach = w.x.left;
    for (const Top& t : tops) {
      if (t.level != j) continue;
      if (t.I.left > reach + 1e-12 * t.I.length) return false;
      reach = std::max(reach, t.I.right());
    }
    if (reach < w.x.right()) return false;
  }
  return true;
}

std::vector<CarlesonBox> halfplane_family(const FamilySpec& spec) {
  require(spec.min_level <= spec.max_level, "empty level window");
  std::vector<CarlesonBox> out;
  for (int j = spec.min_level; j <= spec.max_level; ++j) {
    for (GridShift beta : {GridShift::Zero, GridShift::Third}) {
      for (int m = -spec.max_translation; m <= spec.max_translation; ++m) {
        const Interval I = DyadicInterval{beta, j, m}.interval();
        if (I.length >= spec.min_length) out.push_back(CarlesonBox::halfplane(I));
      }
    }
  }
  std::mt19937_64 rng(spec.seed);
  for (std::size_t k = 0; k < spec.random_count; ++k) {
    const double L = spec.random_min_length * std::pow(10.0, spec.decades * unit_uniform(rng));
    const double c = (2.0 * unit_uniform(rng) - 1.0) * spec.center_spread * L;
    if (L >= spec.min_length) out.push_back(CarlesonBox::halfplane({c - 0.5 * L, L}));
  }
  return out;
}

std::vector<CarlesonBox> disc_family(int max_level, std::size_t random_count, std::uint64_t seed) {
  std::vector<CarlesonBox> out;
  for (int j = 0; j <= max_level; ++j) {
    const double L = std::ldexp(1.0, -j);
    const std::int64_t count = std::int64_t{1} << std::min(j, 6);
    for (std::int64_t m = 0; m < count; ++m) {
      const double start = static_cast<double>(m) / static_cast<double>(count);
      out.push_back(CarlesonBox::disc(2.0 * kPi * (start + 0.5 * L), L));
    }
  }
  std::mt19937_64 rng(seed);
  for (std::size_t k = 0; k < random_count; ++k) {
    const double L = std::pow(10.0, -3.0 * unit_uniform(rng));
    out.push_back(CarlesonBox::disc(2.0 * kPi * unit_uniform(rng), L));
  }
  return out;
}

}  // namespace bergman
