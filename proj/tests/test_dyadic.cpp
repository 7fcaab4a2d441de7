#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <optional>
#include <random>

#include "bergman/domains.hpp"
#include "bergman/dyadic.hpp"

using namespace bergman;

namespace {

// Exhaustive cover search: scan levels and translations directly from the
// grid formula, both shifts.
std::optional<Interval> brute_force_cover(const Interval& I, GridShift* which = nullptr) {
  const int lo = static_cast<int>(std::floor(std::log2(I.length))) - 1;
  for (int j = lo; j <= lo + 6; ++j) {
    const double len = std::ldexp(1.0, j);
    if (len > 6.0 * I.length) break;
    for (GridShift beta : {GridShift::Zero, GridShift::Third}) {
      const double s = (j % 2 == 0 ? 1.0 : -1.0) * (beta == GridShift::Zero ? 0.0 : 1.0 / 3.0);
      const auto m0 = static_cast<long>(std::floor(I.left / len)) - 3;
      for (long m = m0; m <= m0 + 6; ++m) {
        Interval J{len * (m + s), len};
        if (J.left <= I.left && I.right() <= J.right()) {
          if (which) *which = beta;
          return J;
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("grid membership") {
  auto d = grid_member(GridShift::Zero, 0, 0.4);
  CHECK(d.translation == 0);
  CHECK(d.interval() == Interval{0.0, 1.0});

  d = grid_member(GridShift::Third, 0, 0.0);
  CHECK(d.translation == -1);
  CHECK(std::abs(d.interval().left + 2.0 / 3.0) < 1e-15);
  CHECK(d.interval().length == 1.0);

  d = grid_member(GridShift::Third, 1, 0.0);
  CHECK(d.translation == 0);
  CHECK(std::abs(d.interval().left + 2.0 / 3.0) < 1e-15);
  CHECK(std::abs(d.interval().right() - 4.0 / 3.0) < 1e-15);
}

TEST_CASE("grid membership contains the point and nests") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5000; ++trial) {
    const double x = (unit_uniform(rng) - 0.5) * 1e3;
    const int j = static_cast<int>(unit_uniform(rng) * 30) - 15;
    for (GridShift beta : {GridShift::Zero, GridShift::Third}) {
      auto a = grid_member(beta, j, x);
      auto b = grid_member(beta, j + 1, x);
      CHECK(a.interval().contains(x));
      CHECK(a.interval().length == std::ldexp(1.0, j));
      const Interval ai = a.interval(), bi = b.interval();
      CHECK(bi.left <= ai.left + 1e-9 * std::abs(ai.left));
      CHECK(ai.right() <= bi.right() + 1e-9 * std::abs(bi.right()));
      CHECK(a.parent() == b);
    }
  }
}

TEST_CASE("dominating dyadic interval") {
  auto J = dominating_dyadic({0.0, 1.0});
  CHECK(J.beta == GridShift::Zero);
  CHECK(J.interval() == Interval{0.0, 1.0});

  const Interval I1{-0.1, 0.2};
  auto J1 = dominating_dyadic(I1);
  CHECK(J1.interval().contains(I1));
  CHECK(J1.interval().length <= 1.2);
  auto oracle1 = brute_force_cover(I1);
  REQUIRE(oracle1);
  CHECK(J1.interval().length == oracle1->length);

  const Interval I2{0.9, 0.2};
  GridShift which = GridShift::Zero;
  auto oracle2 = brute_force_cover(I2, &which);
  REQUIRE(oracle2);
  CHECK(which == GridShift::Third);
  auto J2 = dominating_dyadic(I2);
  CHECK(J2.beta == GridShift::Third);
  CHECK(J2.interval().contains(I2));
}

TEST_CASE("one-third trick covers random intervals across six decades") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10000; ++trial) {
    const double L = 1e-3 * std::pow(10.0, 6.0 * unit_uniform(rng));
    const Interval I{(unit_uniform(rng) - 0.5) * 100.0, L};
    auto J = dominating_dyadic(I);
    CHECK(J.interval().contains(I));
    CHECK(J.interval().length / L <= 6.0);
    auto oracle = brute_force_cover(I);
    REQUIRE(oracle);
    CHECK(J.interval().length == oracle->length);
  }
}

TEST_CASE("boxes, centers and tops") {
  auto Q = box_of({0.0, 1.0});
  CHECK(center_of(Q) == cplx{0.5, 0.5});
  auto T = top_of(Q);
  CHECK(T.lower() == 0.5);
  CHECK(T.upper() == 1.0);
  CHECK(T.contains({0.3, 0.75}));
  CHECK_FALSE(T.contains({0.3, 0.25}));
  CHECK(Q.contains({0.999, 0.999}));
  CHECK_FALSE(Q.contains({1.0, 0.5}));
  CHECK(std::abs(Q.measure(0.0) - 1.0) < 1e-15);
  for (double alpha : {-0.5, 0.0, 1.0}) {
    auto Q3 = box_of({2.0, 3.0});
    CHECK(std::abs(Q3.measure(alpha) - std::pow(3.0, 2.0 + alpha) / (1.0 + alpha)) < 1e-12);
    CHECK(std::abs(Q3.measure(alpha) / top_of(Q3).measure(alpha) - box_top_ratio(alpha)) < 1e-12);
  }
  CHECK(box_top_ratio(0.0) == 2.0);
  CHECK(std::abs(box_top_ratio(1.0) - 4.0 / 3.0) < 1e-15);
  CHECK(box_top_ratio(-0.999999) > 1e5);

  auto D = CarlesonBox::disc(0.0, 1.0);
  CHECK(D.contains(cplx{0.5, 0.0}));
  CHECK(D.contains(cplx{-0.5, 0.1}));
  CHECK_FALSE(D.contains(cplx{0.0, 0.0}));
  auto D2 = CarlesonBox::disc(0.0, 0.25);
  CHECK(D2.contains(std::polar(0.9, 0.7)));
  CHECK_FALSE(D2.contains(std::polar(0.9, 0.8)));
  CHECK_FALSE(D2.contains(std::polar(0.7, 0.1)));
  CHECK(std::abs(D2.center() - 0.875) < 1e-15);
}

TEST_CASE("disc box measure against a direct integral") {
  // Polar Gauss product over the box itself, density (alpha+1)/(2 pi) t^alpha.
  const GaussRule& g = gauss_legendre(32);
  for (double alpha : {0.0, 1.5, 3.0}) {
    for (double L : {1.0, 0.3, 0.01}) {
      auto Q = CarlesonBox::disc(1.0, L);
      const double r0 = 1.0 - L, th0 = 2.0 * kPi * Q.interval().left, dth = 2.0 * kPi * L;
      double v = 0;
      for (std::size_t i = 0; i < g.x.size(); ++i) {
        const double r = r0 + 0.5 * L * (g.x[i] + 1.0);
        const double t = 1.0 - r * r;
        for (std::size_t k = 0; k < g.x.size(); ++k) {
          const double th = th0 + 0.5 * dth * (g.x[k] + 1.0);
          CHECK(Q.contains(std::polar(r, th)));
          v += 0.25 * L * dth * g.w[i] * g.w[k] * (alpha + 1.0) / (2.0 * kPi) * std::pow(t, alpha) * r * 2.0;
        }
      }
      CHECK(std::abs(v - Q.measure(alpha)) < 1e-6 * Q.measure(alpha));
    }
  }
}

TEST_CASE("kernel distance comparability on boxes") {
  std::mt19937_64 rng(3);
  double worst = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    const double L = std::pow(10.0, 4.0 * unit_uniform(rng) - 2.0);
    const Interval I{(unit_uniform(rng) - 0.5) * 10.0, L};
    const cplx w{I.left + L * unit_uniform(rng), L * unit_uniform(rng)};
    const cplx c = center_of(box_of(I));
    const double yI = c.imag();
    const double d2 = std::norm(c - std::conj(w));
    CHECK(d2 > yI * yI);
    CHECK(d2 <= 10.0 * yI * yI);
    worst = std::max(worst, d2 / (yI * yI));
  }
  // The sharp constant is approached near the top corners.
  CHECK(worst > 9.0);
}

TEST_CASE("tops tile the half-plane") {
  CHECK(tiling_check(GridShift::Zero, {}));
  CHECK(tiling_check(GridShift::Third, {}));
  TilingWindow narrow;
  narrow.max_level = 1;
  CHECK_FALSE(tiling_check(GridShift::Zero, narrow));

  // Adjacent tops at one level, and a top with its parent's top.
  auto a = DyadicInterval{GridShift::Zero, 0, 0};
  auto b = DyadicInterval{GridShift::Zero, 0, 1};
  auto ta = top_of(box_of(a.interval()));
  auto tb = top_of(box_of(b.interval()));
  auto tp = top_of(box_of(a.parent().interval()));
  CHECK_FALSE(tb.contains({0.5, 0.75}));
  CHECK(ta.contains({0.5, 0.75}));
  CHECK(ta.upper() <= tp.lower());
}

TEST_CASE("box families") {
  FamilySpec spec;
  spec.min_level = -2;
  spec.max_level = 2;
  spec.random_count = 10;
  auto fam = halfplane_family(spec);
  CHECK(fam.size() == 5 * 2 * 5 + 10);
  spec.min_length = 1.0;
  for (const auto& Q : halfplane_family(spec)) CHECK(Q.length() >= 1.0);
  auto df = disc_family(3, 5, 1);
  CHECK(df.size() == 1 + 2 + 4 + 8 + 5);
}

TEST_CASE("box intersection measure") {
  auto A = box_of({0.0, 2.0});
  auto B = box_of({1.0, 1.0});
  CHECK(std::abs(box_intersection_measure(A, B, 0.0) - 1.0) < 1e-15);
  CHECK(box_intersection_measure(A, box_of({5.0, 1.0}), 0.0) == 0.0);
  CHECK(std::abs(box_intersection_measure(A, B, 1.0) - 0.5) < 1e-15);
}
