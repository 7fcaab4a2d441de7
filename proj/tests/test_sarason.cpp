#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "bergman/kernels.hpp"
#include "bergman/sarason.hpp"

using namespace bergman;

namespace {

std::vector<DomainPoint> disc_grid(int radii, int angles) {
  std::vector<DomainPoint> out;
  for (int r = 0; r < radii; ++r) {
    const double rho = 0.9 * r / std::max(1, radii - 1);
    for (int a = 0; a < angles; ++a) out.emplace_back(std::polar(rho, 2.0 * kPi * a / angles));
  }
  return out;
}

std::vector<DomainPoint> halfplane_grid() {
  std::vector<DomainPoint> out;
  for (double y : {0.05, 0.3, 1.0, 4.0}) {
    for (double x : {-3.0, -0.5, 0.0, 0.7, 2.0}) out.emplace_back(cplx{x, y});
  }
  return out;
}

}  // namespace

TEST_CASE("trivial quantities") {
  const Symbol one = Symbol::parse("1");
  const auto grid = disc_grid(3, 4);
  for (double alpha : {0.0, 1.0}) {
    const DomainSpec d = DomainSpec::disc(alpha);
    const SupReport r = sarason_quantity({one, one, 2.0}, d, grid);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.divergent == 0);
    CHECK(r.lower_bound);
  }
  // On the half-plane |k_w|_p |k_w|_q does not depend on w.
  const DomainSpec h = DomainSpec::halfplane(0.0);
  const SupReport r = sarason_quantity({one, one, 4.0}, h, halfplane_grid());
  double lo = 1e300, hi = 0.0;
  for (double v : r.per_point) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi / lo - 1.0 < 1e-5);
  CHECK(hi >= 1.0);
}

TEST_CASE("kernel norm matches the kernel module") {
  const Symbol one = Symbol::parse("1");
  const DomainSpec d = DomainSpec::disc(0.5);
  for (double p : {1.5, 3.0}) {
    const cplx w{0.3, -0.5};
    const NormValue v = weighted_kernel_norm(one, w, p, d);
    CHECK(!v.divergent);
    CHECK(v.value == doctest::Approx(kernel_pnorm(KernelSpec(d, DomainPoint{w}), p)).epsilon(1e-6));
  }
}

TEST_CASE("vanishing symbols are rejected") {
  const Symbol z = Symbol::parse("z");
  CHECK_THROWS_AS(invariant_quantity(z, 2.0, DomainSpec::disc(0.0), disc_grid(2, 4)), Error);
  try {
    invariant_quantity(z, 2.0, DomainSpec::disc(0.0), disc_grid(2, 4));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ZeroSymbol);
  }
}

TEST_CASE("infimum of the product") {
  const DomainSpec d = DomainSpec::disc(0.0);
  const InfReport a = inf_product(Symbol::parse("2+z"), Symbol::parse("1/(2+z)"), d, disc_grid(3, 8));
  CHECK(a.value == doctest::Approx(1.0).epsilon(1e-12));
  const InfReport b = inf_product(Symbol::parse("1+z"), Symbol::parse("1"), d, disc_grid(3, 8));
  CHECK(b.value < 1e-3);
  const InfReport c = inf_product(Symbol::parse("2+z"), Symbol::parse("1"), d, disc_grid(3, 8));
  CHECK(c.value == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(c.value >= 1.0);
}

TEST_CASE("refining the grid never lowers the quantity") {
  const DomainSpec d = DomainSpec::disc(0.0);
  const Symbol f = Symbol::parse("(2+z)/(3-z)");
  double prev = 0.0;
  std::vector<DomainPoint> grid = disc_grid(2, 4);
  for (int levels = 1; levels <= 3; ++levels) {
    const auto extra = boundary_refined_grid(d, levels, 8);
    grid.insert(grid.end(), extra.begin(), extra.end());
    const double v = invariant_quantity(f, 2.0, d, grid).value;
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
  CHECK(std::isfinite(prev));
}

TEST_CASE("change of variables") {
  std::mt19937_64 rng(29);
  const Symbol f = Symbol::parse("(2+z)^0.5");
  for (int trial = 0; trial < 4; ++trial) {
    const cplx a = std::polar(0.7 * unit_uniform(rng), 2.0 * kPi * unit_uniform(rng));
    for (double p : {2.0, 3.0}) {
      const ChangeOfVariables c = change_of_variables_check(f, a, p, 0.5);
      CHECK(std::abs(c.lhs - c.rhs) < 1e-4 * c.rhs);
    }
  }
}

TEST_CASE("pinch for invertible products") {
  const DomainSpec d = DomainSpec::disc(0.0);
  const auto grid = disc_grid(4, 8);
  const VerifierVerdict one = verify_prop_main11({Symbol::parse("1"), Symbol::parse("1"), 2.0}, d, grid, 20);
  CHECK(one.all_hold());
  CHECK(one.inequality("pinch lower").lhs == doctest::Approx(1.0));
  CHECK(one.quantities.at("M1") == doctest::Approx(1.0));
  CHECK(one.quantities.at("pinch max") == doctest::Approx(1.0).epsilon(1e-6));

  const VerifierVerdict v = verify_prop_main11({Symbol::parse("2+z"), Symbol::parse("1/(2+z)"), 2.0}, d, grid, 40);
  CHECK(v.all_hold());
  // |1/(2+z)|_inf = 1 and |2+z|_inf = 3 on the circle.
  CHECK(v.inequality("pinch lower").lhs == doctest::Approx(1.0 / 9.0).epsilon(1e-6));
  CHECK(std::isfinite(v.inequality("pinch upper").rhs));
  CHECK_THROWS_AS(verify_prop_main11({Symbol::parse("2+z"), Symbol::parse("1"), 3.0}, d, grid, 20), Error);
}

TEST_CASE("pinch degenerates for a boundary zero") {
  const DomainSpec d = DomainSpec::disc(0.0);
  const SymbolPair pair{Symbol::parse("1+z"), Symbol::parse("1"), 2.0};
  double prev = 1e300;
  for (int levels = 1; levels <= 3; ++levels) {
    std::vector<DomainPoint> grid;
    for (int k = 1; k <= levels; ++k) grid.emplace_back(cplx{-1.0 + std::pow(10.0, -k)});
    const VerifierVerdict v = verify_prop_main11(pair, d, grid, 40);
    CHECK(v.inequality("pinch lower").lhs == 0.0);
    const double m = v.quantities.at("pinch min");
    CHECK(m < prev);
    prev = m;
  }
  CHECK(prev < 0.05);
}

TEST_CASE("main theorem on the disc") {
  const DomainSpec d = DomainSpec::disc(0.0);
  const auto grid = disc_grid(4, 8);
  const VerifierVerdict one = verify_theorem_main2({Symbol::parse("1"), Symbol::parse("1"), 2.0}, d, grid);
  CHECK(one.all_hold());
  CHECK(one.quantities.at("[f,g]") == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(one.quantities.at("|T_f T_conj(g)|") == doctest::Approx(1.0));
  const VerifierVerdict v = verify_theorem_main2({Symbol::parse("2+z"), Symbol::parse("1/(2+z)"), 2.0}, d, grid);
  CHECK(v.all_hold());
  CHECK(v.notes.empty());
  const std::string json = v.to_json();
  CHECK(json.find("operator upper bound") != std::string::npos);
  CHECK(json.find("lhs_source") != std::string::npos);
}

TEST_CASE("composition identities on the polydisc") {
  const DomainSpec d1 = DomainSpec::disc(0.0);
  const VerifierVerdict c = verify_polydisc_invertibility({Symbol::parse("3"), Symbol::parse("1/3"), 2.0}, d1, 12,
                                                          disc_grid(2, 4));
  CHECK(c.quantities.at("residual A T_h - I") < 1e-14);
  const VerifierVerdict v = verify_polydisc_invertibility({Symbol::parse("2+z"), Symbol::parse("1/(2+z)"), 2.0}, d1,
                                                          40, disc_grid(3, 8));
  CHECK(v.quantities.at("residual A T_h - I") < 1e-6);
  CHECK(v.quantities.at("residual T_h A - I") < 1e-6);
  CHECK(v.quantities.at("eta") == doctest::Approx(1.0));
  CHECK(v.all_hold());
  CHECK(v.inequality("eta chain as printed").informational);

  const DomainSpec d2 = DomainSpec::polydisc({0.0, 0.0});
  std::vector<DomainPoint> grid;
  for (double r : {0.0, 0.5}) grid.push_back(DomainPoint{cplx{r}, cplx{-r}});
  const VerifierVerdict w = verify_polydisc_invertibility({Symbol::parse("2+z1"), Symbol::parse("1/(2+z1)"), 2.0},
                                                          d2, 12, grid);
  CHECK(w.quantities.at("residual A T_h - I") < 1e-5);
  CHECK(w.quantities.at("residual T_h A - I") < 1e-5);
  CHECK(w.quantities.at("s_alpha") == 16.0);
  CHECK(w.all_hold());

  CHECK_THROWS_AS(verify_polydisc_invertibility({Symbol::parse("z"), Symbol::parse("1"), 2.0}, d1, 20,
                                                disc_grid(2, 4)),
                  Error);
  CHECK_THROWS_AS(verify_polydisc_invertibility({Symbol::parse("2+z"), Symbol::parse("1"), 2.0}, d1, 3,
                                                disc_grid(2, 4)),
                  Error);
}

TEST_CASE("half-plane impossibility") {
  const VerifierVerdict decay = verify_halfplane_impossibility(
      {Symbol::parse("((z+i)/(2*i))^(-2)"), Symbol::parse("((z+i)/(2*i))^(-2)"), 2.0}, 0.0);
  CHECK_FALSE(decay.verdicts.at("contradiction triggered"));
  CHECK_FALSE(decay.verdicts.at("inf bounded below"));
  CHECK(std::abs(decay.quantities.at("growth exponent |f|_p |g|_q")) < 1e-2);
  CHECK(decay.all_hold());

  const VerifierVerdict flat =
      verify_halfplane_impossibility({Symbol::parse("((z+i)/i)^0.25"), Symbol::parse("((z+i)/i)^(-0.25)"), 2.0}, 0.0);
  CHECK(flat.verdicts.at("inf bounded below"));
  CHECK(flat.verdicts.at("contradiction triggered"));
  CHECK(flat.verdicts.at("norms diverge"));
  CHECK(flat.quantities.at("growth exponent int |fg|") == doctest::Approx(2.0).epsilon(1e-3));

  const VerifierVerdict zero = verify_halfplane_impossibility({Symbol::parse("0"), Symbol::parse("1"), 2.0}, 0.0);
  REQUIRE(!zero.notes.empty());
  CHECK(zero.notes.front().find("not invertible") != std::string::npos);
}

TEST_CASE("main theorem on the half-plane") {
  std::vector<DomainPoint> grid;
  for (double y : {0.05, 1.0, 4.0}) {
    for (double x : {-3.0, 0.0, 2.0}) grid.emplace_back(cplx{x, y});
  }
  TheoremOptions o;
  o.test_functions = 3;
  o.family.random_count = 10;
  o.family.min_level = -4;
  o.family.max_level = 4;
  const SymbolPair pair{Symbol::parse("((z+i)/i)^0.125"), Symbol::parse("((z+i)/i)^(-0.125)"), 2.0};
  const VerifierVerdict v = verify_theorem_main2(pair, DomainSpec::halfplane(0.0), grid, o);
  CHECK(v.all_hold());
  CHECK(v.quantities.at("[f]") < 1.1);
  CHECK(v.quantities.at("two-weight ratio") > 1.0);
  CHECK(v.quantities.at("[|f|^p]_B") >= 1.0);
}

TEST_CASE("two-variable tube") {
  const std::vector<DomainPoint> grid = {cplx{0.0, 0.1}, cplx{1.0, 1.0}, cplx{-2.0, 3.0}};
  TubeOptions o;
  o.test_functions = 1;
  o.frozen_heights = {1e-2, 1.0, 100.0};
  const Symbol f1 = Symbol::parse("((z+i)/i)^0.125");
  const VerifierVerdict v = verify_tube_theorem(Symbol::parse("((z1+i)/i)^0.125*((z2+i)/i)^0.125"), 2.0,
                                                {0.0, 0.0}, grid, o);
  const double one = invariant_quantity(f1, 2.0, DomainSpec::halfplane(0.0), grid).value;
  CHECK(v.quantities.at("[f]") == doctest::Approx(one * one).epsilon(1e-9));
  CHECK(v.inequality("slice variation").lhs < 2.0);
  CHECK(v.all_hold());

  const VerifierVerdict mixed =
      verify_tube_theorem(Symbol::parse("((z1+z2+2*i)/(2*i))^0.125"), 2.0, {0.0, 0.0}, grid, o);
  CHECK(mixed.quantities.count("[f]") == 0);
  CHECK(!mixed.notes.empty());
  CHECK(mixed.inequality("slice variation").lhs < 2.0);
}

TEST_CASE("equivalence certificates agree") {
  EquivalenceOptions o;
  o.truncations = {10, 20};
  o.grid_levels = {1, 2};
  o.family_levels = {3, 4};
  o.test_levels = {3, 4};
  const VerifierVerdict one = equivalence_suite_inverse_symbol(Symbol::parse("1"), 2.0, 0.0, o);
  CHECK(one.verdicts.at("agree"));
  CHECK(one.verdicts.at("(i) finite"));
  CHECK(one.quantities.at("(i) |T_f T_conj(1/f)| N=20") == doctest::Approx(1.0));
  CHECK(one.quantities.at("(ii) [f] levels 2") == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(one.quantities.at("(iii) joint level 4") == doctest::Approx(1.0).epsilon(1e-9));

  const VerifierVerdict bad = equivalence_suite_inverse_symbol(Symbol::parse("(1-z)^2"), 2.0, 0.0, o);
  CHECK(bad.verdicts.at("agree"));
  CHECK_FALSE(bad.verdicts.at("(iv) finite"));
  CHECK(bad.quantities.at("boundary argmin angle") == doctest::Approx(0.0));
}

TEST_CASE("disc P+ of an arc box") {
  // Far from the box the kernel is nearly constant: P+ 1_Q(z) ~ |Q| |1 - z conj(w_Q)|^-2.
  const CarlesonBox Q = CarlesonBox::disc(0.0, 1.0 / 256);
  const cplx z{-0.5, 0.1};
  const double approx = Q.measure(0.0) * std::pow(std::abs(1.0 - z), -2.0);
  CHECK(positive_project_disc(Q, 0.0, z) == doctest::Approx(approx).epsilon(2e-2));
  CHECK(positive_project_disc(Q, 0.0, cplx{0.99}) > positive_project_disc(Q, 0.0, cplx{0.9}));
}
