#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bergman/core.hpp"
#include "bergman/expr.hpp"
#include "bergman/series.hpp"
#include "bergman/symbol.hpp"

using namespace bergman;

namespace {

// Independent oracle: generalized binomial coefficient C(s, k).
double binom(double s, int k) {
  double v = 1.0;
  for (int j = 0; j < k; ++j) v *= (s - j) / (j + 1);
  return v;
}

}  // namespace

TEST_CASE("domain spec validation") {
  CHECK_NOTHROW(DomainSpec::disc(0.0));
  CHECK_NOTHROW(DomainSpec::polydisc({0.0, 1.5}));
  CHECK_THROWS_AS(DomainSpec::disc(-1.0), Error);
  CHECK_THROWS_AS(DomainSpec::tube({0.0, -2.0}), Error);
  CHECK_THROWS_AS(DomainSpec::polydisc({}), Error);
  auto t = DomainSpec::tube({0.0, 1.0});
  CHECK(t.dim() == 2);
  CHECK(t.axis(1) == DomainSpec::halfplane(1.0));
  CHECK(is_interior(DomainSpec::disc(0), DomainPoint{cplx{0.3, 0.4}}));
  CHECK_FALSE(is_interior(DomainSpec::disc(0), DomainPoint{cplx{0.6, 0.8}}));
  CHECK_FALSE(is_interior(DomainSpec::halfplane(0), DomainPoint{cplx{0.0, 0.0}}));
}

TEST_CASE("error kinds are carried by the exception") {
  try {
    fail(ErrorKind::NoCover, "x");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoCover);
    CHECK(std::string(e.what()).find("NoCover") != std::string::npos);
  }
}

TEST_CASE("power series arithmetic") {
  const std::size_t n = 12;
  PowerSeries z = PowerSeries::variable(n);
  PowerSeries one(n, 1.0);
  // 1/(1 - z) = sum z^k
  PowerSeries geo = one / (one - z);
  for (std::size_t k = 0; k <= n; ++k) CHECK(std::abs(geo[k] - 1.0) < 1e-14);
  // (1 - z)^s against the binomial oracle.
  for (double s : {2.0, 2.5, -0.75}) {
    PowerSeries p = (one - z).pow(s);
    for (int k = 0; k <= static_cast<int>(n); ++k) {
      CHECK(std::abs(p[k] - binom(s, k) * std::pow(-1.0, k)) < 1e-12);
    }
  }
  CHECK_THROWS_AS(one / z, Error);
  // compose: (1/(1-w)) o (z/2) = 1/(1 - z/2)
  PowerSeries c = geo.compose(z * cplx{0.5});
  for (std::size_t k = 0; k <= n; ++k) CHECK(std::abs(c[k] - std::pow(0.5, k)) < 1e-14);
  CHECK(std::abs(geo.evaluate(0.25) - (1.0 - std::pow(0.25, 13)) / 0.75) < 1e-14);
}

TEST_CASE("parser and pointwise evaluation") {
  const cplx z{0.3, -0.2};
  CHECK(std::abs(parse_expr("2+z")(z) - (2.0 + z)) < 1e-15);
  CHECK(std::abs(parse_expr("1/(2+z)")(z) - 1.0 / (2.0 + z)) < 1e-15);
  CHECK(std::abs(parse_expr("(2+z)(3+z)^-1")(z) - (2.0 + z) / (3.0 + z)) < 1e-15);
  CHECK(std::abs(parse_expr("2z")(z) - 2.0 * z) < 1e-15);
  CHECK(std::abs(parse_expr("zb*z")(z) - std::norm(z)) < 1e-15);
  CHECK(std::abs(parse_expr("conj(1+i*z)")(z) - std::conj(1.0 + cplx{0, 1} * z)) < 1e-15);
  CHECK(std::abs(parse_expr("-z^2")(z) + z * z) < 1e-15);
  const cplx w{0.5, 2.0};
  CHECK(std::abs(parse_expr("((z+i)/i)^(1/8)")(w) - std::pow((w + cplx{0, 1}) / cplx{0, 1}, 0.125)) <
        1e-14);
  std::vector<cplx> pt{cplx{0.1}, cplx{0.2, 0.1}};
  CHECK(std::abs(parse_expr("z1*z2 + 2")(pt) - (pt[0] * pt[1] + 2.0)) < 1e-15);
  CHECK_THROWS_AS(parse_expr("2+"), Error);
  CHECK_THROWS_AS(parse_expr("z^z"), Error);
  CHECK_THROWS_AS(parse_expr("foo"), Error);
  try {
    parse_expr("(z");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ParseError);
  }
}

TEST_CASE("expression structure") {
  Expr e = parse_expr("(2+z1)*(1+z2)^2");
  CHECK(e.axes() == std::set<std::size_t>{0, 1});
  CHECK(e.is_analytic());
  auto f = e.factor_by_axis(2);
  REQUIRE(f);
  const std::vector<cplx> pt{cplx{0.3, 0.1}, cplx{-0.2, 0.4}};
  CHECK(std::abs((*f)[0](pt[0]) * (*f)[1].rename_axis(1, 0)(pt[1]) - e(pt)) < 1e-14);
  CHECK_FALSE(parse_expr("1/(1+z1*z2)").factor_by_axis(2));

  auto split = parse_expr("(2+z)*conj(1/(3+z))").split_conjugate();
  REQUIRE(split);
  const cplx z{0.2, 0.3};
  CHECK(std::abs(split->first(z) * std::conj(split->second(z)) - (2.0 + z) / std::conj(3.0 + z)) <
        1e-14);
  CHECK_FALSE(parse_expr("conj(z)+z").split_conjugate());
}

TEST_CASE("exact polynomial and series forms") {
  auto p = parse_expr("(1+z)^2*zb/2").polynomial(1);
  REQUIRE(p);
  CHECK(p->degree(0) == 2);
  CHECK(p->conj_degree(0) == 1);
  const cplx z{0.2, -0.6};
  CHECK(std::abs((*p)(std::span<const cplx>(&z, 1)) - (1.0 + z) * (1.0 + z) * std::conj(z) / 2.0) <
        1e-15);
  CHECK_FALSE(parse_expr("1/(2+z)").polynomial(1));

  PowerSeries s = parse_expr("1/(2+z)").series(20);
  for (std::size_t k = 0; k <= 20; ++k) {
    CHECK(std::abs(s[k] - std::pow(-0.5, static_cast<double>(k)) / 2.0) < 1e-15);
  }
  CHECK_THROWS_AS(parse_expr("zb").series(4), Error);
}

TEST_CASE("symbols") {
  Symbol f = Symbol::parse("2+z");
  Symbol g = f.reciprocal();
  CHECK(std::abs((f * g)(cplx{0.4, 0.1}) - 1.0) < 1e-15);
  Symbol h([](std::span<const cplx> z) { return z[0] * z[0]; }, 1, "sq");
  CHECK(std::abs(h(cplx{0, 1}) + 1.0) < 1e-15);
  CHECK_FALSE(h.expr());
}
