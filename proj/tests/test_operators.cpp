#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>

#include "bergman/kernels.hpp"
#include "bergman/operators.hpp"

using namespace bergman;

namespace {

Symbol sym(const char* text) { return Symbol::parse(text); }

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("basis indexing") {
  CHECK(basis_size(2, 3) == 16);
  CHECK(basis_index({2, 1}, 3) == 9);
  CHECK(basis_degrees(9, 2, 3) == std::vector<int>{2, 1});
  for (std::size_t i = 0; i < 27; ++i) CHECK(basis_index(basis_degrees(i, 3, 2), 2) == i);
}

TEST_CASE("elementary symbols") {
  const DomainSpec d = DomainSpec::disc(0.0);
  const int N = 12;
  CHECK(max_abs(toeplitz_matrix(Symbol::constant(1.0), d, N).matrix - identity_operator(d, N).matrix) < 1e-15);

  const Matrix tz = toeplitz_matrix(sym("z"), d, N).matrix;
  for (int k = 0; k <= N; ++k) {
    for (int j = 0; j <= N; ++j) {
      const double expect = k == j + 1 ? std::sqrt((j + 1.0) / (j + 2.0)) : 0.0;
      CHECK(std::abs(tz(k, j) - expect) < 1e-14);
    }
  }
  CHECK(max_abs(toeplitz_matrix(sym("zb"), d, N).matrix - tz.adjoint()) < 1e-14);

  // Weighted shift: |z^(j+1)| / |z^j| squared is (j+1)/(j+alpha+2).
  const Matrix tz1 = toeplitz_matrix(sym("z"), DomainSpec::disc(1.5), N).matrix;
  CHECK(std::abs(tz1(4, 3) - std::sqrt(4.0 / 6.5)) < 1e-14);

  // |z|^2 is diagonal with entries (j+alpha+... ) ratios.
  const Matrix t2 = toeplitz_matrix(sym("z*zb"), d, N).matrix;
  for (int j = 0; j <= N; ++j) CHECK(std::abs(t2(j, j) - (j + 1.0) / (j + 2.0)) < 1e-14);
}

TEST_CASE("routes agree with quadrature") {
  const int N = 10;
  for (double alpha : {0.0, 0.7}) {
    const DomainSpec d = DomainSpec::disc(alpha);
    for (const char* text : {"z*zb + 2*zb^2*z^3", "1/(2+z)", "(2+z)*conj(1/(3+z))", "z^2/(3-z)"}) {
      const Expr e = parse_expr(text);
      const Symbol opaque([e](std::span<const cplx> z) { return e(z); }, 1, "opaque");
      const Matrix exact = toeplitz_matrix(Symbol(e), d, N).matrix;
      const Matrix quad = toeplitz_matrix(opaque, d, N).matrix;
      CHECK(max_abs(exact - quad) < 1e-9);
    }
  }
}

TEST_CASE("polydisc symbols") {
  const DomainSpec d = DomainSpec::polydisc({0.0, 1.0});
  const int N = 4;
  const Matrix t1 = toeplitz_matrix(sym("z1"), d, N).matrix;
  const Matrix t2 = toeplitz_matrix(sym("z2"), d, N).matrix;
  CHECK(max_abs(t1 * t2 - t2 * t1) < 1e-14);
  const Matrix prod = toeplitz_matrix(sym("z1*z2"), d, N).matrix;
  CHECK(max_abs(prod - t1 * t2) < 1e-14);
  // Factoring symbol goes through per-axis matrices.
  const Matrix fac = toeplitz_matrix(sym("1/(2+z1)*(1+z2)^2"), d, N).matrix;
  const Matrix a = toeplitz_matrix(sym("1/(2+z1)"), d, N).matrix;
  const Matrix b = toeplitz_matrix(sym("(1+z2)^2"), d, N).matrix;
  CHECK(max_abs(fac - a * b) < 1e-12);
  CHECK_THROWS_AS(toeplitz_matrix(sym("1/(2+z1*z2)"), d, N), Error);
  CHECK_THROWS_AS(toeplitz_matrix(sym("z"), DomainSpec::halfplane(0.0), N), Error);
}

TEST_CASE("operator norm against SVD") {
  const DomainSpec d = DomainSpec::disc(0.5);
  for (const char* text : {"z", "(2+z)*conj(1/(3+z))", "zb^2 + 3*z"}) {
    const TruncatedOperator T = toeplitz_matrix(sym(text), d, 20);
    const double svd = Eigen::JacobiSVD<Matrix>(T.matrix).singularValues()(0);
    const NormEstimate est = operator_norm(T);
    REQUIRE(est.exact2);
    CHECK(std::abs(*est.exact2 - svd) < 1e-6 * svd);
    CHECK(est.lower <= svd * (1.0 + 1e-12));
  }
  // p != 2 gives a positive lower bound; identity has norm 1.
  const NormEstimate id = operator_norm(identity_operator(d, 6), 3.0);
  CHECK(std::abs(id.lower - 1.0) < 1e-12);
  CHECK(operator_norm(toeplitz_matrix(sym("z"), d, 8), 3.0).lower > 0.5);
}

TEST_CASE("Berezin transform") {
  const DomainSpec d = DomainSpec::disc(0.0);
  const int N = 40;
  const Symbol f = sym("z+0.5"), g = sym("1/(2-z)");
  const TruncatedOperator T = toeplitz_matrix(f, d, N) * toeplitz_matrix(g, d, N).adjoint();
  const TruncatedOperator R = rank_one_matrix(f, g, d, N);
  for (cplx w : {cplx{0.0}, cplx{0.3, -0.2}, cplx{-0.5, 0.4}, cplx{0.7, 0.0}}) {
    CHECK(std::abs(berezin(T, w) - berezin_toeplitz_product(f, g, w)) < 1e-4);
    CHECK(std::abs(berezin(R, w) - berezin_rank_one(f, g, d, w)) < 1e-4);
  }
  // Kernel coordinates are unit vectors up to truncation.
  CHECK(std::abs(kernel_coordinates(d, cplx{0.5, 0.1}, 80).norm() - 1.0) < 1e-10);
}

TEST_CASE("lambda coefficients") {
  const auto l0 = lambda_coeffs({0.0});
  CHECK(l0.per_axis[0] == std::vector<double>{1.0, -2.0, 1.0});
  CHECK(l0.s_alpha == 4.0);
  const auto l1 = lambda_coeffs({1.0});
  CHECK(l1.per_axis[0] == std::vector<double>{1.0, -3.0, 3.0, -1.0});
  CHECK(l1.s_alpha == 8.0);
  CHECK(lambda_coeffs({0.0, 0.0}).s_alpha == 16.0);

  // Non-integer exponent: s = 2.5 gives head 1 + 2.5 + 1.875 and the tail
  // sum equals the head sum in absolute value.
  const auto lh = lambda_coeffs({0.5});
  const double head = 1.0 + 2.5 + 1.875;
  const double head_sum = 1.0 - 2.5 + 1.875;
  CHECK(std::abs(lh.s_alpha - (head + std::abs(head_sum))) < 1e-12);
  double brute = 0.0;
  for (double c : lh.per_axis[0]) brute += std::abs(c);
  CHECK(std::abs(brute - lh.s_alpha) < 1e-7);
  CHECK(lh.tail < 1e-8);
  CHECK_THROWS_AS(lambda_coeffs({0.5}, 10), Error);
}

TEST_CASE("rank-one identity") {
  const auto disc = DomainSpec::disc(0.0);
  CHECK(rank_one_identity_check(sym("z"), sym("z^2"), disc, 40).relative_error < 1e-12);
  CHECK(rank_one_identity_check(sym("1+z"), sym("2-z^3"), DomainSpec::disc(1.0), 30).relative_error < 1e-12);
  const auto poly = DomainSpec::polydisc({0.0, 0.0});
  const auto r = rank_one_identity_check(sym("z1"), sym("z2"), poly, 12);
  CHECK(r.relative_error < 1e-12);
  CHECK(r.interior == 9);
  CHECK_THROWS_AS(rank_one_identity_check(sym("z^5"), sym("z"), disc, 6), Error);
}

TEST_CASE("Mobius maps and U_a") {
  const DomainSpec d = DomainSpec::disc(0.0);
  const MobiusMap phi = mobius(cplx{0.4, 0.2});
  for (cplx z : {cplx{0.1, 0.3}, cplx{-0.6, 0.1}}) CHECK(std::abs(phi(phi(z))[0] - z) < 1e-14);
  const PowerSeries s = mobius_series(cplx{0.4, 0.2}, 30);
  CHECK(std::abs(s.evaluate(0.1) - phi.axis(0, 0.1)) < 1e-14);

  const Matrix u0 = u_a_matrix(cplx{0.0}, d, 8).matrix;
  for (int k = 0; k <= 8; ++k) CHECK(std::abs(u0(k, k) - (k % 2 ? -1.0 : 1.0)) < 1e-14);
  CHECK(std::abs(u0.norm() - 3.0) < 1e-13);

  const int N = 40;
  const int M = mobius_interior(cplx{0.4}, N);
  CHECK(M == 8);
  for (double alpha : {0.0, 1.0}) {
    const DomainSpec da = DomainSpec::disc(alpha);
    const TruncatedOperator U = u_a_matrix(cplx{0.4}, da, N);
    const Matrix gram = (U.adjoint() * U).interior(M);
    CHECK(max_abs(gram - Matrix::Identity(M + 1, M + 1)) < 1e-6);
    // U_a T_z = T_{phi_a} U_a.
    const TruncatedOperator lhs = U * toeplitz_matrix(sym("z"), da, N);
    const TruncatedOperator rhs = toeplitz_matrix(sym("(0.4-z)/(1-0.4*z)"), da, N) * U;
    CHECK(max_abs(lhs.interior(M) - rhs.interior(M)) < 1e-6);
  }
  // Asking for columns far past the interior trips the leakage check.
  MobiusOptions tight;
  tight.leak_margin = 0;
  CHECK_THROWS_AS(u_a_matrix(cplx{0.5}, d, 10, tight), Error);
}

TEST_CASE("U_a^p pointwise and V_a^p") {
  const DomainSpec d = DomainSpec::disc(0.0);
  const cplx a{0.3, -0.1};
  // p = 2 reduces to U_a.
  const PointFn h = [](std::span<const cplx> z) { return 1.0 + z[0] * z[0]; };
  const PointFn u2 = u_a_p_apply(h, a, 2.0, d);
  const cplx z{0.2, 0.5};
  const KernelSpec ks(d, a);
  const cplx ka = normalize(ks)(z);
  CHECK(std::abs(u2(std::span<const cplx>(&z, 1)) - h(std::vector<cplx>{mobius(a).axis(0, z)}) * ka) < 1e-13);
  const Matrix v2 = v_a_p_matrix(a, 2.0, d, 20).matrix;
  const Matrix ua = u_a_matrix(a, d, 20).matrix;
  CHECK(max_abs(v2 - ua) < 1e-12);
  // p = 4 pointwise factor k_a conj(k_a)^(-1/2).
  const PointFn u4 = u_a_p_apply(h, a, 4.0, d);
  const cplx expect = h(std::vector<cplx>{mobius(a).axis(0, z)}) * ka * std::conj(std::pow(ka, -0.5));
  CHECK(std::abs(u4(std::span<const cplx>(&z, 1)) - expect) < 1e-12);
}

TEST_CASE("pairing identity under Mobius maps") {
  for (double p : {2.0, 3.0, 1.5}) {
    for (double alpha : {0.0, 0.5}) {
      const MiaoCheck m = miao_identity_check(sym("1+z"), sym("1+0.5*z^2"), cplx{0.3, 0.1}, p, alpha, 10, 0, 1);
      CHECK(m.residual < 1e-6);
      const MiaoCheck m2 = miao_identity_check(sym("z^2"), sym("2-z"), cplx{-0.2}, p, alpha, 10, 2, 1);
      CHECK(m2.residual < 1e-6);
    }
  }
}

TEST_CASE("product norm bound") {
  // |f| |g| <= s_alpha |T_f T_conj(g)|.
  const DomainSpec d = DomainSpec::disc(0.0);
  const int N = 60;
  for (auto [f, g] : {std::pair{"z+0.5", "1-z"}, std::pair{"1/(2-z)", "z^3"}, std::pair{"1", "1"}}) {
    const Vector fc = analytic_coordinates(sym(f), d, N), gc = analytic_coordinates(sym(g), d, N);
    const TruncatedOperator T = toeplitz_matrix(sym(f), d, N) * toeplitz_matrix(sym(g), d, N).adjoint();
    CHECK(fc.norm() * gc.norm() <= 4.0 * operator_norm(T).lower);
  }
}
