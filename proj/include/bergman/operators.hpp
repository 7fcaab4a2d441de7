#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bergman/core.hpp"
#include "bergman/domains.hpp"
#include "bergman/series.hpp"
#include "bergman/symbol.hpp"

namespace bergman {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Finite section over the orthonormal monomials e_k = z^k / |z^k| with
/// degrees 0..N per axis. On the polydisc the multi-index (k_1, .., k_n) is
/// stored at sum_j k_j (N+1)^(n-1-j) (first axis most significant).
struct TruncatedOperator {
  Matrix matrix;
  DomainSpec domain = DomainSpec::disc(0.0);
  int N = 0;

  std::size_t size() const noexcept { return static_cast<std::size_t>(matrix.rows()); }
  TruncatedOperator adjoint() const { return {matrix.adjoint(), domain, N}; }
  friend TruncatedOperator operator*(const TruncatedOperator& a, const TruncatedOperator& b);

  /// Top-left block over multi-indices with every degree <= M.
  Matrix interior(int M) const;

  /// Row-major text: one line per row, entries "re,im" separated by spaces.
  std::string to_text() const;
  /// JSON summary (domain, N, size, Frobenius norm).
  std::string summary_json() const;
};

/// Orthonormal-basis index of a multi-index.
std::size_t basis_index(const std::vector<int>& degrees, int N);
std::vector<int> basis_degrees(std::size_t index, std::size_t dim, int N);
std::size_t basis_size(std::size_t dim, int N);

TruncatedOperator identity_operator(const DomainSpec& d, int N);

struct ToeplitzOptions {
  /// Extra series degree for symbols with a conjugate factor.
  int series_extra = 200;
  /// Rule for the quadrature route.
  QuadratureRule rule = [] {
    QuadratureRule r;
    r.angular = 256;
    return r;
  }();
};

/// Matrix of T_f with (k, j) entry <f e_j, e_k>. Polynomials in z and conj(z)
/// use exact monomial algebra, analytic symbols their Taylor series, products
/// h1 conj(h2) the series pairing, anything else polar quadrature (disc
/// only). On the polydisc the symbol must be a polynomial or factor over
/// the axes.
TruncatedOperator toeplitz_matrix(const Symbol& f, const DomainSpec& d, int N,
                                  const ToeplitzOptions& options = {});

/// Matrix of T_{h1 conj(h2)} on the disc from Taylor coefficients of h1, h2
/// (degrees at least N).
Matrix mixed_toeplitz(const PowerSeries& h1, const PowerSeries& h2, double alpha, int N);

struct NormEstimate {
  /// Largest observed ratio; always a lower bound.
  double lower = 0.0;
  /// Power-iteration value for p = 2.
  std::optional<double> exact2;
  int iterations = 0;
};

struct NormOptions {
  double tolerance = 1e-10;
  int max_iterations = 10000;
  std::uint64_t seed = 7;
  /// Random test vectors for p != 2.
  int random_vectors = 32;
};

/// Largest singular value by power iteration on T*T (p = 2), or a lower
/// bound for the L^p operator norm from coordinate and random test vectors
/// measured by quadrature (disc only). Throws NonConvergence.
NormEstimate operator_norm(const TruncatedOperator& T, double p = 2.0,
                           const NormOptions& options = {});

/// Coefficients of the normalized kernel k_w in the orthonormal basis.
Vector kernel_coordinates(const DomainSpec& d, const DomainPoint& w, int N);
/// <T k_w, k_w>.
cplx berezin(const TruncatedOperator& T, const DomainPoint& w);
/// Closed forms: f(w) conj(g(w)) for T_f T_conj(g), and that times
/// prod (1-|w_j|^2)^(2+alpha_j) for the rank-one f (x) g.
cplx berezin_toeplitz_product(const Symbol& f, const Symbol& g, const DomainPoint& w);
cplx berezin_rank_one(const Symbol& f, const Symbol& g, const DomainSpec& d, const DomainPoint& w);

/// Taylor coefficients of (1-x)^(2+alpha_j) per axis.
struct LambdaCoefficients {
  std::vector<double> alpha;
  std::vector<std::vector<double>> per_axis;
  /// Exact sum of absolute values (product over axes).
  double s_alpha = 0.0;
  /// Bound on the omitted absolute tail, relative to s_alpha.
  double tail = 0.0;
};

/// Throws TailTooLarge when a non-integer exponent leaves a tail above 1e-8
/// after `cap` terms.
LambdaCoefficients lambda_coeffs(const std::vector<double>& alpha, int cap = 20000);
/// Cap used by default: 2 + alpha when integer, else the smallest cap with
/// tail below 1e-8.
int lambda_cap(double alpha);

/// Orthonormal coefficients <f, e_k> of an analytic symbol.
Vector analytic_coordinates(const Symbol& f, const DomainSpec& d, int N);

/// Matrix of h -> <h, g> f.
TruncatedOperator rank_one_matrix(const Symbol& f, const Symbol& g, const DomainSpec& d, int N);

struct RankOneCheck {
  double relative_error = 0.0;
  int interior = 0;
  int cap = 0;
};

/// Compares f (x) g with sum_l lambda_l T_{z^l} T_f T_conj(g) T_conj(z^l) on
/// the interior block of degrees <= N - cap - deg. Throws TruncationTooSmall.
RankOneCheck rank_one_identity_check(const Symbol& f, const Symbol& g, const DomainSpec& d, int N);

/// Polynomial degree of an analytic symbol (0 for non-polynomials).
int symbol_degree(const Symbol& f);

/// phi_a(z) = (a - z) / (1 - conj(a) z), per axis.
struct MobiusMap {
  DomainPoint a;
  explicit MobiusMap(DomainPoint point);
  DomainPoint operator()(const DomainPoint& z) const;
  cplx axis(std::size_t k, cplx z) const;
};

MobiusMap mobius(const DomainPoint& a);

/// Taylor series of phi_a and of the normalized kernel k_a^alpha raised to
/// the power s, to the given degree.
PowerSeries mobius_series(cplx a, std::size_t degree);
PowerSeries kernel_power_series(cplx a, double alpha, double s, std::size_t degree);

struct MobiusOptions {
  int series_extra = 120;
  /// Columns of degree <= N - margin are checked for leakage above N; a
  /// negative margin checks the columns up to mobius_interior.
  int leak_margin = -1;
  double leak_tolerance = 1e-4;
};

/// Largest degree M with U_a e_j, j <= M, essentially inside degree N:
/// floor(N (1-|a|) / (2 (1+|a|))), minimized over the axes.
int mobius_interior(const DomainPoint& a, int N);

/// U_a h = (h o phi_a) k_a on the disc or polydisc. Throws
/// TruncationTooSmall when a checked column leaks more than the tolerance.
TruncatedOperator u_a_matrix(const DomainPoint& a, const DomainSpec& d, int N,
                             const MobiusOptions& options = {});
/// U_a^p h = (h o phi_a) k_a conj(k_a)^(2/p - 1) as a pointwise function.
PointFn u_a_p_apply(const PointFn& h, const DomainPoint& a, double p, const DomainSpec& d);
/// V_a^p = P U_a^p.
TruncatedOperator v_a_p_matrix(const DomainPoint& a, double p, const DomainSpec& d, int N,
                               const MobiusOptions& options = {});

struct MiaoCheck {
  cplx lhs;
  cplx rhs;
  double residual;
};

/// <T_{f1 o phi_a} T_conj(g1 o phi_a) u, v> against <T_f T_conj(g) V_a^p u,
/// V_a^q v> with f = f1 k_a^(1-2/q), g = g1 k_a^(1-2/p), on the disc. The
/// test functions are basis vectors e_u, e_v.
MiaoCheck miao_identity_check(const Symbol& f1, const Symbol& g1, cplx a, double p, double alpha,
                              int N, int u = 0, int v = 1);

}  // namespace bergman
