#include "bergman/operators.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <json.hpp>
#include <random>
#include <sstream>

#include "bergman/expr.hpp"
#include "bergman/kernels.hpp"

namespace bergman {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

void require_bounded(const DomainSpec& d) {
  if (!d.is_bounded()) {
    fail(ErrorKind::DomainMismatch, "truncated operators live on the disc or the polydisc");
  }
}

void require_n(int N) { require(N >= 0, "truncation degree must be nonnegative"); }

// Polynomial in z, conj(z): term c z^a conj(z)^b sends z^j to z^(a+j)
// paired with z^k, k = a + j - b, weight |z^(a+j)|^2.
Matrix polynomial_toeplitz(const ZPolynomial& poly, const DomainSpec& d, int N) {
  const std::size_t n = d.dim();
  const std::size_t size = basis_size(n, N);
  std::vector<std::vector<double>> norms(n);
  int top = N;
  for (std::size_t ax = 0; ax < n; ++ax) top = std::max(top, N + poly.degree(ax));
  for (std::size_t ax = 0; ax < n; ++ax) norms[ax] = monomial_norms(static_cast<std::size_t>(top), d.alpha(ax));
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(size), static_cast<Eigen::Index>(size));
  for (std::size_t col = 0; col < size; ++col) {
    const std::vector<int> j = basis_degrees(col, n, N);
    for (const auto& [exps, c] : poly.terms()) {
      const auto& [a, b] = exps;
      std::vector<int> k(n);
      double weight = 1.0;
      bool inside = true;
      for (std::size_t ax = 0; ax < n && inside; ++ax) {
        k[ax] = a[ax] + j[ax] - b[ax];
        if (k[ax] < 0 || k[ax] > N) {
          inside = false;
          break;
        }
        const double up = norms[ax][static_cast<std::size_t>(a[ax] + j[ax])];
        weight *= up * up / (norms[ax][static_cast<std::size_t>(j[ax])] * norms[ax][static_cast<std::size_t>(k[ax])]);
      }
      if (!inside) continue;
      out(static_cast<Eigen::Index>(basis_index(k, N)), static_cast<Eigen::Index>(col)) += c * weight;
    }
  }
  return out;
}

Matrix analytic_toeplitz(const PowerSeries& c, double alpha, int N) {
  const auto nrm = monomial_norms(static_cast<std::size_t>(N), alpha);
  Matrix out = Matrix::Zero(N + 1, N + 1);
  for (int j = 0; j <= N; ++j) {
    for (int k = j; k <= N; ++k) out(k, j) = c[static_cast<std::size_t>(k - j)] * (nrm[k] / nrm[j]);
  }
  return out;
}

Matrix quadrature_toeplitz(const Symbol& f, double alpha, int N, const QuadratureRule& rule) {
  const NodeSet nodes = disc_nodes(alpha, rule, Focus::none_disc());
  const auto m = static_cast<Eigen::Index>(nodes.size());
  Matrix powers(m, N + 1);
  Vector weighted(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const cplx z = nodes.z[static_cast<std::size_t>(i)];
    cplx p = 1.0;
    for (int k = 0; k <= N; ++k) {
      powers(i, k) = p;
      p *= z;
    }
    const cplx v = f(z);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      fail(ErrorKind::NonFiniteIntegrand, "symbol is not finite at a quadrature node");
    }
    weighted(i) = nodes.w[static_cast<std::size_t>(i)] * v;
  }
  Matrix out = powers.adjoint() * weighted.asDiagonal() * powers;
  const auto nrm = monomial_norms(static_cast<std::size_t>(N), alpha);
  for (int k = 0; k <= N; ++k) {
    for (int j = 0; j <= N; ++j) out(k, j) /= nrm[k] * nrm[j];
  }
  return out;
}

Matrix axis_toeplitz(const Expr& e, double alpha, int N, const ToeplitzOptions& o) {
  if (auto poly = e.polynomial(1)) return polynomial_toeplitz(*poly, DomainSpec::disc(alpha), N);
  if (e.is_analytic()) return analytic_toeplitz(e.series(static_cast<std::size_t>(N)), alpha, N);
  if (auto split = e.split_conjugate()) {
    const auto degree = static_cast<std::size_t>(N + o.series_extra);
    return mixed_toeplitz(split->first.series(degree), split->second.series(degree), alpha, N);
  }
  return quadrature_toeplitz(Symbol(e), alpha, N, o.rule);
}

}  // namespace

TruncatedOperator operator*(const TruncatedOperator& a, const TruncatedOperator& b) {
  require(a.domain == b.domain && a.N == b.N, "operator product needs matching truncations");
  return {a.matrix * b.matrix, a.domain, a.N};
}

std::size_t basis_size(std::size_t dim, int N) {
  std::size_t s = 1;
  for (std::size_t k = 0; k < dim; ++k) s *= static_cast<std::size_t>(N + 1);
  return s;
}

std::size_t basis_index(const std::vector<int>& degrees, int N) {
  std::size_t idx = 0;
  for (int k : degrees) idx = idx * static_cast<std::size_t>(N + 1) + static_cast<std::size_t>(k);
  return idx;
}

std::vector<int> basis_degrees(std::size_t index, std::size_t dim, int N) {
  std::vector<int> out(dim);
  for (std::size_t ax = dim; ax-- > 0;) {
    out[ax] = static_cast<int>(index % static_cast<std::size_t>(N + 1));
    index /= static_cast<std::size_t>(N + 1);
  }
  return out;
}

Matrix TruncatedOperator::interior(int M) const {
  require(M >= 0 && M <= N, "interior block must lie inside the truncation");
  const std::size_t n = domain.dim();
  std::vector<Eigen::Index> keep;
  for (std::size_t i = 0; i < size(); ++i) {
    const auto deg = basis_degrees(i, n, N);
    if (std::all_of(deg.begin(), deg.end(), [M](int k) { return k <= M; })) {
      keep.push_back(static_cast<Eigen::Index>(i));
    }
  }
  Matrix out(keep.size(), keep.size());
  for (std::size_t r = 0; r < keep.size(); ++r) {
    for (std::size_t c = 0; c < keep.size(); ++c) out(r, c) = matrix(keep[r], keep[c]);
  }
  return out;
}

std::string TruncatedOperator::to_text() const {
  std::ostringstream os;
  os << std::setprecision(17);
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      if (c) os << ' ';
      os << matrix(r, c).real() << ',' << matrix(r, c).imag();
    }
    os << '\n';
  }
  return os.str();
}

std::string TruncatedOperator::summary_json() const {
  nlohmann::json j;
  j["domain"] = std::string(to_string(domain.kind()));
  j["alpha"] = domain.alpha();
  j["N"] = N;
  j["size"] = size();
  j["frobenius"] = matrix.norm();
  return j.dump();
}

TruncatedOperator identity_operator(const DomainSpec& d, int N) {
  require_bounded(d);
  require_n(N);
  const auto s = static_cast<Eigen::Index>(basis_size(d.dim(), N));
  return {Matrix::Identity(s, s), d, N};
}

Matrix mixed_toeplitz(const PowerSeries& h1, const PowerSeries& h2, double alpha, int N) {
  const std::size_t M = std::min(h1.degree(), h2.degree());
  require(M >= static_cast<std::size_t>(N), "series degree must reach the truncation");
  const auto nrm = monomial_norms(M + static_cast<std::size_t>(N), alpha);
  Matrix out = Matrix::Zero(N + 1, N + 1);
  // <h1 z^j, h2 z^k> = sum_m c_m conj(d_{m+j-k}) |z^{m+j}|^2.
  for (int j = 0; j <= N; ++j) {
    for (int k = 0; k <= N; ++k) {
      cplx acc = 0.0;
      for (std::size_t m = static_cast<std::size_t>(std::max(0, k - j)); m <= M; ++m) {
        const std::size_t dm = m + static_cast<std::size_t>(j) - static_cast<std::size_t>(k);
        if (dm > M) break;
        const double w = nrm[m + static_cast<std::size_t>(j)];
        acc += h1[m] * std::conj(h2[dm]) * (w * w);
      }
      out(k, j) = acc / (nrm[static_cast<std::size_t>(j)] * nrm[static_cast<std::size_t>(k)]);
    }
  }
  return out;
}

TruncatedOperator toeplitz_matrix(const Symbol& f, const DomainSpec& d, int N,
                                  const ToeplitzOptions& options) {
  require_bounded(d);
  require_n(N);
  if (f.min_dim() > d.dim()) fail(ErrorKind::DomainMismatch, "symbol uses more variables than the domain");
  const std::size_t n = d.dim();
  if (!f.expr()) {
    if (n != 1) fail(ErrorKind::InvalidArgument, "opaque symbols are supported on the disc only");
    return {quadrature_toeplitz(f, d.alpha(0), N, options.rule), d, N};
  }
  const Expr& e = *f.expr();
  if (auto poly = e.polynomial(n)) return {polynomial_toeplitz(*poly, d, N), d, N};
  if (n == 1) return {axis_toeplitz(e, d.alpha(0), N, options), d, N};
  auto factors = e.factor_by_axis(n);
  if (!factors) {
    fail(ErrorKind::InvalidArgument, "polydisc symbols must be polynomials or factor over the axes");
  }
  Matrix out = axis_toeplitz((*factors)[0].rename_axis(0, 0), d.alpha(0), N, options);
  for (std::size_t ax = 1; ax < n; ++ax) {
    out = kron(out, axis_toeplitz((*factors)[ax].rename_axis(ax, 0), d.alpha(ax), N, options));
  }
  return {out, d, N};
}

NormEstimate operator_norm(const TruncatedOperator& T, double p, const NormOptions& options) {
  require(p > 1.0, "operator norms need p > 1");
  const Eigen::Index n = T.matrix.cols();
  NormEstimate out;
  std::mt19937_64 rng(options.seed);
  if (p == 2.0) {
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = cplx{1.0 + 1e-3 * (unit_uniform(rng) - 0.5), 1e-3 * (unit_uniform(rng) - 0.5)};
    x.normalize();
    double prev = -1.0;
    for (int it = 1; it <= options.max_iterations; ++it) {
      const Vector y = T.matrix * x;
      const double lambda = y.squaredNorm();
      out.lower = std::max(out.lower, std::sqrt(lambda));
      out.iterations = it;
      Vector z = T.matrix.adjoint() * y;
      const double zn = z.norm();
      if (zn == 0.0) {
        out.exact2 = 0.0;
        return out;
      }
      x = z / zn;
      if (prev >= 0.0 && std::abs(lambda - prev) <= options.tolerance * lambda) {
        const double v = (T.matrix * x).norm();
        out.lower = std::max(out.lower, v);
        out.exact2 = out.lower;
        return out;
      }
      prev = lambda;
    }
    fail(ErrorKind::NonConvergence, "power iteration did not converge");
  }
  if (T.domain.dim() != 1) fail(ErrorKind::InvalidArgument, "p != 2 norm bounds are implemented on the disc");
  // Basis functions on a quadrature node set give the L^p norm of a
  // coefficient vector.
  QuadratureRule rule;
  rule.angular = std::max(64, 4 * (T.N + 1));
  const NodeSet nodes = disc_nodes(T.domain.alpha(0), rule, Focus::none_disc());
  const auto nrm = monomial_norms(static_cast<std::size_t>(T.N), T.domain.alpha(0));
  Matrix basis(static_cast<Eigen::Index>(nodes.size()), n);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    cplx pw = 1.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      basis(static_cast<Eigen::Index>(i), k) = pw / nrm[static_cast<std::size_t>(k)];
      pw *= nodes.z[i];
    }
  }
  auto pnorm = [&](const Vector& c) {
    const Vector vals = basis * c;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < vals.size(); ++i) acc += nodes.w[static_cast<std::size_t>(i)] * std::pow(std::abs(vals(i)), p);
    return std::pow(acc, 1.0 / p);
  };
  auto try_vector = [&](const Vector& c) {
    const double den = pnorm(c);
    if (den > 0.0) out.lower = std::max(out.lower, pnorm(T.matrix * c) / den);
    ++out.iterations;
  };
  for (Eigen::Index k = 0; k < n; ++k) try_vector(Vector::Unit(n, k));
  for (int r = 0; r < options.random_vectors; ++r) {
    Vector c(n);
    for (Eigen::Index i = 0; i < n; ++i) c(i) = cplx{2.0 * unit_uniform(rng) - 1.0, 2.0 * unit_uniform(rng) - 1.0};
    try_vector(c);
  }
  return out;
}

Vector kernel_coordinates(const DomainSpec& d, const DomainPoint& w, int N) {
  require_bounded(d);
  require(is_interior(d, w), "kernel point must be interior");
  Vector out;
  for (std::size_t ax = 0; ax < d.dim(); ++ax) {
    const double alpha = d.alpha(ax);
    const auto nrm = monomial_norms(static_cast<std::size_t>(N), alpha);
    Vector v(N + 1);
    const double scale = std::pow(1.0 - std::norm(w[ax]), 0.5 * (2.0 + alpha));
    cplx pw = 1.0;
    for (int k = 0; k <= N; ++k) {
      v(k) = scale * pw / nrm[static_cast<std::size_t>(k)];
      pw *= std::conj(w[ax]);
    }
    out = ax == 0 ? v : kron(out, v);
  }
  return out;
}

cplx berezin(const TruncatedOperator& T, const DomainPoint& w) {
  const Vector v = kernel_coordinates(T.domain, w, T.N);
  return v.dot(T.matrix * v);
}

cplx berezin_toeplitz_product(const Symbol& f, const Symbol& g, const DomainPoint& w) {
  return f(w) * std::conj(g(w));
}

cplx berezin_rank_one(const Symbol& f, const Symbol& g, const DomainSpec& d, const DomainPoint& w) {
  double scale = 1.0;
  for (std::size_t ax = 0; ax < d.dim(); ++ax) scale *= std::pow(1.0 - std::norm(w[ax]), 2.0 + d.alpha(ax));
  return scale * f(w) * std::conj(g(w));
}

namespace {

struct AxisLambda {
  std::vector<double> coeffs;
  double sum_abs = 0.0;
  double tail = 0.0;
};

bool integer_exponent(double s) { return s == std::floor(s); }

AxisLambda axis_lambda(double alpha, int cap) {
  require(alpha > -1.0, "alpha must exceed -1");
  const double s = 2.0 + alpha;
  AxisLambda out;
  const int m = static_cast<int>(std::floor(s));
  double lam = 1.0, head_abs = 0.0, head_sum = 0.0, partial = 0.0;
  const int last = integer_exponent(s) ? m : cap;
  for (int k = 0; k <= last; ++k) {
    out.coeffs.push_back(lam);
    partial += lam;
    if (k <= m) {
      head_abs += std::abs(lam);
      head_sum += lam;
    }
    lam *= (k - s) / (k + 1.0);
  }
  // Past degree floor(s) the coefficients share one sign and the full sum
  // vanishes, so the tail equals minus the partial sum.
  out.sum_abs = head_abs + std::abs(head_sum);
  out.tail = integer_exponent(s) ? 0.0 : std::abs(partial);
  return out;
}

}  // namespace

int lambda_cap(double alpha) {
  const double s = 2.0 + alpha;
  if (integer_exponent(s)) return static_cast<int>(s);
  double lam = 1.0, partial = 0.0;
  for (int k = 0; k < 10000000; ++k) {
    partial += lam;
    if (k > s && std::abs(partial) < 1e-8) return k;
    lam *= (k - s) / (k + 1.0);
  }
  fail(ErrorKind::TailTooLarge, "lambda series converges too slowly");
}

LambdaCoefficients lambda_coeffs(const std::vector<double>& alpha, int cap) {
  require(!alpha.empty(), "lambda coefficients need at least one axis");
  LambdaCoefficients out;
  out.alpha = alpha;
  out.s_alpha = 1.0;
  double rel_tail = 0.0;
  for (double a : alpha) {
    const int c = cap < 0 ? lambda_cap(a) : cap;
    AxisLambda ax = axis_lambda(a, c);
    if (ax.tail > 1e-8) fail(ErrorKind::TailTooLarge, "lambda tail exceeds 1e-8 at the degree cap");
    rel_tail += ax.tail / ax.sum_abs;
    out.s_alpha *= ax.sum_abs;
    out.per_axis.push_back(std::move(ax.coeffs));
  }
  out.tail = rel_tail;
  return out;
}

Vector analytic_coordinates(const Symbol& f, const DomainSpec& d, int N) {
  require_bounded(d);
  const std::size_t n = d.dim();
  const auto size = static_cast<Eigen::Index>(basis_size(n, N));
  if (f.expr()) {
    const Expr& e = *f.expr();
    require(e.is_analytic(), "coordinates need an analytic symbol");
    if (auto poly = e.polynomial(n)) {
      Vector out = Vector::Zero(size);
      std::vector<std::vector<double>> nrm;
      for (std::size_t ax = 0; ax < n; ++ax) nrm.push_back(monomial_norms(static_cast<std::size_t>(N), d.alpha(ax)));
      for (const auto& [exps, c] : poly->terms()) {
        const auto& a = exps.first;
        if (std::any_of(a.begin(), a.end(), [N](int k) { return k > N; })) continue;
        double w = 1.0;
        for (std::size_t ax = 0; ax < n; ++ax) w *= nrm[ax][static_cast<std::size_t>(a[ax])];
        out(static_cast<Eigen::Index>(basis_index(a, N))) += c * w;
      }
      return out;
    }
    auto factors = n == 1 ? std::optional<std::vector<Expr>>(std::vector<Expr>{e}) : e.factor_by_axis(n);
    if (factors) {
      Vector out;
      for (std::size_t ax = 0; ax < n; ++ax) {
        const PowerSeries c = (*factors)[ax].series(static_cast<std::size_t>(N));
        const auto nrm = monomial_norms(static_cast<std::size_t>(N), d.alpha(ax));
        Vector v(N + 1);
        for (int k = 0; k <= N; ++k) v(k) = c[static_cast<std::size_t>(k)] * nrm[static_cast<std::size_t>(k)];
        out = ax == 0 ? v : kron(out, v);
      }
      return out;
    }
  }
  if (n != 1) fail(ErrorKind::InvalidArgument, "coordinates of opaque polydisc symbols are not supported");
  // <f, e_k> by quadrature.
  const NodeSet nodes = disc_nodes(d.alpha(0), {}, Focus::none_disc());
  const auto nrm = monomial_norms(static_cast<std::size_t>(N), d.alpha(0));
  Vector out = Vector::Zero(size);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const cplx v = nodes.w[i] * f(nodes.z[i]);
    cplx pw = 1.0;
    for (int k = 0; k <= N; ++k) {
      out(k) += v * std::conj(pw);
      pw *= nodes.z[i];
    }
  }
  for (int k = 0; k <= N; ++k) out(k) /= nrm[static_cast<std::size_t>(k)];
  return out;
}

TruncatedOperator rank_one_matrix(const Symbol& f, const Symbol& g, const DomainSpec& d, int N) {
  require_n(N);
  const Vector fc = analytic_coordinates(f, d, N);
  const Vector gc = analytic_coordinates(g, d, N);
  return {fc * gc.adjoint(), d, N};
}

int symbol_degree(const Symbol& f) {
  if (!f.expr()) return 0;
  const std::size_t n = std::max<std::size_t>(1, f.min_dim());
  auto poly = f.expr()->polynomial(n);
  if (!poly) return 0;
  int deg = 0;
  for (std::size_t ax = 0; ax < n; ++ax) deg = std::max({deg, poly->degree(ax), poly->conj_degree(ax)});
  return deg;
}

RankOneCheck rank_one_identity_check(const Symbol& f, const Symbol& g, const DomainSpec& d, int N) {
  require_bounded(d);
  require_n(N);
  const std::size_t n = d.dim();
  int cap = 0;
  for (double a : d.alpha()) cap = std::max(cap, lambda_cap(a));
  const int interior = N - cap - std::max(symbol_degree(f), symbol_degree(g));
  if (interior < 0) fail(ErrorKind::TruncationTooSmall, "truncation leaves no interior block");
  const LambdaCoefficients lam = lambda_coeffs(d.alpha());

  const TruncatedOperator tf = toeplitz_matrix(f, d, N);
  const TruncatedOperator tg = toeplitz_matrix(g, d, N);
  const Matrix product = tf.matrix * tg.matrix.adjoint();

  // Shift matrices T_{z^l} per axis.
  std::vector<std::vector<Matrix>> shifts(n);
  for (std::size_t ax = 0; ax < n; ++ax) {
    const auto nrm = monomial_norms(static_cast<std::size_t>(N), d.alpha(ax));
    for (std::size_t l = 0; l < lam.per_axis[ax].size(); ++l) {
      Matrix s = Matrix::Zero(N + 1, N + 1);
      for (int j = 0; j + static_cast<int>(l) <= N; ++j) {
        s(j + static_cast<int>(l), j) = nrm[static_cast<std::size_t>(j) + l] / nrm[static_cast<std::size_t>(j)];
      }
      shifts[ax].push_back(std::move(s));
    }
  }
  const auto size = static_cast<Eigen::Index>(basis_size(n, N));
  Matrix rhs = Matrix::Zero(size, size);
  std::vector<std::size_t> l(n, 0);
  while (true) {
    double coeff = 1.0;
    Matrix s = shifts[0][l[0]];
    coeff *= lam.per_axis[0][l[0]];
    for (std::size_t ax = 1; ax < n; ++ax) {
      s = kron(s, shifts[ax][l[ax]]);
      coeff *= lam.per_axis[ax][l[ax]];
    }
    rhs += coeff * (s * product * s.adjoint());
    std::size_t ax = n;
    while (ax-- > 0) {
      if (++l[ax] < lam.per_axis[ax].size()) break;
      l[ax] = 0;
    }
    if (ax == static_cast<std::size_t>(-1)) break;
  }
  const TruncatedOperator lhs = rank_one_matrix(f, g, d, N);
  const TruncatedOperator r{rhs, d, N};
  const Matrix a = lhs.interior(interior), b = r.interior(interior);
  const double scale = a.norm();
  RankOneCheck out;
  out.relative_error = scale > 0.0 ? (a - b).norm() / scale : (a - b).norm();
  out.interior = interior;
  out.cap = cap;
  return out;
}

MobiusMap::MobiusMap(DomainPoint point) : a(std::move(point)) {
  for (std::size_t k = 0; k < a.dim(); ++k) require(std::abs(a[k]) < 1.0, "Mobius parameter must lie in the disc");
}

cplx MobiusMap::axis(std::size_t k, cplx z) const { return (a[k] - z) / (1.0 - std::conj(a[k]) * z); }

DomainPoint MobiusMap::operator()(const DomainPoint& z) const {
  require(z.dim() == a.dim(), "point dimension does not match the Mobius map");
  std::vector<cplx> out(z.dim());
  for (std::size_t k = 0; k < z.dim(); ++k) out[k] = axis(k, z[k]);
  return DomainPoint(out);
}

MobiusMap mobius(const DomainPoint& a) { return MobiusMap(a); }

PowerSeries mobius_series(cplx a, std::size_t degree) {
  PowerSeries num(degree, a);
  num[1] = num[1] - 1.0;
  PowerSeries den(degree, 1.0);
  den[1] = -std::conj(a);
  return num / den;
}

PowerSeries kernel_power_series(cplx a, double alpha, double s, std::size_t degree) {
  PowerSeries base(degree, 1.0);
  if (degree >= 1) base[1] = -std::conj(a);
  const double c = std::pow(1.0 - std::norm(a), 0.5 * (2.0 + alpha) * s);
  return base.pow(-(2.0 + alpha) * s) * cplx{c};
}

namespace {

// Orthonormal coefficient columns of (phi_a^j / |z^j|) k_a, j = 0..N, from
// series to degree `degree`.
std::vector<PowerSeries> mobius_columns(cplx a, double alpha, int N, std::size_t degree) {
  const PowerSeries phi = mobius_series(a, degree);
  const PowerSeries ka = kernel_power_series(a, alpha, 1.0, degree);
  const auto nrm = monomial_norms(static_cast<std::size_t>(N), alpha);
  std::vector<PowerSeries> out;
  PowerSeries pw(degree, 1.0);
  for (int j = 0; j <= N; ++j) {
    out.push_back(pw * ka * cplx{1.0 / nrm[static_cast<std::size_t>(j)]});
    pw = pw * phi;
  }
  return out;
}

Matrix axis_u(cplx a, double alpha, int N, const MobiusOptions& o) {
  const auto degree = static_cast<std::size_t>(N + o.series_extra);
  const auto cols = mobius_columns(a, alpha, N, degree);
  const auto nrm = monomial_norms(degree, alpha);
  Matrix out(N + 1, N + 1);
  const int checked = o.leak_margin < 0 ? mobius_interior(DomainPoint{a}, N) : N - o.leak_margin;
  for (int j = 0; j <= N; ++j) {
    double inside = 0.0;
    for (int k = 0; k <= N; ++k) {
      out(k, j) = cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] * nrm[static_cast<std::size_t>(k)];
      inside += std::norm(out(k, j));
    }
    if (j <= checked && 1.0 - inside > o.leak_tolerance) {
      fail(ErrorKind::TruncationTooSmall, "Mobius column leaks above the truncation degree");
    }
  }
  return out;
}

Matrix axis_v(cplx a, double alpha, double p, int N, const MobiusOptions& o) {
  const auto extra = static_cast<std::size_t>(o.series_extra);
  const std::size_t degree = static_cast<std::size_t>(N) + extra;
  const auto cols = mobius_columns(a, alpha, N, degree);
  const PowerSeries b = kernel_power_series(a, alpha, 2.0 / p - 1.0, extra);
  const auto nrm = monomial_norms(degree, alpha);
  Matrix out(N + 1, N + 1);
  for (int j = 0; j <= N; ++j) {
    const PowerSeries& A = cols[static_cast<std::size_t>(j)];
    for (int k = 0; k <= N; ++k) {
      // Coefficient of z^k in P(A conj(b)), times |z^k|.
      cplx acc = 0.0;
      for (std::size_t m = 0; m <= extra; ++m) {
        const std::size_t km = static_cast<std::size_t>(k) + m;
        acc += A[km] * std::conj(b[m]) * (nrm[km] * nrm[km]);
      }
      out(k, j) = acc / nrm[static_cast<std::size_t>(k)];
    }
  }
  return out;
}

}  // namespace

int mobius_interior(const DomainPoint& a, int N) {
  int out = N;
  for (std::size_t k = 0; k < a.dim(); ++k) {
    const double r = std::abs(a[k]);
    out = std::min(out, static_cast<int>(std::floor(N * (1.0 - r) / (2.0 * (1.0 + r)))));
  }
  return out;
}

TruncatedOperator u_a_matrix(const DomainPoint& a, const DomainSpec& d, int N, const MobiusOptions& options) {
  require_bounded(d);
  require_n(N);
  const MobiusMap map(a);
  require(a.dim() == d.dim(), "Mobius parameter dimension does not match the domain");
  Matrix out = axis_u(a[0], d.alpha(0), N, options);
  for (std::size_t ax = 1; ax < d.dim(); ++ax) out = kron(out, axis_u(a[ax], d.alpha(ax), N, options));
  return {out, d, N};
}

TruncatedOperator v_a_p_matrix(const DomainPoint& a, double p, const DomainSpec& d, int N,
                               const MobiusOptions& options) {
  require_bounded(d);
  require_n(N);
  require(p > 1.0, "p must exceed 1");
  const MobiusMap map(a);
  require(a.dim() == d.dim(), "Mobius parameter dimension does not match the domain");
  Matrix out = axis_v(a[0], d.alpha(0), p, N, options);
  for (std::size_t ax = 1; ax < d.dim(); ++ax) out = kron(out, axis_v(a[ax], d.alpha(ax), p, N, options));
  return {out, d, N};
}

PointFn u_a_p_apply(const PointFn& h, const DomainPoint& a, double p, const DomainSpec& d) {
  require_bounded(d);
  require(p > 1.0, "p must exceed 1");
  const MobiusMap map(a);
  return [h, map, p, d](std::span<const cplx> z) {
    std::vector<cplx> w(z.size());
    cplx factor = 1.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
      w[k] = map.axis(k, z[k]);
      const double s = 2.0 + d.alpha(k);
      const cplx base = 1.0 - std::conj(map.a[k]) * z[k];
      const double c = std::pow(1.0 - std::norm(map.a[k]), 0.5 * s);
      const cplx ka = c * std::pow(base, -s);
      const cplx ka_e = std::pow(c, 2.0 / p - 1.0) * std::pow(base, -s * (2.0 / p - 1.0));
      factor *= ka * std::conj(ka_e);
    }
    return h(w) * factor;
  };
}

MiaoCheck miao_identity_check(const Symbol& f1, const Symbol& g1, cplx a, double p, double alpha,
                              int N, int u, int v) {
  require(p > 1.0, "p must exceed 1");
  require(u >= 0 && v >= 0 && u <= N && v <= N, "test functions must lie in the truncation");
  require(f1.expr() && g1.expr() && f1.expr()->is_analytic() && g1.expr()->is_analytic(),
          "the pairing identity needs analytic expression symbols");
  require(f1.min_dim() <= 1 && g1.min_dim() <= 1, "the pairing identity is checked on the disc");
  const double q = p / (p - 1.0);
  const DomainSpec d = DomainSpec::disc(alpha);
  MobiusOptions mo;
  const int big = N + mo.series_extra;
  const auto nb = static_cast<std::size_t>(big);

  // Left side on the N-block: the conjugate factor only lowers degrees.
  const PowerSeries phi = mobius_series(a, static_cast<std::size_t>(N));
  const Matrix tl = analytic_toeplitz(f1.expr()->rename_axis(0, 0).series_with(phi), alpha, N);
  const Matrix tr = analytic_toeplitz(g1.expr()->rename_axis(0, 0).series_with(phi), alpha, N);
  MiaoCheck out;
  out.lhs = (tl * tr.adjoint())(v, u);

  // Right side on a larger block so T_conj(g) sees the high degrees of V u.
  const PowerSeries f = f1.expr()->series(nb) * kernel_power_series(a, alpha, 1.0 - 2.0 / q, nb);
  const PowerSeries g = g1.expr()->series(nb) * kernel_power_series(a, alpha, 1.0 - 2.0 / p, nb);
  const Matrix tf = analytic_toeplitz(f, alpha, big);
  const Matrix tg = analytic_toeplitz(g, alpha, big);
  const Matrix vp = v_a_p_matrix(DomainPoint{a}, p, d, big, mo).matrix;
  const Matrix vq = p == q ? vp : v_a_p_matrix(DomainPoint{a}, q, d, big, mo).matrix;
  const Vector vu = vp.col(u), vv = vq.col(v);
  out.rhs = vv.dot(tf * (tg.adjoint() * vu));
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

}  // namespace bergman
