#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bergman/core.hpp"
#include "bergman/series.hpp"

namespace bergman {

/// Polynomial in z_1..z_n and their conjugates: sum of c * z^a * conj(z)^b.
class ZPolynomial {
 public:
  using Exponents = std::pair<std::vector<int>, std::vector<int>>;

  explicit ZPolynomial(std::size_t dim = 1) : dim_(dim) {}
  static ZPolynomial constant(std::size_t dim, cplx c);
  static ZPolynomial variable(std::size_t dim, std::size_t axis, bool conjugated = false);
  /// c * z^a with no conjugate part.
  static ZPolynomial monomial(std::vector<int> a, cplx c = 1.0);

  std::size_t dim() const noexcept { return dim_; }
  const std::map<Exponents, cplx>& terms() const noexcept { return terms_; }
  void add_term(const std::vector<int>& a, const std::vector<int>& b, cplx c);

  bool is_analytic() const;
  bool is_constant() const;
  cplx constant_term() const;
  /// Largest exponent of z_axis (analytic part) and of conj(z_axis).
  int degree(std::size_t axis) const;
  int conj_degree(std::size_t axis) const;

  ZPolynomial conj() const;
  ZPolynomial& operator+=(const ZPolynomial& o);
  ZPolynomial& operator*=(cplx s);
  friend ZPolynomial operator+(ZPolynomial a, const ZPolynomial& b) { return a += b; }
  friend ZPolynomial operator*(ZPolynomial a, cplx s) { return a *= s; }
  friend ZPolynomial operator*(const ZPolynomial& a, const ZPolynomial& b);
  ZPolynomial ipow(unsigned n) const;

  cplx operator()(std::span<const cplx> z) const;

 private:
  void prune();
  std::size_t dim_;
  std::map<Exponents, cplx> terms_;
};

/// Immutable expression tree over complex constants, the coordinates z_k and
/// their conjugates. Real powers use the principal branch pointwise; the
/// power-series evaluation uses the branch continuous from the origin, which
/// agrees with the principal one for the Möbius-positive bases the grammar
/// is meant for.
class Expr {
 public:
  enum class Op { Const, Var, Conj, Neg, Add, Sub, Mul, Div, Pow };

  Expr() : Expr(cplx{0.0}) {}
  Expr(cplx c);    // NOLINT: constants convert implicitly
  Expr(double c);  // NOLINT

  static Expr var(std::size_t axis);
  static Expr conj(const Expr& e);
  static Expr pow(const Expr& base, double exponent);

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  Expr operator-() const;

  Op op() const noexcept { return node_->op; }

  cplx operator()(std::span<const cplx> z) const;
  cplx operator()(cplx z) const { return (*this)(std::span<const cplx>(&z, 1)); }

  /// Axes the expression depends on (through z_k or conj(z_k)).
  std::set<std::size_t> axes() const;
  std::size_t min_dim() const;
  bool is_analytic() const;
  bool is_constant() const { return axes().empty(); }

  /// Exact polynomial form, when the tree only divides by constants and
  /// raises to nonnegative integer powers.
  std::optional<ZPolynomial> polynomial(std::size_t dim) const;

  /// Taylor series in the single variable the (analytic) expression depends
  /// on. Other axes are not allowed.
  PowerSeries series(std::size_t degree) const;
  /// Evaluate with z_axis replaced by the given series (other axes absent).
  PowerSeries series_with(const PowerSeries& z_series) const;

  /// Replace every occurrence of z_axis.
  Expr substitute(std::size_t axis, const Expr& replacement) const;
  /// Replace z_axis by its value (complex constant) for frozen coordinates.
  Expr freeze(std::size_t axis, cplx value) const { return substitute(axis, Expr(value)); }
  /// Rename axis `from` to `to`.
  Expr rename_axis(std::size_t from, std::size_t to) const;

  /// Top-level product split into one factor per axis (axis 0 absorbs the
  /// constant), or nullopt when some factor couples axes.
  std::optional<std::vector<Expr>> factor_by_axis(std::size_t dim) const;

  /// Analytic/anti-analytic split h1 * conj(h2) of a top-level product, with
  /// h1, h2 analytic; nullopt when the tree is not of that shape.
  std::optional<std::pair<Expr, Expr>> split_conjugate() const;

  std::string to_string() const;

 private:
  struct Node {
    Op op = Op::Const;
    cplx value{0.0};
    std::size_t axis = 0;
    double exponent = 0.0;
    std::shared_ptr<const Node> a, b;
  };
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Expr make(Op op, const Expr& a, const Expr& b);

  cplx eval(const Node& n, std::span<const cplx> z) const;
  PowerSeries eval_series(const Node& n, const PowerSeries& zs) const;
  std::optional<ZPolynomial> eval_poly(const Node& n, std::size_t dim) const;
  void collect_axes(const Node& n, std::set<std::size_t>& out, bool& analytic) const;
  static Expr rebuild(const std::shared_ptr<const Node>& n, std::size_t axis, const Expr& repl);
  static std::string print(const Node& n);
  static void flatten_product(const Expr& e, std::vector<Expr>& out);

  std::shared_ptr<const Node> node_;
};

/// Parse the symbol grammar: numbers, i, pi, z / z1..zn (1-based axes),
/// zb / zb1..zbn and conj(...) for conjugates, + - * / ^ and parentheses,
/// with implicit multiplication ("2z", "(z+1)(z-1)"). Exponents must be
/// real constants.
Expr parse_expr(std::string_view text);

}  // namespace bergman
