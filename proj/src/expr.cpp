#include "bergman/expr.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

namespace bergman {

// ---------------------------------------------------------------- ZPolynomial

ZPolynomial ZPolynomial::constant(std::size_t dim, cplx c) {
  ZPolynomial p(dim);
  p.add_term(std::vector<int>(dim, 0), std::vector<int>(dim, 0), c);
  return p;
}

ZPolynomial ZPolynomial::variable(std::size_t dim, std::size_t axis, bool conjugated) {
  require(axis < dim, "polynomial variable outside the dimension");
  std::vector<int> a(dim, 0), b(dim, 0);
  (conjugated ? b : a)[axis] = 1;
  ZPolynomial p(dim);
  p.add_term(a, b, 1.0);
  return p;
}

ZPolynomial ZPolynomial::monomial(std::vector<int> a, cplx c) {
  ZPolynomial p(a.size());
  std::vector<int> b(a.size(), 0);
  p.add_term(a, b, c);
  return p;
}

void ZPolynomial::add_term(const std::vector<int>& a, const std::vector<int>& b, cplx c) {
  require(a.size() == dim_ && b.size() == dim_, "monomial dimension mismatch");
  terms_[{a, b}] += c;
  prune();
}

void ZPolynomial::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    it = (it->second == cplx{0.0}) ? terms_.erase(it) : std::next(it);
  }
}

bool ZPolynomial::is_analytic() const {
  for (const auto& [e, c] : terms_) {
    for (int v : e.second) {
      if (v != 0) return false;
    }
  }
  return true;
}

bool ZPolynomial::is_constant() const {
  for (const auto& [e, c] : terms_) {
    for (std::size_t k = 0; k < dim_; ++k) {
      if (e.first[k] != 0 || e.second[k] != 0) return false;
    }
  }
  return true;
}

cplx ZPolynomial::constant_term() const {
  auto it = terms_.find({std::vector<int>(dim_, 0), std::vector<int>(dim_, 0)});
  return it == terms_.end() ? cplx{0.0} : it->second;
}

int ZPolynomial::degree(std::size_t axis) const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.first.at(axis));
  return d;
}

int ZPolynomial::conj_degree(std::size_t axis) const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e.second.at(axis));
  return d;
}

ZPolynomial ZPolynomial::conj() const {
  ZPolynomial r(dim_);
  for (const auto& [e, c] : terms_) r.terms_[{e.second, e.first}] += std::conj(c);
  return r;
}

ZPolynomial& ZPolynomial::operator+=(const ZPolynomial& o) {
  require(o.dim_ == dim_, "polynomial dimension mismatch");
  for (const auto& [e, c] : o.terms_) terms_[e] += c;
  prune();
  return *this;
}

ZPolynomial& ZPolynomial::operator*=(cplx s) {
  for (auto& [e, c] : terms_) c *= s;
  prune();
  return *this;
}

ZPolynomial operator*(const ZPolynomial& a, const ZPolynomial& b) {
  require(a.dim_ == b.dim_, "polynomial dimension mismatch");
  ZPolynomial r(a.dim_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      std::vector<int> x(a.dim_), y(a.dim_);
      for (std::size_t k = 0; k < a.dim_; ++k) {
        x[k] = ea.first[k] + eb.first[k];
        y[k] = ea.second[k] + eb.second[k];
      }
      r.terms_[{x, y}] += ca * cb;
    }
  }
  r.prune();
  return r;
}

ZPolynomial ZPolynomial::ipow(unsigned n) const {
  ZPolynomial r = constant(dim_, 1.0);
  for (unsigned k = 0; k < n; ++k) r = r * *this;
  return r;
}

cplx ZPolynomial::operator()(std::span<const cplx> z) const {
  require(z.size() >= dim_, "point dimension too small for polynomial");
  cplx acc{0.0};
  for (const auto& [e, c] : terms_) {
    cplx t = c;
    for (std::size_t k = 0; k < dim_; ++k) {
      for (int j = 0; j < e.first[k]; ++j) t *= z[k];
      for (int j = 0; j < e.second[k]; ++j) t *= std::conj(z[k]);
    }
    acc += t;
  }
  return acc;
}

// ----------------------------------------------------------------------- Expr

namespace {

bool small_integer(double s, long& n) {
  if (std::abs(s) > 64.0 || std::floor(s) != s) return false;
  n = static_cast<long>(s);
  return true;
}

cplx int_pow(cplx base, long n) {
  cplx r{1.0};
  const long m = n < 0 ? -n : n;
  for (long k = 0; k < m; ++k) r *= base;
  return n < 0 ? cplx{1.0} / r : r;
}

}  // namespace

Expr::Expr(cplx c) {
  Node n;
  n.value = c;
  node_ = std::make_shared<const Node>(n);
}
Expr::Expr(double c) : Expr(cplx{c}) {}

Expr Expr::var(std::size_t axis) {
  Node n;
  n.op = Op::Var;
  n.axis = axis;
  return Expr(std::make_shared<const Node>(n));
}

Expr Expr::make(Op op, const Expr& a, const Expr& b) {
  Node n;
  n.op = op;
  n.a = a.node_;
  n.b = b.node_;
  return Expr(std::make_shared<const Node>(n));
}

Expr Expr::conj(const Expr& e) {
  Node n;
  n.op = Op::Conj;
  n.a = e.node_;
  return Expr(std::make_shared<const Node>(n));
}

Expr Expr::pow(const Expr& base, double exponent) {
  require(std::isfinite(exponent), "exponent must be finite");
  Node n;
  n.op = Op::Pow;
  n.a = base.node_;
  n.exponent = exponent;
  return Expr(std::make_shared<const Node>(n));
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::make(Expr::Op::Add, a, b); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::make(Expr::Op::Sub, a, b); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::make(Expr::Op::Mul, a, b); }
Expr operator/(const Expr& a, const Expr& b) { return Expr::make(Expr::Op::Div, a, b); }

Expr Expr::operator-() const {
  Node n;
  n.op = Op::Neg;
  n.a = node_;
  return Expr(std::make_shared<const Node>(n));
}

cplx Expr::operator()(std::span<const cplx> z) const { return eval(*node_, z); }

cplx Expr::eval(const Node& n, std::span<const cplx> z) const {
  switch (n.op) {
    case Op::Const: return n.value;
    case Op::Var:
      if (n.axis >= z.size()) fail(ErrorKind::DomainMismatch, "expression uses an axis the point lacks");
      return z[n.axis];
    case Op::Conj: return std::conj(eval(*n.a, z));
    case Op::Neg: return -eval(*n.a, z);
    case Op::Add: return eval(*n.a, z) + eval(*n.b, z);
    case Op::Sub: return eval(*n.a, z) - eval(*n.b, z);
    case Op::Mul: return eval(*n.a, z) * eval(*n.b, z);
    case Op::Div: return eval(*n.a, z) / eval(*n.b, z);
    case Op::Pow: {
      const cplx base = eval(*n.a, z);
      long k = 0;
      if (small_integer(n.exponent, k)) return int_pow(base, k);
      if (base == cplx{0.0}) {
        return n.exponent > 0 ? cplx{0.0} : cplx{std::numeric_limits<double>::infinity()};
      }
      return std::pow(base, n.exponent);
    }
  }
  return {};
}

PowerSeries Expr::series(std::size_t degree) const {
  const auto ax = axes();
  require(ax.size() <= 1, "series expansion needs a single-variable expression");
  require(is_analytic(), "series expansion needs an analytic expression");
  const std::size_t axis = ax.empty() ? 0 : *ax.begin();
  return rename_axis(axis, 0).series_with(PowerSeries::variable(degree));
}

PowerSeries Expr::series_with(const PowerSeries& zs) const { return eval_series(*node_, zs); }

PowerSeries Expr::eval_series(const Node& n, const PowerSeries& zs) const {
  const std::size_t d = zs.degree();
  switch (n.op) {
    case Op::Const: return PowerSeries(d, n.value);
    case Op::Var:
      require(n.axis == 0, "series evaluation of a multi-variable expression");
      return zs;
    case Op::Conj: {
      // Only conjugated constants are analytic.
      auto sub = Expr(n.a);
      require(sub.is_constant(), "series evaluation of a conjugated variable");
      return PowerSeries(d, std::conj(sub(std::span<const cplx>{})));
    }
    case Op::Neg: return -eval_series(*n.a, zs);
    case Op::Add: return eval_series(*n.a, zs) + eval_series(*n.b, zs);
    case Op::Sub: return eval_series(*n.a, zs) - eval_series(*n.b, zs);
    case Op::Mul: return eval_series(*n.a, zs) * eval_series(*n.b, zs);
    case Op::Div: return eval_series(*n.a, zs) / eval_series(*n.b, zs);
    case Op::Pow: {
      PowerSeries base = eval_series(*n.a, zs);
      long k = 0;
      if (small_integer(n.exponent, k)) {
        PowerSeries p = base.ipow(static_cast<unsigned>(k < 0 ? -k : k));
        return k < 0 ? PowerSeries(d, cplx{1.0}) / p : p;
      }
      return base.pow(n.exponent);
    }
  }
  return PowerSeries(d);
}

std::optional<ZPolynomial> Expr::polynomial(std::size_t dim) const {
  require(min_dim() <= dim, "polynomial dimension smaller than the expression's");
  return eval_poly(*node_, dim);
}

std::optional<ZPolynomial> Expr::eval_poly(const Node& n, std::size_t dim) const {
  switch (n.op) {
    case Op::Const: return ZPolynomial::constant(dim, n.value);
    case Op::Var: return ZPolynomial::variable(dim, n.axis);
    case Op::Conj: {
      auto p = eval_poly(*n.a, dim);
      if (!p) return std::nullopt;
      return p->conj();
    }
    case Op::Neg: {
      auto p = eval_poly(*n.a, dim);
      if (!p) return std::nullopt;
      return *p * cplx{-1.0};
    }
    case Op::Add:
    case Op::Sub: {
      auto p = eval_poly(*n.a, dim);
      auto q = eval_poly(*n.b, dim);
      if (!p || !q) return std::nullopt;
      return n.op == Op::Add ? *p + *q : *p + *q * cplx{-1.0};
    }
    case Op::Mul: {
      auto p = eval_poly(*n.a, dim);
      auto q = eval_poly(*n.b, dim);
      if (!p || !q) return std::nullopt;
      return *p * *q;
    }
    case Op::Div: {
      auto p = eval_poly(*n.a, dim);
      auto q = eval_poly(*n.b, dim);
      if (!p || !q || !q->is_constant() || q->constant_term() == cplx{0.0}) return std::nullopt;
      return *p * (cplx{1.0} / q->constant_term());
    }
    case Op::Pow: {
      long k = 0;
      if (!small_integer(n.exponent, k) || k < 0) return std::nullopt;
      auto p = eval_poly(*n.a, dim);
      if (!p) return std::nullopt;
      return p->ipow(static_cast<unsigned>(k));
    }
  }
  return std::nullopt;
}

void Expr::collect_axes(const Node& n, std::set<std::size_t>& out, bool& analytic) const {
  if (n.op == Op::Var) out.insert(n.axis);
  if (n.op == Op::Conj) {
    std::set<std::size_t> inner;
    bool dummy = true;
    collect_axes(*n.a, inner, dummy);
    if (!inner.empty()) analytic = false;
    out.insert(inner.begin(), inner.end());
    return;
  }
  if (n.a) collect_axes(*n.a, out, analytic);
  if (n.b) collect_axes(*n.b, out, analytic);
}

std::set<std::size_t> Expr::axes() const {
  std::set<std::size_t> out;
  bool analytic = true;
  collect_axes(*node_, out, analytic);
  return out;
}

std::size_t Expr::min_dim() const {
  auto ax = axes();
  return ax.empty() ? 0 : *ax.rbegin() + 1;
}

bool Expr::is_analytic() const {
  std::set<std::size_t> out;
  bool analytic = true;
  collect_axes(*node_, out, analytic);
  return analytic;
}

Expr Expr::rebuild(const std::shared_ptr<const Node>& n, std::size_t axis, const Expr& repl) {
  if (n->op == Op::Var) return n->axis == axis ? repl : Expr(n);
  if (n->op == Op::Const) return Expr(n);
  Node copy = *n;
  if (n->a) copy.a = rebuild(n->a, axis, repl).node_;
  if (n->b) copy.b = rebuild(n->b, axis, repl).node_;
  return Expr(std::make_shared<const Node>(copy));
}

Expr Expr::substitute(std::size_t axis, const Expr& replacement) const {
  return rebuild(node_, axis, replacement);
}

Expr Expr::rename_axis(std::size_t from, std::size_t to) const {
  if (from == to) return *this;
  return substitute(from, var(to));
}

void Expr::flatten_product(const Expr& e, std::vector<Expr>& out) {
  const Node& n = *e.node_;
  if (n.op == Op::Mul) {
    flatten_product(Expr(n.a), out);
    flatten_product(Expr(n.b), out);
  } else if (n.op == Op::Div) {
    flatten_product(Expr(n.a), out);
    std::vector<Expr> den;
    flatten_product(Expr(n.b), den);
    for (auto& d : den) out.push_back(Expr(1.0) / d);
  } else if (n.op == Op::Neg) {
    out.emplace_back(-1.0);
    flatten_product(Expr(n.a), out);
  } else {
    out.push_back(e);
  }
}

std::optional<std::vector<Expr>> Expr::factor_by_axis(std::size_t dim) const {
  std::vector<Expr> factors;
  flatten_product(*this, factors);
  std::vector<std::optional<Expr>> per_axis(dim);
  Expr constant(1.0);
  for (const auto& f : factors) {
    auto ax = f.axes();
    if (ax.size() > 1) return std::nullopt;
    if (ax.empty()) {
      constant = constant * f;
      continue;
    }
    const std::size_t k = *ax.begin();
    if (k >= dim) return std::nullopt;
    per_axis[k] = per_axis[k] ? *per_axis[k] * f : f;
  }
  std::vector<Expr> out;
  for (std::size_t k = 0; k < dim; ++k) out.push_back(per_axis[k] ? *per_axis[k] : Expr(1.0));
  out[0] = constant * out[0];
  return out;
}

std::optional<std::pair<Expr, Expr>> Expr::split_conjugate() const {
  std::vector<Expr> factors;
  flatten_product(*this, factors);
  Expr h1(1.0), h2(1.0);
  for (const auto& f : factors) {
    if (f.is_analytic()) {
      h1 = h1 * f;
      continue;
    }
    const Node& n = *f.node_;
    if (n.op == Op::Conj && Expr(n.a).is_analytic()) {
      h2 = h2 * Expr(n.a);
      continue;
    }
    // 1 / conj(h)
    if (n.op == Op::Div && Expr(n.a).is_constant() && n.b->op == Op::Conj &&
        Expr(n.b->a).is_analytic()) {
      h1 = h1 * Expr(n.a);
      h2 = h2 / Expr(n.b->a);
      continue;
    }
    return std::nullopt;
  }
  return std::make_pair(h1, h2);
}

std::string Expr::print(const Node& n) {
  std::ostringstream os;
  os.precision(17);
  switch (n.op) {
    case Op::Const:
      if (n.value.imag() == 0.0) {
        os << n.value.real();
      } else {
        os << "(" << n.value.real() << (n.value.imag() < 0 ? "-" : "+") << std::abs(n.value.imag())
           << "i)";
      }
      break;
    case Op::Var: os << "z" << (n.axis + 1); break;
    case Op::Conj: os << "conj(" << print(*n.a) << ")"; break;
    case Op::Neg: os << "-(" << print(*n.a) << ")"; break;
    case Op::Add: os << "(" << print(*n.a) << "+" << print(*n.b) << ")"; break;
    case Op::Sub: os << "(" << print(*n.a) << "-" << print(*n.b) << ")"; break;
    case Op::Mul: os << print(*n.a) << "*" << print(*n.b); break;
    case Op::Div: os << print(*n.a) << "/(" << print(*n.b) << ")"; break;
    case Op::Pow: os << "(" << print(*n.a) << ")^(" << n.exponent << ")"; break;
  }
  return os.str();
}

std::string Expr::to_string() const { return print(*node_); }

// --------------------------------------------------------------------- parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  Expr parse() {
    Expr e = expression();
    skip();
    if (pos_ != s_.size()) error("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorKind::ParseError, msg + " at offset " + std::to_string(pos_) + " in \"" +
                                    std::string(s_) + "\"");
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool starts_primary() {
    const char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '(' ||
           std::isalpha(static_cast<unsigned char>(c));
  }

  Expr expression() {
    Expr e = term();
    for (;;) {
      if (accept('+')) {
        e = e + term();
      } else if (accept('-')) {
        e = e - term();
      } else {
        return e;
      }
    }
  }

  Expr term() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e = e * unary();
      } else if (accept('/')) {
        e = e / unary();
      } else if (starts_primary()) {
        e = e * power();
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (accept('^')) {
      Expr ex = unary();
      if (!ex.is_constant()) error("exponent must be a constant");
      const cplx v = ex(std::span<const cplx>{});
      if (std::abs(v.imag()) > 1e-15 * std::max(1.0, std::abs(v.real()))) error("exponent must be real");
      return Expr::pow(base, v.real());
    }
    return base;
  }

  Expr primary() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Expr e = expression();
      if (!accept(')')) error("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    error("expected a number, variable or '('");
  }

  Expr number() {
    const char* begin = s_.data() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) error("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    return Expr(v);
  }

  Expr identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string word(s_.substr(start, pos_ - start));
    std::size_t dstart = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    const std::string digits(s_.substr(dstart, pos_ - dstart));
    auto axis_of = [&]() -> std::size_t {
      if (digits.empty()) return 0;
      const long k = std::stol(digits);
      if (k < 1 || k > 16) error("axis index out of range");
      return static_cast<std::size_t>(k - 1);
    };
    if (word == "i" && digits.empty()) return Expr(cplx{0.0, 1.0});
    if (word == "pi" && digits.empty()) return Expr(kPi);
    if (word == "z") return Expr::var(axis_of());
    if (word == "zb") return Expr::conj(Expr::var(axis_of()));
    if (word == "conj" && digits.empty()) {
      if (!accept('(')) error("expected '(' after conj");
      Expr e = expression();
      if (!accept(')')) error("expected ')'");
      return Expr::conj(e);
    }
    error("unknown identifier '" + word + digits + "'");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text) { return Parser(text).parse(); }

}  // namespace bergman
