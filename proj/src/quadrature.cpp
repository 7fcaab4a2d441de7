#include "bergman/quadrature.hpp"

#include <boost/math/special_functions/legendre.hpp>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace bergman {

const GaussRule& gauss_legendre(int n) {
  require(n >= 1 && n <= 512, "Gauss-Legendre order out of range");
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  // Boost returns the nonnegative zeros in increasing order.
  const std::vector<double> zeros = boost::math::legendre_p_zeros<double>(n);
  GaussRule rule;
  auto weight = [n](double x) {
    const double d = boost::math::legendre_p_prime(n, x);
    return 2.0 / ((1.0 - x * x) * d * d);
  };
  for (auto z = zeros.rbegin(); z != zeros.rend(); ++z) {
    if (*z == 0.0) continue;
    rule.x.push_back(-*z);
    rule.w.push_back(weight(*z));
  }
  for (double z : zeros) {
    rule.x.push_back(z);
    rule.w.push_back(weight(z));
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

void QuadratureRule::validate() const {
  require(nodes >= 4, "quadrature needs at least 4 nodes per axis");
  require(X > 0.0 && std::isfinite(X), "truncation half-width X must be positive");
  require(eps > 0.0 && eps < Y && std::isfinite(Y), "need 0 < eps < Y");
  require(ratio > 0.0 && ratio < 1.0, "grading ratio must lie in (0, 1)");
  require(angular >= 4, "need at least 4 angular nodes");
}

QuadratureRule QuadratureRule::refined() const {
  QuadratureRule r = *this;
  r.nodes *= 2;
  r.angular *= 2;
  return r;
}

void append_panel(double a, double b, int n, std::vector<double>& x, std::vector<double>& w) {
  const GaussRule& g = gauss_legendre(n);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (std::size_t i = 0; i < g.x.size(); ++i) {
    x.push_back(mid + half * g.x[i]);
    w.push_back(half * g.w[i]);
  }
}

std::vector<double> geometric_breaks(double first, double last, double ratio) {
  std::vector<double> b{first};
  if (!(last > first)) return b;
  const double grow = 1.0 / ratio;
  while (b.back() * grow < last * (1.0 - 1e-12)) b.push_back(b.back() * grow);
  b.push_back(last);
  return b;
}

void graded_height_nodes(double alpha, double floor, double top, const QuadratureRule& rule,
                         std::vector<double>& y, std::vector<double>& w) {
  floor = std::min(floor, top);
  // Innermost layer: u = y^(alpha+1) absorbs the weight exactly.
  const double a1 = alpha + 1.0;
  std::vector<double> u, uw;
  append_panel(0.0, std::pow(floor, a1), rule.nodes, u, uw);
  for (std::size_t i = 0; i < u.size(); ++i) {
    y.push_back(std::pow(u[i], 1.0 / a1));
    w.push_back(uw[i] / a1);
  }
  const auto breaks = geometric_breaks(floor, top, rule.ratio);
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    const std::size_t from = y.size();
    append_panel(breaks[k], breaks[k + 1], rule.nodes, y, w);
    for (std::size_t i = from; i < y.size(); ++i) w[i] *= std::pow(y[i], alpha);
  }
}

namespace {

// Nodes on [c - half, c + half], symmetric geometric panels around c.
void graded_line(double c, double inner, double half, const QuadratureRule& rule,
                 std::vector<double>& x, std::vector<double>& w) {
  append_panel(c - inner, c + inner, rule.nodes, x, w);
  const auto breaks = geometric_breaks(inner, half, rule.ratio);
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    append_panel(c + breaks[k], c + breaks[k + 1], rule.nodes, x, w);
    append_panel(c - breaks[k + 1], c - breaks[k], rule.nodes, x, w);
  }
}

NodeSet tensor(const std::vector<double>& x, const std::vector<double>& wx,
               const std::vector<double>& y, const std::vector<double>& wy) {
  NodeSet s;
  s.z.reserve(x.size() * y.size());
  s.w.reserve(x.size() * y.size());
  for (std::size_t j = 0; j < y.size(); ++j) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      s.z.emplace_back(x[i], y[j]);
      s.w.push_back(wx[i] * wy[j]);
    }
  }
  return s;
}

}  // namespace

NodeSet halfplane_nodes(double alpha, const QuadratureRule& rule, const Focus& focus) {
  rule.validate();
  const double c = focus.point.real();
  const double s = focus.scale;
  require(s > 0.0, "focus scale must be positive");
  std::vector<double> x, wx, y, wy;
  if (rule.kind == QuadratureRule::Kind::TensorGauss) {
    append_panel(c - s * rule.X, c + s * rule.X, rule.nodes, x, wx);
    append_panel(s * rule.eps, s * rule.Y, rule.nodes, y, wy);
    for (std::size_t i = 0; i < y.size(); ++i) wy[i] *= std::pow(y[i], alpha);
  } else {
    graded_line(c, s / 8.0, s * rule.X, rule, x, wx);
    graded_height_nodes(alpha, s * rule.eps, s * rule.Y, rule, y, wy);
  }
  return tensor(x, wx, y, wy);
}

NodeSet disc_nodes(double alpha, const QuadratureRule& rule, const Focus& focus) {
  rule.validate();
  // t = 1 - r^2, dnu_alpha = (alpha+1)/(2 pi) t^alpha dt dtheta.
  std::vector<double> t, wt, th, wth;
  const double d = std::clamp(1.0 - std::abs(focus.point), 1e-12, 1.0);
  if (rule.kind == QuadratureRule::Kind::TensorGauss) {
    append_panel(rule.eps, 1.0, rule.nodes, t, wt);
    for (std::size_t i = 0; i < t.size(); ++i) wt[i] *= std::pow(t[i], alpha);
  } else {
    graded_height_nodes(alpha, rule.eps * std::min(1.0, d), 1.0, rule, t, wt);
  }
  if (d < 0.5 && rule.kind == QuadratureRule::Kind::GradedBoundary) {
    graded_line(std::arg(focus.point), d / 4.0, kPi, rule, th, wth);
  } else {
    const int m = rule.angular;
    for (int k = 0; k < m; ++k) {
      th.push_back(2.0 * kPi * k / m);
      wth.push_back(2.0 * kPi / m);
    }
  }
  const double c = (alpha + 1.0) / (2.0 * kPi);
  NodeSet s;
  s.z.reserve(t.size() * th.size());
  s.w.reserve(t.size() * th.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = std::sqrt(std::max(0.0, 1.0 - t[i]));
    for (std::size_t k = 0; k < th.size(); ++k) {
      s.z.push_back(std::polar(r, th[k]));
      s.w.push_back(c * wt[i] * wth[k]);
    }
  }
  return s;
}

}  // namespace bergman
