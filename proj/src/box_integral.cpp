#include "bergman/box_integral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bergman/quadrature.hpp"

namespace bergman {

void BoxRule::validate() const {
  require(nodes >= 4, "box rule needs at least 4 nodes per panel");
  require(panels >= 1, "box rule needs at least one panel");
  require(layers >= 2, "box rule needs at least two layers");
  require(ratio > 0.0 && ratio < 1.0, "layer ratio must lie in (0, 1)");
  require(divergence_ratio > 0.0, "divergence ratio must be positive");
}

namespace {

// Gauss panels over [a, b]: uniform, plus geometric grading toward each
// singular point inside with innermost width `finest`.
void base_nodes(double a, double b, const BoxRule& rule, const std::vector<double>& singular,
                double finest, std::vector<double>& x, std::vector<double>& w) {
  x.clear();
  w.clear();
  std::vector<double> breaks;
  for (int k = 0; k <= rule.panels; ++k) breaks.push_back(a + (b - a) * k / rule.panels);
  for (double s : singular) {
    if (s < a || s > b) continue;
    breaks.push_back(s);
    for (double h = finest; h < b - a; h *= 2.0) {
      if (s - h > a) breaks.push_back(s - h);
      if (s + h < b) breaks.push_back(s + h);
    }
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) append_panel(breaks[k], breaks[k + 1], rule.nodes, x, w);
}

}  // namespace

BoxIntegral integrate_box(const RealFn& f, const CarlesonBox& Q, double alpha, const BoxRule& rule) {
  rule.validate();
  require(alpha > -1.0, "alpha must exceed -1");
  const bool disc = Q.on_disc();
  const double L = Q.length();
  // Base coordinate: x on the half-plane, angle on the disc.
  const double a = disc ? 2.0 * kPi * Q.interval().left : Q.interval().left;
  const double b = disc ? 2.0 * kPi * Q.interval().right() : Q.interval().right();
  std::vector<double> singular;
  for (double s : rule.singular) {
    if (!disc) {
      singular.push_back(s);
      continue;
    }
    // Representatives of the angle inside [a, b].
    const double base = s - 2.0 * kPi * std::floor((s - a) / (2.0 * kPi));
    for (double t = base; t <= b; t += 2.0 * kPi) singular.push_back(t);
  }
  const double top = disc ? 2.0 * L - L * L : L;
  const double density = disc ? (alpha + 1.0) / (2.0 * kPi) : 1.0;

  std::vector<double> layer_total;
  std::vector<double> x, wx, y, wy;
  double hi = top;
  for (int k = 0; k < rule.layers; ++k) {
    const double lo = hi * rule.ratio;
    y.clear();
    wy.clear();
    append_panel(lo, hi, rule.nodes, y, wy);
    // Grade toward singular points at the scale of the layer; on the disc
    // the distance to the circle is about t/2.
    base_nodes(a, b, rule, singular, disc ? 0.5 * lo : lo, x, wx);
    double total = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double h = y[i];
      const double hw = wy[i] * std::pow(h, alpha) * density;
      double row = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        const cplx z = disc ? std::polar(std::sqrt(1.0 - h), x[j]) : cplx{x[j], h};
        const double v = f(z);
        if (!std::isfinite(v)) fail(ErrorKind::NonFiniteIntegrand, "box integrand is not finite");
        row += wx[j] * v;
      }
      total += hw * row;
    }
    layer_total.push_back(total);
    hi = lo;
  }

  BoxIntegral out;
  for (double c : layer_total) out.value += c;
  const double last = layer_total.back();
  const double prev = layer_total[layer_total.size() - 2];
  if (last > 0.0 && prev > 0.0) {
    const double rho = last / prev;
    if (rho >= rule.divergence_ratio) {
      out.divergent = true;
      out.value = std::numeric_limits<double>::infinity();
      out.tail = std::numeric_limits<double>::infinity();
      return out;
    }
    out.tail = last * rho / (1.0 - rho);
  } else if (last > 0.0 && prev == 0.0) {
    out.divergent = true;
    out.value = out.tail = std::numeric_limits<double>::infinity();
    return out;
  }
  out.value += out.tail;
  return out;
}

}  // namespace bergman
