#include "bergman/positive.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>

namespace bergman {

BoxFunction& BoxFunction::add(const CarlesonBox& Q, double c) {
  require(!Q.on_disc(), "box functions live on the half-plane");
  require(c >= 0.0 && std::isfinite(c), "box coefficients must be nonnegative");
  if (c > 0.0) terms_.emplace_back(Q, c);
  return *this;
}

double BoxFunction::operator()(cplx z) const {
  double v = 0.0;
  for (const auto& [Q, c] : terms_) {
    if (Q.contains(z)) v += c;
  }
  return v;
}

double BoxFunction::integral_over(const CarlesonBox& Q, double alpha) const {
  double v = 0.0;
  for (const auto& [B, c] : terms_) v += c * box_intersection_measure(B, Q, alpha);
  return v;
}

Interval BoxFunction::support() const {
  require(!terms_.empty(), "empty box function has no support");
  double lo = terms_.front().first.interval().left, hi = terms_.front().first.interval().right();
  for (const auto& [Q, c] : terms_) {
    lo = std::min(lo, Q.interval().left);
    hi = std::max(hi, Q.interval().right());
  }
  return {lo, hi - lo};
}

double positive_project(const RealFn& f, double alpha, cplx z, const QuadratureRule& rule) {
  require(z.imag() > 0.0, "P+ is evaluated in the upper half-plane");
  const NodeSet nodes = halfplane_nodes(alpha, rule, Focus::halfplane(z));
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double v = f(nodes.z[i]);
    if (!std::isfinite(v)) fail(ErrorKind::NonFiniteIntegrand, "P+ integrand is not finite");
    if (v == 0.0) continue;
    acc += nodes.w[i] * v * std::pow(std::abs(z - std::conj(nodes.z[i])), -(2.0 + alpha));
  }
  return acc;
}

namespace {

// int_0^theta cos^alpha = sign(theta) B(sin^2 theta; 1/2, (alpha+1)/2) / 2.
double cos_power_integral(double theta, double alpha) {
  const double s = std::sin(theta);
  const double v = 0.5 * boost::math::beta(0.5, 0.5 * (alpha + 1.0), s * s);
  return theta < 0.0 ? -v : v;
}

}  // namespace

double positive_project(const BoxFunction& f, double alpha, cplx z, int nodes) {
  require(z.imag() > 0.0, "P+ is evaluated in the upper half-plane");
  require(alpha > -1.0, "alpha must exceed -1");
  const double x = z.real(), y = z.imag();
  QuadratureRule rule;
  rule.nodes = nodes;
  double total = 0.0;
  for (const auto& [Q, c] : f.terms()) {
    const double a = Q.interval().left, b = Q.interval().right(), L = Q.length();
    // With x - u = S tan(theta), S = y + v, the inner integral over u is
    // S^-(1+alpha) times an integral of cos^alpha.
    std::vector<double> v, w;
    graded_height_nodes(alpha, 1e-10 * std::min(L, y), L, rule, v, w);
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double S = y + v[i];
      const double inner = cos_power_integral(std::atan((x - a) / S), alpha) -
                           cos_power_integral(std::atan((x - b) / S), alpha);
      acc += w[i] * std::pow(S, -(1.0 + alpha)) * inner;
    }
    total += c * acc;
  }
  return total;
}

void DyadicOperatorSpec::validate() const {
  require(alpha > -1.0, "alpha must exceed -1");
  require(min_level <= max_level, "level window is empty");
  require(window_left < window_right, "translation window is empty");
}

bool DyadicOperatorSpec::in_family(const DyadicInterval& I) const {
  if (I.level < min_level || I.level > max_level) return false;
  const Interval J = I.interval();
  return J.right() > window_left && J.left < window_right;
}

namespace {

template <class BoxMass>
double apply_with(const DyadicOperatorSpec& spec, cplx z, BoxMass mass) {
  spec.validate();
  require(z.imag() > 0.0, "dyadic operators are evaluated in the upper half-plane");
  const int lowest = std::max(spec.min_level, static_cast<int>(std::ceil(std::log2(z.imag()))));
  double acc = 0.0;
  for (int j = lowest; j <= spec.max_level; ++j) {
    const DyadicInterval I = grid_member(spec.beta, j, z.real());
    if (!spec.in_family(I)) continue;
    const CarlesonBox Q = box_of(I.interval());
    if (!Q.contains(z)) continue;
    const double m = mass(Q);
    if (m != 0.0) acc += m / std::pow(Q.length(), 2.0 + spec.alpha);
  }
  return acc;
}

}  // namespace

double dyadic_apply(const DyadicOperatorSpec& spec, const BoxFunction& f, cplx z) {
  return apply_with(spec, z, [&](const CarlesonBox& Q) { return f.integral_over(Q, spec.alpha); });
}

double dyadic_apply(const DyadicOperatorSpec& spec, const RealFn& f, cplx z, const BoxRule& rule) {
  return apply_with(spec, z, [&](const CarlesonBox& Q) {
    const BoxIntegral b = integrate_box(f, Q, spec.alpha, rule);
    if (b.divergent) fail(ErrorKind::NonFiniteIntegrand, "function is not integrable on a family box");
    return b.value;
  });
}

std::vector<DyadicInterval> family_over(const DyadicOperatorSpec& spec, const Interval& span) {
  spec.validate();
  const double lo = std::max(span.left, spec.window_left);
  const double hi = std::min(span.right(), spec.window_right);
  std::vector<DyadicInterval> out;
  if (!(lo < hi)) return out;
  for (int j = spec.min_level; j <= spec.max_level; ++j) {
    DyadicInterval I = grid_member(spec.beta, j, lo);
    const double count = (hi - I.interval().left) / std::ldexp(1.0, j);
    require(count < 1e7, "family window holds too many intervals");
    while (I.interval().left < hi) {
      if (spec.in_family(I)) out.push_back(I);
      ++I.translation;
    }
  }
  return out;
}

double dyadic_pairing(const DyadicOperatorSpec& spec, const BoxFunction& f, const BoxFunction& g) {
  if (f.empty() || g.empty()) return 0.0;
  const Interval sf = f.support(), sg = g.support();
  // Every contributing interval meets the hull of the two supports.
  const double hull_lo = std::min(sf.left, sg.left), hull_hi = std::max(sf.right(), sg.right());
  double acc = 0.0;
  for (const DyadicInterval& I : family_over(spec, {hull_lo, hull_hi - hull_lo})) {
    const CarlesonBox Q = box_of(I.interval());
    const double F = f.integral_over(Q, spec.alpha);
    if (F == 0.0) continue;
    const double scale = F / std::pow(Q.length(), 2.0 + spec.alpha);
    for (const auto& [B, d] : g.terms()) acc += d * scale * box_intersection_measure(Q, B, spec.alpha);
  }
  return acc;
}

double self_adjoint_residual(const DyadicOperatorSpec& spec, const BoxFunction& f, const BoxFunction& g) {
  const double a = dyadic_pairing(spec, f, g);
  const double b = dyadic_pairing(spec, g, f);
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

double dyadic_maximal(const Weight& w, const DyadicOperatorSpec& spec, const RealFn& f, cplx z,
                      const BoxRule& rule) {
  spec.validate();
  require(z.imag() > 0.0, "the maximal function is evaluated in the upper half-plane");
  const int lowest = std::max(spec.min_level, static_cast<int>(std::ceil(std::log2(z.imag()))));
  BoxRule r = rule;
  r.singular.insert(r.singular.end(), w.singular().begin(), w.singular().end());
  double best = 0.0;
  for (int j = lowest; j <= spec.max_level; ++j) {
    const DyadicInterval I = grid_member(spec.beta, j, z.real());
    if (!spec.in_family(I)) continue;
    const CarlesonBox Q = box_of(I.interval());
    if (!Q.contains(z)) continue;
    const BoxIntegral num = integrate_box([&](cplx u) { return std::abs(f(u)) * w(u); }, Q, spec.alpha, r);
    const BoxIntegral den = integrate_box([&](cplx u) { return w(u); }, Q, spec.alpha, r);
    if (num.divergent || den.divergent) fail(ErrorKind::NonFiniteIntegrand, "weighted box integral diverges");
    if (den.value > 0.0) best = std::max(best, num.value / den.value);
  }
  return best;
}

DominationReport domination_check(const BoxFunction& f, double alpha, const std::vector<cplx>& samples) {
  DominationReport report;
  DyadicOperatorSpec zero, third;
  zero.alpha = third.alpha = alpha;
  third.beta = GridShift::Third;
  for (cplx z : samples) {
    const double lhs = positive_project(f, alpha, z);
    const double rhs = dyadic_apply(zero, f, z) + dyadic_apply(third, f, z);
    if (lhs == 0.0 && rhs == 0.0) {
      ++report.skipped;
      continue;
    }
    ++report.evaluated;
    const double ratio = rhs > 0.0 ? lhs / rhs : std::numeric_limits<double>::infinity();
    if (ratio > report.max_ratio) {
      report.max_ratio = ratio;
      report.worst = z;
    }
  }
  return report;
}

}  // namespace bergman
