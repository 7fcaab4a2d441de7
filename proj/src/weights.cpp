#include "bergman/weights.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "bergman/quadrature.hpp"

namespace bergman {

Weight::Weight(Fn fn, std::string name, std::size_t dim)
    : fn_(std::move(fn)), name_(std::move(name)), dim_(dim) {
  require(static_cast<bool>(fn_), "weight needs an evaluator");
  require(dim_ >= 1, "weight dimension must be positive");
}

Weight Weight::constant(double c) {
  require(c > 0.0, "constant weight must be positive");
  std::ostringstream name;
  name << c;
  return Weight([c](std::span<const cplx>) { return c; }, name.str());
}

Weight Weight::power(double t) {
  require(std::isfinite(t), "power exponent must be finite");
  std::ostringstream name;
  name << "y^" << t;
  Weight w([t](std::span<const cplx> z) { return std::pow(z[0].imag(), t); }, name.str());
  w.power_ = t;
  return w;
}

Weight Weight::product(const std::vector<Weight>& factors) {
  require(!factors.empty(), "product weight needs factors");
  std::string name;
  for (const Weight& f : factors) {
    require(f.dim() == 1, "product factors must be one-variable weights");
    name += (name.empty() ? "" : " * ") + f.name();
  }
  return Weight(
      [factors](std::span<const cplx> z) {
        double acc = 1.0;
        for (std::size_t k = 0; k < factors.size(); ++k) acc *= factors[k](z[k]);
        return acc;
      },
      name, factors.size());
}

Weight Weight::with_singular(std::vector<double> points) const {
  Weight w = *this;
  w.singular_ = std::move(points);
  return w;
}

Weight Weight::pow(double e) const {
  Fn inner = fn_;
  std::ostringstream name;
  name << "(" << name_ << ")^" << e;
  Weight w([inner, e](std::span<const cplx> z) { return std::pow(inner(z), e); }, name.str(), dim_);
  if (power_) w.power_ = *power_ * e;
  w.singular_ = singular_;
  return w;
}

Weight Weight::dual(double p) const {
  require(p > 1.0, "dual weight needs p > 1");
  const double q = p / (p - 1.0);
  return pow(1.0 - q);
}

Weight Weight::slice(std::size_t axis, const DomainPoint& frozen) const {
  require(axis < dim_ && frozen.dim() == dim_, "slice axis or frozen point does not match the weight");
  Fn inner = fn_;
  std::vector<cplx> base = frozen.z;
  std::ostringstream name;
  name << name_ << " | axis " << axis;
  return Weight(
      [inner, base, axis](std::span<const cplx> z) {
        std::vector<cplx> full = base;
        full[axis] = z[0];
        return inner(full);
      },
      name.str());
}

Weight weight_from_symbol(const Symbol& f, double p) {
  require(p > 0.0, "weight exponent must be positive");
  return Weight([f, p](std::span<const cplx> z) { return std::pow(std::abs(f(z)), p); },
                "|" + (f.name().empty() ? std::string("f") : f.name()) + "|^" + std::to_string(p),
                std::max<std::size_t>(1, f.min_dim()));
}

BoxIntegral weight_box_integral(const Weight& w, const CarlesonBox& Q, double alpha,
                                const BoxRule& rule, bool closed_form) {
  if (closed_form && w.power_exponent() && !Q.on_disc()) {
    const double e = *w.power_exponent() + alpha + 1.0;
    BoxIntegral out;
    if (e <= 0.0) {
      out.divergent = true;
      out.value = out.tail = std::numeric_limits<double>::infinity();
      return out;
    }
    const double L = Q.length();
    out.value = L * std::pow(L, e) / e;
    return out;
  }
  BoxRule r = rule;
  r.singular.insert(r.singular.end(), w.singular().begin(), w.singular().end());
  return integrate_box([&w](cplx z) { return w(z); }, Q, alpha, r);
}

namespace {

std::string describe(const std::vector<CarlesonBox>& family, const CharacteristicOptions& o) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const CarlesonBox& Q : family) {
    lo = std::min(lo, Q.length());
    hi = std::max(hi, Q.length());
  }
  std::ostringstream s;
  s << family.size() << " boxes, lengths [" << lo << ", " << hi << "], " << o.rule.layers
    << " layers x " << o.rule.nodes << " nodes" << (o.closed_form ? ", closed forms" : "");
  return s.str();
}

double normalizer(const CarlesonBox& Q, double alpha) {
  return Q.on_disc() ? Q.measure(alpha) : std::pow(Q.length(), 2.0 + alpha);
}

template <class PerBox>
CharacteristicReport maximize(const std::vector<CarlesonBox>& family,
                              const CharacteristicOptions& options, PerBox per_box) {
  require(!family.empty(), "box family is empty");
  CharacteristicReport report;
  report.value = -1.0;
  report.resolution = describe(family, options);
  for (const CarlesonBox& Q : family) {
    const double v = per_box(Q);
    if (options.keep_per_box) report.per_box.push_back(v);
    if (v > report.value) {
      report.value = v;
      report.extremal = Q;
    }
  }
  return report;
}

void check_box(const BoxIntegral& b, bool dual) {
  if (!b.divergent) return;
  if (dual) fail(ErrorKind::DualNonIntegrable, "dual weight is not integrable on a test box");
  fail(ErrorKind::NonFiniteIntegrand, "weight is not integrable on a test box");
}

}  // namespace

CharacteristicReport bb_characteristic(const Weight& w, double p, double alpha,
                                       const std::vector<CarlesonBox>& family,
                                       const CharacteristicOptions& options) {
  require(p > 1.0, "p must exceed 1");
  require(alpha > -1.0, "alpha must exceed -1");
  const Weight sigma = w.dual(p);
  return maximize(family, options, [&](const CarlesonBox& Q) {
    const BoxIntegral bs = weight_box_integral(sigma, Q, alpha, options.rule, options.closed_form);
    check_box(bs, true);
    const BoxIntegral bw = weight_box_integral(w, Q, alpha, options.rule, options.closed_form);
    check_box(bw, false);
    const double n = normalizer(Q, alpha);
    return (bw.value / n) * std::pow(bs.value / n, p - 1.0);
  });
}

CharacteristicReport joint_characteristic(const Weight& sigma, const Weight& omega, double p,
                                          double alpha, const std::vector<CarlesonBox>& family,
                                          const CharacteristicOptions& options) {
  require(p > 1.0, "p must exceed 1");
  require(alpha > -1.0, "alpha must exceed -1");
  return maximize(family, options, [&](const CarlesonBox& Q) {
    const BoxIntegral bs = weight_box_integral(sigma, Q, alpha, options.rule, options.closed_form);
    check_box(bs, true);
    const BoxIntegral bw = weight_box_integral(omega, Q, alpha, options.rule, options.closed_form);
    check_box(bw, false);
    const double m = Q.measure(alpha);
    return (bw.value / m) * std::pow(bs.value / m, p - 1.0);
  });
}

double normalization_factor(double p, double alpha) { return std::pow(1.0 + alpha, p); }

CharacteristicReport product_bb_check(const Weight& w, double p, const std::vector<double>& alpha,
                                      const std::vector<DomainPoint>& frozen,
                                      const std::vector<CarlesonBox>& family,
                                      const CharacteristicOptions& options) {
  require(w.dim() >= 2 && alpha.size() == w.dim(), "product check needs a weight in several variables");
  require(!frozen.empty(), "product check needs frozen coordinates");
  CharacteristicReport best;
  best.value = -1.0;
  for (std::size_t axis = 0; axis < w.dim(); ++axis) {
    for (const DomainPoint& xi : frozen) {
      CharacteristicReport r = bb_characteristic(w.slice(axis, xi), p, alpha[axis], family, options);
      if (r.value > best.value) best = std::move(r);
    }
  }
  std::ostringstream s;
  s << best.resolution << "; " << w.dim() << " axes x " << frozen.size() << " frozen points";
  best.resolution = s.str();
  return best;
}

bool tent_holder_check(const Weight& sigma, const Weight& omega, double p, double alpha,
                       const TentTop& T, int nodes) {
  require(p > 1.0, "p must exceed 1");
  const double q = p / (p - 1.0);
  std::vector<double> x, wx, y, wy;
  append_panel(T.box.interval().left, T.box.interval().right(), nodes, x, wx);
  append_panel(T.lower(), T.upper(), nodes, y, wy);
  double m = 0.0, ms = 0.0, mw = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double c = wy[i] * wx[j] * std::pow(y[i], alpha);
      const cplx z{x[j], y[i]};
      m += c;
      ms += c * sigma(z);
      mw += c * omega(z);
    }
  }
  return m <= std::pow(ms, 1.0 / q) * std::pow(mw, 1.0 / p) * (1.0 + 1e-10);
}

double box_top_comparability(double alpha) { return box_top_ratio(alpha); }

}  // namespace bergman
