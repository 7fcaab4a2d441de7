#include "bergman/core.hpp"

#include <cmath>

namespace bergman {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NonFiniteIntegrand: return "NonFiniteIntegrand";
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::NoCover: return "NoCover";
    case ErrorKind::DualNonIntegrable: return "DualNonIntegrable";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::TailTooLarge: return "TailTooLarge";
    case ErrorKind::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorKind::ZeroSymbol: return "ZeroSymbol";
    case ErrorKind::NotInvertible: return "NotInvertible";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

void require(bool condition, const std::string& what) {
  if (!condition) fail(ErrorKind::InvalidArgument, what);
}

std::string_view to_string(DomainKind kind) {
  switch (kind) {
    case DomainKind::Disc: return "disc";
    case DomainKind::HalfPlane: return "halfplane";
    case DomainKind::Polydisc: return "polydisc";
    case DomainKind::Tube: return "tube";
  }
  return "unknown";
}

DomainSpec::DomainSpec(DomainKind kind, std::vector<double> alpha)
    : kind_(kind), alpha_(std::move(alpha)) {
  require(!alpha_.empty(), "domain needs at least one axis");
  for (double a : alpha_) {
    require(std::isfinite(a) && a > -1.0, "every alpha component must exceed -1");
  }
  if (kind_ == DomainKind::Disc || kind_ == DomainKind::HalfPlane) {
    require(alpha_.size() == 1, "disc and half-plane are one-dimensional");
  }
}

DomainSpec DomainSpec::disc(double alpha) { return {DomainKind::Disc, {alpha}}; }
DomainSpec DomainSpec::halfplane(double alpha) { return {DomainKind::HalfPlane, {alpha}}; }
DomainSpec DomainSpec::polydisc(std::vector<double> alpha) {
  return {DomainKind::Polydisc, std::move(alpha)};
}
DomainSpec DomainSpec::tube(std::vector<double> alpha) {
  return {DomainKind::Tube, std::move(alpha)};
}

DomainSpec DomainSpec::axis(std::size_t k) const {
  return is_bounded() ? disc(alpha_.at(k)) : halfplane(alpha_.at(k));
}

bool is_interior(const DomainSpec& d, const DomainPoint& w) {
  if (w.dim() != d.dim()) return false;
  for (cplx c : w.z) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    if (d.is_bounded() ? !(std::abs(c) < 1.0) : !(c.imag() > 0.0)) return false;
  }
  return true;
}

}  // namespace bergman
