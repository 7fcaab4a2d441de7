#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bergman {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

enum class ErrorKind {
  InvalidArgument,
  NonFiniteIntegrand,
  DomainMismatch,
  NoCover,
  DualNonIntegrable,
  NonConvergence,
  TailTooLarge,
  TruncationTooSmall,
  ZeroSymbol,
  NotInvertible,
  ParseError,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; the kind distinguishes the
/// failure modes callers are expected to branch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

enum class DomainKind { Disc, HalfPlane, Polydisc, Tube };

std::string_view to_string(DomainKind kind);

/// A domain together with its weight parameter vector. Disc and half-plane
/// are one-dimensional; polydisc and tube carry one alpha per axis.
class DomainSpec {
 public:
  static DomainSpec disc(double alpha);
  static DomainSpec halfplane(double alpha);
  static DomainSpec polydisc(std::vector<double> alpha);
  static DomainSpec tube(std::vector<double> alpha);

  DomainKind kind() const noexcept { return kind_; }
  std::size_t dim() const noexcept { return alpha_.size(); }
  const std::vector<double>& alpha() const noexcept { return alpha_; }
  double alpha(std::size_t axis) const { return alpha_.at(axis); }

  /// Disc or polydisc.
  bool is_bounded() const noexcept {
    return kind_ == DomainKind::Disc || kind_ == DomainKind::Polydisc;
  }
  /// One-dimensional factor domain for the given axis.
  DomainSpec axis(std::size_t k) const;

  bool operator==(const DomainSpec&) const = default;

 private:
  DomainSpec(DomainKind kind, std::vector<double> alpha);
  DomainKind kind_;
  std::vector<double> alpha_;
};

/// A point of a domain: one complex coordinate per axis.
struct DomainPoint {
  std::vector<cplx> z;

  DomainPoint() = default;
  DomainPoint(cplx z0) : z{z0} {}  // NOLINT: implicit on purpose for 1-D use
  DomainPoint(std::initializer_list<cplx> coords) : z(coords) {}
  explicit DomainPoint(std::vector<cplx> coords) : z(std::move(coords)) {}

  std::size_t dim() const noexcept { return z.size(); }
  cplx operator[](std::size_t k) const { return z[k]; }
  std::span<const cplx> span() const noexcept { return z; }
};

bool is_interior(const DomainSpec& d, const DomainPoint& w);

void require(bool condition, const std::string& what);

}  // namespace bergman
