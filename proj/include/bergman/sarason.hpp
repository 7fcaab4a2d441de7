#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bergman/domains.hpp"
#include "bergman/positive.hpp"
#include "bergman/symbol.hpp"
#include "bergman/weights.hpp"

namespace bergman {

/// Analytic pair (f, g) with exponent p; q = p/(p-1).
struct SymbolPair {
  Symbol f;
  Symbol g;
  double p = 2.0;

  double q() const { return p / (p - 1.0); }
  void validate() const;
};

struct QuantityOptions {
  QuadratureRule rule = [] {
    QuadratureRule r;
    r.nodes = 6;
    return r;
  }();
  /// A point whose refined quadrature moves by more than this (relative) is
  /// flagged divergent.
  double divergence_tolerance = 2e-2;
};

struct NormValue {
  double value = 0.0;
  bool divergent = false;
};

/// |f k_w|_{p,alpha}. Symbols that factor over the axes are integrated one
/// axis at a time.
NormValue weighted_kernel_norm(const Symbol& f, const DomainPoint& w, double p, const DomainSpec& d,
                               const QuantityOptions& options = {});

/// Maximum over sample points; a lower bound for the supremum. The value is
/// infinite when any point is flagged divergent.
struct SupReport {
  double value = 0.0;
  /// Largest value over the points that converged.
  double finite_part = 0.0;
  DomainPoint argmax;
  std::vector<double> per_point;
  std::size_t divergent = 0;
  bool lower_bound = true;
  std::string resolution;
};

/// [f, g] = max over the grid of |f k_w|_p |g k_w|_q.
SupReport sarason_quantity(const SymbolPair& pair, const DomainSpec& d,
                           const std::vector<DomainPoint>& grid, const QuantityOptions& options = {});

/// [f] = [f, 1/f]. Throws ZeroSymbol when |f| < 1e-14 at a grid point, the
/// domain center or a quadrature node.
SupReport invariant_quantity(const Symbol& f, double p, const DomainSpec& d,
                             const std::vector<DomainPoint>& grid, const QuantityOptions& options = {});

struct InfReport {
  double value = 0.0;
  DomainPoint argmin;
  std::size_t points = 0;
};

/// min over the grid (plus the boundary-refined points) of |f||g|; an upper
/// bound for the infimum.
InfReport inf_product(const Symbol& f, const Symbol& g, const DomainSpec& d,
                      const std::vector<DomainPoint>& grid);

/// Points approaching the boundary: on the disc, radii 1 - 10^-k (k = 1..levels)
/// at `angles` equally spaced angles; on the half-plane, heights 10^-k over
/// x in [-x_half, x_half]. Product domains use the diagonal.
std::vector<DomainPoint> boundary_refined_grid(const DomainSpec& d, int levels, int angles = 32,
                                               double x_half = 10.0);

struct Inequality {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  std::string lhs_source;
  std::string rhs_source;
  /// Recorded but not asserted.
  bool informational = false;
};

struct VerifierVerdict {
  std::string verifier;
  std::map<std::string, double> quantities;
  std::map<std::string, bool> verdicts;
  std::vector<Inequality> inequalities;
  std::vector<std::string> notes;
  std::map<std::string, double> tolerances;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> grids;

  void add(Inequality ineq);
  /// Every asserted inequality holds.
  bool all_hold() const;
  const Inequality& inequality(const std::string& name) const;
  std::string to_json() const;
};

/// Corpus-wide constants, calibrated once on the symbol corpus and frozen.
struct VerifierConstants {
  /// [|f|^p]_B <= c1 [f]^p.
  double c1 = 4.0;
  /// Operator side <= c2 [f, g] [f]^max(p, q).
  double c2 = 4.0;
  /// [f, g] <= c3 |T_g T_conj(f)| [f].
  double c3 = 1.0;
  /// Slice quantity <= slice [f].
  double slice = 1.0;
};

struct TheoremOptions {
  int N = 40;
  QuantityOptions quantity;
  VerifierConstants constants;
  /// Box indicators sampled for the two-weight route on the half-plane.
  int test_functions = 20;
  std::uint64_t seed = 17;
  /// Family for the weight characteristic on the half-plane.
  FamilySpec family = [] {
    FamilySpec s;
    s.min_level = -8;
    s.max_level = 8;
    s.random_count = 60;
    return s;
  }();
};

/// Ratio |P+ u|_{L^p(|f|^p)} / |u|_{L^p(|g|^-p)} for a box indicator u on the
/// half-plane.
double two_weight_ratio(const SymbolPair& pair, double alpha, const CarlesonBox& Q);

/// Two-sided bounds of the main theorem: the operator side comes from the
/// truncated matrix (disc and polydisc, p = 2) or from the two-weight route
/// with P+ on sampled box indicators (half-plane).
VerifierVerdict verify_theorem_main2(const SymbolPair& pair, const DomainSpec& d,
                                     const std::vector<DomainPoint>& grid, const TheoremOptions& options = {});

/// Pinch 1/(|A^-1| |B^-1|) <= |f(w)||g(w)| |f k_w|_2 |g k_w|_2 <= M1 M2 with
/// A = T_f T_conj(g), B = T_g T_conj(f), from truncated matrices (p = 2, disc
/// or polydisc). Throws NotInvertible when the condition number of the
/// truncated A exceeds 1e8.
VerifierVerdict verify_prop_main11(const SymbolPair& pair, const DomainSpec& d,
                                   const std::vector<DomainPoint>& grid, int N,
                                   const QuantityOptions& options = {});

/// Window growth on the half-plane: integrals of |fg|, |f|^p, |g|^q over
/// [-R, R] x (0, R] and the minimum of |fg| on each window.
VerifierVerdict verify_halfplane_impossibility(const SymbolPair& pair, double alpha,
                                               const std::vector<double>& radii = {10.0, 100.0, 1000.0});

struct TubeOptions {
  QuantityOptions quantity;
  VerifierConstants constants;
  /// Heights of the frozen second coordinate (points i*h).
  std::vector<double> frozen_heights = {1e-2, 3e-2, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0, 300.0};
  int test_functions = 4;
  std::uint64_t seed = 23;
};

/// Slice bounds and per-factor two-weight ratios for f and 1/f on the
/// two-variable tube. `grid` holds one-variable half-plane points.
VerifierVerdict verify_tube_theorem(const Symbol& f, double p, const std::vector<double>& alpha,
                                    const std::vector<DomainPoint>& grid, const TubeOptions& options = {});

/// Interior-block residuals of T_f T_conj(g) T_h - I and T_h T_f T_conj(g) - I
/// with h = 1/(f conj(g)), the necessity bound [f,g] <= s_alpha |T_f T_conj(g)|
/// and the eta chain [f] <= eta^-2 [f,g]^2 (p = 2).
VerifierVerdict verify_polydisc_invertibility(const SymbolPair& pair, const DomainSpec& d, int N,
                                              const std::vector<DomainPoint>& grid,
                                              const QuantityOptions& options = {});

/// Interior block used for the composition residuals: floor(N/4).
int invertibility_interior(int N);

struct EquivalenceOptions {
  /// Truncations for certificate (i).
  std::vector<int> truncations = {20, 40, 80};
  /// Boundary distances 10^-k of the grid for (ii), k = 1..levels[i].
  std::vector<int> grid_levels = {1, 2, 3};
  /// Family depths for (iii).
  std::vector<int> family_levels = {4, 6, 8};
  /// Arc lengths 2^-k of the test boxes for (iv).
  std::vector<int> test_levels = {3, 5, 7};
  /// Growth below this between the last two refinements means finite.
  double growth_tolerance = 0.05;
  QuantityOptions quantity;
};

/// The four certificates for f and 1/f on the disc (p = 2): (i) |T_f T_conj(1/f)|,
/// (ii) [f], (iii) the joint characteristic of (|f|^-q, |f|^p), (iv) P+ on
/// L^p(|f|^p) tested on boxes at angle 0. Each is refined three times.
VerifierVerdict equivalence_suite_inverse_symbol(const Symbol& f, double p, double alpha,
                                                 const EquivalenceOptions& options = {});

/// P+ u(z) on the disc for u the indicator of a disc box.
double positive_project_disc(const CarlesonBox& Q, double alpha, cplx z);

struct ChangeOfVariables {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// |f1 o phi_a|_{p,alpha} and |f k_a|_{p,alpha} with f1 = f k_a^(2/q - 1),
/// each by its own quadrature on the disc.
ChangeOfVariables change_of_variables_check(const Symbol& f, cplx a, double p, double alpha,
                                            const QuadratureRule& rule = {});

}  // namespace bergman
