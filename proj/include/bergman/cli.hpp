#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bergman::cli {

inline constexpr int kSchemaVersion = 1;

enum ExitCode : int { kOk = 0, kValidation = 2, kDefect = 3 };

struct GridConfig {
  std::string strategy = "log-height";
  std::size_t count = 12;
  double lo = 0.01;
  double hi = 100.0;
  double x_half = 10.0;
};

struct QuadratureConfig {
  int nodes = 8;
  double X = 1e6;
  double Y = 1e6;
  double eps = 1e-6;
  int angular = 128;
};

/// Fully resolved run configuration. JSON files use the same field names;
/// unknown keys are rejected.
struct RunConfig {
  std::string command;
  /// Empty means the command default: half-plane for kernel, bb, joint and
  /// dominate, disc otherwise.
  std::string domain;
  std::vector<double> alpha = {0.0};
  double p = 2.0;
  std::string f = "1";
  std::optional<std::string> g;
  std::string weight = "power:0";
  std::optional<std::string> sigma;
  int N = 40;
  std::uint64_t seed = 1;
  GridConfig grid;
  QuadratureConfig quadrature;
  /// Box family depth: levels -depth..depth on the half-plane, 2^-depth arcs on the disc.
  int family_depth = 8;
  std::size_t family_random = 200;
  /// Box function for `dominate`: (left, length, coefficient) triples.
  std::vector<std::vector<double>> boxes = {{0.0, 1.0, 1.0}};
  std::size_t samples = 100;
  bool exponent = false;
  std::string verifier = "theorem-main2";
  std::string output;
  std::string csv;

  /// Throws bergman::Error (InvalidArgument) on out-of-range values.
  void validate() const;
};

/// Parses a config (or a report, whose embedded config is used).
RunConfig config_from_json(const std::string& text);
std::string config_to_json(const RunConfig& config);

/// Text printed on usage errors.
std::string schema_help();

/// Runs one subcommand. The report goes to config.output (stdout when
/// empty); diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace bergman::cli
