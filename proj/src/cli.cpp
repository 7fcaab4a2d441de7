#include "bergman/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <random>
#include <set>
#include <sstream>

#include "bergman/kernels.hpp"
#include "bergman/operators.hpp"
#include "bergman/positive.hpp"
#include "bergman/sarason.hpp"
#include "bergman/weights.hpp"

namespace bergman::cli {

using nlohmann::json;

namespace {

const std::set<std::string> kCommands = {"kernel",  "bb",      "joint",   "dominate", "toeplitz",
                                         "berezin", "rankone", "sarason", "verify"};
const std::set<std::string> kVerifiers = {"theorem-main2",          "prop-main11", "halfplane-impossibility",
                                          "polydisc-invertibility", "tube-theorem", "equivalence"};

json number(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

json point_json(const DomainPoint& w) {
  json a = json::array();
  for (cplx z : w.z) a.push_back({z.real(), z.imag()});
  return a;
}

json box_json(const CarlesonBox& Q) {
  return {{"domain", std::string(to_string(Q.domain()))},
          {"left", Q.interval().left},
          {"length", Q.length()}};
}

template <class T>
void take(const json& j, const char* key, T& into) {
  if (j.contains(key)) into = j.at(key).get<T>();
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) fail(ErrorKind::InvalidArgument, where + " must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (!known.count(k)) fail(ErrorKind::InvalidArgument, "unknown key '" + k + "' in " + where);
  }
}

DomainSpec domain_of(const RunConfig& c) {
  if (c.domain == "disc") return DomainSpec::disc(c.alpha.at(0));
  if (c.domain == "halfplane") return DomainSpec::halfplane(c.alpha.at(0));
  if (c.domain == "polydisc") return DomainSpec::polydisc(c.alpha);
  if (c.domain == "tube") return DomainSpec::tube(c.alpha);
  fail(ErrorKind::InvalidArgument, "unknown domain '" + c.domain + "'");
}

QuadratureRule rule_of(const RunConfig& c) {
  QuadratureRule r;
  r.nodes = c.quadrature.nodes;
  r.X = c.quadrature.X;
  r.Y = c.quadrature.Y;
  r.eps = c.quadrature.eps;
  r.angular = c.quadrature.angular;
  r.validate();
  return r;
}

std::vector<DomainPoint> grid_of(const RunConfig& c, const DomainSpec& d) {
  GridOptions o;
  o.lo = c.grid.lo;
  o.hi = c.grid.hi;
  o.x_half = c.grid.x_half;
  return sample_grid(d, grid_strategy_from_string(c.grid.strategy), c.grid.count, c.seed, o).points;
}

std::vector<CarlesonBox> family_of(const RunConfig& c, const DomainSpec& d) {
  if (d.kind() == DomainKind::Disc) return disc_family(c.family_depth, c.family_random, c.seed);
  if (d.kind() != DomainKind::HalfPlane) fail(ErrorKind::DomainMismatch, "box families need the disc or the half-plane");
  FamilySpec s;
  s.min_level = -c.family_depth;
  s.max_level = c.family_depth;
  s.random_count = c.family_random;
  s.seed = c.seed;
  return halfplane_family(s);
}

// power:t, const:c or symbol:EXPR (the latter meaning |EXPR|^p).
Weight weight_of(const std::string& spec, double p) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) fail(ErrorKind::InvalidArgument, "weight spec needs kind:value, got '" + spec + "'");
  const std::string kind = spec.substr(0, colon), value = spec.substr(colon + 1);
  try {
    if (kind == "power") return Weight::power(std::stod(value));
    if (kind == "const") return Weight::constant(std::stod(value));
  } catch (const std::logic_error&) {
    fail(ErrorKind::InvalidArgument, "weight spec '" + spec + "' has a bad number");
  }
  if (kind == "symbol") return weight_from_symbol(Symbol::parse(value), p);
  fail(ErrorKind::InvalidArgument, "unknown weight kind '" + kind + "'");
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<double> values) {
    std::vector<std::string> row;
    for (double v : values) {
      std::ostringstream s;
      s.precision(17);
      s << v;
      row.push_back(s.str());
    }
    rows.push_back(std::move(row));
  }
};

struct Outcome {
  json result;
  Table table;
  bool defect = false;
};

Outcome run_kernel(const RunConfig& c) {
  Outcome o;
  const DomainSpec d = domain_of(c);
  if (c.exponent) {
    o.result["exponent"] = kernel_pnorm_exponent(c.p, c.alpha.at(0));
    return o;
  }
  const QuadratureRule rule = rule_of(c);
  o.table.header = {"re", "im", "norm"};
  json pts = json::array();
  std::vector<double> lv, ln;
  for (const DomainPoint& w : grid_of(c, d)) {
    const double n = kernel_pnorm(KernelSpec(d, w), c.p, rule);
    pts.push_back({{"point", point_json(w)}, {"norm", n}});
    o.table.add({w[0].real(), w[0].imag(), n});
    lv.push_back(std::log(d.is_bounded() ? 1.0 - std::abs(w[0]) : w[0].imag()));
    ln.push_back(std::log(n));
  }
  o.result["norms"] = pts;
  o.result["exponent"] = kernel_pnorm_exponent(c.p, c.alpha.at(0));
  if (lv.size() >= 2 && d.dim() == 1) {
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < lv.size(); ++k) mx += lv[k] / lv.size(), my += ln[k] / lv.size();
    double sxy = 0, sxx = 0;
    for (std::size_t k = 0; k < lv.size(); ++k) sxy += (lv[k] - mx) * (ln[k] - my), sxx += (lv[k] - mx) * (lv[k] - mx);
    if (sxx > 0) o.result["fitted_slope"] = sxy / sxx;
  }
  return o;
}

json characteristic_json(const CharacteristicReport& r) {
  return {{"value", number(r.value)},
          {"extremal", box_json(r.extremal)},
          {"resolution", r.resolution},
          {"lower_bound", r.lower_bound}};
}

Outcome run_bb(const RunConfig& c, bool joint) {
  Outcome o;
  const DomainSpec d = domain_of(c);
  const Weight omega = weight_of(c.weight, c.p);
  const auto family = family_of(c, d);
  CharacteristicOptions opts;
  opts.keep_per_box = true;
  const CharacteristicReport r =
      joint ? joint_characteristic(c.sigma ? weight_of(*c.sigma, c.p) : omega.dual(c.p), omega, c.p, c.alpha.at(0),
                                   family, opts)
            : bb_characteristic(omega, c.p, c.alpha.at(0), family, opts);
  o.result = characteristic_json(r);
  o.table.header = {"left", "length", "value"};
  for (std::size_t k = 0; k < family.size() && k < r.per_box.size(); ++k) {
    o.table.add({family[k].interval().left, family[k].length(), r.per_box[k]});
  }
  return o;
}

Outcome run_dominate(const RunConfig& c) {
  Outcome o;
  if (c.domain != "halfplane") fail(ErrorKind::DomainMismatch, "dominate runs on the half-plane");
  BoxFunction f;
  for (const auto& b : c.boxes) {
    if (b.size() != 3) fail(ErrorKind::InvalidArgument, "boxes are (left, length, coefficient) triples");
    f.add(box_of({b[0], b[1]}), b[2]);
  }
  std::mt19937_64 rng(c.seed);
  std::vector<cplx> samples;
  for (std::size_t k = 0; k < c.samples; ++k) {
    samples.emplace_back(8.0 * unit_uniform(rng) - 4.0, std::pow(10.0, 4.0 * unit_uniform(rng) - 3.0));
  }
  const DominationReport r = domination_check(f, c.alpha.at(0), samples);
  o.result = {{"max_ratio", number(r.max_ratio)},
              {"worst", {r.worst.real(), r.worst.imag()}},
              {"evaluated", r.evaluated},
              {"skipped", r.skipped}};
  o.defect = !std::isfinite(r.max_ratio);
  o.table.header = {"re", "im"};
  for (cplx z : samples) o.table.add({z.real(), z.imag()});
  return o;
}

Outcome run_toeplitz(const RunConfig& c) {
  Outcome o;
  const DomainSpec d = domain_of(c);
  const TruncatedOperator T = toeplitz_matrix(Symbol::parse(c.f), d, c.N);
  o.result = json::parse(T.summary_json());
  o.result["norm"] = *operator_norm(T).exact2;
  o.table.header = {"row", "col", "re", "im"};
  for (Eigen::Index i = 0; i < T.matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < T.matrix.cols(); ++j) {
      const cplx v = T.matrix(i, j);
      if (v != 0.0) o.table.add({double(i), double(j), v.real(), v.imag()});
    }
  }
  return o;
}

Outcome run_berezin(const RunConfig& c) {
  Outcome o;
  const DomainSpec d = domain_of(c);
  if (!d.is_bounded()) fail(ErrorKind::DomainMismatch, "berezin runs on the disc or the polydisc");
  const Symbol f = Symbol::parse(c.f), g = Symbol::parse(c.g.value_or("1"));
  const TruncatedOperator T = toeplitz_matrix(f, d, c.N) * toeplitz_matrix(g, d, c.N).adjoint();
  o.table.header = {"re", "im", "matrix_re", "matrix_im", "closed_re", "closed_im"};
  double worst = 0.0;
  for (const DomainPoint& w : grid_of(c, d)) {
    const cplx a = berezin(T, w), b = berezin_toeplitz_product(f, g, w);
    worst = std::max(worst, std::abs(a - b));
    o.table.add({w[0].real(), w[0].imag(), a.real(), a.imag(), b.real(), b.imag()});
  }
  o.result["max_abs_error"] = worst;
  return o;
}

Outcome run_rankone(const RunConfig& c) {
  Outcome o;
  const DomainSpec d = domain_of(c);
  const RankOneCheck r = rank_one_identity_check(Symbol::parse(c.f), Symbol::parse(c.g.value_or("1")), d, c.N);
  o.result = {{"relative_error", r.relative_error},
              {"interior", r.interior},
              {"cap", r.cap},
              {"s_alpha", lambda_coeffs(d.alpha()).s_alpha},
              {"tolerance", 1e-6}};
  o.defect = !(r.relative_error < 1e-6);
  return o;
}

Outcome run_sarason(const RunConfig& c) {
  Outcome o;
  const DomainSpec d = domain_of(c);
  QuantityOptions q;
  q.rule = rule_of(c);
  const auto grid = grid_of(c, d);
  const Symbol f = Symbol::parse(c.f);
  const SupReport r = c.g ? sarason_quantity({f, Symbol::parse(*c.g), c.p}, d, grid, q)
                          : invariant_quantity(f, c.p, d, grid, q);
  o.result = {{"quantity", c.g ? "[f,g]" : "[f]"},
              {"value", number(r.value)},
              {"finite_part", number(r.finite_part)},
              {"argmax", point_json(r.argmax)},
              {"divergent_points", r.divergent},
              {"lower_bound", r.lower_bound},
              {"resolution", r.resolution}};
  o.table.header = {"re", "im", "value"};
  for (std::size_t k = 0; k < grid.size(); ++k) o.table.add({grid[k][0].real(), grid[k][0].imag(), r.per_point[k]});
  return o;
}

Outcome run_verify(const RunConfig& c) {
  Outcome o;
  const DomainSpec d = domain_of(c);
  const Symbol f = Symbol::parse(c.f);
  const SymbolPair pair{f, c.g ? Symbol::parse(*c.g) : f.reciprocal(), c.p};
  VerifierVerdict v;
  if (c.verifier == "theorem-main2") {
    TheoremOptions t;
    t.N = c.N;
    t.seed = c.seed;
    v = verify_theorem_main2(pair, d, grid_of(c, d), t);
  } else if (c.verifier == "prop-main11") {
    v = verify_prop_main11(pair, d, grid_of(c, d), c.N);
  } else if (c.verifier == "halfplane-impossibility") {
    v = verify_halfplane_impossibility(pair, c.alpha.at(0));
  } else if (c.verifier == "polydisc-invertibility") {
    v = verify_polydisc_invertibility(pair, d, c.N, grid_of(c, d));
  } else if (c.verifier == "tube-theorem") {
    TubeOptions t;
    t.seed = c.seed;
    v = verify_tube_theorem(f, c.p, c.alpha, grid_of(c, DomainSpec::halfplane(c.alpha.at(0))), t);
  } else {
    v = equivalence_suite_inverse_symbol(f, c.p, c.alpha.at(0));
  }
  o.result = json::parse(v.to_json());
  bool defect = !v.all_hold();
  for (const std::string& n : v.notes) defect = defect || n.rfind("defect", 0) == 0;
  o.defect = defect;
  o.table.header = {"lhs", "rhs", "holds"};
  for (const Inequality& e : v.inequalities) o.table.add({e.lhs, e.rhs, e.holds ? 1.0 : 0.0});
  return o;
}

void write_csv(const Table& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::InvalidArgument, "cannot open csv path '" + path + "'");
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) out << (k ? "," : "") << cells[k];
    out << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

}  // namespace

void RunConfig::validate() const {
  if (!kCommands.count(command)) fail(ErrorKind::InvalidArgument, "unknown command '" + command + "'");
  require(p > 1.0 && std::isfinite(p), "p must lie in (1, inf)");
  require(!alpha.empty(), "alpha needs at least one value");
  for (double a : alpha) require(a > -1.0 && std::isfinite(a), "alpha must exceed -1 on every axis");
  const bool product = domain == "polydisc" || domain == "tube";
  if (domain != "disc" && domain != "halfplane" && !product) fail(ErrorKind::InvalidArgument, "unknown domain '" + domain + "'");
  require(product || alpha.size() == 1, "one-variable domains take a single alpha");
  require(N >= 4, "N must be at least 4");
  require(grid.count >= 1, "grid count must be positive");
  require(grid.lo > 0.0 && grid.hi >= grid.lo, "grid range must satisfy 0 < lo <= hi");
  require(quadrature.nodes >= 2 && quadrature.angular >= 4, "quadrature needs nodes >= 2 and angular >= 4");
  require(family_depth >= 0 && family_depth <= 30, "family depth must lie in [0, 30]");
  if (!kVerifiers.count(verifier)) fail(ErrorKind::InvalidArgument, "unknown verifier '" + verifier + "'");
}

RunConfig config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::ParseError, std::string("config is not valid JSON: ") + e.what());
  }
  if (j.is_object() && j.value("kind", "") == "report") {
    if (!j.contains("config")) fail(ErrorKind::InvalidArgument, "report has no embedded config");
    j = j.at("config");
  }
  reject_unknown(j,
                 {"schema", "command", "domain", "alpha", "p", "f", "g", "weight", "sigma", "N", "seed", "grid",
                  "quadrature", "family_depth", "family_random", "boxes", "samples", "exponent", "verifier",
                  "output", "csv"},
                 "config");
  if (j.value("schema", kSchemaVersion) != kSchemaVersion) {
    fail(ErrorKind::InvalidArgument, "unsupported config schema version");
  }
  RunConfig c;
  try {
    take(j, "command", c.command);
    take(j, "domain", c.domain);
    if (j.contains("alpha")) {
      c.alpha = j.at("alpha").is_array() ? j.at("alpha").get<std::vector<double>>()
                                         : std::vector<double>{j.at("alpha").get<double>()};
    }
    take(j, "p", c.p);
    take(j, "f", c.f);
    if (j.contains("g")) c.g = j.at("g").get<std::string>();
    take(j, "weight", c.weight);
    if (j.contains("sigma")) c.sigma = j.at("sigma").get<std::string>();
    take(j, "N", c.N);
    take(j, "seed", c.seed);
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      reject_unknown(g, {"strategy", "count", "lo", "hi", "x_half"}, "grid");
      take(g, "strategy", c.grid.strategy);
      take(g, "count", c.grid.count);
      take(g, "lo", c.grid.lo);
      take(g, "hi", c.grid.hi);
      take(g, "x_half", c.grid.x_half);
    }
    if (j.contains("quadrature")) {
      const json& q = j.at("quadrature");
      reject_unknown(q, {"nodes", "X", "Y", "eps", "angular"}, "quadrature");
      take(q, "nodes", c.quadrature.nodes);
      take(q, "X", c.quadrature.X);
      take(q, "Y", c.quadrature.Y);
      take(q, "eps", c.quadrature.eps);
      take(q, "angular", c.quadrature.angular);
    }
    take(j, "family_depth", c.family_depth);
    take(j, "family_random", c.family_random);
    take(j, "boxes", c.boxes);
    take(j, "samples", c.samples);
    take(j, "exponent", c.exponent);
    take(j, "verifier", c.verifier);
    take(j, "output", c.output);
    take(j, "csv", c.csv);
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidArgument, std::string("config field has the wrong type: ") + e.what());
  }
  return c;
}

std::string config_to_json(const RunConfig& c) {
  json j = {{"schema", kSchemaVersion},
            {"command", c.command},
            {"domain", c.domain},
            {"alpha", c.alpha},
            {"p", c.p},
            {"f", c.f},
            {"weight", c.weight},
            {"N", c.N},
            {"seed", c.seed},
            {"grid",
             {{"strategy", c.grid.strategy},
              {"count", c.grid.count},
              {"lo", c.grid.lo},
              {"hi", c.grid.hi},
              {"x_half", c.grid.x_half}}},
            {"quadrature",
             {{"nodes", c.quadrature.nodes},
              {"X", c.quadrature.X},
              {"Y", c.quadrature.Y},
              {"eps", c.quadrature.eps},
              {"angular", c.quadrature.angular}}},
            {"family_depth", c.family_depth},
            {"family_random", c.family_random},
            {"boxes", c.boxes},
            {"samples", c.samples},
            {"exponent", c.exponent},
            {"verifier", c.verifier},
            {"output", c.output},
            {"csv", c.csv}};
  if (c.g) j["g"] = *c.g;
  if (c.sigma) j["sigma"] = *c.sigma;
  return j.dump(2);
}

std::string schema_help() {
  return R"(usage: bergman <command> [--config FILE] [flags]

commands: kernel bb joint dominate toeplitz berezin rankone sarason verify

config file (JSON, schema 1; flags override file values, unknown keys are rejected):
  command        one of the commands above
  domain         disc | halfplane | polydisc | tube (default: halfplane for kernel, bb, joint, dominate; disc otherwise)
  alpha          number or array (one per axis), each > -1
  p              exponent, 1 < p < inf
  f, g           symbol expressions in z (z1, z2, ... on product domains)
  weight, sigma  power:T | const:C | symbol:EXPR (meaning |EXPR|^p)
  N              truncation degree per axis, >= 4
  seed           unsigned integer
  grid           {strategy: log-height|mobius-orbit|uniform, count, lo, hi, x_half}
  quadrature     {nodes, X, Y, eps, angular}
  family_depth   box family depth; family_random: random boxes
  boxes          [[left, length, coefficient], ...] for dominate
  samples        sample points for dominate
  exponent       kernel: print the closed-form exponent only
  verifier       theorem-main2 | prop-main11 | halfplane-impossibility |
                 polydisc-invertibility | tube-theorem | equivalence
  output, csv    report path (stdout when empty) and optional CSV path

A report file can be passed as --config to reproduce it.
exit codes: 0 success, 2 validation error, 3 numerical defect
)";
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical checks for Toeplitz products on Bergman spaces", "bergman"};
  app.set_help_flag("-h,--help");
  std::string command, config_path, alpha_text, g, sigma, box_text;
  RunConfig flags;
  app.add_option("command", command, "subcommand")->required();
  app.add_option("--config", config_path, "JSON config or report file");
  auto* o_domain = app.add_option("--domain", flags.domain);
  auto* o_alpha = app.add_option("--alpha", alpha_text, "comma-separated, one per axis");
  auto* o_p = app.add_option("--p", flags.p);
  auto* o_f = app.add_option("--f", flags.f);
  auto* o_g = app.add_option("--g", g);
  auto* o_weight = app.add_option("--weight", flags.weight);
  auto* o_sigma = app.add_option("--sigma", sigma);
  auto* o_N = app.add_option("--N", flags.N);
  auto* o_seed = app.add_option("--seed", flags.seed);
  auto* o_strategy = app.add_option("--grid-strategy", flags.grid.strategy);
  auto* o_count = app.add_option("--grid-count", flags.grid.count);
  auto* o_lo = app.add_option("--grid-lo", flags.grid.lo);
  auto* o_hi = app.add_option("--grid-hi", flags.grid.hi);
  auto* o_nodes = app.add_option("--nodes", flags.quadrature.nodes);
  auto* o_depth = app.add_option("--family-depth", flags.family_depth);
  auto* o_random = app.add_option("--family-random", flags.family_random);
  auto* o_boxes = app.add_option("--boxes", box_text, "left:length:coef;...");
  auto* o_samples = app.add_option("--samples", flags.samples);
  auto* o_exponent = app.add_flag("--exponent", flags.exponent);
  auto* o_verifier = app.add_option("--verifier", flags.verifier);
  auto* o_output = app.add_option("--output", flags.output);
  auto* o_csv = app.add_option("--csv", flags.csv);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << schema_help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << schema_help();
    return kValidation;
  }

  RunConfig c;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) fail(ErrorKind::InvalidArgument, "cannot read config '" + config_path + "'");
      std::stringstream s;
      s << in.rdbuf();
      c = config_from_json(s.str());
    }
    c.command = command;
    if (*o_domain) c.domain = flags.domain;
    if (c.domain.empty()) {
      const bool boxes = command == "bb" || command == "joint" || command == "dominate" || command == "kernel";
      c.domain = boxes ? "halfplane" : "disc";
    }
    if (*o_alpha) {
      c.alpha.clear();
      std::stringstream s(alpha_text);
      for (std::string part; std::getline(s, part, ',');) c.alpha.push_back(std::stod(part));
    }
    if (*o_p) c.p = flags.p;
    if (*o_f) c.f = flags.f;
    if (*o_g) c.g = g;
    if (*o_weight) c.weight = flags.weight;
    if (*o_sigma) c.sigma = sigma;
    if (*o_N) c.N = flags.N;
    if (*o_seed) c.seed = flags.seed;
    if (*o_strategy) c.grid.strategy = flags.grid.strategy;
    if (*o_count) c.grid.count = flags.grid.count;
    if (*o_lo) c.grid.lo = flags.grid.lo;
    if (*o_hi) c.grid.hi = flags.grid.hi;
    if (*o_nodes) c.quadrature.nodes = flags.quadrature.nodes;
    if (*o_depth) c.family_depth = flags.family_depth;
    if (*o_random) c.family_random = flags.family_random;
    if (*o_boxes) {
      c.boxes.clear();
      std::stringstream s(box_text);
      for (std::string part; std::getline(s, part, ';');) {
        std::vector<double> triple;
        std::stringstream t(part);
        for (std::string x; std::getline(t, x, ':');) triple.push_back(std::stod(x));
        c.boxes.push_back(triple);
      }
    }
    if (*o_samples) c.samples = flags.samples;
    if (*o_exponent) c.exponent = flags.exponent;
    if (*o_verifier) c.verifier = flags.verifier;
    if (*o_output) c.output = flags.output;
    if (*o_csv) c.csv = flags.csv;
    c.validate();
    grid_strategy_from_string(c.grid.strategy);
    domain_of(c);
  } catch (const std::logic_error& e) {
    err << "error: bad number: " << e.what() << "\n\n" << schema_help();
    return kValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n\n" << schema_help();
    return kValidation;
  }

  Outcome result;
  int code = kOk;
  // Destinations stay out of the embedded config so a rerun reproduces the file.
  json embedded = json::parse(config_to_json(c));
  embedded.erase("output");
  embedded.erase("csv");
  json report = {{"kind", "report"}, {"schema", kSchemaVersion}, {"config", embedded}};
  try {
    if (c.command == "kernel") result = run_kernel(c);
    else if (c.command == "bb") result = run_bb(c, false);
    else if (c.command == "joint") result = run_bb(c, true);
    else if (c.command == "dominate") result = run_dominate(c);
    else if (c.command == "toeplitz") result = run_toeplitz(c);
    else if (c.command == "berezin") result = run_berezin(c);
    else if (c.command == "rankone") result = run_rankone(c);
    else if (c.command == "sarason") result = run_sarason(c);
    else result = run_verify(c);
    report["result"] = result.result;
    report["status"] = result.defect ? "defect" : "ok";
    code = result.defect ? kDefect : kOk;
  } catch (const Error& e) {
    const ErrorKind k = e.kind();
    const bool input = k == ErrorKind::InvalidArgument || k == ErrorKind::ParseError || k == ErrorKind::DomainMismatch;
    report["status"] = "error";
    report["error"] = {{"kind", std::string(to_string(k))}, {"message", e.what()}};
    err << "error: " << e.what() << "\n";
    if (input) err << "\n" << schema_help();
    code = input ? kValidation : kDefect;
  }

  const std::string text = report.dump(2) + "\n";
  if (c.output.empty()) {
    out << text;
  } else {
    std::ofstream file(c.output, std::ios::binary);
    if (!file) {
      err << "error: cannot write '" << c.output << "'\n";
      return kValidation;
    }
    file << text;
  }
  if (!c.csv.empty() && !result.table.header.empty()) {
    try {
      write_csv(result.table, c.csv);
    } catch (const Error& e) {
      err << "error: " << e.what() << "\n";
      return kValidation;
    }
  }
  return code;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return run(args, std::cout, std::cerr);
}

}  // namespace bergman::cli
