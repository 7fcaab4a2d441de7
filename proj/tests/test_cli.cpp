#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bergman/cli.hpp>

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;
namespace fs = std::filesystem;
namespace cli = bergman::cli;

namespace {

struct Captured {
  int code;
  std::string out, err;
};

Captured invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "bergman_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("bb on a power weight reports 4/3") {
  const auto r = invoke({"bb", "--weight", "power:0.5", "--p", "2", "--alpha", "0"});
  REQUIRE(r.code == cli::kOk);
  const json j = json::parse(r.out);
  CHECK(j["kind"] == "report");
  CHECK(j["schema"] == cli::kSchemaVersion);
  CHECK(j["status"] == "ok");
  CHECK(j["config"]["domain"] == "halfplane");
  CHECK(j["result"]["value"].get<double>() == doctest::Approx(4.0 / 3.0).epsilon(0.01));
}

TEST_CASE("rankone identity for an inverse pair") {
  const auto r = invoke({"rankone", "--f", "2+z", "--g", "1/(2+z)", "--N", "40"});
  REQUIRE(r.code == cli::kOk);
  const json j = json::parse(r.out);
  CHECK(j["result"]["relative_error"].get<double>() < 1e-6);
}

TEST_CASE("kernel exponent") {
  const auto r = invoke({"kernel", "--exponent", "--p", "4", "--alpha", "0"});
  REQUIRE(r.code == cli::kOk);
  CHECK(json::parse(r.out)["result"]["exponent"].get<double>() == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("validation errors exit with 2") {
  CHECK(invoke({"frobnicate"}).code == cli::kValidation);
  CHECK(invoke({}).code == cli::kValidation);
  CHECK(invoke({"kernel", "--p", "0.5"}).code == cli::kValidation);
  CHECK(invoke({"kernel", "--alpha", "-1"}).code == cli::kValidation);
  CHECK(invoke({"kernel", "--domain", "annulus"}).code == cli::kValidation);
  CHECK(invoke({"rankone", "--f", "2+"}).code == cli::kValidation);
  CHECK(invoke({"dominate", "--domain", "disc"}).code == cli::kValidation);
  const auto r = invoke({"kernel", "--no-such-flag"});
  CHECK(r.code == cli::kValidation);
  CHECK(r.err.find("kernel") != std::string::npos);
}

TEST_CASE("unknown config keys are rejected") {
  const fs::path cfg = scratch("unknown.json");
  std::ofstream(cfg) << R"({"schema": 1, "p": 2, "colour": "red"})";
  const auto r = invoke({"kernel", "--config", cfg.string()});
  CHECK(r.code == cli::kValidation);
  CHECK(r.err.find("colour") != std::string::npos);
}

TEST_CASE("numerical failures exit with 3") {
  const auto r = invoke({"verify", "--verifier", "prop-main11", "--f", "z", "--g", "1", "--N", "12"});
  CHECK(r.code == cli::kDefect);
  const json j = json::parse(r.out);
  CHECK(j["status"] == "error");
  CHECK(j.contains("error"));
}

TEST_CASE("flags override config values") {
  const fs::path cfg = scratch("override.json");
  std::ofstream(cfg) << R"({"schema": 1, "p": 3, "alpha": [0], "exponent": true})";
  const json from_file = json::parse(invoke({"kernel", "--config", cfg.string()}).out);
  CHECK(from_file["config"]["p"] == 3.0);
  const json overridden = json::parse(invoke({"kernel", "--config", cfg.string(), "--p", "4"}).out);
  CHECK(overridden["config"]["p"] == 4.0);
  CHECK(overridden["result"]["exponent"].get<double>() == doctest::Approx(-0.5));
}

TEST_CASE("csv output has a header and LF line endings") {
  const fs::path csv = scratch("bb.csv");
  fs::remove(csv);
  const auto r = invoke({"bb", "--weight", "power:0.5", "--family-depth", "2", "--family-random", "4", "--csv",
                         csv.string()});
  REQUIRE(r.code == cli::kOk);
  const std::string text = slurp(csv);
  REQUIRE_FALSE(text.empty());
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.back() == '\n');
  const std::string header = text.substr(0, text.find('\n'));
  CHECK(header.find(',') != std::string::npos);
  CHECK(std::count(text.begin(), text.end(), '\n') > 2);
}

TEST_CASE("a report reproduces itself through --config") {
  const fs::path first = scratch("first.json"), second = scratch("second.json");
  REQUIRE(invoke({"rankone", "--f", "2+z", "--g", "1/(2+z)", "--N", "20", "--output", first.string()}).code ==
          cli::kOk);
  REQUIRE(invoke({"rankone", "--config", first.string(), "--output", second.string()}).code == cli::kOk);
  CHECK(slurp(first) == slurp(second));
  const json j = json::parse(slurp(first));
  CHECK_FALSE(j["config"].contains("output"));
  CHECK_FALSE(j["config"].contains("csv"));
}

TEST_CASE("config round trip") {
  cli::RunConfig c;
  c.command = "sarason";
  c.domain = "polydisc";
  c.alpha = {0.0, 1.0};
  c.g = "1+z1";
  c.N = 12;
  const cli::RunConfig back = cli::config_from_json(cli::config_to_json(c));
  CHECK(back.domain == "polydisc");
  CHECK(back.alpha == std::vector<double>{0.0, 1.0});
  CHECK(back.g == std::optional<std::string>("1+z1"));
  CHECK(back.N == 12);
  CHECK_FALSE(back.sigma.has_value());
}

TEST_CASE("help exits cleanly") {
  const auto r = invoke({"--help"});
  CHECK(r.code == cli::kOk);
  CHECK(r.out.find("domain") != std::string::npos);
}
