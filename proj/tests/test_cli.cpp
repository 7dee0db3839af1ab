#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "fhc/config.hpp"
#include "fhc/run.hpp"

using namespace fhc;
namespace fs = std::filesystem;

namespace {
IniData parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_ini(in);
}

fs::path fresh_outdir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("fhc_cli_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}
}  // namespace

TEST_CASE("ini parsing") {
  const IniData d = parse_text(
      "# comment\n[problem]\nN = 3\ns=0.5 ; trailing\n\n[solver]\nmode = "
      "check-growth\n");
  CHECK(d.at("problem").at("N") == "3");
  CHECK(d.at("problem").at("s") == "0.5");
  CHECK(d.at("solver").at("mode") == "check-growth");
  CHECK_THROWS_WITH_AS(parse_text("[problem\nN=3\n"),
                       "line 1: unterminated section", ConfigError);
  CHECK_THROWS_WITH_AS(parse_text("[a]\nnonsense\n"),
                       "line 2: expected key = value", ConfigError);
  CHECK_THROWS_AS(parse_text("[a]\n= 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_ini_file("/nonexistent/path.ini"), ConfigError);
}

TEST_CASE("config hash is canonical") {
  CHECK(config_hash({}) == "cbf29ce484222325");  // FNV-1a offset basis
  const IniData a = parse_text("[s1]\nb = 2\na = 1\n[s0]\nz = 9\n");
  const IniData b = parse_text("[s0]\nz = 9\n[s1]\na = 1\nb = 2\n");
  CHECK(config_hash(a) == config_hash(b));
  const IniData c = parse_text("[s0]\nz = 8\n[s1]\na = 1\nb = 2\n");
  CHECK(config_hash(a) != config_hash(c));
}

TEST_CASE("config validation") {
  SUBCASE("minimal valid configuration with defaults") {
    const RunConfig c = validate_config(parse_text("[solver]\nmode = check-growth\n"));
    CHECK(c.N == 3);
    CHECK(c.s == 0.5);
    CHECK(c.alpha == 2.0);
    CHECK(c.P == 4096);
    CHECK(c.outdir == "out");
    CHECK(c.hash.size() == 16);
  }
  SUBCASE("mode is required and must be known") {
    CHECK_THROWS_AS(validate_config(parse_text("[problem]\nN = 3\n")), ConfigError);
    CHECK_THROWS_AS(
        validate_config(parse_text("[solver]\nmode = frobnicate\n")), ConfigError);
  }
  SUBCASE("domain guards") {
    CHECK_THROWS_AS(validate_config(parse_text(
                        "[solver]\nmode = check-growth\n[problem]\nN = 5\n")),
                    ConfigError);
    CHECK_THROWS_AS(validate_config(parse_text(
                        "[solver]\nmode = check-growth\n[problem]\nalpha = 3.5\n")),
                    ConfigError);
    CHECK_THROWS_AS(validate_config(parse_text(
                        "[solver]\nmode = check-growth\n[problem]\ns = zero\n")),
                    ConfigError);
    CHECK_THROWS_AS(validate_config(parse_text(
                        "[solver]\nmode = solve-normalized\n")),
                    ConfigError);  // m required
  }
  SUBCASE("mu is converted to lambda") {
    const RunConfig c = validate_config(parse_text(
        "[solver]\nmode = check-growth\n[problem]\nmu = 2.0\n"));
    CHECK(c.lambda == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK_THROWS_AS(validate_config(parse_text(
                        "[solver]\nmode = check-growth\n[problem]\nmu = -1\n")),
                    ConfigError);
  }
  SUBCASE("nonlinearity factory from config") {
    const RunConfig c = validate_config(parse_text(
        "[solver]\nmode = check-growth\n[problem]\nnonlinearity = power\np = 1.8\n"));
    CHECK(config_nonlinearity(c).homogeneity == doctest::Approx(1.8));
  }
}

TEST_CASE("check-growth run and exit codes") {
  const fs::path out = fresh_outdir("growth");
  SUBCASE("subcritical power exits 0") {
    const RunConfig c = validate_config(parse_text(
        "[solver]\nmode = check-growth\n[problem]\np = 1.8\n[output]\ndir = " +
        out.string() + "\n"));
    const RunResult r = run(c);
    CHECK(r.exit_code == exit_ok);
    CHECK(fs::exists(r.artifact_dir / "report.json"));
    CHECK(fs::exists(r.artifact_dir / "manifest.txt"));
  }
  SUBCASE("unbounded quotient exits 4") {
    const RunConfig c = validate_config(parse_text(
        "[solver]\nmode = check-growth\n[problem]\nnonlinearity = "
        "oscillating_unbounded\n[output]\ndir = " +
        out.string() + "\n"));
    CHECK(run(c).exit_code == exit_inapplicable);
  }
}

TEST_CASE("riesz-kernel run emits the kernel table") {
  const fs::path out = fresh_outdir("kernel");
  const RunConfig c = validate_config(parse_text(
      "[solver]\nmode = riesz-kernel\n[output]\ndir = " + out.string() + "\n"));
  const RunResult r = run(c);
  CHECK(r.exit_code == exit_ok);
  CHECK(fs::exists(r.artifact_dir / "kernel.csv"));
  std::ifstream csv(r.artifact_dir / "kernel.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "config_hash,tau,F_alpha");
}

TEST_CASE("reproduce replays a manifest byte-for-byte") {
  const fs::path out = fresh_outdir("repro");
  const RunConfig c = validate_config(parse_text(
      "[solver]\nmode = check-growth\n[problem]\np = 1.8\n[output]\ndir = " +
      out.string() + "\n"));
  const RunResult first = run(c);
  REQUIRE(first.exit_code == exit_ok);
  const RunResult again = reproduce((first.artifact_dir / "manifest.txt").string());
  CHECK(again.exit_code == exit_ok);
  CHECK(again.message.find("differ") == std::string::npos);
  CHECK_THROWS_AS(reproduce("/nonexistent/manifest.txt"), ConfigError);
}

TEST_CASE("asymptotics run (tiny grid)") {
  const fs::path out = fresh_outdir("asym");
  const RunConfig c = validate_config(parse_text(
      "[solver]\nmode = asymptotics\n[problem]\np = 1.8\n"
      "[paths]\nn = 1\nlambda_min = -2\nlambda_max = 2\nlambda_points = 3\n"
      "[output]\ndir = " + out.string() + "\n"));
  const RunResult r = run(c);
  CHECK(r.exit_code == exit_ok);
  CHECK(fs::exists(r.artifact_dir / "scan.csv"));
}
