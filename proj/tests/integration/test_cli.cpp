// End-to-end checks of the command-line binary: exit codes, artifact
// emission, and option overrides.  Commands run through /bin/sh with stdout
// and stderr captured to files in a scratch directory.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const char* cli_path() { return JLAB_CLI_PATH; }

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "jlab_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// Runs the CLI with the given arguments; returns the exit status with
// stdout and stderr captured next to the scratch directory.
int run_cli(const std::string& args, const fs::path& dir) {
  const std::string command = std::string(cli_path()) + " " + args + " > " +
                              (dir / "stdout.txt").string() + " 2> " +
                              (dir / "stderr.txt").string();
  const int status = std::system(command.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

// Small analytic setup: zero coefficients, first-mode arc, beta = 1.
std::string analytic_config(const fs::path& out) {
  json doc;
  doc["operation"] = "extract";
  doc["geometry"] = {{"R", 1.0}, {"epsilon", 1e-5}, {"Nr", 129}, {"M", 65}, {"K", 4}};
  doc["arc"] = {{"expression", "cos(t/2)"}};
  doc["output"] = {{"dir", out.string()}};
  return doc.dump();
}

}  // namespace

TEST_CASE("extract subcommand reproduces the analytic junction data") {
  const fs::path dir = scratch("extract");
  const fs::path out = dir / "artifacts";
  write_file(dir / "run.json", analytic_config(out));

  const int code = run_cli("extract --config " + (dir / "run.json").string(), dir);
  CHECK(code == 0);

  // artifact paths are printed one per line
  const std::string stdout_text = slurp(dir / "stdout.txt");
  CHECK(stdout_text.find("extract.json") != std::string::npos);

  const json report = json::parse(slurp(out / "extract.json"));
  CHECK(report["k0"] == 1);
  CHECK(report["beta_formula"].get<double>() == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(report["diagnostics"]["gamma_accepted"].get<double>() == 1.0);
}

TEST_CASE("invalid configurations exit with code 2 and name the defect") {
  const fs::path dir = scratch("invalid");

  // missing file
  CHECK(run_cli("extract --config " + (dir / "missing.json").string(), dir) == 2);

  // unparsable coefficient expression: the message carries the byte offset
  json doc = json::parse(analytic_config(dir / "artifacts"));
  doc["coefficients"] = {{"p", "0.5 + * r"}};
  write_file(dir / "bad.json", doc.dump());
  CHECK(run_cli("extract --config " + (dir / "bad.json").string(), dir) == 2);
  const std::string stderr_text = slurp(dir / "stderr.txt");
  CHECK(stderr_text.find("coefficients.p") != std::string::npos);
  CHECK(stderr_text.find("offset") != std::string::npos);

  // command-line misuse
  CHECK(run_cli("render", dir) == 2);
  CHECK(run_cli("extract --refine 99", dir) == 2);
}

TEST_CASE("numerical failures exit with code 3") {
  const fs::path dir = scratch("numerical");
  // the validity radius collapses below the trusted decade, so the gamma
  // extraction has no usable window
  json doc = json::parse(analytic_config(dir / "artifacts"));
  doc["geometry"]["epsilon"] = 0.01;
  doc["coefficients"] = {{"p", "60"}};
  write_file(dir / "run.json", doc.dump());
  CHECK(run_cli("extract --config " + (dir / "run.json").string(), dir) == 3);
}

TEST_CASE("counterexample subcommand lands on the corner limit") {
  const fs::path dir = scratch("counterexample");
  const fs::path out = dir / "artifacts";
  const int code = run_cli("counterexample --out " + out.string(), dir);
  CHECK(code == 0);

  const json report = json::parse(slurp(out / "counterexample.json"));
  // final corner ratio within ten percent of -pi/4 = -0.7854
  CHECK(report["corner"]["within_10_percent"] == true);
  CHECK(report["corner"]["final_ratio"].get<double>() ==
        doctest::Approx(-0.7854).epsilon(0.11));
  CHECK(fs::exists(out / "gamma_plus.csv"));
  CHECK(fs::exists(out / "gamma_minus.csv"));
  CHECK(fs::exists(out / "corner_ratio.csv"));
}

TEST_CASE("command-line overrides reach the pipeline") {
  const fs::path dir = scratch("overrides");
  const fs::path out_a = dir / "a";
  const fs::path out_b = dir / "b";

  json doc;
  doc["operation"] = "hardy";
  doc["geometry"] = {{"R", 1.0}, {"epsilon", 1e-4}, {"Nr", 65}, {"M", 33}, {"K", 4}};
  doc["analysis"] = {{"hardy", {{"trials", 3}, {"modes", 3}}}};
  write_file(dir / "run.json", doc.dump());

  const std::string base = "hardy --config " + (dir / "run.json").string();
  CHECK(run_cli(base + " --out " + out_a.string() + " --seed 7", dir) == 0);
  CHECK(run_cli(base + " --out " + out_b.string() + " --seed 7", dir) == 0);
  CHECK(slurp(out_a / "hardy.json") == slurp(out_b / "hardy.json"));

  const fs::path out_c = dir / "c";
  CHECK(run_cli(base + " --out " + out_c.string() + " --seed 8", dir) == 0);
  CHECK(slurp(out_a / "hardy.json") != slurp(out_c / "hardy.json"));

  const json report = json::parse(slurp(out_a / "hardy.json"));
  CHECK(report["seed"].get<std::uint64_t>() == 7);
  CHECK(report["all_pass"] == true);
}
