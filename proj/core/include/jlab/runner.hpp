// Batch pipeline driver.  One JSON document describes the geometry, the
// coefficients, the arc data, and the analysis parameters; each operation
// solves or analyzes as required and writes CSV and JSON artifacts with
// fixed formatting, so identical configuration and seed reproduce the same
// bytes.  Validation problems raise ConfigError, numerical failures during
// an otherwise valid run raise NumericalError.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace jlab {

// Parsed and validated run description.  Numeric fields carry the
// documented defaults; expression fields hold source text and are compiled
// where used.  Unknown keys in the document are rejected so that typos fail
// loudly instead of silently falling back to defaults.
struct RunConfig {
  // geometry
  double R = 1.0;
  double epsilon = 1e-6;
  int Nr = 512;    // radial node count, log-uniform in [epsilon, R]
  int M = 257;     // angular node count, odd, uniform in [0, pi]
  int K = 16;      // modal truncation
  int refine = 0;  // grid-doubling levels applied to Nr and M

  // coefficients: reaction terms p(r,t) and q(x), or fixed loads f(r,t)
  // and Neumann data g(x); the two families are mutually exclusive
  std::string p_expr;
  std::string q_expr;
  std::string f_expr;
  std::string g_expr;

  // outer-arc data: an expression in t, or mode coefficients a_1, a_2, ...;
  // when neither is given the arc defaults to the first mode
  std::string arc_expr;
  std::vector<double> arc_modes;

  // frequency and extraction analysis
  double r_max = 0.0;   // frequency-curve ceiling; 0 selects the grid radius
  double margin = 4.0;  // curve starts at margin * epsilon
  double R_eff = 0.0;   // extraction radius; 0 selects min(R0, R)/2

  // Hardy sampling
  int hardy_trials = 100;
  int hardy_modes = 6;
  std::uint64_t seed = 2026;
  std::vector<double> hardy_radii;  // empty selects {R/4, R/2, 3R/4}

  // Pohozaev tables
  std::vector<double> pohozaev_radii;  // empty selects R/2, R/4, ..., R/256
  int pohozaev_levels = 3;             // refinement-table depth
  double pohozaev_r = 0.0;             // refinement-table radius; 0 = R/4

  // counterexample study
  std::vector<double> x1_corner = {1e-2, 1e-3, 1e-4};
  std::vector<double> x1_deformation = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  double model_r_lo = 1e-12;  // arc-energy window for the model comparison
  double model_r_hi = 1e-2;
  int model_samples = 60;
  double sigma = 0.19634954084936207;  // Dirichlet-curve window, pi/16
  int curve_samples = 40;
  double manifold_distance = 1e-3;  // stable-manifold seed distance
  double manifold_step = 0.01;      // integrator step
  int manifold_steps = 4000;

  // output
  std::filesystem::path out_dir = ".";

  // operation named by the document (sweep cases inherit it) and the raw
  // document text, kept for per-case patching
  std::string operation = "extract";
  std::string source_text;

  static RunConfig from_json_text(const std::string& text);
  static RunConfig from_json_file(const std::filesystem::path& path);
};

// Each operation creates the output directory if needed, writes its
// artifacts, and returns the paths written, JSON summary last.
std::vector<std::filesystem::path> run_solve(const RunConfig& config);
std::vector<std::filesystem::path> run_frequency(const RunConfig& config);
std::vector<std::filesystem::path> run_extract(const RunConfig& config);
std::vector<std::filesystem::path> run_hardy(const RunConfig& config);
std::vector<std::filesystem::path> run_pohozaev(const RunConfig& config);
std::vector<std::filesystem::path> run_counterexample(const RunConfig& config);
std::vector<std::filesystem::path> run_sweep(const RunConfig& config);

// Dispatch by operation name; unknown names raise ConfigError.
std::vector<std::filesystem::path> run_operation(const std::string& name,
                                                 const RunConfig& config);

}  // namespace jlab
