// Batch driver implementation.  The configuration is one JSON document with
// geometry, coefficients, arc, analysis, and output blocks; every block is
// validated eagerly (unknown keys rejected, expressions compiled, numeric
// ranges checked) so a bad document fails before any computation starts.
// CSV cells are rendered with %.17g and JSON keys keep a fixed order, which
// makes artifacts reproducible byte for byte for a given config and seed.
#include "jlab/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

#include "jlab/almgren.hpp"
#include "jlab/asymptotics.hpp"
#include "jlab/counterexample.hpp"
#include "jlab/errors.hpp"
#include "jlab/exprparse.hpp"
#include "jlab/field.hpp"
#include "jlab/geometry.hpp"
#include "jlab/solver.hpp"

namespace jlab {
namespace {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// document access
// ---------------------------------------------------------------------------

[[noreturn]] void fail(const std::string& message) { throw ConfigError(message); }

const ordered_json* find(const ordered_json& obj, const char* key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &it.value();
}

void check_keys(const ordered_json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* key : allowed) {
      if (it.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) fail("unknown key \"" + it.key() + "\" in " + where);
  }
}

const ordered_json* find_block(const ordered_json& doc, const char* key) {
  const ordered_json* block = find(doc, key);
  if (block != nullptr && !block->is_object())
    fail(std::string("config block \"") + key + "\" must be an object");
  return block;
}

double require_number(const ordered_json& value, const std::string& where) {
  if (!value.is_number()) fail(where + " must be a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) fail(where + " must be finite");
  return v;
}

int require_int(const ordered_json& value, const std::string& where) {
  if (!value.is_number_integer()) fail(where + " must be an integer");
  const long long n = value.get<long long>();
  if (n < std::numeric_limits<int>::min() || n > std::numeric_limits<int>::max())
    fail(where + " is out of range");
  return static_cast<int>(n);
}

std::uint64_t require_seed(const ordered_json& value, const std::string& where) {
  if (value.is_number_unsigned()) return value.get<std::uint64_t>();
  if (value.is_number_integer() && value.get<long long>() >= 0)
    return static_cast<std::uint64_t>(value.get<long long>());
  fail(where + " must be a nonnegative integer");
}

std::string require_string(const ordered_json& value, const std::string& where) {
  if (!value.is_string()) fail(where + " must be a string");
  return value.get<std::string>();
}

std::vector<double> require_number_list(const ordered_json& value, const std::string& where) {
  if (!value.is_array() || value.empty()) fail(where + " must be a nonempty array of numbers");
  std::vector<double> out;
  out.reserve(value.size());
  for (const ordered_json& item : value) out.push_back(require_number(item, where + " entries"));
  return out;
}

void require_in(double v, double lo, double hi, const std::string& where) {
  if (!(v >= lo && v <= hi))
    fail(where + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

// Compiles an expression, rewriting parse failures into ConfigError with the
// config key and the byte offset of the offending token.
expr::Expr compile_expr(const std::string& text, const std::string& key) {
  try {
    return expr::Expr::parse(text);
  } catch (const expr::ParseError& e) {
    fail("config key \"" + key + "\": " + e.what() + " at offset " + std::to_string(e.offset));
  }
}

// ---------------------------------------------------------------------------
// artifact writers
// ---------------------------------------------------------------------------

// Fixed 17-significant-digit rendering; round-trips doubles exactly.
std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf);
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (!std::filesystem::is_directory(dir))
    fail("cannot create output directory " + dir.string() +
         (ec ? ": " + ec.message() : std::string()));
}

std::filesystem::path write_csv(const std::filesystem::path& path,
                                const std::vector<std::string>& header,
                                const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot open " + path.string() + " for writing");
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (j > 0) out << ',';
    out << header[j];
  }
  out << '\n';
  for (const std::vector<double>& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j > 0) out << ',';
      out << fmt17(row[j]);
    }
    out << '\n';
  }
  out.flush();
  if (!out) fail("failed while writing " + path.string());
  return path;
}

std::filesystem::path write_json_file(const std::filesystem::path& path,
                                      const ordered_json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot open " + path.string() + " for writing");
  out << doc.dump(2) << '\n';
  out.flush();
  if (!out) fail("failed while writing " + path.string());
  return path;
}

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int j = 0; j < n; ++j)
    out[static_cast<std::size_t>(j)] = std::exp(a + (b - a) * j / (n - 1.0));
  out.front() = lo;
  out.back() = hi;
  return out;
}

// ---------------------------------------------------------------------------
// pipeline assembly
// ---------------------------------------------------------------------------

PolarGrid make_grid(const RunConfig& c) {
  const int scale = 1 << c.refine;
  return build_polar_grid(c.R, c.epsilon, (c.Nr - 1) * scale + 1, (c.M - 1) * scale + 1);
}

CoefficientData make_coefficients(const RunConfig& c) {
  if (c.p_expr.empty() && c.q_expr.empty()) return CoefficientData::zero();
  const expr::Expr pe = compile_expr(c.p_expr.empty() ? "0" : c.p_expr, "coefficients.p");
  const expr::Expr qe = compile_expr(c.q_expr.empty() ? "0" : c.q_expr, "coefficients.q");
  const auto p = [pe](double r, double t) {
    expr::Bindings b;
    b.r = r;
    b.t = t;
    return pe.evaluate(b);
  };
  const auto q = [qe](double x) {
    expr::Bindings b;
    b.x = x;
    return qe.evaluate(b);
  };
  try {
    return CoefficientData::from_functions(p, q, c.R);
  } catch (const expr::EvalError& e) {
    fail(std::string("coefficient evaluation failed: ") + e.what());
  }
}

ArcData make_arc(const RunConfig& c) {
  if (!c.arc_expr.empty()) {
    const expr::Expr ge = compile_expr(c.arc_expr, "arc.expression");
    return ArcData::from_function([ge](double t) {
      expr::Bindings b;
      b.t = t;
      return ge.evaluate(b);
    });
  }
  const std::vector<double> a =
      c.arc_modes.empty() ? std::vector<double>{1.0} : c.arc_modes;
  return ArcData::from_function([a](double t) {
    double acc = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j)
      acc += a[j] * std::cos((2.0 * static_cast<double>(j) + 1.0) * 0.5 * t);
    return acc;
  });
}

ScalarField solve_field(const RunConfig& c, const PolarGrid& grid,
                        const CoefficientData& coeff) {
  const ArcData arc = make_arc(c);
  try {
    if (!c.f_expr.empty() || !c.g_expr.empty()) {
      const expr::Expr fe = compile_expr(c.f_expr.empty() ? "0" : c.f_expr, "coefficients.f");
      const expr::Expr ge = compile_expr(c.g_expr.empty() ? "0" : c.g_expr, "coefficients.g");
      const auto f = [fe](double r, double t) {
        expr::Bindings b;
        b.r = r;
        b.t = t;
        return fe.evaluate(b);
      };
      const auto g = [ge](double x) {
        expr::Bindings b;
        b.x = x;
        return ge.evaluate(b);
      };
      return solve_forward(f, g, arc, grid, c.K);
    }
    return solve_mixed_bvp(coeff, arc, grid, c.K);
  } catch (const expr::EvalError& e) {
    fail(std::string("expression evaluation failed during solve: ") + e.what());
  }
}

void require_reaction_form(const RunConfig& c, const char* op) {
  if (!c.f_expr.empty() || !c.g_expr.empty())
    fail(std::string(op) +
         " analyzes the reaction problem; fixed loads f,g are only supported by solve");
}

ordered_json geometry_echo(const RunConfig& c) {
  const int scale = 1 << c.refine;
  ordered_json j;
  j["R"] = c.R;
  j["epsilon"] = c.epsilon;
  j["Nr"] = (c.Nr - 1) * scale + 1;
  j["M"] = (c.M - 1) * scale + 1;
  j["K"] = c.K;
  j["refine"] = c.refine;
  return j;
}

}  // namespace

// ---------------------------------------------------------------------------
// configuration parsing
// ---------------------------------------------------------------------------

RunConfig RunConfig::from_json_text(const std::string& text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const ordered_json::parse_error& e) {
    throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("configuration root must be a JSON object");

  RunConfig c;
  c.source_text = text;
  check_keys(doc, "the configuration",
             {"operation", "geometry", "coefficients", "arc", "analysis", "output", "cases"});

  if (const ordered_json* v = find(doc, "operation")) {
    c.operation = require_string(*v, "operation");
    static const char* kOps[] = {"solve",     "frequency",      "extract", "hardy",
                                 "pohozaev",  "counterexample", "sweep"};
    if (std::find_if(std::begin(kOps), std::end(kOps),
                     [&](const char* op) { return c.operation == op; }) == std::end(kOps))
      fail("unknown operation \"" + c.operation + "\"");
  }

  if (const ordered_json* g = find_block(doc, "geometry")) {
    check_keys(*g, "geometry", {"R", "epsilon", "Nr", "M", "K", "refine"});
    if (const ordered_json* v = find(*g, "R")) c.R = require_number(*v, "geometry.R");
    if (const ordered_json* v = find(*g, "epsilon"))
      c.epsilon = require_number(*v, "geometry.epsilon");
    if (const ordered_json* v = find(*g, "Nr")) c.Nr = require_int(*v, "geometry.Nr");
    if (const ordered_json* v = find(*g, "M")) c.M = require_int(*v, "geometry.M");
    if (const ordered_json* v = find(*g, "K")) c.K = require_int(*v, "geometry.K");
    if (const ordered_json* v = find(*g, "refine")) c.refine = require_int(*v, "geometry.refine");
  }
  if (!(c.R > 0.0 && c.R <= 1000.0)) fail("geometry.R must lie in (0, 1000]");
  if (!(c.epsilon > 0.0 && c.epsilon < 0.25 * c.R))
    fail("geometry.epsilon must lie in (0, R/4)");
  if (c.Nr < 16 || c.Nr > (1 << 20)) fail("geometry.Nr must lie in [16, 1048576]");
  if (c.M < 9 || c.M > (1 << 20) || c.M % 2 == 0)
    fail("geometry.M must be odd and lie in [9, 1048575]");
  if (c.K < 1 || c.K > 64) fail("geometry.K must lie in [1, 64]");
  if (c.refine < 0 || c.refine > 8) fail("geometry.refine must lie in [0, 8]");

  if (const ordered_json* b = find_block(doc, "coefficients")) {
    check_keys(*b, "coefficients", {"p", "q", "f", "g"});
    if (const ordered_json* v = find(*b, "p")) c.p_expr = require_string(*v, "coefficients.p");
    if (const ordered_json* v = find(*b, "q")) c.q_expr = require_string(*v, "coefficients.q");
    if (const ordered_json* v = find(*b, "f")) c.f_expr = require_string(*v, "coefficients.f");
    if (const ordered_json* v = find(*b, "g")) c.g_expr = require_string(*v, "coefficients.g");
  }
  const bool reaction = !c.p_expr.empty() || !c.q_expr.empty();
  const bool loads = !c.f_expr.empty() || !c.g_expr.empty();
  if (reaction && loads)
    fail("coefficients: reaction terms p,q and fixed loads f,g are mutually exclusive");
  if (!c.p_expr.empty()) compile_expr(c.p_expr, "coefficients.p");
  if (!c.q_expr.empty()) compile_expr(c.q_expr, "coefficients.q");
  if (!c.f_expr.empty()) compile_expr(c.f_expr, "coefficients.f");
  if (!c.g_expr.empty()) compile_expr(c.g_expr, "coefficients.g");

  if (const ordered_json* b = find_block(doc, "arc")) {
    check_keys(*b, "arc", {"expression", "modes"});
    if (const ordered_json* v = find(*b, "expression"))
      c.arc_expr = require_string(*v, "arc.expression");
    if (const ordered_json* v = find(*b, "modes"))
      c.arc_modes = require_number_list(*v, "arc.modes");
    if (!c.arc_expr.empty() && !c.arc_modes.empty())
      fail("arc: give either an expression or mode coefficients, not both");
  }
  if (!c.arc_expr.empty()) compile_expr(c.arc_expr, "arc.expression");
  if (c.arc_modes.size() > 64) fail("arc.modes supports at most 64 coefficients");

  if (const ordered_json* b = find_block(doc, "analysis")) {
    check_keys(*b, "analysis",
               {"r_max", "margin", "R_eff", "seed", "hardy", "pohozaev", "counterexample"});
    if (const ordered_json* v = find(*b, "r_max")) c.r_max = require_number(*v, "analysis.r_max");
    if (const ordered_json* v = find(*b, "margin")) c.margin = require_number(*v, "analysis.margin");
    if (const ordered_json* v = find(*b, "R_eff")) c.R_eff = require_number(*v, "analysis.R_eff");
    if (const ordered_json* v = find(*b, "seed")) c.seed = require_seed(*v, "analysis.seed");

    if (const ordered_json* h = find_block(*b, "hardy")) {
      check_keys(*h, "analysis.hardy", {"trials", "modes", "radii"});
      if (const ordered_json* v = find(*h, "trials"))
        c.hardy_trials = require_int(*v, "analysis.hardy.trials");
      if (const ordered_json* v = find(*h, "modes"))
        c.hardy_modes = require_int(*v, "analysis.hardy.modes");
      if (const ordered_json* v = find(*h, "radii"))
        c.hardy_radii = require_number_list(*v, "analysis.hardy.radii");
    }
    if (const ordered_json* p = find_block(*b, "pohozaev")) {
      check_keys(*p, "analysis.pohozaev", {"radii", "levels", "r"});
      if (const ordered_json* v = find(*p, "radii"))
        c.pohozaev_radii = require_number_list(*v, "analysis.pohozaev.radii");
      if (const ordered_json* v = find(*p, "levels"))
        c.pohozaev_levels = require_int(*v, "analysis.pohozaev.levels");
      if (const ordered_json* v = find(*p, "r"))
        c.pohozaev_r = require_number(*v, "analysis.pohozaev.r");
    }
    if (const ordered_json* x = find_block(*b, "counterexample")) {
      check_keys(*x, "analysis.counterexample",
                 {"x1_corner", "x1_deformation", "model_window", "model_samples", "sigma",
                  "curve_samples", "manifold"});
      if (const ordered_json* v = find(*x, "x1_corner"))
        c.x1_corner = require_number_list(*v, "analysis.counterexample.x1_corner");
      if (const ordered_json* v = find(*x, "x1_deformation"))
        c.x1_deformation = require_number_list(*v, "analysis.counterexample.x1_deformation");
      if (const ordered_json* v = find(*x, "model_window")) {
        const std::vector<double> w =
            require_number_list(*v, "analysis.counterexample.model_window");
        if (w.size() != 2) fail("analysis.counterexample.model_window must be [r_lo, r_hi]");
        c.model_r_lo = w[0];
        c.model_r_hi = w[1];
      }
      if (const ordered_json* v = find(*x, "model_samples"))
        c.model_samples = require_int(*v, "analysis.counterexample.model_samples");
      if (const ordered_json* v = find(*x, "sigma"))
        c.sigma = require_number(*v, "analysis.counterexample.sigma");
      if (const ordered_json* v = find(*x, "curve_samples"))
        c.curve_samples = require_int(*v, "analysis.counterexample.curve_samples");
      if (const ordered_json* m = find_block(*x, "manifold")) {
        check_keys(*m, "analysis.counterexample.manifold", {"distance", "step", "steps"});
        if (const ordered_json* v = find(*m, "distance"))
          c.manifold_distance = require_number(*v, "manifold.distance");
        if (const ordered_json* v = find(*m, "step"))
          c.manifold_step = require_number(*v, "manifold.step");
        if (const ordered_json* v = find(*m, "steps"))
          c.manifold_steps = require_int(*v, "manifold.steps");
      }
    }
  }
  require_in(c.r_max, 0.0, c.R, "analysis.r_max");
  if (!(c.margin >= 1.0 && c.margin <= 1000.0)) fail("analysis.margin must lie in [1, 1000]");
  require_in(c.R_eff, 0.0, c.R, "analysis.R_eff");
  if (c.hardy_trials < 1 || c.hardy_trials > 1000000)
    fail("analysis.hardy.trials must lie in [1, 1000000]");
  if (c.hardy_modes < 1 || c.hardy_modes > 64)
    fail("analysis.hardy.modes must lie in [1, 64]");
  for (double r : c.hardy_radii)
    if (!(r > c.epsilon && r <= c.R)) fail("analysis.hardy.radii must lie in (epsilon, R]");
  for (double r : c.pohozaev_radii)
    if (!(r > 0.0 && r <= c.R)) fail("analysis.pohozaev.radii must lie in (0, R]");
  if (c.pohozaev_levels < 1 || c.pohozaev_levels > 8)
    fail("analysis.pohozaev.levels must lie in [1, 8]");
  require_in(c.pohozaev_r, 0.0, c.R, "analysis.pohozaev.r");
  for (double x : c.x1_corner)
    if (!(x > 0.0 && x < 0.1)) fail("analysis.counterexample.x1_corner must lie in (0, 0.1)");
  for (double x : c.x1_deformation)
    if (!(x > 0.0 && x < 0.1))
      fail("analysis.counterexample.x1_deformation must lie in (0, 0.1)");
  if (!(c.model_r_lo > 0.0 && c.model_r_lo < c.model_r_hi && c.model_r_hi < 1.0))
    fail("analysis.counterexample.model_window needs 0 < r_lo < r_hi < 1");
  if (c.model_samples < 8 || c.model_samples > 100000)
    fail("analysis.counterexample.model_samples must lie in [8, 100000]");
  if (!(c.sigma > 0.0 && c.sigma < 1.5707963267948966))
    fail("analysis.counterexample.sigma must lie in (0, pi/2)");
  if (c.curve_samples < 2 || c.curve_samples > 1000000)
    fail("analysis.counterexample.curve_samples must lie in [2, 1000000]");
  if (!(c.manifold_distance > 0.0 && c.manifold_distance <= 0.05))
    fail("analysis.counterexample.manifold.distance must lie in (0, 0.05]");
  if (!(c.manifold_step > 0.0 && c.manifold_step <= 1.0))
    fail("analysis.counterexample.manifold.step must lie in (0, 1]");
  if (c.manifold_steps < 10 || c.manifold_steps > 10000000)
    fail("analysis.counterexample.manifold.steps must lie in [10, 10000000]");

  if (const ordered_json* b = find_block(doc, "output")) {
    check_keys(*b, "output", {"dir"});
    if (const ordered_json* v = find(*b, "dir")) {
      const std::string dir = require_string(*v, "output.dir");
      if (dir.empty()) fail("output.dir must be a nonempty path");
      c.out_dir = dir;
    }
  }

  if (const ordered_json* v = find(doc, "cases")) {
    if (!v->is_array()) fail("cases must be an array");
  }
  return c;
}

RunConfig RunConfig::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read configuration file " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

// ---------------------------------------------------------------------------
// operations
// ---------------------------------------------------------------------------

std::vector<std::filesystem::path> run_solve(const RunConfig& c) {
  ensure_dir(c.out_dir);
  const PolarGrid grid = make_grid(c);
  const CoefficientData coeff = make_coefficients(c);
  const ScalarField field = solve_field(c, grid, coeff);

  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<std::size_t>(grid.nr()) * grid.m());
  for (int i = 0; i < grid.nr(); ++i)
    for (int l = 0; l < grid.m(); ++l)
      rows.push_back({grid.radii[static_cast<std::size_t>(i)],
                      grid.angles[static_cast<std::size_t>(l)], field.value(i, l)});
  const std::filesystem::path solution =
      write_csv(c.out_dir / "solution.csv", {"r", "t", "w"}, rows);

  std::vector<std::string> header = {"r"};
  for (int k = 1; k <= field.k_max; ++k) header.push_back("phi_" + std::to_string(k));
  std::vector<std::vector<double>> mode_rows;
  mode_rows.reserve(static_cast<std::size_t>(grid.nr()));
  for (int i = 0; i < grid.nr(); ++i) {
    std::vector<double> row = {grid.radii[static_cast<std::size_t>(i)]};
    for (int k = 1; k <= field.k_max; ++k) row.push_back(field.mode(i, k));
    mode_rows.push_back(std::move(row));
  }
  const std::filesystem::path modes = write_csv(c.out_dir / "modes.csv", header, mode_rows);

  ordered_json j;
  j["operation"] = "solve";
  j["geometry"] = geometry_echo(c);
  j["R0"] = valid_radius(coeff.p_sup, coeff.q_sup, c.R);
  j["diagnostics"] = ordered_json(field.diagnostics);
  const std::filesystem::path summary = write_json_file(c.out_dir / "solve.json", j);
  return {solution, modes, summary};
}

std::vector<std::filesystem::path> run_frequency(const RunConfig& c) {
  ensure_dir(c.out_dir);
  require_reaction_form(c, "frequency");
  const PolarGrid grid = make_grid(c);
  const CoefficientData coeff = make_coefficients(c);
  const ScalarField field = solve_field(c, grid, coeff);

  const double ceiling = c.r_max > 0.0 ? c.r_max : grid.R;
  const std::vector<double> radii = default_curve_radii(grid, ceiling, c.margin);
  const FrequencyCurve curve = frequency_curve(field, coeff, radii);
  const NuDiagnostics nu = nu_diagnostics(field, coeff, curve.radii);
  if (nu.radii.size() != curve.radii.size())
    throw NumericalError("frequency diagnostics misaligned with the curve radii");

  std::vector<std::vector<double>> rows;
  rows.reserve(curve.radii.size());
  for (std::size_t i = 0; i < curve.radii.size(); ++i)
    rows.push_back({curve.radii[i], curve.H[i], curve.D[i], curve.N[i], nu.nu1[i], nu.nu2[i]});
  const std::filesystem::path csv =
      write_csv(c.out_dir / "frequency.csv", {"r", "H", "D", "N", "nu1", "nu2"}, rows);

  const GammaExtract gamma = extract_gamma(curve);
  ordered_json j;
  j["operation"] = "frequency";
  j["geometry"] = geometry_echo(c);
  j["gamma"] = gamma.gamma;
  j["k0"] = gamma.k0;
  j["accepted"] = gamma.accepted;
  j["flatness"] = gamma.flatness;
  j["R0"] = curve.R0;
  j["epsilon"] = curve.epsilon;
  j["hprime_residual"] = check_Hprime(curve);
  const std::filesystem::path summary = write_json_file(c.out_dir / "frequency.json", j);
  return {csv, summary};
}

std::vector<std::filesystem::path> run_extract(const RunConfig& c) {
  ensure_dir(c.out_dir);
  require_reaction_form(c, "extract");
  const PolarGrid grid = make_grid(c);
  const CoefficientData coeff = make_coefficients(c);
  const ScalarField field = solve_field(c, grid, coeff);

  const double R0 = valid_radius(coeff.p_sup, coeff.q_sup, c.R);
  const double R_eff = c.R_eff > 0.0 ? c.R_eff : 0.5 * std::min(R0, c.R);
  const JunctionExpansion expansion = extract_expansion(field, coeff, R_eff);

  ordered_json j;
  j["operation"] = "extract";
  j["geometry"] = geometry_echo(c);
  j["R0"] = R0;
  j["R_eff"] = R_eff;
  j["k0"] = expansion.k0;
  j["gamma"] = expansion.gamma;
  j["beta_formula"] = expansion.beta_formula;
  j["beta_trace"] = expansion.beta_trace;
  j["remainder_exponent"] = expansion.remainder_exponent;
  j["diagnostics"] = ordered_json(expansion.diagnostics);
  const std::filesystem::path summary = write_json_file(c.out_dir / "extract.json", j);
  return {summary};
}

std::vector<std::filesystem::path> run_hardy(const RunConfig& c) {
  ensure_dir(c.out_dir);
  const PolarGrid grid = make_grid(c);
  const std::vector<double> radii =
      c.hardy_radii.empty()
          ? std::vector<double>{0.25 * c.R, 0.5 * c.R, 0.75 * c.R}
          : c.hardy_radii;

  // Random mode mixtures sum_k a_k F_k with a_k uniform on [-1, 1]; both
  // inequalities are exact on such fields, so any slack below the floor is a
  // quadrature defect.
  const double slack_floor = -1e-10;
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);

  ordered_json table = ordered_json::array();
  double worst_interior = std::numeric_limits<double>::infinity();
  double worst_boundary = std::numeric_limits<double>::infinity();
  bool all_pass = true;
  for (int trial = 0; trial < c.hardy_trials; ++trial) {
    std::vector<double> coeffs(static_cast<std::size_t>(c.hardy_modes));
    for (double& a : coeffs) a = unif(rng);
    const ScalarField field = mode_mixture_field(grid, coeffs);

    double interior_slack = std::numeric_limits<double>::infinity();
    double boundary_slack = std::numeric_limits<double>::infinity();
    for (double r : radii) {
      const auto [energy, quarter_mass] = hardy_interior(field, r);
      interior_slack = std::min(interior_slack, energy - quarter_mass);
      const auto [edge_mass, pi_energy] = hardy_boundary(field, r);
      boundary_slack = std::min(boundary_slack, pi_energy - edge_mass);
    }
    const bool pass = interior_slack >= slack_floor && boundary_slack >= slack_floor;
    all_pass = all_pass && pass;
    worst_interior = std::min(worst_interior, interior_slack);
    worst_boundary = std::min(worst_boundary, boundary_slack);

    ordered_json row;
    row["trial"] = trial;
    row["coefficients"] = coeffs;
    row["interior_slack"] = interior_slack;
    row["boundary_slack"] = boundary_slack;
    row["pass"] = pass;
    table.push_back(std::move(row));
  }

  ordered_json j;
  j["operation"] = "hardy";
  j["geometry"] = geometry_echo(c);
  j["trials"] = c.hardy_trials;
  j["modes"] = c.hardy_modes;
  j["seed"] = c.seed;
  j["radii"] = radii;
  j["slack_floor"] = slack_floor;
  j["all_pass"] = all_pass;
  j["worst_interior_slack"] = worst_interior;
  j["worst_boundary_slack"] = worst_boundary;
  j["table"] = std::move(table);
  const std::filesystem::path summary = write_json_file(c.out_dir / "hardy.json", j);
  return {summary};
}

std::vector<std::filesystem::path> run_pohozaev(const RunConfig& c) {
  ensure_dir(c.out_dir);
  require_reaction_form(c, "pohozaev");
  const CoefficientData coeff = make_coefficients(c);
  const PolarGrid grid = make_grid(c);
  const ScalarField field = solve_field(c, grid, coeff);

  std::vector<double> radii = c.pohozaev_radii;
  if (radii.empty())
    for (int j = 8; j >= 1; --j) radii.push_back(c.R / static_cast<double>(1 << j));

  std::vector<std::vector<double>> rows;
  rows.reserve(radii.size());
  for (double r : radii) {
    const PohozaevResiduals res = pohozaev_residual(field, coeff, r);
    rows.push_back({res.r, res.res1, res.res2});
  }
  const std::filesystem::path radius_csv =
      write_csv(c.out_dir / "pohozaev_radius.csv", {"r", "res1", "res2"}, rows);

  // Refinement table at a fixed radius; each level doubles both grid
  // directions, so second-order residuals shrink by about four per row.
  const double rr = c.pohozaev_r > 0.0 ? c.pohozaev_r : 0.25 * c.R;
  std::vector<std::vector<double>> refine_rows;
  std::vector<double> res1_levels, res2_levels;
  for (int level = 0; level < c.pohozaev_levels; ++level) {
    const int scale = 1 << (c.refine + level);
    const PolarGrid grid_l =
        level == 0 ? grid
                   : build_polar_grid(c.R, c.epsilon, (c.Nr - 1) * scale + 1,
                                      (c.M - 1) * scale + 1);
    const ScalarField field_l = level == 0 ? field : solve_field(c, grid_l, coeff);
    const PohozaevResiduals res = pohozaev_residual(field_l, coeff, rr);
    refine_rows.push_back({static_cast<double>(level), grid_l.ds(), res.res1, res.res2});
    res1_levels.push_back(res.res1);
    res2_levels.push_back(res.res2);
  }
  const std::filesystem::path refine_csv = write_csv(
      c.out_dir / "pohozaev_refinement.csv", {"level", "ds", "res1", "res2"}, refine_rows);

  // Mean dyadic convergence order; meaningless once residuals sit at the
  // round-off floor, reported as null in that case.
  const auto order_of = [](const std::vector<double>& res) -> ordered_json {
    double acc = 0.0;
    int count = 0;
    for (std::size_t l = 0; l + 1 < res.size(); ++l) {
      if (std::abs(res[l]) < 1e-14 || std::abs(res[l + 1]) < 1e-14) return nullptr;
      acc += std::log2(std::abs(res[l]) / std::abs(res[l + 1]));
      ++count;
    }
    if (count == 0) return nullptr;
    return acc / count;
  };

  ordered_json j;
  j["operation"] = "pohozaev";
  j["geometry"] = geometry_echo(c);
  j["refinement_radius"] = rr;
  j["levels"] = c.pohozaev_levels;
  j["order1"] = order_of(res1_levels);
  j["order2"] = order_of(res2_levels);
  const std::filesystem::path summary = write_json_file(c.out_dir / "pohozaev.json", j);
  return {radius_csv, refine_csv, summary};
}

std::vector<std::filesystem::path> run_counterexample(const RunConfig& c) {
  ensure_dir(c.out_dir);

  const cx::CurveTrace dirichlet = cx::gamma_plus_curve(c.sigma, c.curve_samples);
  std::vector<std::vector<double>> rows;
  rows.reserve(dirichlet.points.size());
  for (std::size_t i = 0; i < dirichlet.points.size(); ++i)
    rows.push_back({dirichlet.params[i], dirichlet.points[i][0], dirichlet.points[i][1],
                    dirichlet.tangents[i][0], dirichlet.tangents[i][1]});
  const std::filesystem::path plus_csv = write_csv(
      c.out_dir / "gamma_plus.csv", {"theta", "x1", "x2", "tangent_x1", "tangent_x2"}, rows);

  const cx::CurveTrace manifold =
      cx::trace_gamma_minus(c.manifold_distance, c.manifold_step, c.manifold_steps);
  rows.clear();
  rows.reserve(manifold.points.size());
  for (std::size_t i = 0; i < manifold.points.size(); ++i)
    rows.push_back({manifold.params[i], manifold.points[i][0], manifold.points[i][1]});
  const std::filesystem::path minus_csv =
      write_csv(c.out_dir / "gamma_minus.csv", {"time", "x1", "x2"}, rows);

  const std::vector<cx::RatioSample> corner = cx::stima_ratio(c.x1_corner);
  rows.clear();
  for (const cx::RatioSample& s : corner) rows.push_back({s.x1, s.ratio});
  const std::filesystem::path corner_csv =
      write_csv(c.out_dir / "corner_ratio.csv", {"x1", "ratio"}, rows);

  const std::vector<cx::RatioSample> deformation = cx::c1_deformation_ratio(c.x1_deformation);
  rows.clear();
  for (const cx::RatioSample& s : deformation) rows.push_back({s.x1, s.ratio});
  const std::filesystem::path deformation_csv =
      write_csv(c.out_dir / "deformation_ratio.csv", {"x1", "ratio"}, rows);

  const std::vector<double> model_radii = logspace(c.model_r_lo, c.model_r_hi, c.model_samples);
  std::vector<double> arc_energy(model_radii.size());
  for (std::size_t i = 0; i < model_radii.size(); ++i) arc_energy[i] = cx::H_arc(model_radii[i]);
  rows.clear();
  for (std::size_t i = 0; i < model_radii.size(); ++i)
    rows.push_back({model_radii[i], arc_energy[i]});
  const std::filesystem::path energy_csv =
      write_csv(c.out_dir / "arc_energy.csv", {"r", "H"}, rows);
  const cx::LogModelReport model = cx::log_model_fit(model_radii, arc_energy);

  const std::vector<double> sector_radii = logspace(1e-4, 1e-1, 60);
  const FrequencyCurve sector = cx::sector_frequency_curve(sector_radii);
  rows.clear();
  for (std::size_t i = 0; i < sector.radii.size(); ++i)
    rows.push_back({sector.radii[i], sector.H[i], sector.D[i], sector.N[i]});
  const std::filesystem::path sector_csv =
      write_csv(c.out_dir / "sector_frequency.csv", {"r", "H", "D", "N"}, rows);
  const GammaExtract sector_gamma = extract_gamma(sector);

  const cx::JacobianEstimate jacobian = cx::v_field_jacobian_limit();

  const double pi = 3.14159265358979323846;
  const double corner_limit = -0.25 * pi;
  const double deformation_limit = -4.0 * pi / 9.0;
  const double corner_final = corner.back().ratio;
  const double deformation_final = deformation.back().ratio;
  const std::array<double, 2> terminal = manifold.points.back();

  ordered_json j;
  j["operation"] = "counterexample";
  ordered_json jc;
  jc["final_x1"] = corner.back().x1;
  jc["final_ratio"] = corner_final;
  jc["limit"] = corner_limit;
  jc["relative_gap"] = std::abs(corner_final - corner_limit) / std::abs(corner_limit);
  jc["within_10_percent"] =
      std::abs(corner_final - corner_limit) <= 0.1 * std::abs(corner_limit);
  j["corner"] = std::move(jc);
  ordered_json jd;
  jd["final_x1"] = deformation.back().x1;
  jd["final_ratio"] = deformation_final;
  jd["limit"] = deformation_limit;
  jd["relative_gap"] =
      std::abs(deformation_final - deformation_limit) / std::abs(deformation_limit);
  jd["within_10_percent"] =
      std::abs(deformation_final - deformation_limit) <= 0.1 * std::abs(deformation_limit);
  j["deformation"] = std::move(jd);
  ordered_json jj;
  jj["matrix"] = ordered_json::array({jacobian.matrix[0], jacobian.matrix[1]});
  jj["eigenvalues"] = jacobian.eigenvalues;
  jj["eigenvectors"] = ordered_json::array({jacobian.eigenvectors[0], jacobian.eigenvectors[1]});
  j["jacobian"] = std::move(jj);
  ordered_json jm;
  jm["samples"] = manifold.points.size();
  jm["start_distance"] = c.manifold_distance;
  jm["terminal_distance"] = std::hypot(terminal[0], terminal[1]);
  jm["approaches_origin"] = !manifold.diverged;
  j["manifold"] = std::move(jm);
  ordered_json jl;
  jl["window"] = ordered_json::array({c.model_r_lo, c.model_r_hi});
  jl["samples"] = c.model_samples;
  jl["power_exponent"] = model.power_exponent;
  jl["power_amplitude"] = model.power_amplitude;
  jl["power_rms"] = model.power_rms;
  jl["log_amplitude"] = model.log_amplitude;
  jl["log_rms"] = model.log_rms;
  jl["residual_ratio"] = model.residual_ratio;
  jl["prefers_log"] = model.prefers_log;
  j["log_model"] = std::move(jl);
  ordered_json js;
  js["N_inner"] = sector.N.front();
  js["gamma_median"] = sector_gamma.gamma;
  js["half_integer_accepted"] = sector_gamma.accepted;
  j["sector"] = std::move(js);

  const std::filesystem::path summary = write_json_file(c.out_dir / "counterexample.json", j);
  return {plus_csv,       minus_csv,  corner_csv, deformation_csv,
          energy_csv,     sector_csv, summary};
}

std::vector<std::filesystem::path> run_sweep(const RunConfig& c) {
  ordered_json doc = ordered_json::parse(c.source_text);
  const ordered_json* cases = find(doc, "cases");
  if (cases == nullptr || !cases->is_array() || cases->empty())
    fail("sweep requires a nonempty top-level \"cases\" array");

  ordered_json base = doc;
  base.erase("cases");

  struct Case {
    std::string name;
    std::string operation;
    RunConfig config;
  };
  std::vector<Case> items;
  items.reserve(cases->size());
  std::set<std::string> seen;
  for (const ordered_json& entry : *cases) {
    if (!entry.is_object()) fail("cases entries must be objects");
    check_keys(entry, "a cases entry", {"name", "patch"});
    const ordered_json* name_value = find(entry, "name");
    if (name_value == nullptr) fail("cases entries need a \"name\"");
    const std::string name = require_string(*name_value, "case name");
    if (name.empty() || name == "." || name == ".." ||
        name.find_first_not_of("abcdefghijklmnopqrstuvwxyz"
                               "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_.-") != std::string::npos)
      fail("case name \"" + name + "\" must use only letters, digits, '_', '.', '-'");
    if (!seen.insert(name).second) fail("duplicate case name \"" + name + "\"");

    ordered_json merged = base;
    bool patch_sets_seed = false;
    if (const ordered_json* patch = find(entry, "patch")) {
      if (!patch->is_object()) fail("case patch for \"" + name + "\" must be an object");
      if (patch->contains("cases")) fail("case \"" + name + "\": nested sweeps are not supported");
      if (patch->contains("output"))
        fail("case \"" + name + "\": cases write under <output>/<name> and cannot redirect it");
      const ordered_json* analysis = find(*patch, "analysis");
      patch_sets_seed = analysis != nullptr && analysis->is_object() && analysis->contains("seed");
      merged.merge_patch(*patch);
    }

    Case item;
    item.config = RunConfig::from_json_text(merged.dump());
    // The parent's effective seed (config or command line) flows down unless
    // the patch pins its own.
    if (!patch_sets_seed) item.config.seed = c.seed;
    item.config.out_dir = c.out_dir / name;
    item.name = name;
    item.operation = item.config.operation;
    if (item.operation == "sweep")
      fail("case \"" + name + "\": nested sweeps are not supported");
    items.push_back(std::move(item));
  }
  ensure_dir(c.out_dir);

  // Cases run concurrently; each owns its output directory and its slot in
  // the outcome vector, so results are independent of scheduling order.
  struct Outcome {
    std::vector<std::filesystem::path> artifacts;
    std::string error;
    bool config_error = false;
  };
  std::vector<Outcome> outcomes(items.size());
  std::atomic<std::size_t> next{0};
  const unsigned workers = std::max(
      1u, std::min(std::thread::hardware_concurrency(), static_cast<unsigned>(items.size())));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&items, &outcomes, &next] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= items.size()) return;
        try {
          outcomes[i].artifacts = run_operation(items[i].operation, items[i].config);
        } catch (const ConfigError& e) {
          outcomes[i].error = e.what();
          outcomes[i].config_error = true;
        } catch (const std::exception& e) {
          outcomes[i].error = e.what();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();

  std::vector<std::size_t> order(items.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&items](std::size_t a, std::size_t b) {
    return items[a].name < items[b].name;
  });

  ordered_json summary;
  summary["operation"] = "sweep";
  ordered_json case_rows = ordered_json::array();
  std::vector<std::filesystem::path> artifacts;
  std::vector<std::string> failed;
  bool failed_config = false;
  for (std::size_t i : order) {
    ordered_json row;
    row["name"] = items[i].name;
    row["operation"] = items[i].operation;
    if (outcomes[i].error.empty()) {
      row["status"] = "ok";
      ordered_json rel = ordered_json::array();
      for (const std::filesystem::path& p : outcomes[i].artifacts) {
        rel.push_back(items[i].name + "/" + p.filename().string());
        artifacts.push_back(p);
      }
      row["artifacts"] = std::move(rel);
    } else {
      row["status"] = "error";
      row["error"] = outcomes[i].error;
      failed.push_back(items[i].name);
      failed_config = failed_config || outcomes[i].config_error;
    }
    case_rows.push_back(std::move(row));
  }
  summary["cases"] = std::move(case_rows);
  artifacts.push_back(write_json_file(c.out_dir / "sweep.json", summary));

  if (!failed.empty()) {
    std::string message = "sweep cases failed:";
    for (const std::string& name : failed) message += " " + name;
    if (failed_config) throw ConfigError(message);
    throw NumericalError(message);
  }
  return artifacts;
}

std::vector<std::filesystem::path> run_operation(const std::string& name,
                                                 const RunConfig& config) {
  if (name == "solve") return run_solve(config);
  if (name == "frequency") return run_frequency(config);
  if (name == "extract") return run_extract(config);
  if (name == "hardy") return run_hardy(config);
  if (name == "pohozaev") return run_pohozaev(config);
  if (name == "counterexample") return run_counterexample(config);
  if (name == "sweep") return run_sweep(config);
  fail("unknown operation \"" + name + "\"");
}

}  // namespace jlab
