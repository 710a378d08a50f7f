#include "jlab/field.hpp"

#include <cmath>
#include <stdexcept>

#include "jlab/eigenbasis.hpp"

namespace jlab {

namespace {

// Fractional radial index of r on the log-uniform grid, clamped to the
// grid range so callers may evaluate slightly outside [epsilon, R].
double log_index(const PolarGrid& grid, double r) {
  if (!(r > 0.0)) throw std::domain_error("field evaluation requires r > 0");
  const double s = std::log(r / grid.epsilon) / grid.ds();
  const double top = static_cast<double>(grid.nr() - 1);
  if (s < 0.0) return 0.0;
  if (s > top) return top;
  return s;
}

}  // namespace

double ScalarField::mode_at(double r, int k) const {
  const double s = log_index(grid, r);
  const int i0 = std::min(static_cast<int>(s), grid.nr() - 2);
  const double f = s - i0;
  return (1.0 - f) * mode(i0, k) + f * mode(i0 + 1, k);
}

double ScalarField::value_at(double r, double t) const {
  const double s = log_index(grid, r);
  const int i0 = std::min(static_cast<int>(s), grid.nr() - 2);
  const double fs = s - i0;

  const double dt = grid.dt();
  double a = t / dt;
  const double atop = static_cast<double>(grid.m() - 1);
  if (a < 0.0) a = 0.0;
  if (a > atop) a = atop;
  const int l0 = std::min(static_cast<int>(a), grid.m() - 2);
  const double fa = a - l0;

  const double v0 = (1.0 - fa) * value(i0, l0) + fa * value(i0, l0 + 1);
  const double v1 = (1.0 - fa) * value(i0 + 1, l0) + fa * value(i0 + 1, l0 + 1);
  return (1.0 - fs) * v0 + fs * v1;
}

std::vector<double> ScalarField::row_at(double r) const {
  const double s = log_index(grid, r);
  const int i0 = std::min(static_cast<int>(s), grid.nr() - 2);
  const double f = s - i0;
  std::vector<double> row(static_cast<std::size_t>(grid.m()));
  for (int l = 0; l < grid.m(); ++l)
    row[static_cast<std::size_t>(l)] = (1.0 - f) * value(i0, l) + f * value(i0 + 1, l);
  return row;
}

ScalarField field_from_values(const PolarGrid& grid, std::vector<double> values, int k_max) {
  if (k_max < 1) throw std::invalid_argument("field_from_values requires k_max >= 1");
  const int nr = grid.nr();
  const int m = grid.m();
  if (values.size() != static_cast<std::size_t>(nr) * m)
    throw std::invalid_argument("field_from_values: value array shape mismatch");

  ScalarField field;
  field.grid = grid;
  field.k_max = k_max;
  field.values = std::move(values);

  double worst = 0.0;
  for (int i = 0; i < nr; ++i) {
    for (int l = 0; l < m; ++l) {
      double& v = field.values[static_cast<std::size_t>(i) * m + l];
      if (!std::isfinite(v)) throw std::domain_error("field sample is not finite");
      if (l == m - 1) {
        // Dirichlet edge: keep the discrete trace exactly zero.
        worst = std::max(worst, std::abs(v));
        v = 0.0;
      }
    }
  }
  field.diagnostics["dirichlet_violation"] = worst;

  // Mode profiles by angular quadrature, phi_k = (2/pi) int w psi_k dt.
  field.modes.assign(static_cast<std::size_t>(nr) * k_max, 0.0);
  for (int i = 0; i < nr; ++i) {
    for (int k = 1; k <= k_max; ++k) {
      double acc = 0.0;
      for (int l = 0; l < m; ++l)
        acc += grid.angular_weights[static_cast<std::size_t>(l)] *
               field.values[static_cast<std::size_t>(i) * m + l] *
               psi_eval(k, grid.angles[static_cast<std::size_t>(l)]);
      field.modes[static_cast<std::size_t>(i) * k_max + (k - 1)] = 2.0 / M_PI * acc;
    }
  }
  return field;
}

ScalarField field_from_function(const PolarGrid& grid,
                                const std::function<double(double, double)>& w,
                                int k_max) {
  const int nr = grid.nr();
  const int m = grid.m();
  std::vector<double> values(static_cast<std::size_t>(nr) * m);
  for (int i = 0; i < nr; ++i) {
    const double r = grid.radii[static_cast<std::size_t>(i)];
    for (int l = 0; l < m; ++l)
      values[static_cast<std::size_t>(i) * m + l] = w(r, grid.angles[static_cast<std::size_t>(l)]);
  }
  return field_from_values(grid, std::move(values), k_max);
}

ScalarField field_from_modes(const PolarGrid& grid, std::vector<double> modes, int k_max) {
  if (k_max < 1) throw std::invalid_argument("field_from_modes requires k_max >= 1");
  const int nr = grid.nr();
  const int m = grid.m();
  if (modes.size() != static_cast<std::size_t>(nr) * k_max)
    throw std::invalid_argument("field_from_modes: mode array shape mismatch");

  ScalarField field;
  field.grid = grid;
  field.k_max = k_max;
  field.modes = std::move(modes);
  field.values.assign(static_cast<std::size_t>(nr) * m, 0.0);
  for (int l = 0; l < m; ++l) {
    const double t = grid.angles[static_cast<std::size_t>(l)];
    for (int k = 1; k <= k_max; ++k) {
      const double psi = psi_eval(k, t);
      if (psi == 0.0) continue;
      for (int i = 0; i < nr; ++i)
        field.values[static_cast<std::size_t>(i) * m + l] +=
            field.modes[static_cast<std::size_t>(i) * k_max + (k - 1)] * psi;
    }
  }
  return field;
}

ScalarField mode_mixture_field(const PolarGrid& grid, const std::vector<double>& coeffs) {
  if (coeffs.empty()) throw std::invalid_argument("mode_mixture_field requires coefficients");
  const int k_max = static_cast<int>(coeffs.size());
  const int nr = grid.nr();
  std::vector<double> modes(static_cast<std::size_t>(nr) * k_max, 0.0);
  for (int i = 0; i < nr; ++i) {
    const double r = grid.radii[static_cast<std::size_t>(i)];
    for (int k = 1; k <= k_max; ++k)
      modes[static_cast<std::size_t>(i) * k_max + (k - 1)] =
          coeffs[static_cast<std::size_t>(k - 1)] * std::pow(r, gamma_k(k));
  }
  return field_from_modes(grid, std::move(modes), k_max);
}

}  // namespace jlab
