#include "jlab/eigenbasis.hpp"

#include <cmath>
#include <stdexcept>

#include "jlab/field.hpp"
#include "jlab/quadrature.hpp"

namespace jlab {

namespace {

void require_mode(int k) {
  if (k < 1) throw std::invalid_argument("mode index k must be >= 1");
}

// Integral of rho^{gamma_j + 1} phi_j(rho) over [epsilon, r] plus the
// closed-form contribution of the harmonic continuation below epsilon,
// phi_j(rho) = phi_j(epsilon) (rho/epsilon)^{gamma_j} for rho < epsilon.
double radial_moment(const ScalarField& field, double r, int j) {
  const PolarGrid& g = field.grid;
  const double gj = gamma_k(j);
  const double s_end = std::log(r / g.epsilon);
  const double ds = g.ds();

  // Integrate exp((gamma_j + 2) s) phi_j(e^s) in s over whole grid cells,
  // then a trapezoid sliver up to s_end if r is not a node.
  const int i_full = std::min(static_cast<int>(std::floor(s_end / ds + 1e-9)), g.nr() - 1);
  std::vector<double> f(static_cast<std::size_t>(i_full) + 1);
  for (int i = 0; i <= i_full; ++i) {
    const double rho = g.radii[static_cast<std::size_t>(i)];
    f[static_cast<std::size_t>(i)] = std::pow(rho, gj + 2.0) * field.mode(i, j);
  }
  double acc = (i_full >= 2) ? simpson(f.data(), i_full + 1, ds)
                             : trapezoid(f.data(), i_full + 1, ds);
  const double s_last = i_full * ds;
  if (s_end > s_last + 1e-12) {
    const double f_end = std::pow(r, gj + 2.0) * field.mode_at(r, j);
    acc += 0.5 * (s_end - s_last) * (f.back() + f_end);
  }

  const double phi_eps = field.mode(0, j);
  const double tail = phi_eps * std::pow(g.epsilon, gj + 2.0) / (2.0 * gj + 2.0);
  return acc + tail;
}

}  // namespace

double lambda_k(int k) {
  require_mode(k);
  const double half_order = k - 0.5;
  return half_order * half_order;
}

double gamma_k(int k) {
  require_mode(k);
  return k - 0.5;
}

double psi_eval(int k, double t) {
  require_mode(k);
  // The Dirichlet endpoint is a hard zero of every mode; keep it exact so
  // synthesized fields satisfy the boundary condition to the last bit.
  if (t == M_PI) return 0.0;
  return std::cos((k - 0.5) * t);
}

double F_eval(int k, double r, double t) {
  require_mode(k);
  if (r < 0.0) throw std::domain_error("F_eval requires r >= 0");
  return std::pow(r, gamma_k(k)) * psi_eval(k, t);
}

double angular_project(const ScalarField& field, double r, int k) {
  require_mode(k);
  const PolarGrid& g = field.grid;
  const std::vector<double> row = field.row_at(r);
  double acc = 0.0;
  for (int l = 0; l < g.m(); ++l)
    acc += g.angular_weights[static_cast<std::size_t>(l)] * row[static_cast<std::size_t>(l)] *
           psi_eval(k, g.angles[static_cast<std::size_t>(l)]);
  return 2.0 / M_PI * acc;
}

std::pair<double, double> parseval_H(const ScalarField& field, double r, int k_max) {
  if (k_max < 1) throw std::invalid_argument("parseval_H requires k_max >= 1");
  const PolarGrid& g = field.grid;
  const std::vector<double> row = field.row_at(r);

  double direct = 0.0;
  for (int l = 0; l < g.m(); ++l)
    direct += g.angular_weights[static_cast<std::size_t>(l)] *
              row[static_cast<std::size_t>(l)] * row[static_cast<std::size_t>(l)];

  double series = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    double acc = 0.0;
    for (int l = 0; l < g.m(); ++l)
      acc += g.angular_weights[static_cast<std::size_t>(l)] * row[static_cast<std::size_t>(l)] *
             psi_eval(k, g.angles[static_cast<std::size_t>(l)]);
    const double phi = 2.0 / M_PI * acc;
    series += phi * phi;
  }
  series *= 0.5 * M_PI;
  return {direct, series};
}

ModeCoefficients project_Sk(const ScalarField& field, double r, int k) {
  require_mode(k);
  const PolarGrid& g = field.grid;
  if (!(r > g.epsilon) || r > g.R * (1.0 + 1e-12))
    throw std::domain_error("project_Sk requires epsilon < r <= R");
  if (k > field.k_max)
    throw std::invalid_argument("project_Sk: k exceeds the field's mode count");

  ModeCoefficients out;
  out.k_max = k;
  out.r = r;
  out.a.resize(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j) {
    const double gj = gamma_k(j);
    // ||F_j||^2 over the half-disk of radius r; the pi/2 angular norm cancels
    // against the same factor in the numerator, so both are dropped.
    const double denom = std::pow(r, 2.0 * gj + 2.0) / (2.0 * gj + 2.0);
    out.a[static_cast<std::size_t>(j - 1)] = radial_moment(field, r, j) / denom;
  }
  return out;
}

}  // namespace jlab
