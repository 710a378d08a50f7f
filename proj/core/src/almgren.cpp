#include "jlab/almgren.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jlab/eigenbasis.hpp"
#include "jlab/errors.hpp"
#include "jlab/quadrature.hpp"
#include "mode_calculus.hpp"
#include "radial_integrals.hpp"

namespace jlab {

namespace {

// Nearest grid node to r; callers need node alignment for the log-radial
// quadrature and differencing.
int snap_index(const PolarGrid& g, double r) {
  if (!(r > 0.0) || r > g.R * (1.0 + 1e-12))
    throw std::domain_error("radius outside (0, R]");
  const double s = std::log(r / g.epsilon) / g.ds();
  return std::clamp(static_cast<int>(std::lround(s)), 0, g.nr() - 1);
}

double D_at_index(const ScalarField& field, const std::vector<double>& dmodes,
                  const CoefficientData& coeff, int ir) {
  const detail::RadialIntegrals vol = detail::radial_integrals(field, dmodes, coeff, ir);
  return vol.grad2 - vol.pw2 - vol.qw2;
}

}  // namespace

double compute_H(const ScalarField& field, double r) {
  const PolarGrid& g = field.grid;
  if (!(r >= g.epsilon * (1.0 - 1e-12)) || r > g.R * (1.0 + 1e-12))
    throw std::domain_error("compute_H requires epsilon <= r <= R");
  const std::vector<double> row = field.row_at(r);
  double acc = 0.0;
  for (int l = 0; l < g.m(); ++l)
    acc += g.angular_weights[static_cast<std::size_t>(l)] * row[static_cast<std::size_t>(l)] *
           row[static_cast<std::size_t>(l)];
  return acc;
}

double compute_D(const ScalarField& field, const CoefficientData& coeff, double r) {
  const int ir = snap_index(field.grid, r);
  const std::vector<double> dmodes = detail::mode_s_derivatives(field);
  return D_at_index(field, dmodes, coeff, ir);
}

FrequencyCurve frequency_curve(const ScalarField& field, const CoefficientData& coeff,
                               const std::vector<double>& radii) {
  if (radii.empty()) throw std::invalid_argument("frequency_curve: empty radius list");
  const PolarGrid& g = field.grid;

  std::vector<int> idx;
  idx.reserve(radii.size());
  for (double r : radii) idx.push_back(std::max(snap_index(g, r), 2));
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());

  const std::vector<double> dmodes = detail::mode_s_derivatives(field);
  FrequencyCurve curve;
  curve.R0 = valid_radius(coeff.p_sup, coeff.q_sup, g.R);
  curve.epsilon = g.epsilon;
  for (int ir : idx) {
    const double r = g.radii[static_cast<std::size_t>(ir)];
    const double H = compute_H(field, r);
    if (!(H > 0.0)) continue;  // outside the H > 0 regime; sample dropped
    curve.radii.push_back(r);
    curve.H.push_back(H);
    curve.D.push_back(D_at_index(field, dmodes, coeff, ir));
    curve.N.push_back(curve.D.back() / H);
  }
  if (curve.radii.empty()) throw NumericalError("frequency_curve: no sample with H > 0");
  return curve;
}

std::vector<double> default_curve_radii(const PolarGrid& grid, double r_max, double margin) {
  std::vector<double> out;
  for (int i = 0; i < grid.nr(); ++i) {
    const double r = grid.radii[static_cast<std::size_t>(i)];
    if (r > margin * grid.epsilon && r <= r_max * (1.0 + 1e-12)) out.push_back(r);
  }
  if (out.empty()) throw std::invalid_argument("default_curve_radii: empty radius window");
  return out;
}

double check_Hprime(const FrequencyCurve& curve) {
  const std::size_t n = curve.radii.size();
  if (n < 5) throw std::invalid_argument("check_Hprime needs at least five samples");
  const double ds = std::log(curve.radii[1] / curve.radii[0]);
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (std::abs(std::log(curve.radii[i + 1] / curve.radii[i]) - ds) > 1e-9 * ds)
      throw std::invalid_argument("check_Hprime requires log-uniform radii");

  // In s = log r the identity reads dH/ds = 2 D.
  double scale = 0.0;
  for (double d : curve.D) scale = std::max(scale, 2.0 * std::abs(d));
  if (scale == 0.0) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dH = deriv_uniform(curve.H, i, ds);
    worst = std::max(worst, std::abs(dH - 2.0 * curve.D[i]) / scale);
  }
  return worst;
}

std::pair<double, double> nu_split(const ScalarField& field, const CoefficientData& coeff,
                                   double r) {
  const PolarGrid& g = field.grid;
  const int K = field.k_max;
  const int ir = std::max(snap_index(g, r), 2);
  const double rs = g.radii[static_cast<std::size_t>(ir)];
  const std::vector<double> dmodes = detail::mode_s_derivatives(field);

  double sum_phi2 = 0.0, sum_dphi2 = 0.0, sum_phidphi = 0.0;
  for (int k = 1; k <= K; ++k) {
    const double ph = field.mode(ir, k);
    const double dp = dmodes[static_cast<std::size_t>(ir) * K + (k - 1)];
    sum_phi2 += ph * ph;
    sum_dphi2 += dp * dp;
    sum_phidphi += ph * dp;
  }
  // Surface integrals over S_r: w^2 -> r (pi/2) sum phi^2, (d_nu w)^2 ->
  // (pi/2) sum phi_s^2 / r, w d_nu w -> (pi/2) sum phi phi_s.
  const double S0 = rs * 0.5 * M_PI * sum_phi2;
  if (!(S0 > 0.0)) throw NumericalError("nu_split: H(r) vanishes");
  const double S2 = 0.5 * M_PI * sum_dphi2 / rs;
  const double S1 = 0.5 * M_PI * sum_phidphi;

  // nu1 = 2r [ int (d_nu w)^2 int w^2 - (int w d_nu w)^2 ] / (int w^2)^2:
  // the Cauchy-Schwarz excess, nonnegative up to quadrature error.
  const double nu1 = 2.0 * rs * (S2 * S0 - S1 * S1) / (S0 * S0);

  double nu2 = 0.0;
  if (coeff.p || coeff.q) {
    const detail::RadialIntegrals vol = detail::radial_integrals(field, dmodes, coeff, ir);
    double surf_pw2 = 0.0;
    if (coeff.p) {
      for (int l = 0; l < g.m(); ++l) {
        const double wv = field.value(ir, l);
        surf_pw2 += g.angular_weights[static_cast<std::size_t>(l)] *
                    coeff.p(rs, g.angles[static_cast<std::size_t>(l)]) * wv * wv;
      }
      surf_pw2 *= rs * rs;  // r * int_{S_r} p w^2 ds = r^2 int p w^2 dt
    }
    nu2 = (-vol.qxw2 + 2.0 * vol.pwws - surf_pw2) / S0;
  }
  return {nu1, nu2};
}

NuDiagnostics nu_diagnostics(const ScalarField& field, const CoefficientData& coeff,
                             const std::vector<double>& radii) {
  NuDiagnostics out;
  for (double r : radii) {
    const auto [n1, n2] = nu_split(field, coeff, r);
    out.radii.push_back(field.grid.radii[static_cast<std::size_t>(std::max(
        snap_index(field.grid, r), 2))]);
    out.nu1.push_back(n1);
    out.nu2.push_back(n2);
  }
  return out;
}

std::pair<int, int> trusted_decade(const FrequencyCurve& curve) {
  const double lo = 10.0 * curve.epsilon;
  const double hi = std::min(100.0 * curve.epsilon, 0.5 * curve.R0);
  int i_lo = -1, i_hi = -1;
  for (std::size_t i = 0; i < curve.radii.size(); ++i) {
    if (curve.radii[i] >= lo && i_lo < 0) i_lo = static_cast<int>(i);
    if (curve.radii[i] <= hi) i_hi = static_cast<int>(i);
  }
  if (i_lo < 0 || i_hi < i_lo + 4)
    throw NumericalError("no trusted decade: too few samples in [10 eps, min(100 eps, R0/2)]");
  return {i_lo, i_hi};
}

GammaExtract extract_gamma(const FrequencyCurve& curve) {
  const auto [i_lo, i_hi] = trusted_decade(curve);
  std::vector<double> window(curve.N.begin() + i_lo, curve.N.begin() + i_hi + 1);
  GammaExtract out;
  out.gamma = median(window);
  for (double n : window) out.flatness = std::max(out.flatness, std::abs(n - out.gamma));
  out.k0 = std::max(1, static_cast<int>(std::lround(out.gamma + 0.5)));
  out.accepted = std::abs(out.gamma - gamma_k(out.k0)) < 0.05;
  return out;
}

GrowthBounds growth_bounds(const FrequencyCurve& curve, double gamma) {
  const auto [i_lo, i_hi] = trusted_decade(curve);
  std::vector<double> x, y;
  for (int i = i_lo; i <= i_hi; ++i) {
    if (!(curve.H[static_cast<std::size_t>(i)] > 0.0)) continue;
    x.push_back(std::log(curve.radii[static_cast<std::size_t>(i)]));
    y.push_back(std::log(curve.H[static_cast<std::size_t>(i)]));
  }
  if (x.size() < 3) throw NumericalError("growth_bounds: degenerate fit window");
  const LineFit fit = fit_line(x, y);
  GrowthBounds out;
  out.slope = fit.slope;
  out.gap = fit.slope - 2.0 * gamma;
  // H = O(r^{2 gamma}) as r -> 0 needs vanishing at least that fast
  // (slope >= 2 gamma up to fit noise); r^{2 gamma + sigma} = O(H) caps the
  // slope from above.
  out.upper_bound_ok = out.gap >= -0.01;
  out.lower_bound_ok = out.gap <= out.sigma;
  return out;
}

std::pair<double, double> hardy_interior(const ScalarField& field, double r) {
  const PolarGrid& g = field.grid;
  const int ir = std::max(snap_index(g, r), 2);
  const int K = field.k_max;
  const std::vector<double> dmodes = detail::mode_s_derivatives(field);
  const detail::RadialIntegrals vol =
      detail::radial_integrals(field, dmodes, CoefficientData::zero(), ir);

  // int w^2/|z|^2 dz = int (pi/2) sum phi^2 ds in log-radial coordinates.
  std::vector<double> weight(static_cast<std::size_t>(ir) + 1);
  for (int i = 0; i <= ir; ++i) {
    double acc = 0.0;
    for (int k = 1; k <= K; ++k) acc += field.mode(i, k) * field.mode(i, k);
    weight[static_cast<std::size_t>(i)] = 0.5 * M_PI * acc;
  }
  const double rhs_raw = simpson(weight, g.ds()) + detail::hardy_interior_tail(field);
  return {vol.grad2, 0.25 * rhs_raw};
}

std::pair<double, double> hardy_boundary(const ScalarField& field, double r) {
  const PolarGrid& g = field.grid;
  const int ir = std::max(snap_index(g, r), 2);
  const int K = field.k_max;
  const std::vector<double> dmodes = detail::mode_s_derivatives(field);
  const detail::RadialIntegrals vol =
      detail::radial_integrals(field, dmodes, CoefficientData::zero(), ir);

  // int_0^r w^2(x,0)/x dx = int w(e^s, 0)^2 ds with the closed-form tail.
  std::vector<double> trace2(static_cast<std::size_t>(ir) + 1);
  for (int i = 0; i <= ir; ++i) {
    double tr = 0.0;
    for (int k = 1; k <= K; ++k) tr += field.mode(i, k);
    trace2[static_cast<std::size_t>(i)] = tr * tr;
  }
  const double lhs = simpson(trace2, g.ds()) + detail::hardy_boundary_tail(field);
  return {lhs, M_PI * vol.grad2};
}

}  // namespace jlab
