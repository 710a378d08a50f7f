#include "jlab/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace jlab {

PolarGrid build_polar_grid(double R, double epsilon, int Nr, int M) {
  if (!(R > 0.0) || !(epsilon > 0.0) || epsilon >= R)
    throw std::invalid_argument("build_polar_grid: need 0 < epsilon < R");
  if (Nr < 3 || M < 9)
    throw std::invalid_argument("build_polar_grid: need Nr >= 3 and M >= 9");

  PolarGrid g;
  g.R = R;
  g.epsilon = epsilon;
  g.radii.resize(Nr);
  const double ratio = R / epsilon;
  for (int i = 0; i < Nr; ++i)
    g.radii[i] = epsilon * std::pow(ratio, static_cast<double>(i) / (Nr - 1));
  g.radii.front() = epsilon;
  g.radii.back() = R;

  g.angles.resize(M);
  const double dt = M_PI / (M - 1);
  for (int l = 0; l < M; ++l) g.angles[l] = l * dt;
  g.angles.back() = M_PI;

  g.radial_weights.resize(Nr);
  for (int i = 0; i < Nr; ++i) {
    const double lo = (i == 0) ? g.radii[0] : g.radii[i - 1];
    const double hi = (i == Nr - 1) ? g.radii[Nr - 1] : g.radii[i + 1];
    g.radial_weights[i] = 0.5 * (hi - lo);
  }

  g.angular_weights.assign(M, dt);
  g.angular_weights.front() = 0.5 * dt;
  g.angular_weights.back() = 0.5 * dt;
  return g;
}

ConformalMapSpec ConformalMapSpec::identity() {
  ConformalMapSpec m;
  m.family = Family::identity;
  m.alpha = 1.0;
  m.validity_radius = 0.0;
  return m;
}

ConformalMapSpec ConformalMapSpec::polynomial(std::complex<double> c) {
  ConformalMapSpec m;
  m.family = Family::polynomial;
  m.c = c;
  m.alpha = 1.0;
  // phi'(z) = 1 + 2 c z vanishes at |z| = 1/(2|c|); stay well inside.
  m.validity_radius = (std::abs(c) > 0.0) ? 0.45 / std::abs(c) : 0.0;
  return m;
}

ConformalMapSpec ConformalMapSpec::moebius(double alpha, std::complex<double> c) {
  if (!(alpha > 0.0)) throw std::invalid_argument("moebius map: alpha must be positive");
  ConformalMapSpec m;
  m.family = Family::moebius;
  m.c = c;
  m.alpha = alpha;
  // Pole at z = 1/c; keep a safety margin from it.
  m.validity_radius = (std::abs(c) > 0.0) ? 0.9 / std::abs(c) : 0.0;
  return m;
}

ConformalMapSpec ConformalMapSpec::conjugate_test() {
  ConformalMapSpec m;
  m.family = Family::conjugate_test;
  m.alpha = 1.0;
  m.validity_radius = 0.0;
  return m;
}

MapValue map_evaluate(const ConformalMapSpec& map, std::complex<double> z) {
  if (map.validity_radius > 0.0 && std::abs(z) > map.validity_radius)
    throw std::domain_error("map_evaluate: point outside the declared validity region");
  switch (map.family) {
    case ConformalMapSpec::Family::identity:
      return {z, {1.0, 0.0}};
    case ConformalMapSpec::Family::polynomial:
      return {z + map.c * z * z, 1.0 + 2.0 * map.c * z};
    case ConformalMapSpec::Family::moebius: {
      const std::complex<double> den = 1.0 - map.c * z;
      return {map.alpha * z / den, map.alpha / (den * den)};
    }
    case ConformalMapSpec::Family::conjugate_test:
      // Not holomorphic; the reported "derivative" is d(phi)/dx.
      return {std::conj(z), {1.0, 0.0}};
  }
  throw std::logic_error("map_evaluate: unknown family");
}

double conformality_residual(const ConformalMapSpec& map, const PolarGrid& grid) {
  double worst = 0.0;
  for (int i = 0; i < grid.nr(); ++i) {
    const double r = grid.radii[i];
    // Differencing step tied to the local angular resolution so the residual
    // of a genuinely holomorphic map decays as the grid is refined.
    const double h = 0.5 * r * grid.dt();
    for (int l = 0; l < grid.m(); ++l) {
      const double t = grid.angles[l];
      const std::complex<double> z(r * std::cos(t), r * std::sin(t));
      if (map.validity_radius > 0.0 && std::abs(z) + h > map.validity_radius) continue;
      const auto fxp = map_evaluate(map, z + std::complex<double>(h, 0.0)).image;
      const auto fxm = map_evaluate(map, z - std::complex<double>(h, 0.0)).image;
      const auto fyp = map_evaluate(map, z + std::complex<double>(0.0, h)).image;
      const auto fym = map_evaluate(map, z - std::complex<double>(0.0, h)).image;
      const std::complex<double> dx = (fxp - fxm) / (2.0 * h);
      const std::complex<double> dy = (fyp - fym) / (2.0 * h);
      // Cauchy-Riemann in complex form: d/dx + i d/dy annihilates holomorphic
      // maps; for conjugation it equals 2 identically.
      const double res = std::abs(dx + std::complex<double>(0.0, 1.0) * dy);
      worst = std::max(worst, res);
    }
  }
  return worst;
}

}  // namespace jlab
