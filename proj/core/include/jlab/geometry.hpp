// Half-disk polar grids and the closed-form conformal map families used to
// transplant boundary problems between half-disks.
#pragma once

#include <complex>
#include <vector>

namespace jlab {

// Tensor grid on the half-disk: log-spaced radii on [epsilon, R], uniform
// angles on [0, pi]. t = 0 is the Neumann edge, t = pi the Dirichlet edge.
struct PolarGrid {
  double R = 1.0;
  double epsilon = 1e-4;
  std::vector<double> radii;            // strictly increasing, radii[0] = epsilon
  std::vector<double> angles;           // angles[0] = 0, angles[M-1] = pi
  std::vector<double> radial_weights;   // trapezoid weights in r
  std::vector<double> angular_weights;  // trapezoid weights in t, sum = pi

  int nr() const { return static_cast<int>(radii.size()); }
  int m() const { return static_cast<int>(angles.size()); }
  // Log-radial spacing: radii[i] = epsilon * exp(i * ds).
  double ds() const { return (radii.size() > 1) ? std::log(radii[1] / radii[0]) : 0.0; }
  double dt() const { return (angles.size() > 1) ? angles[1] - angles[0] : 0.0; }
};

// Radial nodes r_i = epsilon * (R/epsilon)^{i/(Nr-1)}. Requires Nr >= 3 and
// M >= 9 (odd M recommended so that t = pi/2 is a node).
PolarGrid build_polar_grid(double R, double epsilon, int Nr, int M);

// Closed-form conformal map families fixing the origin. The general Riemann
// map is out of reach numerically; these explicit families are enough to
// exercise the normalization |phi'(0)| = alpha and pullback checks.
struct ConformalMapSpec {
  enum class Family {
    identity,        // z
    polynomial,      // z + c z^2
    moebius,         // alpha z / (1 - c z)
    conjugate_test,  // complex conjugation; deliberately non-holomorphic fixture
  };

  Family family = Family::identity;
  std::complex<double> c{0.0, 0.0};
  double alpha = 1.0;            // |phi'(0)|
  double validity_radius = 0.0;  // 0 means unbounded

  static ConformalMapSpec identity();
  static ConformalMapSpec polynomial(std::complex<double> c);
  static ConformalMapSpec moebius(double alpha, std::complex<double> c);
  static ConformalMapSpec conjugate_test();
};

struct MapValue {
  std::complex<double> image;
  std::complex<double> derivative;
};

// phi(z) and phi'(z). Throws std::domain_error outside the validity region.
MapValue map_evaluate(const ConformalMapSpec& map, std::complex<double> z);

// Maximum Cauchy-Riemann residual |d(phi)/dx + i d(phi)/dy| of the centrally
// differenced map over grid nodes; zero for holomorphic maps up to O(h^2),
// exactly 2 for the conjugation fixture.
double conformality_residual(const ConformalMapSpec& map, const PolarGrid& grid);

}  // namespace jlab
