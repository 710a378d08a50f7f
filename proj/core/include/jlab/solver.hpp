// Modal Galerkin solver for the mixed boundary problem on the half-disk:
//   Delta w + p w = 0 in B_R^+,   w = 0 on the Dirichlet edge (t = pi),
//   normal derivative = q w on the Neumann edge (t = 0),  w = arc data on r = R.
// Expanding w = sum_k phi_k(r) psi_k(t) turns the problem into a coupled
// radial system; the radial direction is discretized in s = log r with an
// exponentially fitted second-order scheme that reproduces the homogeneous
// profiles r^{+-gamma_k} exactly.
#pragma once

#include <functional>
#include <vector>

#include "jlab/field.hpp"
#include "jlab/geometry.hpp"

namespace jlab {

// Interior coefficient p(r,t), flat-edge coefficient q(x), and sampled
// sup-norm bounds used by the validity-radius estimate.
struct CoefficientData {
  std::function<double(double, double)> p;
  std::function<double(double)> q;
  double p_sup = 0.0;
  double q_sup = 0.0;
  double qxq_sup = 0.0;  // sup |q(x) + x q'(x)|, sampled

  static CoefficientData zero();
  static CoefficientData constants(double p_value, double q_value);
  // Samples the sup norms on [0, R]; q' by central differences.
  static CoefficientData from_functions(std::function<double(double, double)> p,
                                        std::function<double(double)> q, double R);
};

// Dirichlet trace prescribed on the outer arc r = R; must vanish at t = pi.
struct ArcData {
  std::function<double(double)> g;

  static ArcData mode(int k);  // g = psi_k
  static ArcData from_function(std::function<double(double)> g);
  // ghat_k = (2/pi) int g psi_k dt by the grid's angular quadrature.
  std::vector<double> mode_coefficients(const PolarGrid& grid, int k_max) const;
};

// Largest R0 <= R with 4 p_norm R0^2 + pi q_norm R0 < 1 (strictly, via a
// 0.999 shrink); R itself when both norms vanish.
double valid_radius(double p_norm, double q_norm, double R);

// Solve the coupled problem. Reports the validity radius and a discrete
// Pohozaev residual in the field diagnostics; warns on stderr when the grid
// extends past the validity radius.
ScalarField solve_mixed_bvp(const CoefficientData& coeff, const ArcData& arc,
                            const PolarGrid& grid, int k_max);

// Same operator with fixed loads instead of reaction terms:
//   -Delta v = f in B_R^+,  normal derivative = g on t = 0,  v = arc on r = R.
ScalarField solve_forward(const std::function<double(double, double)>& f,
                          const std::function<double(double)>& g, const ArcData& arc,
                          const PolarGrid& grid, int k_max);

// Residuals of the two Pohozaev-type identities at the grid radius nearest r,
// each normalized by the largest participating term.
struct PohozaevResiduals {
  double r = 0.0;    // snapped sample radius
  double res1 = 0.0; // boundary-stretching identity
  double res2 = 0.0; // energy (divergence) identity
};
PohozaevResiduals pohozaev_residual(const ScalarField& field, const CoefficientData& coeff,
                                    double r);

}  // namespace jlab
