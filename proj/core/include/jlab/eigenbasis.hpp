// Angular eigenpairs of the mixed Neumann(t=0)/Dirichlet(t=pi) problem on
// [0, pi]: lambda_k = (2k-1)^2/4 with eigenfunction psi_k(t) = cos((2k-1)t/2),
// and the homogeneous half-disk profiles F_k(r,t) = r^{(2k-1)/2} psi_k(t).
#pragma once

#include <utility>
#include <vector>

namespace jlab {

struct ScalarField;

// k is the 1-based mode index throughout.
double lambda_k(int k);
double gamma_k(int k);  // homogeneity degree (2k-1)/2
double psi_eval(int k, double t);
double F_eval(int k, double r, double t);

// Coefficients of a least-squares projection onto span{F_1 .. F_{k_max}}
// over the half-disk of radius r.
struct ModeCoefficients {
  int k_max = 0;
  std::vector<double> a;
  double r = 0.0;
};

// phi_k(r) = (2/pi) * integral of w(r,t) psi_k(t) dt, by angular quadrature
// on the field's grid (log-linear interpolation between radial nodes).
double angular_project(const ScalarField& field, double r, int k);

// H(r) two ways: direct angular quadrature of w^2 and the mode series
// (pi/2) * sum phi_k^2 truncated at k_max.
std::pair<double, double> parseval_H(const ScalarField& field, double r, int k_max);

// L^2(B_r^+) projection onto span{F_1..F_k}; the profiles are orthogonal
// there, so each coefficient is an independent one-dimensional projection.
ModeCoefficients project_Sk(const ScalarField& field, double r, int k);

}  // namespace jlab
