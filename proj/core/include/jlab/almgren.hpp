// Frequency-function analytics on half-disk fields: the boundary mass H(r),
// the localized energy D(r), the Almgren quotient N = D/H and its limit, the
// nu1/nu2 derivative decomposition, growth-bound fits, and the two Hardy
// inequalities.
#pragma once

#include <utility>
#include <vector>

#include "jlab/field.hpp"
#include "jlab/solver.hpp"

namespace jlab {

struct FrequencyCurve {
  std::vector<double> radii;  // increasing grid radii
  std::vector<double> H;      // H(r) = (1/r) int_{S_r} w^2 ds = int w^2 dt
  std::vector<double> D;      // int_{B_r}|grad w|^2 - int p w^2 - int_0^r q w^2
  std::vector<double> N;      // D/H
  double R0 = 0.0;            // validity radius
  double epsilon = 0.0;       // grid excision radius
};

struct NuDiagnostics {
  std::vector<double> radii;
  std::vector<double> nu1;  // Cauchy-Schwarz excess term, nonnegative
  std::vector<double> nu2;  // coefficient-driven term, vanishes for p=q=0
};

struct GammaExtract {
  double gamma = 0.0;    // median of N over the trusted decade
  int k0 = 0;            // round(gamma + 1/2)
  double flatness = 0.0; // max |N - gamma| over the decade
  bool accepted = false; // |gamma - (2 k0 - 1)/2| < 0.05
};

struct GrowthBounds {
  double slope = 0.0;          // least-squares slope of log H vs log r
  double gap = 0.0;            // slope - 2 gamma
  bool upper_bound_ok = false; // H = O(r^{2 gamma}): slope >= 2 gamma - 0.01
  bool lower_bound_ok = false; // r^{2 gamma + sigma} = O(H): slope <= 2 gamma + sigma
  double sigma = 0.1;
};

// H(r) by angular quadrature of the (interpolated) trace row.
double compute_H(const ScalarField& field, double r);

// D(r) by log-radial Simpson quadrature with closed-form inner tails; the
// radius snaps to the nearest grid node.
double compute_D(const ScalarField& field, const CoefficientData& coeff, double r);

// Curve over the given radii (each snapped to a grid node, deduplicated);
// samples with H <= 0 are dropped.
FrequencyCurve frequency_curve(const ScalarField& field, const CoefficientData& coeff,
                               const std::vector<double>& radii);

// Grid radii suited to a frequency curve: every node in (margin*epsilon, r_max].
std::vector<double> default_curve_radii(const PolarGrid& grid, double r_max,
                                        double margin = 4.0);

// Max relative residual of the identity H'(r) = 2 D(r)/r, with H' computed
// in log r (fourth-order differencing); requires log-uniform radii.
double check_Hprime(const FrequencyCurve& curve);

// nu1/nu2 split of N'(r) at a single radius (snapped to a node).
std::pair<double, double> nu_split(const ScalarField& field, const CoefficientData& coeff,
                                   double r);
NuDiagnostics nu_diagnostics(const ScalarField& field, const CoefficientData& coeff,
                             const std::vector<double>& radii);

// The trusted decade [10 eps, min(100 eps, R0/2)] as index bounds into the
// curve radii; throws NumericalError when empty.
std::pair<int, int> trusted_decade(const FrequencyCurve& curve);

GammaExtract extract_gamma(const FrequencyCurve& curve);
GrowthBounds growth_bounds(const FrequencyCurve& curve, double gamma);

// Hardy inequalities over B_r^+: interior lhs = int |grad w|^2 versus
// rhs = (1/4) int w^2/|z|^2; boundary lhs = int_0^r w^2(x,0)/x dx versus
// rhs = pi int |grad w|^2.
std::pair<double, double> hardy_interior(const ScalarField& field, double r);
std::pair<double, double> hardy_boundary(const ScalarField& field, double r);

}  // namespace jlab
