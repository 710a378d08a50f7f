// Junction expansion extraction: the vanishing order k0, the leading
// coefficient beta by two independent estimators, the ODE oracle for mode
// profiles, blow-up convergence samples, remainder and coefficient-decay
// rates, and the Hopf / unique-continuation diagnostics.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "jlab/field.hpp"
#include "jlab/solver.hpp"

namespace jlab {

// Leading-order description of the field at the junction point:
// w = beta * r^gamma psi_{k0} + O(r^{gamma + rho}).
struct JunctionExpansion {
  int k0 = 0;
  double gamma = 0.0;         // (2 k0 - 1)/2 when accepted, else the raw median
  double beta_formula = 0.0;  // representation-formula estimator
  double beta_trace = 0.0;    // trace-extrapolation estimator
  double remainder_exponent = 0.0;  // measured rho (slope - gamma); see diagnostics
  std::map<std::string, double> diagnostics;
};

// Rescaled angular trace w(tau cos t, tau sin t)/sqrt(H(tau)) and its sup
// distance to the signed limit profile +-sqrt(2/pi) psi_{k0}.
struct BlowupSample {
  double tau = 0.0;
  std::vector<double> trace;  // one value per grid angle
  double deviation = 0.0;
  int sign = 1;  // sign of the best-matching limit profile
};

struct RemainderRate {
  double slope = 0.0;            // fit of log sup_{B_r}|w - beta F_{k0}| vs log r
  bool exact_to_resolution = false;  // remainder below the round-off floor
};

struct DecayReport {
  int k0 = 0;
  std::vector<double> slopes;      // per-mode decay slope of |a_j(r)|, j = 1-based
  std::vector<bool> resolved;      // false when a_j sits at the noise floor
  double ak0_gap = 0.0;            // |a_{k0}(r_min) - beta|
  bool decay_ok = false;           // slopes >= gamma - gamma_j - 0.1 for j < k0
  bool identically_zero = false;   // every projection at the noise floor
  double l2_norm = 0.0;            // field norm backing the zero diagnostic
};

struct HopfReport {
  bool precondition_ok = false;  // field nonnegative within -1e-10 * scale
  bool passed = false;
  int k0 = 0;
  double min_trace = 0.0;    // min of the rescaled trace over t in [0, 3pi/4]
  double cone_liminf = 0.0;  // min over trusted radii of w(r,0)/sqrt(r)
  double min_value = 0.0;    // most negative nodal value (diagnostic)
};

// zeta_k(r) = (2/(pi r)) q(r) w(r,0) + (2/pi) int_0^pi p w psi_k dt, the
// inhomogeneity driving the mode ODE -phi_ss + lambda_k phi = r^2 zeta_k.
double zeta_eval(const ScalarField& field, const CoefficientData& coeff, int k, double r);

// Representation-formula estimator evaluated at R_eff (snapped to a node):
// beta = R^-gamma phi_{k0}(R) + (1/(2 gamma)) int_0^R (t^{1-gamma} -
// R^{-2 gamma} t^{gamma+1}) zeta_{k0}(t) dt.
double beta_formula(const ScalarField& field, const CoefficientData& coeff, double R_eff,
                    int k0);

// Trace estimator: extrapolate phi_{k0}(r) r^-gamma over the trusted window
// with a linear-in-r correction; throws NumericalError when the sequence
// does not settle.
double beta_trace_fit(const ScalarField& field, int k0);

// Variation-of-parameters reconstruction of phi_k from zeta samples on the
// grid radii, with the regular branch selected at the origin.  Returns the
// profile on radii[0..ie] where ie is the node nearest R_eff.
std::vector<double> phi_ode_oracle(const PolarGrid& grid, int k,
                                   const std::vector<double>& zeta_samples, double R_eff,
                                   double phi_at_R);

BlowupSample blowup_rescale(const ScalarField& field, double tau, int k0);

RemainderRate remainder_rate(const ScalarField& field, int k0, double beta);

DecayReport coefficient_decay(const ScalarField& field, int k0, double beta);

HopfReport hopf_check(const ScalarField& field);

// Full extraction pipeline on a solved field.
JunctionExpansion extract_expansion(const ScalarField& field, const CoefficientData& coeff,
                                    double R_eff);

}  // namespace jlab
