// Closed-form reconstruction of the logarithmic boundary example: the
// harmonic function u = -Im(e^{2 eta(-iz)} eta(-iz)) with polar form
// u(r,theta) = r^2 [log(r) sin(2 theta) + (theta - pi/2) cos(2 theta)],
// the Dirichlet curve Gamma_+ on its zero set, the Neumann curve Gamma_-
// realized as a stable manifold of the normalized gradient flow, the
// curvature-defect ratios x1 h'(x1) - h(x1) over x1/log^2(x1), and the
// conformal C^1 deformation z -> r^{4/3} e^{i 4 theta/3}.
//
// Everything here is analytic; no PDE is solved on the corner domain.
#pragma once

#include <array>
#include <vector>

#include "jlab/almgren.hpp"

namespace jlab::cx {

// ---------------------------------------------------------------------------
// Curve containers
// ---------------------------------------------------------------------------

// Polyline trace of a boundary curve with its parameter values and unit
// tangent estimates (central differences of consecutive points).  Traces
// produced by the flow integrator set `diverged` when the trajectory leaves
// the half-ball of radius 1/2 or fails to approach the origin.
struct CurveTrace {
  std::vector<std::array<double, 2>> points;
  std::vector<double> params;
  std::vector<std::array<double, 2>> tangents;
  bool diverged = false;
};

// Differenced Jacobian of the V field at the origin, extrapolated to zero
// step, with its eigenpairs (eigenvalues descending, unit eigenvectors).
struct JacobianEstimate {
  std::array<std::array<double, 2>, 2> matrix{};  // [i][j] = dV_i / dx_j
  std::array<double, 2> eigenvalues{};
  std::array<std::array<double, 2>, 2> eigenvectors{};
};

struct RatioSample {
  double x1 = 0.0;
  double ratio = 0.0;  // (x1 h'(x1) - h(x1)) / (x1 / log^2 x1)
};

// Competition between H ~ c r^a and H ~ c r^4 log^2 r on arc samples of H.
// Residuals are root-mean-square misfits of log H; residual_ratio is the
// power-law rms over the log-model rms, so a ratio above one favors the
// logarithmic model.
struct LogModelReport {
  double power_exponent = 0.0;
  double power_amplitude = 0.0;
  double power_rms = 0.0;
  double log_amplitude = 0.0;
  double log_rms = 0.0;
  double residual_ratio = 0.0;
  bool prefers_log = false;
};

// ---------------------------------------------------------------------------
// The harmonic function and its zero curve
// ---------------------------------------------------------------------------

// u(r,theta) = r^2 [log(r) sin(2 theta) + (theta - pi/2) cos(2 theta)] for
// r > 0 and theta in (-pi/2, 3 pi/2), the plane cut along the negative
// x2-axis.  Throws std::domain_error off the cut plane.
double u_log(double r, double theta);

// The same function evaluated through the complex representation
// -Im(e^{2 eta(-iz)} eta(-iz)) with eta the principal logarithm; agrees
// with u_log to round-off and serves as an independent cross-check.
double u_log_xy(double x1, double x2);

// Cartesian gradient of u_log from the closed-form polar derivatives.
std::array<double, 2> grad_u_log(double x1, double x2);

// Radius rho(theta) = exp[-(theta - pi/2) cot(2 theta)] of the zero-set
// branch through the origin, smooth on theta in (-pi/2, 0); rho -> 0 as
// theta -> 0^-.  Throws std::domain_error outside that branch (the
// endpoints are cotangent poles).
double rho_plus(double theta);

// Gamma_+ sampled at n parameters theta in (-sigma, 0): points
// (rho cos(theta), rho sin(theta)) approaching the origin, with analytic
// tangents.  The graph property (x1 monotone in theta) holds for small
// sigma and is asserted by tests, not here.
CurveTrace gamma_plus_curve(double sigma, int n);

// ---------------------------------------------------------------------------
// The normalized gradient field and its stable manifold
// ---------------------------------------------------------------------------

// V = (V1, V2) with V1 = x2 + x2/L + H1 and V2 = x1 + x1/L - H2, where
// L = log(x1^2 + x2^2) and H_i = 2 [arctan(x2/x1) + pi/2] x_i / L for
// x1 < 0, extended to x1 > 0 by H_i(x1,x2) = 3 H_i(-x1,x2) - 2 H_i(-2x1,x2).
// On the left half-plane V = grad(u)/L, so trajectories are gradient flow
// lines of u.  V(0,0) = (0,0).  Throws std::domain_error outside B_{1/2}.
std::array<double, 2> v_field(double x1, double x2);

// Central-difference Jacobian of V at the origin with step h.  The field is
// C^1 with logarithmic modulus, so the raw quotient carries an O(1/log h)
// defect; use v_field_jacobian_limit for the limiting matrix.
std::array<std::array<double, 2>, 2> v_field_jacobian(double h);

// Difference quotients at steps 1e-3 .. 1e-12 extrapolated to zero step by
// a cubic fit in 1/log(h).  The limit matrix is [[0,1],[1,0]] with
// eigenpairs (+1, (1,1)/sqrt(2)) and (-1, (1,-1)/sqrt(2)).
JacobianEstimate v_field_jacobian_limit();

// Fixed-step fourth-order Runge-Kutta trajectory of x' = V(x) from `start`.
// Integration stops early when the trajectory leaves B_{1/2} (diverged) or
// collapses onto the origin.  params holds the time stamps.
CurveTrace flow_trace(std::array<double, 2> start, double step, int n_steps);

// Gamma_-: the stable-manifold branch through the origin in the left
// half-plane, tangent to (-1, 1)/sqrt(2).  The start point at the given
// distance is refined by bisecting the offset along the unstable direction
// until the forward trajectory collapses onto the origin; the returned
// trace is truncated at its closest approach.  diverged flags a failed
// refinement (trajectory never entered a small neighborhood of 0).
CurveTrace trace_gamma_minus(double start_distance, double step, int n_steps);

// ---------------------------------------------------------------------------
// Graph functions of the boundary curves and their curvature defects
// ---------------------------------------------------------------------------

// Implicit equation of Gamma_+ as a graph x2 = h(x1):
//   (1/2) log(x1^2 + h^2) tan(2 arctan(h/x1)) + arctan(h/x1) - pi/2.
double identity_residual(double x1, double h);

// Deformed version for F(z) = r^{4/3} e^{i 4 theta/3}: the tangent factor
// becomes 3/2 and the angular offset 2 pi/3.
double identity2_residual(double x1, double h);

// h_+(x1): the Gamma_+ ordinate solving identity_residual(x1, .) = 0,
// obtained by bisection in the angle arctan(h/x1).  Requires
// 0 < x1 < 0.1; the root is negative and o(x1) as x1 -> 0^+.
double h_plus(double x1);

// Deformed graph ordinate solving identity2_residual(x1, .) = 0.
double h_tilde_plus(double x1);

// For each x1: the ratio (x1 h_+'(x1) - h_+(x1)) / (x1 / log^2 x1), with
// h_+' by central differencing of h_plus.  The sequence decreases toward
// the limit -pi/4, witnessing h_+ outside C^2 at 0.
std::vector<RatioSample> stima_ratio(const std::vector<double>& x1_list);

// Same ratio for the deformed graph; the limit is -4 pi/9, witnessing a
// C^1 boundary that is not C^{1,delta}.
std::vector<RatioSample> c1_deformation_ratio(const std::vector<double>& x1_list);

// ---------------------------------------------------------------------------
// Arc energies and model selection
// ---------------------------------------------------------------------------

// H(r) = int_0^{3 pi/4} u^2(r,theta) dtheta for u_log, in closed form:
// r^4 [ (3 pi/8) L^2 - (pi/16) L + 3 pi^3/128 + pi/64 ], L = log r.
double H_arc(double r);

// Dirichlet energy of u_log over the sector {0 < theta < 3 pi/4} of radius
// r: |grad u|^2 = r^2 [(2 L + 1)^2 + 4 (theta - pi/2)^2] integrates to
// r^4 [ (3 pi/4) (L^2 + L/2 + 1/8) + 3 pi^3/64 ].
double D_sector(double r);

// Frequency curve N = D_sector / H_arc on the given radii; N drifts like
// 2 + 1/log r, so the plateau extraction must reject it.
FrequencyCurve sector_frequency_curve(const std::vector<double>& radii);

// Least-squares competition between H ~ c r^a and H ~ c r^4 log^2 r on
// samples spanning at least two decades.  Throws NumericalError on a
// narrower window and std::invalid_argument on malformed samples.
LogModelReport log_model_fit(const std::vector<double>& radii,
                             const std::vector<double>& H);

}  // namespace jlab::cx
