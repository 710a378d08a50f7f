#include "jlab/counterexample.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "jlab/errors.hpp"
#include "jlab/quadrature.hpp"

namespace jlab::cx {

namespace {

// ---------------------------------------------------------------------------
// Local helpers
// ---------------------------------------------------------------------------

// Map a Cartesian point to polar coordinates on the cut plane
// theta in (-pi/2, 3 pi/2); the cut is the negative x2-axis.
void to_cut_polar(double x1, double x2, double& r, double& theta) {
  r = std::hypot(x1, x2);
  if (r <= 0.0) throw std::domain_error("the origin lies on the branch cut");
  theta = std::atan2(x2, x1);
  if (theta < -0.5 * M_PI) theta += 2.0 * M_PI;
  if (theta == -0.5 * M_PI || theta == 1.5 * M_PI)
    throw std::domain_error("point on the negative x2-axis branch cut");
}

// (H1, H2) of the normalized gradient field for x1 <= 0 (the natural side):
// H_i = 2 [arctan(x2/x1) + pi/2] x_i / log(x1^2 + x2^2), with the bracket
// continued to x1 = 0 by its left limit (0 above the axis, pi below).
std::array<double, 2> h_pair_left(double x1, double x2) {
  const double L = std::log(x1 * x1 + x2 * x2);
  double bracket;
  if (x1 < 0.0)
    bracket = std::atan(x2 / x1) + 0.5 * M_PI;
  else
    bracket = (x2 > 0.0) ? 0.0 : M_PI;
  return {2.0 * bracket * x1 / L, 2.0 * bracket * x2 / L};
}

// H pair on the full punctured half-ball: reflected-combination extension
// 3 H(-x1, x2) - 2 H(-2 x1, x2) to the right of the x2-axis.
std::array<double, 2> h_pair(double x1, double x2) {
  if (x1 <= 0.0) return h_pair_left(x1, x2);
  const auto a = h_pair_left(-x1, x2);
  const auto b = h_pair_left(-2.0 * x1, x2);
  return {3.0 * a[0] - 2.0 * b[0], 3.0 * a[1] - 2.0 * b[1]};
}

// V without the domain guard, for trusted interior callers.
std::array<double, 2> v_raw(double x1, double x2) {
  if (x1 == 0.0 && x2 == 0.0) return {0.0, 0.0};
  const double L = std::log(x1 * x1 + x2 * x2);
  const auto h = h_pair(x1, x2);
  return {x2 + x2 / L + h[0], x1 + x1 / L - h[1]};
}

// Unit tangent estimates along a polyline by central differences of the
// points (one-sided at the ends); degenerate segments keep a zero tangent.
std::vector<std::array<double, 2>> secant_tangents(
    const std::vector<std::array<double, 2>>& pts) {
  const std::size_t n = pts.size();
  std::vector<std::array<double, 2>> t(n, {0.0, 0.0});
  if (n < 2) return t;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t a = (i == 0) ? 0 : i - 1;
    const std::size_t b = (i + 1 == n) ? n - 1 : i + 1;
    const double dx = pts[b][0] - pts[a][0];
    const double dy = pts[b][1] - pts[a][1];
    const double norm = std::hypot(dx, dy);
    if (norm > 0.0) t[i] = {dx / norm, dy / norm};
  }
  return t;
}

// One classical Runge-Kutta step of x' = V(x); returns false when any stage
// leaves the half-ball of radius 1/2 where V is defined.
bool rk4_step(std::array<double, 2>& x, double dt) {
  const auto inside = [](const std::array<double, 2>& p) {
    return p[0] * p[0] + p[1] * p[1] < 0.25;
  };
  if (!inside(x)) return false;
  const auto k1 = v_raw(x[0], x[1]);
  const std::array<double, 2> p2{x[0] + 0.5 * dt * k1[0], x[1] + 0.5 * dt * k1[1]};
  if (!inside(p2)) return false;
  const auto k2 = v_raw(p2[0], p2[1]);
  const std::array<double, 2> p3{x[0] + 0.5 * dt * k2[0], x[1] + 0.5 * dt * k2[1]};
  if (!inside(p3)) return false;
  const auto k3 = v_raw(p3[0], p3[1]);
  const std::array<double, 2> p4{x[0] + dt * k3[0], x[1] + dt * k3[1]};
  if (!inside(p4)) return false;
  const auto k4 = v_raw(p4[0], p4[1]);
  x[0] += dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
  x[1] += dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
  return inside(x);
}

// Forward trajectory classifier for the shooting refinement: the sign of the
// component along the unstable direction (1,1)/sqrt(2) once the trajectory
// has escaped past 3x the start distance (or at the last computed point).
double escape_side(std::array<double, 2> x, double dt, int n_steps, double d) {
  const double esc2 = 9.0 * d * d;
  for (int i = 0; i < n_steps; ++i) {
    if (!rk4_step(x, dt)) break;
    if (x[0] * x[0] + x[1] * x[1] > esc2) break;
  }
  return x[0] + x[1];
}

// Bisection for a root of `g` on [lo, hi] with g(lo) > 0 > g(hi); the
// bracket shrinks to machine resolution.
template <typename G>
double bisect(G&& g, double lo, double hi, const char* what) {
  double glo = g(lo);
  double ghi = g(hi);
  if (!(glo > 0.0) || !(ghi < 0.0))
    throw NumericalError(std::string(what) + ": failed to bracket the root");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (g(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Graph angle phi = arctan(h/x1) of the zero curve: root of
//   log(x1/cos(phi)) tan(c phi) + phi - offset = 0
// on (-pi/(2c), 0), where c = 2, offset = pi/2 for the corner domain and
// c = 3/2, offset = 2 pi/3 for the deformed one.  The residual tends to
// -offset at phi -> 0^- and to +infinity at the tangent pole, so the
// bracket always closes for x1 < cos(phi) (guaranteed by x1 < 0.1).
double graph_angle(double x1, double c, double offset) {
  if (!(x1 > 0.0) || !(x1 < 0.1))
    throw std::domain_error("graph ordinate requires 0 < x1 < 0.1");
  const auto g = [&](double phi) {
    return std::log(x1 / std::cos(phi)) * std::tan(c * phi) + phi - offset;
  };
  const double pole = -0.5 * M_PI / c;
  return bisect(g, pole + 1e-9, -1e-12, "graph_angle");
}

// Curvature-defect ratios (x1 h' - h) / (x1 / log^2 x1) with h' by central
// differencing of the graph ordinate at a 1e-4 relative step.
std::vector<RatioSample> ratio_table(const std::vector<double>& x1_list,
                                     double (*ordinate)(double)) {
  const double delta = 1e-4;
  std::vector<RatioSample> out;
  out.reserve(x1_list.size());
  for (double x1 : x1_list) {
    const double h = ordinate(x1);
    const double hp =
        (ordinate(x1 * (1.0 + delta)) - ordinate(x1 * (1.0 - delta))) /
        (2.0 * delta * x1);
    const double lg = std::log(x1);
    out.push_back({x1, (x1 * hp - h) / (x1 / (lg * lg))});
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// The harmonic function
// ---------------------------------------------------------------------------

double u_log(double r, double theta) {
  if (!(r > 0.0)) throw std::domain_error("u_log requires r > 0");
  if (!(theta > -0.5 * M_PI) || !(theta < 1.5 * M_PI))
    throw std::domain_error("u_log requires theta in (-pi/2, 3 pi/2)");
  return r * r *
         (std::log(r) * std::sin(2.0 * theta) +
          (theta - 0.5 * M_PI) * std::cos(2.0 * theta));
}

double u_log_xy(double x1, double x2) {
  // -iz = x2 - i x1 keeps the cut plane off the principal logarithm's cut,
  // so eta(-iz) is the plain complex log.
  if (x1 == 0.0 && x2 <= 0.0)
    throw std::domain_error("u_log_xy: point on the negative x2-axis cut");
  const std::complex<double> w(x2, -x1);
  const std::complex<double> eta = std::log(w);
  return -std::imag(std::exp(2.0 * eta) * eta);
}

std::array<double, 2> grad_u_log(double x1, double x2) {
  double r, theta;
  to_cut_polar(x1, x2, r, theta);
  const double L = std::log(r);
  const double v = theta - 0.5 * M_PI;
  const double s2 = std::sin(2.0 * theta);
  const double c2 = std::cos(2.0 * theta);
  // u_r and u_theta / r of r^2 [L sin(2t) + v cos(2t)].
  const double ur = r * (2.0 * L * s2 + 2.0 * v * c2 + s2);
  const double ut = r * (2.0 * L * c2 + c2 - 2.0 * v * s2);
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  return {ur * ct - ut * st, ur * st + ut * ct};
}

// ---------------------------------------------------------------------------
// The Dirichlet curve
// ---------------------------------------------------------------------------

double rho_plus(double theta) {
  if (!(theta > -0.5 * M_PI) || !(theta < 0.0))
    throw std::domain_error("rho_plus requires theta in (-pi/2, 0)");
  const double cot = std::cos(2.0 * theta) / std::sin(2.0 * theta);
  return std::exp(-(theta - 0.5 * M_PI) * cot);
}

CurveTrace gamma_plus_curve(double sigma, int n) {
  if (!(sigma > 0.0) || !(sigma < 0.5 * M_PI))
    throw std::invalid_argument("gamma_plus_curve requires sigma in (0, pi/2)");
  if (n < 2) throw std::invalid_argument("gamma_plus_curve needs n >= 2");

  CurveTrace trace;
  trace.points.reserve(static_cast<std::size_t>(n));
  trace.params.reserve(static_cast<std::size_t>(n));
  trace.tangents.reserve(static_cast<std::size_t>(n));
  // Uniform parameters in the open interval (-sigma, 0), approaching the
  // junction at the trailing end.
  for (int j = 0; j < n; ++j) {
    const double theta = -sigma * static_cast<double>(n - j) /
                         static_cast<double>(n + 1);
    const double rho = rho_plus(theta);
    const double s2 = std::sin(2.0 * theta);
    // rho' / rho = -cot(2t) + 2 (t - pi/2) / sin^2(2t).
    const double m = -std::cos(2.0 * theta) / s2 +
                     2.0 * (theta - 0.5 * M_PI) / (s2 * s2);
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    const double tx = rho * (m * ct - st);
    const double ty = rho * (m * st + ct);
    const double norm = std::hypot(tx, ty);
    trace.points.push_back({rho * ct, rho * st});
    trace.params.push_back(theta);
    trace.tangents.push_back({tx / norm, ty / norm});
  }
  return trace;
}

// ---------------------------------------------------------------------------
// The normalized gradient field
// ---------------------------------------------------------------------------

std::array<double, 2> v_field(double x1, double x2) {
  if (x1 * x1 + x2 * x2 >= 0.25)
    throw std::domain_error("v_field is defined on the open ball of radius 1/2");
  return v_raw(x1, x2);
}

std::array<std::array<double, 2>, 2> v_field_jacobian(double h) {
  if (!(h > 0.0) || !(h < 0.25))
    throw std::invalid_argument("v_field_jacobian requires 0 < h < 1/4");
  const auto vp1 = v_raw(h, 0.0);
  const auto vm1 = v_raw(-h, 0.0);
  const auto vp2 = v_raw(0.0, h);
  const auto vm2 = v_raw(0.0, -h);
  return {{{(vp1[0] - vm1[0]) / (2.0 * h), (vp2[0] - vm2[0]) / (2.0 * h)},
           {(vp1[1] - vm1[1]) / (2.0 * h), (vp2[1] - vm2[1]) / (2.0 * h)}}};
}

JacobianEstimate v_field_jacobian_limit() {
  // Difference quotients carry an O(1/log h) defect from the x/log|x|^2
  // terms; each entry is a smooth function of u = 1/log(h) near u = 0, so a
  // cubic least-squares fit in u extrapolated to u = 0 recovers the limit.
  const int n = 10;
  Eigen::MatrixXd vand(n, 4);
  Eigen::MatrixXd rhs(n, 4);
  for (int i = 0; i < n; ++i) {
    const double h = std::pow(10.0, -3.0 - static_cast<double>(i));
    const double u = 1.0 / std::log(h);
    vand(i, 0) = 1.0;
    vand(i, 1) = u;
    vand(i, 2) = u * u;
    vand(i, 3) = u * u * u;
    const auto J = v_field_jacobian(h);
    rhs(i, 0) = J[0][0];
    rhs(i, 1) = J[0][1];
    rhs(i, 2) = J[1][0];
    rhs(i, 3) = J[1][1];
  }
  const Eigen::MatrixXd coef = vand.colPivHouseholderQr().solve(rhs);

  JacobianEstimate est;
  est.matrix = {{{coef(0, 0), coef(0, 1)}, {coef(0, 2), coef(0, 3)}}};

  // Eigenpairs of the 2x2 limit by the closed form; the matrix is a small
  // perturbation of [[0,1],[1,0]], so the discriminant is safely positive.
  const double a = est.matrix[0][0];
  const double b = est.matrix[0][1];
  const double c = est.matrix[1][0];
  const double d = est.matrix[1][1];
  const double mean = 0.5 * (a + d);
  const double disc = std::sqrt(0.25 * (a - d) * (a - d) + b * c);
  est.eigenvalues = {mean + disc, mean - disc};
  for (int k = 0; k < 2; ++k) {
    const double lam = est.eigenvalues[static_cast<std::size_t>(k)];
    double vx, vy;
    if (std::abs(b) >= std::abs(c)) {
      vx = b;
      vy = lam - a;
    } else {
      vx = lam - d;
      vy = c;
    }
    const double norm = std::hypot(vx, vy);
    est.eigenvectors[static_cast<std::size_t>(k)] = {vx / norm, vy / norm};
  }
  return est;
}

CurveTrace flow_trace(std::array<double, 2> start, double step, int n_steps) {
  if (!(step > 0.0)) throw std::invalid_argument("flow_trace requires step > 0");
  if (n_steps < 1) throw std::invalid_argument("flow_trace requires n_steps >= 1");
  if (start[0] * start[0] + start[1] * start[1] >= 0.25)
    throw std::domain_error("flow_trace start outside the ball of radius 1/2");

  CurveTrace trace;
  trace.points.push_back(start);
  trace.params.push_back(0.0);
  std::array<double, 2> x = start;
  for (int i = 0; i < n_steps; ++i) {
    if (!rk4_step(x, step)) {
      trace.diverged = true;
      break;
    }
    trace.points.push_back(x);
    trace.params.push_back(static_cast<double>(i + 1) * step);
    if (x[0] * x[0] + x[1] * x[1] < 1e-26) break;  // collapsed onto the origin
  }
  // Off the stable manifold the flow escapes the origin but may still settle
  // at an interior equilibrium of the extended field, so non-approach is
  // flagged by the endpoint distances, not only by leaving the ball.
  const double r0 = std::hypot(start[0], start[1]);
  const double r1 = std::hypot(x[0], x[1]);
  if (r0 > 0.0 && r1 >= r0) trace.diverged = true;
  trace.tangents = secant_tangents(trace.points);
  return trace;
}

CurveTrace trace_gamma_minus(double start_distance, double step, int n_steps) {
  if (!(start_distance > 0.0) || !(start_distance < 0.4))
    throw std::invalid_argument("trace_gamma_minus requires 0 < distance < 0.4");
  if (!(step > 0.0) || n_steps < 10)
    throw std::invalid_argument("trace_gamma_minus needs a positive step and n_steps >= 10");

  const double d = start_distance;
  const double inv = 1.0 / std::sqrt(2.0);
  // Stable direction (-1,1)/sqrt(2) in the left half-plane; shooting offsets
  // run along the unstable direction (1,1)/sqrt(2).
  const auto start_at = [&](double xi) {
    return std::array<double, 2>{d * inv * (-1.0 + xi), d * inv * (1.0 + xi)};
  };
  const auto side = [&](double xi) {
    return escape_side(start_at(xi), step, n_steps, d);
  };
  // The unstable component grows exponentially, so its sign at escape is a
  // monotone classifier of the offset; bisect it to machine resolution.
  double lo = -0.2, hi = 0.2;
  if (!(side(lo) < 0.0) || !(side(hi) > 0.0))
    throw NumericalError("trace_gamma_minus: shooting bracket failed");
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (side(mid) > 0.0)
      hi = mid;
    else
      lo = mid;
  }

  CurveTrace trace = flow_trace(start_at(0.5 * (lo + hi)), step, n_steps);

  // Keep the approach phase only: past its closest approach the trajectory
  // escapes along the unstable manifold again.
  std::size_t best = 0;
  double best2 = trace.points[0][0] * trace.points[0][0] +
                 trace.points[0][1] * trace.points[0][1];
  for (std::size_t i = 1; i < trace.points.size(); ++i) {
    const double r2 = trace.points[i][0] * trace.points[i][0] +
                      trace.points[i][1] * trace.points[i][1];
    if (r2 < best2) {
      best2 = r2;
      best = i;
    }
  }
  trace.points.resize(best + 1);
  trace.params.resize(best + 1);
  trace.tangents = secant_tangents(trace.points);
  trace.diverged = std::sqrt(best2) > 0.01 * d;
  return trace;
}

// ---------------------------------------------------------------------------
// Graph ordinates and curvature-defect ratios
// ---------------------------------------------------------------------------

double identity_residual(double x1, double h) {
  const double phi = std::atan(h / x1);
  return 0.5 * std::log(x1 * x1 + h * h) * std::tan(2.0 * phi) + phi -
         0.5 * M_PI;
}

double identity2_residual(double x1, double h) {
  const double phi = std::atan(h / x1);
  return 0.5 * std::log(x1 * x1 + h * h) * std::tan(1.5 * phi) + phi -
         2.0 * M_PI / 3.0;
}

double h_plus(double x1) {
  return x1 * std::tan(graph_angle(x1, 2.0, 0.5 * M_PI));
}

double h_tilde_plus(double x1) {
  return x1 * std::tan(graph_angle(x1, 1.5, 2.0 * M_PI / 3.0));
}

std::vector<RatioSample> stima_ratio(const std::vector<double>& x1_list) {
  return ratio_table(x1_list, &h_plus);
}

std::vector<RatioSample> c1_deformation_ratio(const std::vector<double>& x1_list) {
  return ratio_table(x1_list, &h_tilde_plus);
}

// ---------------------------------------------------------------------------
// Arc energies, frequency, model selection
// ---------------------------------------------------------------------------

double H_arc(double r) {
  if (!(r > 0.0)) throw std::domain_error("H_arc requires r > 0");
  const double L = std::log(r);
  return r * r * r * r *
         ((3.0 * M_PI / 8.0) * L * L - (M_PI / 16.0) * L +
          3.0 * M_PI * M_PI * M_PI / 128.0 + M_PI / 64.0);
}

double D_sector(double r) {
  if (!(r > 0.0)) throw std::domain_error("D_sector requires r > 0");
  const double L = std::log(r);
  return r * r * r * r *
         ((3.0 * M_PI / 4.0) * (L * L + 0.5 * L + 0.125) +
          3.0 * M_PI * M_PI * M_PI / 64.0);
}

FrequencyCurve sector_frequency_curve(const std::vector<double>& radii) {
  if (radii.size() < 2)
    throw std::invalid_argument("sector_frequency_curve needs >= 2 radii");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1]))
      throw std::invalid_argument("sector_frequency_curve radii must increase");

  FrequencyCurve curve;
  curve.radii = radii;
  curve.epsilon = radii.front() / 10.0;
  curve.R0 = radii.back();
  curve.H.reserve(radii.size());
  curve.D.reserve(radii.size());
  curve.N.reserve(radii.size());
  for (double r : radii) {
    const double H = H_arc(r);
    const double D = D_sector(r);
    curve.H.push_back(H);
    curve.D.push_back(D);
    curve.N.push_back(D / H);
  }
  return curve;
}

LogModelReport log_model_fit(const std::vector<double>& radii,
                             const std::vector<double>& H) {
  if (radii.size() != H.size() || radii.size() < 8)
    throw std::invalid_argument("log_model_fit needs >= 8 paired samples");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || !(radii[i] < 1.0) || !(H[i] > 0.0))
      throw std::invalid_argument("log_model_fit needs 0 < r < 1 and H > 0");
  }
  const auto [lo, hi] = std::minmax_element(radii.begin(), radii.end());
  if (*hi / *lo < 100.0 * (1.0 - 1e-12))
    throw NumericalError("log_model_fit needs samples spanning two decades");

  std::vector<double> x(radii.size()), y(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    x[i] = std::log(radii[i]);
    y[i] = std::log(H[i]);
  }

  LogModelReport report;
  const LineFit power = fit_line(x, y);
  report.power_exponent = power.slope;
  report.power_amplitude = std::exp(power.intercept);
  report.power_rms = power.rms_residual;

  // The log model has the amplitude as its only free parameter:
  // log H - log(r^4 log^2 r) should be a constant.
  double mean = 0.0;
  std::vector<double> z(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    z[i] = y[i] - 4.0 * x[i] - 2.0 * std::log(std::abs(x[i]));
    mean += z[i];
  }
  mean /= static_cast<double>(z.size());
  double ss = 0.0;
  for (double v : z) ss += (v - mean) * (v - mean);
  report.log_amplitude = std::exp(mean);
  report.log_rms = std::sqrt(ss / static_cast<double>(z.size()));

  report.residual_ratio = report.power_rms / std::max(report.log_rms, 1e-300);
  report.prefers_log = report.log_rms < report.power_rms;
  return report;
}

}  // namespace jlab::cx
