#include "jlab/solver.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <utility>

#include "jlab/eigenbasis.hpp"
#include "jlab/errors.hpp"
#include "jlab/quadrature.hpp"
#include "mode_calculus.hpp"
#include "radial_integrals.hpp"

namespace jlab {

namespace {

// ---------------------------------------------------------------------------
// coefficient / arc plumbing
// ---------------------------------------------------------------------------

double sample_sup(const std::function<double(double)>& f, double a, double b, int n) {
  double worst = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = a + (b - a) * static_cast<double>(i) / n;
    const double v = f(x);
    if (!std::isfinite(v)) throw ConfigError("coefficient sample is not finite");
    worst = std::max(worst, std::abs(v));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// modal assembly
// ---------------------------------------------------------------------------

struct ModalProblem {
  const PolarGrid& grid;
  int k_max;
  const ArcData& arc;
  // Reaction coefficients (coupled problem); both null for forward solves.
  const CoefficientData* coeff = nullptr;
  // Fixed loads (forward problem).
  const std::function<double(double, double)>* f = nullptr;
  const std::function<double(double)>* g_n = nullptr;
};

ScalarField solve_modal(const ModalProblem& prob) {
  const PolarGrid& g = prob.grid;
  const int nr = g.nr();
  const int m = g.m();
  const int K = prob.k_max;
  if (K < 1) throw ConfigError("solver requires at least one angular mode");
  const double ds = g.ds();
  const double inv_ds2 = 1.0 / (ds * ds);

  // psi_k(t_l) table and fitted radial coefficients. The fitted diagonal
  // 2(cosh(gamma ds)-1)/ds^2 replaces gamma^2 so that both homogeneous
  // branches e^{+-gamma s} are in the kernel of the interior stencil.
  std::vector<double> psi(static_cast<std::size_t>(K) * m);
  for (int k = 1; k <= K; ++k)
    for (int l = 0; l < m; ++l)
      psi[static_cast<std::size_t>(k - 1) * m + l] = psi_eval(k, g.angles[static_cast<std::size_t>(l)]);
  std::vector<double> fitted_sq(static_cast<std::size_t>(K));
  std::vector<double> fitted_robin(static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k) {
    const double x = gamma_k(k) * ds;
    fitted_sq[static_cast<std::size_t>(k - 1)] = 2.0 * (std::cosh(x) - 1.0) * inv_ds2;
    fitted_robin[static_cast<std::size_t>(k - 1)] = std::sinh(x) / ds;
  }

  const auto idx = [K](int i, int k) { return i * K + (k - 1); };
  const int n_unknowns = nr * K;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(n_unknowns) * (prob.coeff ? K + 2 : 3));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n_unknowns);

  std::vector<double> p_row(static_cast<std::size_t>(m));
  std::vector<double> f_row(static_cast<std::size_t>(m));

  for (int i = 0; i < nr; ++i) {
    const double r = g.radii[static_cast<std::size_t>(i)];

    if (i == nr - 1) {
      // Outer Dirichlet closure phi_k(R) = ghat_k.
      const std::vector<double> ghat = prob.arc.mode_coefficients(g, K);
      for (int k = 1; k <= K; ++k) {
        trip.emplace_back(idx(i, k), idx(i, k), 1.0);
        rhs[idx(i, k)] = ghat[static_cast<std::size_t>(k - 1)];
      }
      continue;
    }

    // Radial stencil rows. At i = 0 the ghost node is eliminated with the
    // discrete Dirichlet-to-Neumann weight sinh(gamma ds)/ds, which keeps the
    // decaying branch r^{gamma_k} exact and suppresses r^{-gamma_k}.
    for (int k = 1; k <= K; ++k) {
      const double diag_fit = fitted_sq[static_cast<std::size_t>(k - 1)];
      if (i == 0) {
        trip.emplace_back(idx(i, k), idx(i, k),
                          2.0 * inv_ds2 + 2.0 * fitted_robin[static_cast<std::size_t>(k - 1)] / ds +
                              diag_fit);
        trip.emplace_back(idx(i, k), idx(i + 1, k), -2.0 * inv_ds2);
      } else {
        trip.emplace_back(idx(i, k), idx(i - 1, k), -inv_ds2);
        trip.emplace_back(idx(i, k), idx(i, k), 2.0 * inv_ds2 + diag_fit);
        trip.emplace_back(idx(i, k), idx(i + 1, k), -inv_ds2);
      }
    }

    if (prob.coeff) {
      // Reaction coupling: the q term couples every mode pair through the
      // trace w(r,0) = sum_m phi_m (psi_m(0) = 1); the p term through the
      // per-radius angular quadrature P_km = int p psi_k psi_m dt.
      const double qr = prob.coeff->q ? prob.coeff->q(r) : 0.0;
      const bool has_p = static_cast<bool>(prob.coeff->p);
      if (has_p)
        for (int l = 0; l < m; ++l)
          p_row[static_cast<std::size_t>(l)] = prob.coeff->p(r, g.angles[static_cast<std::size_t>(l)]);
      for (int k = 1; k <= K; ++k) {
        for (int mm = 1; mm <= K; ++mm) {
          double entry = 2.0 / M_PI * r * qr;
          if (has_p) {
            double pkm = 0.0;
            for (int l = 0; l < m; ++l)
              pkm += g.angular_weights[static_cast<std::size_t>(l)] * p_row[static_cast<std::size_t>(l)] *
                     psi[static_cast<std::size_t>(k - 1) * m + l] *
                     psi[static_cast<std::size_t>(mm - 1) * m + l];
            entry += 2.0 / M_PI * r * r * pkm;
          }
          if (entry != 0.0) trip.emplace_back(idx(i, k), idx(i, mm), -entry);
        }
      }
    }

    if (prob.f || prob.g_n) {
      // Fixed loads: r^2 zeta_k = (2/pi)[r g(r) + r^2 int f psi_k dt].
      const double gr = prob.g_n ? (*prob.g_n)(r) : 0.0;
      if (prob.f)
        for (int l = 0; l < m; ++l)
          f_row[static_cast<std::size_t>(l)] = (*prob.f)(r, g.angles[static_cast<std::size_t>(l)]);
      for (int k = 1; k <= K; ++k) {
        double load = 2.0 / M_PI * r * gr;
        if (prob.f) {
          double fk = 0.0;
          for (int l = 0; l < m; ++l)
            fk += g.angular_weights[static_cast<std::size_t>(l)] * f_row[static_cast<std::size_t>(l)] *
                  psi[static_cast<std::size_t>(k - 1) * m + l];
          load += 2.0 / M_PI * r * r * fk;
        }
        rhs[idx(i, k)] += load;
      }
    }
  }

  Eigen::SparseMatrix<double> A(n_unknowns, n_unknowns);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.analyzePattern(A);
  lu.factorize(A);
  if (lu.info() != Eigen::Success) {
    double norm = 0.0;
    for (int c = 0; c < A.outerSize(); ++c)
      for (Eigen::SparseMatrix<double>::InnerIterator it(A, c); it; ++it)
        norm = std::max(norm, std::abs(it.value()));
    throw NumericalError("mode system factorization failed (numerically singular; max entry " +
                         std::to_string(norm) + ")");
  }
  const Eigen::VectorXd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success) throw NumericalError("mode system back-substitution failed");

  std::vector<double> modes(static_cast<std::size_t>(n_unknowns));
  for (int i = 0; i < nr; ++i)
    for (int k = 1; k <= K; ++k)
      modes[static_cast<std::size_t>(idx(i, k))] = x[idx(i, k)];
  ScalarField field = field_from_modes(g, std::move(modes), K);
  field.provenance = ScalarField::Provenance::solved;
  return field;
}

}  // namespace

// ---------------------------------------------------------------------------
// CoefficientData / ArcData
// ---------------------------------------------------------------------------

CoefficientData CoefficientData::zero() { return {}; }

CoefficientData CoefficientData::constants(double p_value, double q_value) {
  CoefficientData c;
  if (p_value != 0.0) c.p = [p_value](double, double) { return p_value; };
  if (q_value != 0.0) c.q = [q_value](double) { return q_value; };
  c.p_sup = std::abs(p_value);
  c.q_sup = std::abs(q_value);
  c.qxq_sup = std::abs(q_value);
  return c;
}

CoefficientData CoefficientData::from_functions(std::function<double(double, double)> p,
                                                std::function<double(double)> q, double R) {
  if (!(R > 0.0)) throw ConfigError("from_functions requires R > 0");
  CoefficientData c;
  c.p = std::move(p);
  c.q = std::move(q);
  if (c.p) {
    const int n = 64;
    for (int i = 0; i <= n; ++i)
      c.p_sup = std::max(
          c.p_sup, sample_sup([&](double t) { return c.p(R * static_cast<double>(i) / n, t); }, 0.0,
                              M_PI, 64));
  }
  if (c.q) {
    c.q_sup = sample_sup(c.q, 0.0, R, 256);
    // sup |q + x q'| sampled away from the endpoints; central differences.
    const double h = 1e-5 * R;
    c.qxq_sup = sample_sup(
        [&](double x) {
          const double xm = std::max(x - h, 0.0);
          const double dq = (c.q(x + h) - c.q(xm)) / (x + h - xm);
          return c.q(x) + x * dq;
        },
        0.0, R * (1.0 - 1e-5), 256);
  }
  return c;
}

ArcData ArcData::mode(int k) {
  ArcData a;
  a.g = [k](double t) { return psi_eval(k, t); };
  return a;
}

ArcData ArcData::from_function(std::function<double(double)> g) {
  ArcData a;
  a.g = std::move(g);
  return a;
}

std::vector<double> ArcData::mode_coefficients(const PolarGrid& grid, int k_max) const {
  if (!g) throw ConfigError("arc data has no profile function");
  const int m = grid.m();
  std::vector<double> samples(static_cast<std::size_t>(m));
  double scale = 0.0;
  for (int l = 0; l < m; ++l) {
    samples[static_cast<std::size_t>(l)] = g(grid.angles[static_cast<std::size_t>(l)]);
    if (!std::isfinite(samples[static_cast<std::size_t>(l)]))
      throw ConfigError("arc data sample is not finite");
    scale = std::max(scale, std::abs(samples[static_cast<std::size_t>(l)]));
  }
  // Compatibility with the Dirichlet edge.
  if (std::abs(samples.back()) > 1e-9 * (1.0 + scale))
    throw ConfigError("arc data must vanish at t = pi");
  std::vector<double> ghat(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) {
    double acc = 0.0;
    for (int l = 0; l < m; ++l)
      acc += grid.angular_weights[static_cast<std::size_t>(l)] * samples[static_cast<std::size_t>(l)] *
             psi_eval(k, grid.angles[static_cast<std::size_t>(l)]);
    ghat[static_cast<std::size_t>(k - 1)] = 2.0 / M_PI * acc;
  }
  return ghat;
}

// ---------------------------------------------------------------------------
// validity radius
// ---------------------------------------------------------------------------

double valid_radius(double p_norm, double q_norm, double R) {
  if (p_norm < 0.0 || q_norm < 0.0) throw std::invalid_argument("valid_radius: negative norm");
  if (!(R > 0.0)) throw std::invalid_argument("valid_radius: R must be positive");
  if (p_norm == 0.0 && q_norm == 0.0) return R;
  double root;
  if (p_norm > 0.0) {
    const double piq = M_PI * q_norm;
    root = (-piq + std::sqrt(piq * piq + 16.0 * p_norm)) / (8.0 * p_norm);
  } else {
    root = 1.0 / (M_PI * q_norm);
  }
  return std::min(R, 0.999 * root);
}

// ---------------------------------------------------------------------------
// public solves
// ---------------------------------------------------------------------------

ScalarField solve_mixed_bvp(const CoefficientData& coeff, const ArcData& arc,
                            const PolarGrid& grid, int k_max) {
  const double r0 = valid_radius(coeff.p_sup, coeff.q_sup, grid.R);
  if (r0 < grid.R * (1.0 - 1e-12))
    std::fprintf(stderr,
                 "warning: grid radius %.6g exceeds the validity radius %.6g; "
                 "frequency analytics are reliable only below the latter\n",
                 grid.R, r0);

  ModalProblem prob{grid, k_max, arc};
  prob.coeff = &coeff;
  ScalarField field = solve_modal(prob);
  field.diagnostics["valid_radius"] = r0;

  // Discrete Pohozaev residual at half the validity radius as a built-in
  // sanity check on the solve.
  if (grid.nr() >= 8) {
    const double r_diag =
        std::clamp(0.5 * r0, grid.radii[4], grid.radii[static_cast<std::size_t>(grid.nr() - 2)]);
    const PohozaevResiduals res = pohozaev_residual(field, coeff, r_diag);
    field.diagnostics["pohozaev_r"] = res.r;
    field.diagnostics["pohozaev_res1"] = res.res1;
    field.diagnostics["pohozaev_res2"] = res.res2;
  }
  return field;
}

ScalarField solve_forward(const std::function<double(double, double)>& f,
                          const std::function<double(double)>& g, const ArcData& arc,
                          const PolarGrid& grid, int k_max) {
  ModalProblem prob{grid, k_max, arc};
  prob.f = f ? &f : nullptr;
  prob.g_n = g ? &g : nullptr;
  return solve_modal(prob);
}

// ---------------------------------------------------------------------------
// Pohozaev residuals
// ---------------------------------------------------------------------------

PohozaevResiduals pohozaev_residual(const ScalarField& field, const CoefficientData& coeff,
                                    double r) {
  const PolarGrid& g = field.grid;
  const int K = field.k_max;
  if (!(r > g.epsilon) || !(r <= g.R))
    throw std::domain_error("pohozaev_residual requires epsilon < r <= R");
  const double ds = g.ds();
  const int ir =
      std::min(static_cast<int>(std::lround(std::log(r / g.epsilon) / ds)), g.nr() - 1);
  if (ir < 2) throw std::domain_error("pohozaev_residual: radius too close to the inner closure");
  const double rs = g.radii[static_cast<std::size_t>(ir)];

  const std::vector<double> dmodes = detail::mode_s_derivatives(field);
  const auto dphi = [&](int i, int k) {
    return dmodes[static_cast<std::size_t>(i) * K + (k - 1)];
  };

  // Surface quantities at r = rs via Parseval: the angular integrals of w^2,
  // (r w_r)^2 and w * r w_r are (pi/2) sums over mode profiles.
  double sum_phi2 = 0.0, sum_dphi2 = 0.0, sum_phidphi = 0.0, sum_lam_phi2 = 0.0;
  double trace = 0.0;  // w(rs, 0) = sum phi_k
  for (int k = 1; k <= K; ++k) {
    const double ph = field.mode(ir, k);
    const double dp = dphi(ir, k);
    sum_phi2 += ph * ph;
    sum_dphi2 += dp * dp;
    sum_phidphi += ph * dp;
    sum_lam_phi2 += lambda_k(k) * ph * ph;
    trace += ph;
  }

  // Volume and flat-edge integrals on [epsilon, rs] with inner tails.
  const detail::RadialIntegrals vol = detail::radial_integrals(field, dmodes, coeff, ir);
  const double int_grad2 = vol.grad2;
  const double int_qw2 = vol.qw2;
  const double int_qxw2 = vol.qxw2;
  const double int_pw2 = vol.pw2;
  const double int_pwws = vol.pwws;

  const double q_at = coeff.q ? coeff.q(rs) : 0.0;

  // Identity 1 (boundary stretching):
  //   (r/2) int_{S_r} |grad w|^2 = r int_{S_r} w_r^2 - (1/2) int_0^r (q+xq')w^2
  //                                + (r/2) q(r) w(r,0)^2 + int_{B_r} p w (z . grad w).
  const double lhs1 = 0.25 * M_PI * (sum_dphi2 + sum_lam_phi2);
  const double t1 = 0.5 * M_PI * sum_dphi2;
  const double t2 = -0.5 * int_qxw2;
  const double t3 = 0.5 * rs * q_at * trace * trace;
  const double t4 = int_pwws;
  const double rhs1 = t1 + t2 + t3 + t4;
  const double scale1 = std::max({std::abs(lhs1), std::abs(t1), std::abs(t2), std::abs(t3),
                                  std::abs(t4), 1e-300});

  // Identity 2 (energy):
  //   int_{B_r} |grad w|^2 = int_{B_r} p w^2 + int_{S_r} w w_r ds + int_0^r q w^2.
  const double lhs2 = int_grad2;
  const double u1 = int_pw2;
  const double u2 = 0.5 * M_PI * sum_phidphi;
  const double u3 = int_qw2;
  const double rhs2 = u1 + u2 + u3;
  const double scale2 =
      std::max({std::abs(lhs2), std::abs(u1), std::abs(u2), std::abs(u3), 1e-300});

  PohozaevResiduals out;
  out.r = rs;
  out.res1 = std::abs(lhs1 - rhs1) / scale1;
  out.res2 = std::abs(lhs2 - rhs2) / scale2;
  return out;
}

}  // namespace jlab
