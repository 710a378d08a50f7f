#include "jlab/collocation.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "jlab/eigenbasis.hpp"
#include "jlab/errors.hpp"

namespace jlab {

ScalarField collocation_solve(const PolarGrid& grid,
                              const std::function<double(double, double)>& p,
                              const std::function<double(double, double)>& f,
                              const ArcData& arc) {
  const int nr = grid.nr();
  const int m = grid.m();
  const int kf = m - 1;  // full angular spectrum: one mode per free node
  const double ds = grid.ds();
  const double inv_ds2 = 1.0 / (ds * ds);
  const int n = nr * m;
  if (n > 5000)
    throw ConfigError("collocation oracle is dense; use a grid with Nr*M <= 5000");

  // Angular synthesis/analysis pair: Psi[l][k] = psi_k(t_l) and
  // A[k][l] = (2/pi) omega_l psi_k(t_l); A Psi = I on the full spectrum.
  Eigen::MatrixXd Psi(m, kf), Ana(kf, m);
  for (int l = 0; l < m; ++l)
    for (int k = 1; k <= kf; ++k) {
      Psi(l, k - 1) = psi_eval(k, grid.angles[static_cast<std::size_t>(l)]);
      Ana(k - 1, l) = 2.0 / M_PI * grid.angular_weights[static_cast<std::size_t>(l)] * Psi(l, k - 1);
    }
  Eigen::VectorXd fit_sq(kf), fit_robin(kf);
  for (int k = 1; k <= kf; ++k) {
    const double x = gamma_k(k) * ds;
    fit_sq(k - 1) = 2.0 * (std::cosh(x) - 1.0) * inv_ds2;
    fit_robin(k - 1) = std::sinh(x) / ds;
  }
  // Angular operator and inner Dirichlet-to-Neumann closure in nodal form.
  const Eigen::MatrixXd B = Psi * fit_sq.asDiagonal() * Ana;
  const Eigen::MatrixXd C = Psi * (2.0 / ds * fit_robin).asDiagonal() * Ana;

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  const auto idx = [m](int i, int l) { return i * m + l; };

  for (int i = 0; i < nr; ++i) {
    const double r = grid.radii[static_cast<std::size_t>(i)];
    if (i == nr - 1) {
      for (int l = 0; l < m; ++l) {
        A(idx(i, l), idx(i, l)) = 1.0;
        rhs(idx(i, l)) = (l == m - 1) ? 0.0 : arc.g(grid.angles[static_cast<std::size_t>(l)]);
      }
      continue;
    }
    for (int l = 0; l < m; ++l) {
      if (l == m - 1) {  // Dirichlet edge row
        A(idx(i, l), idx(i, l)) = 1.0;
        continue;
      }
      if (i == 0) {
        A(idx(i, l), idx(i, l)) += 2.0 * inv_ds2;
        A(idx(i, l), idx(i + 1, l)) -= 2.0 * inv_ds2;
        for (int lp = 0; lp < m; ++lp) A(idx(i, l), idx(i, lp)) += C(l, lp);
      } else {
        A(idx(i, l), idx(i - 1, l)) -= inv_ds2;
        A(idx(i, l), idx(i, l)) += 2.0 * inv_ds2;
        A(idx(i, l), idx(i + 1, l)) -= inv_ds2;
      }
      for (int lp = 0; lp < m; ++lp) A(idx(i, l), idx(i, lp)) += B(l, lp);
      const double t = grid.angles[static_cast<std::size_t>(l)];
      if (p) A(idx(i, l), idx(i, l)) -= r * r * p(r, t);
      if (f) rhs(idx(i, l)) = r * r * f(r, t);
    }
  }

  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const Eigen::VectorXd w = lu.solve(rhs);
  if (!w.allFinite()) throw NumericalError("collocation system produced non-finite values");

  std::vector<double> values(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) values[static_cast<std::size_t>(j)] = w(j);
  ScalarField field = field_from_values(grid, std::move(values), kf);
  field.provenance = ScalarField::Provenance::solved;
  return field;
}

}  // namespace jlab
