#include "mode_calculus.hpp"

#include "jlab/eigenbasis.hpp"
#include "jlab/quadrature.hpp"

namespace jlab::detail {

std::vector<double> mode_s_derivatives(const ScalarField& field) {
  const int nr = field.grid.nr();
  const int k_max = field.k_max;
  const double ds = field.grid.ds();
  std::vector<double> out(static_cast<std::size_t>(nr) * k_max);
  std::vector<double> column(static_cast<std::size_t>(nr));
  for (int k = 1; k <= k_max; ++k) {
    for (int i = 0; i < nr; ++i) column[static_cast<std::size_t>(i)] = field.mode(i, k);
    for (int i = 0; i < nr; ++i)
      out[static_cast<std::size_t>(i) * k_max + (k - 1)] =
          deriv_uniform(column.data(), column.size(), static_cast<std::size_t>(i), ds);
  }
  return out;
}

std::vector<double> synthesize_ws_row(const ScalarField& field, const std::vector<double>& dmodes,
                                      int i) {
  const int m = field.grid.m();
  const int k_max = field.k_max;
  std::vector<double> row(static_cast<std::size_t>(m), 0.0);
  for (int k = 1; k <= k_max; ++k) {
    const double d = dmodes[static_cast<std::size_t>(i) * k_max + (k - 1)];
    if (d == 0.0) continue;
    for (int l = 0; l < m; ++l)
      row[static_cast<std::size_t>(l)] += d * psi_eval(k, field.grid.angles[static_cast<std::size_t>(l)]);
  }
  return row;
}

}  // namespace jlab::detail
