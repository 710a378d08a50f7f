// Discrete scalar fields on a half-disk grid: nodal values w(r_i, t_l)
// together with the angular mode profiles phi_k(r_i) that most of the
// analysis consumes.  Both representations are kept in sync on creation.
#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "jlab/geometry.hpp"

namespace jlab {

struct ScalarField {
  enum class Provenance { closed_form, solved };

  PolarGrid grid;
  int k_max = 0;
  // Row-major nodal values, values[i * grid.m() + l] = w(r_i, t_l).
  std::vector<double> values;
  // Row-major mode profiles, modes[i * k_max + (k - 1)] = phi_k(r_i).
  std::vector<double> modes;
  Provenance provenance = Provenance::closed_form;
  std::map<std::string, double> diagnostics;

  double value(int i, int l) const { return values[static_cast<std::size_t>(i) * grid.m() + l]; }
  double mode(int i, int k) const {
    return modes[static_cast<std::size_t>(i) * k_max + (k - 1)];
  }

  // Log-linear interpolation in r; grid nodes are reproduced exactly.
  double mode_at(double r, int k) const;
  double value_at(double r, double t) const;
  // One interpolated angular row w(r, t_l), l = 0 .. m-1.
  std::vector<double> row_at(double r) const;
  // Flat-edge trace w(r, 0).
  double trace0(double r) const { return value_at(r, 0.0); }
};

// Sample w(r,t) at the grid nodes and compute mode profiles by angular
// quadrature.  The Dirichlet column t = pi is clamped to zero; the largest
// value clamped away is recorded in diagnostics["dirichlet_violation"].
ScalarField field_from_function(const PolarGrid& grid,
                                const std::function<double(double, double)>& w,
                                int k_max);

// Same construction from nodal values already laid out row-major (nr x m).
ScalarField field_from_values(const PolarGrid& grid, std::vector<double> values, int k_max);

// Build a field from given mode profiles (row-major, nr x k_max); nodal
// values are synthesized as sum_k phi_k(r_i) psi_k(t_l).
ScalarField field_from_modes(const PolarGrid& grid, std::vector<double> modes, int k_max);

// Exact homogeneous mixture sum_k a_k F_k with a = coeffs (1-based modes).
ScalarField mode_mixture_field(const PolarGrid& grid, const std::vector<double>& coeffs);

}  // namespace jlab
