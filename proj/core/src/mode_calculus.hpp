// Internal helpers shared by the solver and frequency analytics: log-radial
// derivatives of mode profiles and nodal synthesis of the radial derivative.
// Not installed; include only from library sources.
#pragma once

#include <vector>

#include "jlab/field.hpp"

namespace jlab::detail {

// d(phi_k)/ds on the grid (s = log r), fourth-order differencing, laid out
// like ScalarField::modes.
std::vector<double> mode_s_derivatives(const ScalarField& field);

// Nodal values of w_s = r w_r at radius index i, synthesized from the mode
// derivative table.
std::vector<double> synthesize_ws_row(const ScalarField& field, const std::vector<double>& dmodes,
                                      int i);

}  // namespace jlab::detail
