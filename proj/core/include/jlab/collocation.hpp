// Independent dense discretization of the half-disk problem, assembled on
// nodal values without the mode split: spectral in angle (full basis, one
// mode per free node), second order in log r.  Serves as a cross-check
// oracle for the modal solver at moderate resolution; the flat edge carries
// the homogeneous Neumann condition (q = 0).
#pragma once

#include <functional>

#include "jlab/field.hpp"
#include "jlab/geometry.hpp"
#include "jlab/solver.hpp"

namespace jlab {

// Solve Delta w + p w + f = 0 with w = arc data on r = R.  Either function
// may be empty.  The returned field carries k_max = M - 1 modes.
ScalarField collocation_solve(const PolarGrid& grid,
                              const std::function<double(double, double)>& p,
                              const std::function<double(double, double)>& f,
                              const ArcData& arc);

}  // namespace jlab
