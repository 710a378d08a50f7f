// Internal quadrature suite over [epsilon, r] shared by the Pohozaev checks
// and the frequency analytics.  All radial integrals run in s = log r with
// composite Simpson weights; the harmonic continuation of the field below
// epsilon supplies closed-form inner tails.  Not installed.
#pragma once

#include <vector>

#include "jlab/field.hpp"
#include "jlab/solver.hpp"

namespace jlab::detail {

struct RadialIntegrals {
  double grad2 = 0.0;  // int_{B_r} |grad w|^2, inner tail included
  double pw2 = 0.0;    // int_{B_r} p w^2
  double pwws = 0.0;   // int_{B_r} p w (z . grad w)
  double qw2 = 0.0;    // int_0^r q w^2(x,0) dx, inner tail included
  double qxw2 = 0.0;   // int_0^r (q + x q') w^2(x,0) dx, inner tail included
};

// Integrals up to the grid radius with index ir (>= 2); dmodes is the
// mode_s_derivatives table for the field.
RadialIntegrals radial_integrals(const ScalarField& field, const std::vector<double>& dmodes,
                                 const CoefficientData& coeff, int ir);

// Inner tails of the weight integrals used by the Hardy inequalities:
// int_{B_eps} w^2/|z|^2 and int_0^eps w^2(x,0)/x dx for the harmonic
// continuation below epsilon.
double hardy_interior_tail(const ScalarField& field);
double hardy_boundary_tail(const ScalarField& field);

}  // namespace jlab::detail
