// Small quadrature and differencing helpers shared across modules.
// All routines assume uniformly spaced samples.
#pragma once

#include <cstddef>
#include <vector>

namespace jlab {

// Trapezoid rule over n uniformly spaced samples with spacing h.
double trapezoid(const double* f, std::size_t n, double h);
double trapezoid(const std::vector<double>& f, double h);

// Composite Simpson rule. An odd interval count is closed with a 3/8 rule on
// the final three intervals, keeping the whole rule fourth order; one or two
// intervals fall back to trapezoid / plain Simpson.
double simpson(const double* f, std::size_t n, double h);
double simpson(const std::vector<double>& f, double h);

// Fourth-order first derivative of uniformly sampled data at index i
// (five-point stencils, one-sided near the ends).
double deriv_uniform(const double* f, std::size_t n, std::size_t i, double h);
double deriv_uniform(const std::vector<double>& f, std::size_t i, double h);

// Cumulative integral C[i] = int_{x_0}^{x_i} f dx on a uniform grid, fourth
// order: composite Simpson at even indices, a parabolic half-cell at odd ones.
std::vector<double> cumulative_simpson(const std::vector<double>& f, double h);

// Least-squares slope and intercept of y against x.
struct LineFit {
  double slope;
  double intercept;
  double rms_residual;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Median of a sample set (copies internally).
double median(std::vector<double> v);

}  // namespace jlab
