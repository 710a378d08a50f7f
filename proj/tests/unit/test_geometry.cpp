#include <cmath>
#include <complex>
#include <stdexcept>

#include "doctest.h"
#include "jlab/geometry.hpp"

TEST_CASE("build_polar_grid places log-spaced radii with exact endpoints") {
  const auto g = jlab::build_polar_grid(1.0, 0.01, 3, 9);
  REQUIRE(g.nr() == 3);
  CHECK(g.radii[0] == 0.01);
  CHECK(g.radii[1] == doctest::Approx(0.1).epsilon(1e-14));
  CHECK(g.radii[2] == 1.0);

  const auto g2 = jlab::build_polar_grid(2.0, 1e-5, 200, 65);
  CHECK(g2.radii.front() == 1e-5);
  CHECK(g2.radii.back() == 2.0);
}

TEST_CASE("build_polar_grid keeps the log spacing uniform") {
  const auto g = jlab::build_polar_grid(1.5, 3e-4, 257, 129);
  const double ds = g.ds();
  for (int i = 0; i + 1 < g.nr(); ++i)
    CHECK(std::log(g.radii[i + 1] / g.radii[i]) == doctest::Approx(ds).epsilon(1e-12));
}

TEST_CASE("build_polar_grid validates its inputs") {
  CHECK_THROWS_AS((void)jlab::build_polar_grid(1.0, 0.01, 2, 9), std::invalid_argument);
  CHECK_THROWS_AS((void)jlab::build_polar_grid(1.0, 0.01, 3, 8), std::invalid_argument);
  CHECK_THROWS_AS((void)jlab::build_polar_grid(1.0, 1.0, 16, 17), std::invalid_argument);
  CHECK_THROWS_AS((void)jlab::build_polar_grid(-1.0, 0.01, 16, 17), std::invalid_argument);
}

TEST_CASE("grid weights are positive and reproduce interval lengths") {
  const auto g = jlab::build_polar_grid(1.0, 1e-4, 65, 33);
  double rsum = 0.0;
  for (double w : g.radial_weights) {
    CHECK(w > 0.0);
    rsum += w;
  }
  CHECK(rsum == doctest::Approx(g.R - g.epsilon).epsilon(1e-13));

  double tsum = 0.0;
  for (double w : g.angular_weights) {
    CHECK(w > 0.0);
    tsum += w;
  }
  CHECK(tsum == doctest::Approx(M_PI).epsilon(1e-14));
}

TEST_CASE("angular weights integrate the first eigenfunction's square exactly") {
  // cos^2(t/2) = (1 + cos t)/2 and the trapezoid rule kills cos t on [0, pi],
  // so the quadrature value is exactly pi/2 up to round-off.
  const auto g = jlab::build_polar_grid(1.0, 1e-3, 9, 257);
  double acc = 0.0;
  for (int l = 0; l < g.m(); ++l) {
    const double c = std::cos(0.5 * g.angles[l]);
    acc += g.angular_weights[l] * c * c;
  }
  CHECK(acc == doctest::Approx(M_PI / 2.0).epsilon(1e-14));
}

TEST_CASE("map_evaluate reproduces the closed-form examples") {
  using cplx = std::complex<double>;
  const auto ident = jlab::ConformalMapSpec::identity();
  const auto v = jlab::map_evaluate(ident, cplx(0.3, 0.4));
  CHECK(v.image == cplx(0.3, 0.4));
  CHECK(v.derivative == cplx(1.0, 0.0));

  const auto poly = jlab::ConformalMapSpec::polynomial(cplx(0.1, 0.0));
  const auto p0 = jlab::map_evaluate(poly, cplx(0.0, 0.0));
  CHECK(std::abs(p0.image) == 0.0);
  CHECK(p0.derivative == cplx(1.0, 0.0));
  const auto p1 = jlab::map_evaluate(poly, cplx(1.0, 0.0));
  CHECK(p1.image.real() == doctest::Approx(1.1).epsilon(1e-15));
  CHECK(p1.derivative.real() == doctest::Approx(1.2).epsilon(1e-15));

  const auto moeb = jlab::ConformalMapSpec::moebius(2.0, cplx(0.5, 0.0));
  const auto m0 = jlab::map_evaluate(moeb, cplx(0.0, 0.0));
  CHECK(std::abs(m0.image) == 0.0);
  CHECK(m0.derivative == cplx(2.0, 0.0));
}

TEST_CASE("map_evaluate rejects points outside the validity region") {
  const auto poly = jlab::ConformalMapSpec::polynomial({1.0, 0.0});
  CHECK_THROWS_AS((void)jlab::map_evaluate(poly, {0.5, 0.0}), std::domain_error);
  CHECK_THROWS_AS((void)jlab::ConformalMapSpec::moebius(0.0, {0.1, 0.0}), std::invalid_argument);
}

TEST_CASE("conformality residual separates holomorphic maps from conjugation") {
  const auto coarse = jlab::build_polar_grid(1.0, 0.01, 9, 33);
  const auto fine = jlab::build_polar_grid(1.0, 0.01, 9, 65);

  CHECK(jlab::conformality_residual(jlab::ConformalMapSpec::identity(), coarse) < 1e-13);
  // z + c z^2 has vanishing third derivative, so the centered residual is
  // round-off even on the coarse grid.
  CHECK(jlab::conformality_residual(jlab::ConformalMapSpec::polynomial({0.1, 0.0}), coarse) <
        1e-11);

  // The Moebius family has nonzero f''', giving a clean O(h^2) decay.
  const auto moeb = jlab::ConformalMapSpec::moebius(1.0, {0.3, 0.0});
  const double e1 = jlab::conformality_residual(moeb, coarse);
  const double e2 = jlab::conformality_residual(moeb, fine);
  CHECK(e1 > 0.0);
  const double ratio = e1 / e2;
  CHECK(ratio > 2.5);
  CHECK(ratio < 6.5);

  // Conjugation fails Cauchy-Riemann with residual exactly 2.
  const double conj = jlab::conformality_residual(jlab::ConformalMapSpec::conjugate_test(), coarse);
  CHECK(conj == doctest::Approx(2.0).epsilon(1e-14));
}
