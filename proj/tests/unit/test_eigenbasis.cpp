#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "jlab/eigenbasis.hpp"
#include "jlab/field.hpp"
#include "jlab/geometry.hpp"

TEST_CASE("eigenvalues and homogeneities follow the half-integer ladder") {
  CHECK(jlab::lambda_k(1) == doctest::Approx(0.25).epsilon(1e-16));
  CHECK(jlab::lambda_k(2) == doctest::Approx(2.25).epsilon(1e-16));
  CHECK(jlab::lambda_k(3) == doctest::Approx(6.25).epsilon(1e-16));
  CHECK(jlab::gamma_k(1) == doctest::Approx(0.5));
  CHECK(jlab::gamma_k(2) == doctest::Approx(1.5));
  CHECK(jlab::gamma_k(3) == doctest::Approx(2.5));
  // The homogeneity solves the indicial equation gamma^2 = lambda.
  for (int k = 1; k <= 8; ++k)
    CHECK(jlab::gamma_k(k) * jlab::gamma_k(k) == doctest::Approx(jlab::lambda_k(k)));
  CHECK_THROWS_AS((void)jlab::lambda_k(0), std::invalid_argument);
}

TEST_CASE("eigenfunctions satisfy the mixed boundary conditions") {
  for (int k = 1; k <= 8; ++k) {
    CHECK(jlab::psi_eval(k, 0.0) == doctest::Approx(1.0));
    // Dirichlet end is an exact zero by construction.
    CHECK(jlab::psi_eval(k, M_PI) == 0.0);
  }
  CHECK(jlab::psi_eval(1, M_PI / 3.0) == doctest::Approx(std::cos(M_PI / 6.0)).epsilon(1e-15));
  CHECK(jlab::F_eval(1, 1.0, 0.0) == doctest::Approx(1.0));
  CHECK(jlab::F_eval(2, 0.25, 0.0) == doctest::Approx(0.125).epsilon(1e-15));
  CHECK_THROWS_AS((void)jlab::F_eval(1, -0.5, 0.0), std::domain_error);
}

TEST_CASE("discrete angular Gram matrix is diagonal with entry pi/2") {
  const auto grid = jlab::build_polar_grid(1.0, 1e-3, 9, 257);
  for (int j = 1; j <= 12; ++j) {
    for (int k = j; k <= 12; ++k) {
      double acc = 0.0;
      for (int l = 0; l < grid.m(); ++l)
        acc += grid.angular_weights[l] * jlab::psi_eval(j, grid.angles[l]) *
               jlab::psi_eval(k, grid.angles[l]);
      const double expected = (j == k) ? M_PI / 2.0 : 0.0;
      CHECK(std::abs(acc - expected) < 1e-13);
    }
  }
}

TEST_CASE("field_from_function recovers single-mode profiles at the nodes") {
  const auto grid = jlab::build_polar_grid(1.0, 1e-3, 65, 129);
  const auto field = jlab::field_from_function(
      grid, [](double r, double t) { return jlab::F_eval(2, r, t); }, 4);
  for (int i = 0; i < grid.nr(); i += 7) {
    const double r = grid.radii[i];
    CHECK(field.mode(i, 2) == doctest::Approx(std::pow(r, 1.5)).epsilon(1e-12));
    CHECK(std::abs(field.mode(i, 1)) < 1e-13);
    CHECK(std::abs(field.mode(i, 3)) < 1e-13);
    CHECK(std::abs(field.mode(i, 4)) < 1e-13);
  }
  // Node lookups reproduce stored data exactly.
  CHECK(field.mode_at(grid.radii[5], 2) == field.mode(5, 2));
  CHECK(field.value_at(grid.radii[5], grid.angles[3]) == field.value(5, 3));
  CHECK(field.diagnostics.at("dirichlet_violation") < 1e-15);
}

TEST_CASE("field_from_function clamps and reports a Dirichlet violation") {
  const auto grid = jlab::build_polar_grid(1.0, 1e-2, 17, 33);
  const auto field = jlab::field_from_function(
      grid, [](double r, double t) { return std::cos(t) + jlab::F_eval(1, r, t); }, 2);
  CHECK(field.diagnostics.at("dirichlet_violation") == doctest::Approx(1.0).epsilon(1e-12));
  for (int i = 0; i < grid.nr(); ++i) CHECK(field.value(i, grid.m() - 1) == 0.0);
}

TEST_CASE("field_from_modes and angular_project are inverse on the grid") {
  const auto grid = jlab::build_polar_grid(1.0, 1e-3, 33, 129);
  const int k_max = 5;
  std::vector<double> modes(static_cast<std::size_t>(grid.nr()) * k_max);
  for (int i = 0; i < grid.nr(); ++i)
    for (int k = 1; k <= k_max; ++k)
      modes[static_cast<std::size_t>(i) * k_max + (k - 1)] =
          std::sin(0.7 * i + 1.3 * k);  // arbitrary smooth-ish data
  const auto field = jlab::field_from_modes(grid, modes, k_max);
  for (int i = 0; i < grid.nr(); i += 5) {
    const double r = grid.radii[i];
    for (int k = 1; k <= k_max; ++k)
      CHECK(jlab::angular_project(field, r, k) ==
            doctest::Approx(modes[static_cast<std::size_t>(i) * k_max + (k - 1)])
                .epsilon(1e-12));
  }
}

TEST_CASE("mode mixtures synthesize the exact closed form") {
  const auto grid = jlab::build_polar_grid(1.0, 1e-3, 33, 65);
  const auto field = jlab::mode_mixture_field(grid, {1.0, 0.5});
  const double r = grid.radii[10];
  const double t = grid.angles[7];
  const double expected = std::sqrt(r) * std::cos(0.5 * t) + 0.5 * std::pow(r, 1.5) * std::cos(1.5 * t);
  CHECK(field.value(10, 7) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(field.trace0(r) == doctest::Approx(std::sqrt(r) + 0.5 * std::pow(r, 1.5)).epsilon(1e-14));
  for (int i = 0; i < grid.nr(); ++i) CHECK(field.value(i, grid.m() - 1) == 0.0);
}

TEST_CASE("parseval_H matches the mixture closed form both ways") {
  const auto grid = jlab::build_polar_grid(1.0, 1e-3, 65, 257);
  const auto field = jlab::mode_mixture_field(grid, {1.0, 0.7});
  for (int i : {0, 20, 40, 64}) {
    const double r = grid.radii[i];
    const auto [direct, series] = jlab::parseval_H(field, r, 4);
    const double exact = 0.5 * M_PI * (r + 0.49 * r * r * r);
    CHECK(direct == doctest::Approx(exact).epsilon(1e-13));
    CHECK(series == doctest::Approx(exact).epsilon(1e-13));
  }
}

TEST_CASE("project_Sk recovers mixture coefficients including the inner tail") {
  // Large epsilon makes the below-epsilon continuation a visible fraction of
  // the projection integral, so this also validates the closed-form tail.
  const auto grid = jlab::build_polar_grid(1.0, 0.05, 257, 129);
  const auto field = jlab::mode_mixture_field(grid, {1.0, 0.5, 0.25});
  const auto proj = jlab::project_Sk(field, 1.0, 3);
  REQUIRE(proj.k_max == 3);
  CHECK(proj.a[0] == doctest::Approx(1.0).epsilon(5e-6));
  CHECK(proj.a[1] == doctest::Approx(0.5).epsilon(5e-6));
  CHECK(proj.a[2] == doctest::Approx(0.25).epsilon(5e-6));

  // Projection onto a smaller span ignores the orthogonal complement.
  const auto proj1 = jlab::project_Sk(field, 1.0, 1);
  CHECK(proj1.a[0] == doctest::Approx(1.0).epsilon(5e-6));

  // Interior radius, not necessarily a node.
  const auto proj_mid = jlab::project_Sk(field, 0.437, 2);
  CHECK(proj_mid.a[0] == doctest::Approx(1.0).epsilon(5e-5));
  CHECK(proj_mid.a[1] == doctest::Approx(0.5).epsilon(5e-5));

  CHECK_THROWS_AS((void)jlab::project_Sk(field, 0.01, 1), std::domain_error);
  CHECK_THROWS_AS((void)jlab::project_Sk(field, 0.5, 7), std::invalid_argument);
}
