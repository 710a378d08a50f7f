#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "jlab/quadrature.hpp"

namespace {

std::vector<double> sample(double (*f)(double), double a, double b, std::size_t n) {
  std::vector<double> v(n);
  const double h = (b - a) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) v[i] = f(a + static_cast<double>(i) * h);
  return v;
}

}  // namespace

TEST_CASE("trapezoid integrates linear data exactly") {
  std::vector<double> f{1.0, 3.0, 5.0, 7.0};
  CHECK(jlab::trapezoid(f, 0.5) == doctest::Approx(6.0).epsilon(1e-15));
}

TEST_CASE("trapezoid annihilates cosine harmonics on [0, pi]") {
  // The trapezoid rule with endpoint halving sums cos(m t) to zero exactly
  // for 0 < m < 2(M-1); this aliasing identity is what makes the discrete
  // angular Gram matrix diagonal.
  const std::size_t m_nodes = 17;
  const double h = M_PI / static_cast<double>(m_nodes - 1);
  for (int m = 1; m <= 8; ++m) {
    std::vector<double> f(m_nodes);
    for (std::size_t l = 0; l < m_nodes; ++l) f[l] = std::cos(m * static_cast<double>(l) * h);
    CHECK(std::abs(jlab::trapezoid(f, h)) < 1e-13);
  }
}

TEST_CASE("simpson is exact for cubics with even and odd interval counts") {
  auto cubic = [](double x) { return x * x * x - 2.0 * x; };
  for (std::size_t n : {5u, 6u, 9u, 12u}) {
    std::vector<double> f(n);
    const double h = 1.0 / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) f[i] = cubic(static_cast<double>(i) * h);
    // int_0^1 (x^3 - 2x) dx = 1/4 - 1 = -3/4.
    CHECK(jlab::simpson(f, h) == doctest::Approx(-0.75).epsilon(1e-14));
  }
}

TEST_CASE("simpson converges at fourth order on sin") {
  const double exact = 2.0;
  const double e1 = std::abs(jlab::simpson(sample(std::sin, 0.0, M_PI, 33), M_PI / 32.0) - exact);
  const double e2 = std::abs(jlab::simpson(sample(std::sin, 0.0, M_PI, 65), M_PI / 64.0) - exact);
  CHECK(e1 / e2 > 12.0);
  CHECK(e1 / e2 < 20.0);
}

TEST_CASE("deriv_uniform is fourth order including the one-sided ends") {
  auto check_at = [](std::size_t n) {
    const double h = 1.0 / static_cast<double>(n - 1);
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = std::sin(static_cast<double>(i) * h);
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = jlab::deriv_uniform(f, i, h);
      worst = std::max(worst, std::abs(d - std::cos(static_cast<double>(i) * h)));
    }
    return worst;
  };
  const double e1 = check_at(65);
  const double e2 = check_at(129);
  CHECK(e1 / e2 > 10.0);
  CHECK(e1 / e2 < 26.0);
  CHECK(e2 < 1e-8);
}

TEST_CASE("deriv_uniform rejects stencils that do not fit") {
  std::vector<double> f{1.0, 2.0, 3.0, 4.0};
  CHECK_THROWS_AS((void)jlab::deriv_uniform(f, 0, 0.1), std::invalid_argument);
}

TEST_CASE("cumulative_simpson is exact on quadratics and fourth order on exp") {
  // Quadratic data: both the Simpson backbone and the parabolic half cells
  // integrate it exactly.
  {
    const std::size_t n = 11;
    const double h = 0.3;
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = h * static_cast<double>(i);
      f[i] = 3.0 * x * x - 2.0 * x + 1.0;
    }
    const std::vector<double> c = jlab::cumulative_simpson(f, h);
    for (std::size_t i = 0; i < n; ++i) {
      const double x = h * static_cast<double>(i);
      CHECK(c[i] == doctest::Approx(x * x * x - x * x + x).epsilon(1e-13));
    }
  }
  // Fourth-order decay of the worst pointwise error on e^x over [0, 2].
  auto worst = [](std::size_t n) {
    const double h = 2.0 / static_cast<double>(n - 1);
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) f[i] = std::exp(h * static_cast<double>(i));
    const std::vector<double> c = jlab::cumulative_simpson(f, h);
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      e = std::max(e, std::abs(c[i] - (std::exp(h * static_cast<double>(i)) - 1.0)));
    return e;
  };
  const double ratio = worst(41) / worst(81);
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
  CHECK_THROWS_AS((void)jlab::cumulative_simpson({1.0, 2.0}, 0.1), std::invalid_argument);
}

TEST_CASE("fit_line recovers an exact affine relation") {
  std::vector<double> x{0.0, 1.0, 2.0, 3.0, 4.0};
  std::vector<double> y;
  for (double xi : x) y.push_back(3.0 * xi - 2.0);
  const auto fit = jlab::fit_line(x, y);
  CHECK(fit.slope == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(fit.intercept == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(fit.rms_residual < 1e-13);
}

TEST_CASE("median handles odd and even sample counts") {
  CHECK(jlab::median({3.0, 1.0, 2.0}) == doctest::Approx(2.0));
  CHECK(jlab::median({4.0, 1.0, 3.0, 2.0}) == doctest::Approx(2.5));
}
