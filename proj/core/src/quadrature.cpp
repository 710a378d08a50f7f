#include "jlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jlab {

double trapezoid(const double* f, std::size_t n, double h) {
  if (n < 2) return 0.0;
  double sum = 0.5 * (f[0] + f[n - 1]);
  for (std::size_t i = 1; i + 1 < n; ++i) sum += f[i];
  return sum * h;
}

double trapezoid(const std::vector<double>& f, double h) {
  return trapezoid(f.data(), f.size(), h);
}

double simpson(const double* f, std::size_t n, double h) {
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * h * (f[0] + f[1]);
  if (n == 3) return h / 3.0 * (f[0] + 4.0 * f[1] + f[2]);
  const std::size_t intervals = n - 1;
  std::size_t simpson_end = n;  // one past the last sample used by pure Simpson
  double tail = 0.0;
  if (intervals % 2 != 0) {
    // 3/8 rule on the last three intervals keeps fourth-order accuracy.
    const double* g = f + (n - 4);
    tail = 3.0 * h / 8.0 * (g[0] + 3.0 * g[1] + 3.0 * g[2] + g[3]);
    simpson_end = n - 3;
  }
  double sum = 0.0;
  if (simpson_end >= 3) {
    sum = f[0] + f[simpson_end - 1];
    for (std::size_t i = 1; i + 1 < simpson_end; i += 2) sum += 4.0 * f[i];
    for (std::size_t i = 2; i + 1 < simpson_end; i += 2) sum += 2.0 * f[i];
    sum *= h / 3.0;
  }
  return sum + tail;
}

double simpson(const std::vector<double>& f, double h) {
  return simpson(f.data(), f.size(), h);
}

double deriv_uniform(const double* f, std::size_t n, std::size_t i, double h) {
  if (n < 5) throw std::invalid_argument("deriv_uniform needs at least 5 samples");
  if (i >= n) throw std::out_of_range("deriv_uniform index out of range");
  const double inv = 1.0 / (12.0 * h);
  if (i >= 2 && i + 2 < n)
    return (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) * inv;
  if (i == 0)
    return (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * inv;
  if (i == 1)
    return (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * inv;
  if (i == n - 2) {
    const double* g = f + (n - 5);
    return -(-3.0 * g[4] - 10.0 * g[3] + 18.0 * g[2] - 6.0 * g[1] + g[0]) * inv;
  }
  const double* g = f + (n - 5);
  return -(-25.0 * g[4] + 48.0 * g[3] - 36.0 * g[2] + 16.0 * g[1] - 3.0 * g[0]) * inv;
}

double deriv_uniform(const std::vector<double>& f, std::size_t i, double h) {
  return deriv_uniform(f.data(), f.size(), i, h);
}

std::vector<double> cumulative_simpson(const std::vector<double>& f, double h) {
  const std::size_t n = f.size();
  if (n < 3) throw std::invalid_argument("cumulative_simpson needs at least three samples");
  std::vector<double> c(n, 0.0);
  for (std::size_t i = 2; i < n; i += 2)
    c[i] = c[i - 2] + h * (f[i - 2] + 4.0 * f[i - 1] + f[i]) / 3.0;
  // Odd indices close the half cell with the parabola through the three
  // nearest samples.
  for (std::size_t i = 1; i < n; i += 2) {
    if (i + 1 < n)
      c[i] = c[i - 1] + h * (5.0 * f[i - 1] + 8.0 * f[i] - f[i + 1]) / 12.0;
    else
      c[i] = c[i - 1] + h * (-f[i - 2] + 8.0 * f[i - 1] + 5.0 * f[i]) / 12.0;
  }
  return c;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line needs two equal-length samples");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  if (det == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
  LineFit fit{};
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - fit.slope * x[i] - fit.intercept;
    ss += e * e;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace jlab
