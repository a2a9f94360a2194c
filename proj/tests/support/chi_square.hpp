#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace symrl::testing {

// Regularized lower incomplete gamma P(a, x): series for x < a + 1,
// continued fraction otherwise.
inline double regularized_gamma_p(double a, double x) {
  if (a <= 0 || x < 0) throw std::invalid_argument("regularized_gamma_p: bad arguments");
  if (x == 0) return 0.0;
  const double log_norm = a * std::log(x) - x - std::lgamma(a);
  if (x < a + 1) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 500; ++n) {
      term *= x / (a + n);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-15) break;
    }
    return sum * std::exp(log_norm);
  }
  double b = x + 1 - a, c = 1e300, d = 1 / b, f = d;
  for (int n = 1; n < 500; ++n) {
    const double an = -n * (n - a);
    b += 2;
    d = an * d + b;
    if (std::abs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::abs(c) < 1e-300) c = 1e-300;
    d = 1 / d;
    const double delta = d * c;
    f *= delta;
    if (std::abs(delta - 1) < 1e-15) break;
  }
  return 1.0 - std::exp(log_norm) * f;
}

// Upper-tail p-value of a chi-square statistic with `dof` degrees of freedom.
inline double chi_square_p(double statistic, double dof) {
  return 1.0 - regularized_gamma_p(dof / 2, statistic / 2);
}

// Pearson statistic for observed counts against a uniform expectation.
inline double uniform_chi_square(const std::vector<long long>& counts, double total) {
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0;
  for (const long long count : counts) {
    const double diff = static_cast<double>(count) - expected;
    stat += diff * diff / expected;
  }
  return stat;
}

}  // namespace symrl::testing
