#include "symrl/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace symrl {

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd out;
  out.n = static_cast<int>(xs.size());
  if (out.n == 0) return out;
  double sum = 0;
  for (double x : xs) sum += x;
  out.mean = sum / out.n;
  if (out.n < 2) return out;
  double sq = 0;
  for (double x : xs) sq += (x - out.mean) * (x - out.mean);
  out.stddev = std::sqrt(sq / (out.n - 1));
  return out;
}

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 500;
  constexpr double kEpsilon = 1e-15;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEpsilon) return h;
  }
  throw std::runtime_error("regularized_incomplete_beta: continued fraction did not converge");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0) || !(b > 0))
    throw std::invalid_argument("regularized_incomplete_beta: a and b must be positive");
  if (!(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument("regularized_incomplete_beta: x must lie in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  // Use the expansion on the side where it converges quickly.
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

WelchResult welch_t_test(const std::vector<double>& xs, const std::vector<double>& ys) {
  const MeanStd mx = mean_std(xs);
  const MeanStd my = mean_std(ys);
  if (mx.n < 2 || my.n < 2)
    throw std::invalid_argument("welch_t_test: each sample needs at least two observations");
  const double vx = mx.stddev * mx.stddev;
  const double vy = my.stddev * my.stddev;
  if (vx == 0.0 && vy == 0.0)
    throw std::invalid_argument("welch_t_test: both samples have zero variance");
  const double sx = vx / mx.n;
  const double sy = vy / my.n;
  WelchResult out;
  out.t = (mx.mean - my.mean) / std::sqrt(sx + sy);
  out.dof = (sx + sy) * (sx + sy) /
            (sx * sx / (mx.n - 1) + sy * sy / (my.n - 1));
  // Two-sided p from the t distribution: P(|T| >= |t|) = I_{nu/(nu+t^2)}(nu/2, 1/2).
  out.p = regularized_incomplete_beta(out.dof / 2.0, 0.5, out.dof / (out.dof + out.t * out.t));
  return out;
}

}  // namespace symrl
