#pragma once

#include <vector>

namespace symrl {

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1)
  int n = 0;
};

MeanStd mean_std(const std::vector<double>& xs);

struct WelchResult {
  double t = 0.0;
  double dof = 0.0;
  double p = 1.0;  // two-sided
};

// Regularized incomplete beta function I_x(a, b), evaluated by the
// continued-fraction expansion, absolute error below 1e-8.
double regularized_incomplete_beta(double a, double b, double x);

// Welch's unequal-variance t-test with Welch-Satterthwaite degrees of
// freedom. Requires at least two observations per sample and positive
// variance in at least one; throws std::invalid_argument otherwise.
WelchResult welch_t_test(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace symrl
