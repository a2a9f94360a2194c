#pragma once

#include "symrl/mlp.hpp"
#include "symrl/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace symrl::testing {

struct FdReport {
  double max_rel_error = 0.0;
  int checked = 0;
  int skipped = 0;  // coordinates straddling a rectifier kink
};

// Central-difference check of an analytic gradient. `loss` re-evaluates the
// scalar loss at the network's current parameters; `grads` is the analytic
// gradient at the unperturbed point. Checks every bias and `weight_samples`
// randomly chosen weights per layer (all weights when the sample count
// covers them). Coordinates where halving the step changes the estimate
// materially sit on a rectifier kink and are skipped.
inline FdReport fd_check(MLP& net, const std::function<double()>& loss,
                         const GradientBuffer& grads, Rng& rng, int weight_samples = 60,
                         double h = 1e-5) {
  FdReport report;
  ParamSet params = net.clone_params();
  auto eval_at = [&](double& param, double value) {
    const double saved = param;
    param = value;
    net.load_params(params);
    const double out = loss();
    param = saved;
    return out;
  };
  auto check_entry = [&](double& param, double analytic) {
    const double saved = param;
    const double fd_full = (eval_at(param, saved + h) - eval_at(param, saved - h)) / (2 * h);
    const double fd_half =
        (eval_at(param, saved + h / 2) - eval_at(param, saved - h / 2)) / h;
    net.load_params(params);
    const double scale = std::max({std::abs(fd_full), std::abs(analytic), 1e-6});
    if (std::abs(fd_full - fd_half) / scale > 1e-3) {
      ++report.skipped;
      return;
    }
    ++report.checked;
    report.max_rel_error = std::max(report.max_rel_error, std::abs(fd_full - analytic) / scale);
  };

  for (std::size_t layer = 0; layer < params.weights.size(); ++layer) {
    auto& w = params.weights[layer];
    const auto& gw = grads.weights[layer];
    const int total = static_cast<int>(w.size());
    if (total <= weight_samples) {
      for (int idx = 0; idx < total; ++idx) check_entry(w.data()[idx], gw.data()[idx]);
    } else {
      for (int draw = 0; draw < weight_samples; ++draw) {
        const int idx = rng.uniform_int(total);
        check_entry(w.data()[idx], gw.data()[idx]);
      }
    }
    auto& b = params.biases[layer];
    const auto& gb = grads.biases[layer];
    for (int idx = 0; idx < static_cast<int>(b.size()); ++idx)
      check_entry(b.data()[idx], gb.data()[idx]);
  }
  return report;
}

}  // namespace symrl::testing
