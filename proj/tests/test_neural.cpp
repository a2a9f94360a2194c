#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "symrl/mlp.hpp"
#include "symrl/replay.hpp"
#include "symrl/rng.hpp"

#include "chi_square.hpp"
#include "finite_diff.hpp"

#include <cmath>
#include <set>
#include <vector>

using namespace symrl;

TEST_CASE("initialization") {
  SUBCASE("parameter counts match the architectures") {
    CHECK(MLP({4, 100, 100, 2}, 1).parameter_count() == 4 * 100 + 100 + 100 * 100 + 100 + 100 * 2 + 2);
    CHECK(MLP({13, 120, 40, 1}, 1).parameter_count() == 13 * 120 + 120 + 120 * 40 + 40 + 41);
    CHECK(MLP({349, 300, 120, 1}, 1).parameter_count() ==
          349 * 300 + 300 + 300 * 120 + 120 + 121);
  }
  SUBCASE("deterministic for a seed") {
    CHECK(MLP({4, 8, 2}, 7).save_bytes() == MLP({4, 8, 2}, 7).save_bytes());
    CHECK(MLP({4, 8, 2}, 7).save_bytes() != MLP({4, 8, 2}, 8).save_bytes());
  }
  SUBCASE("weights respect the fan bound, biases are zero") {
    const MLP net({30, 20, 3}, 5);
    const ParamSet params = net.clone_params();
    const double bound0 = std::sqrt(6.0 / (30 + 20));
    CHECK(params.weights[0].cwiseAbs().maxCoeff() <= bound0);
    CHECK(params.biases[0].cwiseAbs().maxCoeff() == 0.0);
    CHECK(params.biases[1].cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("degenerate shapes are rejected") {
    CHECK_THROWS_AS(MLP({4}, 1), std::invalid_argument);
    CHECK_THROWS_AS(MLP({4, 0, 2}, 1), std::invalid_argument);
  }
}

TEST_CASE("forward pass") {
  SUBCASE("zero parameters give zero output") {
    MLP net({3, 4, 2}, 1);
    ParamSet zeros = net.clone_params();
    zeros.set_zero();
    net.load_params(zeros);
    const Eigen::MatrixXd out = net.forward(Eigen::MatrixXd::Random(3, 5));
    CHECK(out.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("single affine layer") {
    MLP net({2, 1}, 1);
    ParamSet params = net.clone_params();
    params.weights[0] << 1, 1;
    params.biases[0] << 0;
    net.load_params(params);
    Eigen::VectorXd input(2);
    input << 2, 3;
    CHECK(net.forward_one(input)(0) == 5.0);
  }
  SUBCASE("negative pre-activations are rectified away") {
    MLP net({1, 1, 1}, 1);
    ParamSet params = net.clone_params();
    params.weights[0] << 1;
    params.biases[0] << -2;  // pre-activation -1 at input 1
    params.weights[1] << 10;
    params.biases[1] << 0.5;
    net.load_params(params);
    Eigen::VectorXd input(1);
    input << 1;
    CHECK(net.forward_one(input)(0) == 0.5);
  }
  SUBCASE("dimension mismatch is rejected") {
    const MLP net({3, 2}, 1);
    CHECK_THROWS_AS(net.forward(Eigen::MatrixXd::Zero(4, 1)), std::invalid_argument);
  }
}

TEST_CASE("loss_td") {
  SUBCASE("exact targets give zero loss and gradient") {
    const MLP net({3, 5, 2}, 2);
    const Eigen::MatrixXd inputs = Eigen::MatrixXd::Random(3, 4);
    const Eigen::MatrixXd out = net.forward(inputs);
    const std::vector<int> actions = {0, 1, 0, 1};
    Eigen::VectorXd targets(4);
    for (int column = 0; column < 4; ++column) targets(column) = out(actions[column], column);
    GradientBuffer grads = net.zero_gradients();
    MLP scratch = net;
    CHECK(scratch.loss_td(inputs, actions, targets, grads) == doctest::Approx(0.0));
    for (const auto& w : grads.weights) CHECK(w.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  }
  SUBCASE("single item matches the closed form") {
    MLP net({1, 1}, 1);
    ParamSet params = net.clone_params();
    params.weights[0] << 2;
    params.biases[0] << 1;  // o = 2x + 1
    net.load_params(params);
    Eigen::MatrixXd inputs(1, 1);
    inputs << 3;
    Eigen::VectorXd targets(1);
    targets << 10;  // o = 7, residual 3
    GradientBuffer grads = net.zero_gradients();
    CHECK(net.loss_td(inputs, {0}, targets, grads) == doctest::Approx(9.0));
    // dL/do = -2(t - o) = -6; dL/dw = -6 x = -18; dL/db = -6.
    CHECK(grads.weights[0](0, 0) == doctest::Approx(-18.0));
    CHECK(grads.biases[0](0) == doctest::Approx(-6.0));
  }
  SUBCASE("a duplicated batch keeps the mean loss and gradient") {
    const MLP net({3, 4, 2}, 3);
    Eigen::MatrixXd one = Eigen::MatrixXd::Random(3, 1);
    Eigen::MatrixXd two(3, 2);
    two << one, one;
    Eigen::VectorXd target_one(1), target_two(2);
    target_one << 0.7;
    target_two << 0.7, 0.7;
    GradientBuffer grads_one = net.zero_gradients(), grads_two = net.zero_gradients();
    MLP a = net, b = net;
    const double loss_one = a.loss_td(one, {1}, target_one, grads_one);
    const double loss_two = b.loss_td(two, {1, 1}, target_two, grads_two);
    CHECK(loss_one == doctest::Approx(loss_two));
    for (std::size_t layer = 0; layer < grads_one.weights.size(); ++layer)
      CHECK((grads_one.weights[layer] - grads_two.weights[layer]).cwiseAbs().maxCoeff() ==
            doctest::Approx(0.0));
  }
  SUBCASE("action index is validated") {
    MLP net({2, 3, 2}, 1);
    GradientBuffer grads = net.zero_gradients();
    Eigen::VectorXd targets(1);
    targets << 0;
    CHECK_THROWS_AS(net.loss_td(Eigen::MatrixXd::Zero(2, 1), {2}, targets, grads),
                    std::invalid_argument);
  }
}

TEST_CASE("gradients match finite differences") {
  Rng rng(404);
  for (const auto& sizes :
       {std::vector<int>{5, 8, 4, 1}, std::vector<int>{4, 10, 10, 2}}) {
    MLP net(sizes, rng.next_u64());
    const int batch = 6;
    Eigen::MatrixXd inputs(sizes.front(), batch);
    for (int r = 0; r < inputs.rows(); ++r)
      for (int c = 0; c < batch; ++c) inputs(r, c) = rng.uniform_range(-1, 1);
    std::vector<int> actions(batch);
    for (auto& a : actions) a = rng.uniform_int(sizes.back());
    Eigen::VectorXd targets(batch);
    for (int c = 0; c < batch; ++c) targets(c) = rng.uniform_range(-1, 1);

    GradientBuffer td = net.zero_gradients();
    net.loss_td(inputs, actions, targets, td);
    const auto td_loss = [&] {
      GradientBuffer scratch = net.zero_gradients();
      return net.loss_td(inputs, actions, targets, scratch);
    };
    const testing::FdReport td_report = testing::fd_check(net, td_loss, td, rng);
    CHECK(td_report.max_rel_error < 1e-4);
    CHECK(td_report.checked > 50);

    GradientBuffer sym = net.zero_gradients();
    net.loss_sym(inputs, actions, targets, sym);
    const auto sym_loss = [&] {
      GradientBuffer scratch = net.zero_gradients();
      return net.loss_sym(inputs, actions, targets, scratch);
    };
    const testing::FdReport sym_report = testing::fd_check(net, sym_loss, sym, rng);
    CHECK(sym_report.max_rel_error < 1e-4);
  }
}

TEST_CASE("loss_sym holds its targets fixed") {
  // Descent on the symmetric loss moves the partner output toward the fixed
  // target without touching the target itself.
  MLP net({2, 6, 2}, 9);
  Eigen::MatrixXd partner_input(2, 1);
  partner_input << 0.3, -0.8;
  const double target = 1.5;
  Eigen::VectorXd targets(1);
  targets << target;
  for (int iteration = 0; iteration < 3; ++iteration) {
    const double before = net.forward(partner_input)(1, 0);
    GradientBuffer grads = net.zero_gradients();
    net.loss_sym(partner_input, {1}, targets, grads);
    net.apply_update(grads, 0.05);
    const double after = net.forward(partner_input)(1, 0);
    CHECK(std::abs(after - target) < std::abs(before - target));
  }
}

TEST_CASE("apply_update") {
  SUBCASE("zero gradient or zero rate leaves parameters alone") {
    MLP net({3, 4, 1}, 11);
    const auto bytes = net.save_bytes();
    GradientBuffer zero = net.zero_gradients();
    net.apply_update(zero, 0.1);
    CHECK(net.save_bytes() == bytes);
    GradientBuffer grads = net.zero_gradients();
    Eigen::VectorXd targets(1);
    targets << 5;
    net.loss_td(Eigen::MatrixXd::Constant(3, 1, 0.5), {0}, targets, grads);
    net.apply_update(grads, 0.0);
    CHECK(net.save_bytes() == bytes);
  }
  SUBCASE("scale is linear") {
    MLP base({2, 3, 1}, 13);
    GradientBuffer grads = base.zero_gradients();
    Eigen::VectorXd targets(1);
    targets << 2;
    base.loss_td(Eigen::MatrixXd::Constant(2, 1, 1.0), {0}, targets, grads);
    MLP half = base, full = base;
    half.apply_update(grads, 0.01, 0.5);
    full.apply_update(grads, 0.01, 1.0);
    const ParamSet p0 = base.clone_params(), ph = half.clone_params(), pf = full.clone_params();
    for (std::size_t layer = 0; layer < p0.weights.size(); ++layer) {
      const Eigen::MatrixXd delta_half = ph.weights[layer] - p0.weights[layer];
      const Eigen::MatrixXd delta_full = pf.weights[layer] - p0.weights[layer];
      CHECK((delta_full - 2 * delta_half).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    }
  }
  SUBCASE("one step on a quadratic halves the distance at lr = 0.5 / curvature") {
    // o = w x with x = 1: loss (t - w)^2 has curvature 2, so lr 0.25.
    MLP net({1, 1}, 1);
    ParamSet params = net.clone_params();
    params.weights[0] << 4;
    params.biases[0] << 0;
    net.load_params(params);
    const double target = 1.0;
    Eigen::MatrixXd input(1, 1);
    input << 1;
    Eigen::VectorXd targets(1);
    targets << target;
    GradientBuffer grads = net.zero_gradients();
    net.loss_td(input, {0}, targets, grads);
    net.apply_update(grads, 0.25);
    CHECK(net.clone_params().weights[0](0, 0) == doctest::Approx(2.5));  // 4 -> halfway to 1
  }
  SUBCASE("non-finite gradients abort") {
    MLP net({2, 2}, 1);
    GradientBuffer grads = net.zero_gradients();
    grads.weights[0](0, 0) = std::nan("");
    CHECK_THROWS_AS(net.apply_update(grads, 0.1), std::runtime_error);
  }
}

TEST_CASE("clone and load parameters") {
  MLP net({3, 5, 2}, 17);
  const ParamSet snapshot = net.clone_params();
  const Eigen::MatrixXd probe = Eigen::MatrixXd::Random(3, 4);
  const Eigen::MatrixXd before = net.forward(probe);
  GradientBuffer grads = net.zero_gradients();
  Eigen::VectorXd targets = Eigen::VectorXd::Constant(4, 3.0);
  net.loss_td(probe, {0, 1, 0, 1}, targets, grads);
  net.apply_update(grads, 0.1);
  CHECK((net.forward(probe) - before).cwiseAbs().maxCoeff() > 0);
  net.load_params(snapshot);
  CHECK((net.forward(probe) - before).cwiseAbs().maxCoeff() == 0.0);

  MLP other({3, 4, 2}, 1);
  CHECK_THROWS_AS(other.load_params(snapshot), std::invalid_argument);
}

TEST_CASE("checkpoint bytes") {
  MLP net({4, 6, 3}, 19);
  const auto bytes = net.save_bytes();
  const MLP restored = MLP::load_bytes(bytes);
  CHECK(restored.save_bytes() == bytes);
  const Eigen::MatrixXd probe = Eigen::MatrixXd::Random(4, 2);
  CHECK((restored.forward(probe) - net.forward(probe)).cwiseAbs().maxCoeff() == 0.0);

  auto corrupted = bytes;
  corrupted[0] ^= 0xff;
  CHECK_THROWS_AS(MLP::load_bytes(corrupted), std::invalid_argument);
  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS(MLP::load_bytes(truncated), std::invalid_argument);
}

TEST_CASE("replay buffer") {
  const auto transition = [](int tag) {
    Transition t;
    t.state = {static_cast<double>(tag)};
    t.action = tag;
    t.reward = tag;
    t.next_state = {static_cast<double>(tag + 1)};
    return t;
  };
  SUBCASE("ring overwrite keeps the newest entries") {
    ReplayBuffer replay(3);
    for (int tag = 0; tag < 5; ++tag) replay.push(transition(tag));
    CHECK(replay.size() == 3);
    std::set<int> kept;
    for (int slot = 0; slot < 3; ++slot) kept.insert(replay[slot].action);
    CHECK(kept == std::set<int>{2, 3, 4});
  }
  SUBCASE("sampling is without replacement") {
    ReplayBuffer replay(10);
    for (int tag = 0; tag < 10; ++tag) replay.push(transition(tag));
    Rng rng(5);
    for (int draw = 0; draw < 50; ++draw) {
      const auto indices = replay.sample_indices(4, rng);
      CHECK(std::set<int>(indices.begin(), indices.end()).size() == 4);
    }
    CHECK_THROWS_AS(replay.sample_indices(11, rng), std::invalid_argument);
  }
  SUBCASE("sampling covers all indices uniformly") {
    ReplayBuffer replay(16);
    for (int tag = 0; tag < 16; ++tag) replay.push(transition(tag));
    Rng rng(7);
    std::vector<long long> counts(16, 0);
    const int draws = 20000;
    for (int draw = 0; draw < draws; ++draw)
      for (const int index : replay.sample_indices(4, rng)) ++counts[index];
    const double statistic = testing::uniform_chi_square(counts, 4.0 * draws);
    CHECK(testing::chi_square_p(statistic, 15) > 0.01);
  }
}
