#include "symrl/agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace symrl {

double epsilon_at(const EpsilonSchedule& schedule, int episode) {
  if (episode < 0) throw std::invalid_argument("epsilon_at: episode must be non-negative");
  return std::max(schedule.floor, schedule.start * std::pow(schedule.decay_rate, episode));
}

int select_action(const std::vector<double>& q_values, double epsilon, Rng& rng) {
  if (q_values.empty()) throw std::invalid_argument("select_action: empty Q-values");
  if (epsilon > 0 && rng.uniform() < epsilon)
    return rng.uniform_int(static_cast<int>(q_values.size()));
  int best = 0;
  for (int a = 1; a < static_cast<int>(q_values.size()); ++a)
    if (q_values[a] > q_values[best]) best = a;
  return best;
}

namespace {

std::vector<int> network_sizes(const Env& env, const AgentConfig& config) {
  std::vector<int> sizes;
  sizes.push_back(env.input_size());
  for (int h : config.hidden_sizes) sizes.push_back(h);
  sizes.push_back(env.q_layout() == QLayout::PerState ? env.action_count() : 1);
  return sizes;
}

}  // namespace

Agent::Agent(const Env& env, const AgentConfig& config)
    : config_(config),
      layout_(env.q_layout()),
      net_(network_sizes(env, config), config.init_seed),
      target_net_(net_),
      replay_(config.replay_capacity),
      tree_(config.detector.i, config.detector.reward_quantum, config.detector.node_entry_cap) {
  if (config.batch_size < 1) throw std::invalid_argument("Agent: batch_size must be positive");
  if (!(config.gamma >= 0 && config.gamma < 1))
    throw std::invalid_argument("Agent: gamma must lie in [0, 1)");
  if (config.lambda_sym < 0) throw std::invalid_argument("Agent: lambda_sym must be non-negative");
  if (config.target_refresh_period < 1)
    throw std::invalid_argument("Agent: target_refresh_period must be positive");
}

std::vector<double> Agent::q_values(const Env& env, const std::vector<double>& obs) const {
  const int actions = env.action_count();
  std::vector<double> q(actions);
  if (layout_ == QLayout::PerState) {
    Eigen::VectorXd input(env.input_size());
    env.encode(obs.data(), 0, input.data());
    const Eigen::VectorXd out = net_.forward_one(input);
    for (int a = 0; a < actions; ++a) q[a] = out[a];
  } else {
    Eigen::MatrixXd inputs(env.input_size(), actions);
    for (int a = 0; a < actions; ++a) env.encode(obs.data(), a, inputs.col(a).data());
    const Eigen::MatrixXd out = net_.forward(inputs);
    for (int a = 0; a < actions; ++a) q[a] = out(0, a);
  }
  return q;
}

Agent::TrainResult Agent::train_step(const Env& env, Rng& rng) {
  TrainResult result;
  if (replay_.size() < config_.batch_size) return result;
  if (train_steps_ % config_.target_refresh_period == 0)
    target_net_.load_params(net_.clone_params());
  ++train_steps_;

  const int batch = config_.batch_size;
  const int actions = env.action_count();
  const int input_size = env.input_size();
  const auto indices = replay_.sample_indices(batch, rng);

  // TD inputs and bootstrapped targets from the target network.
  Eigen::MatrixXd inputs(input_size, batch);
  std::vector<int> action_rows(batch);
  Eigen::VectorXd targets(batch);
  if (layout_ == QLayout::PerState) {
    Eigen::MatrixXd next_inputs(input_size, batch);
    for (int b = 0; b < batch; ++b) {
      const Transition& t = replay_[indices[b]];
      env.encode(t.state.data(), 0, inputs.col(b).data());
      env.encode(t.next_state.data(), 0, next_inputs.col(b).data());
      action_rows[b] = t.action;
    }
    const Eigen::MatrixXd next_q = target_net_.forward(next_inputs);
    for (int b = 0; b < batch; ++b) {
      const Transition& t = replay_[indices[b]];
      targets[b] = t.reward;
      if (!t.terminated) targets[b] += config_.gamma * next_q.col(b).maxCoeff();
    }
  } else {
    Eigen::MatrixXd next_inputs(input_size, static_cast<Eigen::Index>(batch) * actions);
    for (int b = 0; b < batch; ++b) {
      const Transition& t = replay_[indices[b]];
      env.encode(t.state.data(), t.action, inputs.col(b).data());
      action_rows[b] = 0;
      for (int a = 0; a < actions; ++a)
        env.encode(t.next_state.data(), a, next_inputs.col(b * actions + a).data());
    }
    const Eigen::MatrixXd next_q = target_net_.forward(next_inputs);
    for (int b = 0; b < batch; ++b) {
      const Transition& t = replay_[indices[b]];
      targets[b] = t.reward;
      if (!t.terminated) {
        double best = next_q(0, b * actions);
        for (int a = 1; a < actions; ++a) best = std::max(best, next_q(0, b * actions + a));
        targets[b] += config_.gamma * best;
      }
    }
  }

  // Symmetric batch: partners of each TD item, evaluated at their most
  // recent continuous observations, pulled toward the item's pre-update
  // Q-value.
  std::vector<int> sym_source;
  std::vector<const std::vector<double>*> sym_obs;
  std::vector<int> sym_actions;
  if (config_.lambda_sym > 0 && config_.detector.enabled && index_.partner_pair_count() > 0) {
    for (int b = 0; b < batch; ++b) {
      const Transition& t = replay_[indices[b]];
      const SAKey key = env.discrete_key(t.state.data(), t.action);
      for (const auto& partner : index_.partners(key)) {
        const std::vector<double>* rep = index_.representative(partner.key);
        if (!rep) continue;
        sym_source.push_back(b);
        sym_obs.push_back(rep);
        sym_actions.push_back(partner.key.action);
      }
    }
  }
  Eigen::VectorXd q_before;
  if (!sym_source.empty()) {
    // Pre-update predictions for the TD items (the frozen targets of the
    // symmetric update).
    const Eigen::MatrixXd preds = net_.forward(inputs);
    q_before.resize(batch);
    for (int b = 0; b < batch; ++b) q_before[b] = preds(action_rows[b], b);
  }

  result.td_loss = net_.loss_td(inputs, action_rows, targets, td_grads_);
  net_.apply_update(td_grads_, config_.learning_rate);
  result.trained = true;

  if (!sym_source.empty()) {
    const auto columns = static_cast<int>(sym_source.size());
    Eigen::MatrixXd sym_inputs(input_size, columns);
    std::vector<int> sym_rows(columns);
    Eigen::VectorXd sym_targets(columns);
    for (int m = 0; m < columns; ++m) {
      env.encode(sym_obs[m]->data(), sym_actions[m], sym_inputs.col(m).data());
      sym_rows[m] = layout_ == QLayout::PerState ? sym_actions[m] : 0;
      sym_targets[m] = q_before[sym_source[m]];
    }
    result.sym_loss = net_.loss_sym(sym_inputs, sym_rows, sym_targets, sym_grads_);
    net_.apply_update(sym_grads_, config_.learning_rate, config_.lambda_sym);
    result.sym_columns = columns;
  }
  return result;
}

EpisodeStats Agent::run_episode(Env& env, Rng& rng) {
  EpisodeStats stats;
  stats.episode = episodes_run_;
  const bool warmup = episodes_run_ < config_.warmup_episodes;
  stats.epsilon =
      warmup ? 1.0 : epsilon_at(config_.epsilon, episodes_run_ - config_.warmup_episodes);

  std::vector<SAKey> episode_keys;
  std::vector<double> episode_rewards;
  double td_loss_sum = 0, sym_loss_sum = 0;
  std::int64_t train_count = 0;

  env.reset(rng);
  while (!env.done()) {
    const std::vector<double> obs = env.observation();
    int action;
    if (warmup) {
      action = rng.uniform_int(env.action_count());
    } else {
      action = select_action(q_values(env, obs), stats.epsilon, rng);
    }
    const StepResult step = env.step(action, rng);
    const std::vector<double> next_obs = env.observation();

    stats.base_return += step.base_reward;
    stats.shaped_return += step.shaped_reward;
    ++stats.steps;

    if (config_.detector.enabled) {
      const SAKey key = env.discrete_key(obs.data(), action);
      index_.observe(key, obs.data(), env.observation_size());
      episode_keys.push_back(key);
      episode_rewards.push_back(step.shaped_reward);
    }
    replay_.push(Transition{obs, action, step.shaped_reward, next_obs, step.terminated});

    if (!warmup) {
      const TrainResult trained = train_step(env, rng);
      if (trained.trained) {
        td_loss_sum += trained.td_loss;
        sym_loss_sum += trained.sym_loss;
        stats.sym_updates += trained.sym_columns;
        ++train_count;
      }
    }
  }

  ++episodes_run_;
  if (config_.detector.enabled) {
    tree_.insert_episode(episode_keys, episode_rewards);
    if (episodes_run_ % config_.detector.recompute_period == 0) {
      const SimilarityTable table =
          compute_similarities(tree_, config_.detector.l0, config_.detector.i);
      index_.update(table, config_.detector.delta, config_.detector.min_support,
                    config_.detector.partner_cap);
    }
  }
  if (train_count > 0) {
    stats.td_loss_mean = td_loss_sum / static_cast<double>(train_count);
    stats.sym_loss_mean = sym_loss_sum / static_cast<double>(train_count);
  }
  stats.partner_pairs = index_.partner_pair_count();
  stats.tree_nodes = tree_.node_count();
  stats.tree_keys = tree_.key_count();
  return stats;
}

GreedyEpisodeResult Agent::run_greedy_episode(Env& env, Rng& rng) const {
  env.reset(rng);
  return greedy_rollout(env, rng);
}

GreedyEpisodeResult Agent::greedy_rollout(Env& env, Rng& rng) const {
  if (env.done()) throw std::logic_error("greedy_rollout: environment not reset");
  GreedyEpisodeResult result;
  while (!env.done()) {
    const std::vector<double> obs = env.observation();
    Rng none(0);  // epsilon = 0 draws nothing; stream stays untouched
    const int action = select_action(q_values(env, obs), 0.0, none);
    const StepResult step = env.step(action, rng);
    ++result.steps;
    if (step.terminated) result.terminated = true;
  }
  return result;
}

}  // namespace symrl
