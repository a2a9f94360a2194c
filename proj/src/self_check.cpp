#include "symrl/self_check.hpp"

#include "symrl/agent.hpp"
#include "symrl/cartpole.hpp"
#include "symrl/experiment.hpp"
#include "symrl/gridworld.hpp"
#include "symrl/quotient.hpp"
#include "symrl/rng.hpp"
#include "symrl/stats.hpp"
#include "symrl/value_iteration.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace symrl {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw std::runtime_error(message);
}

void check_rng() {
  Rng a(42), b(42);
  for (int k = 0; k < 1000; ++k) {
    require(a.next_u64() == b.next_u64(), "identical seeds diverged");
    const double u = b.uniform();
    require(u >= 0.0 && u < 1.0, "uniform() outside [0, 1)");
    a.uniform();
  }
  Rng c(42);
  require(c.split(3).next_u64() != c.split(4).next_u64(), "split streams collide");
}

void check_gridworld_values() {
  GridWorldConfig config;
  config.size_n = 5;
  config.goal = {3, 3, 1};
  const GridWorld grid(config);
  const TabularMDP mdp = grid.tabular();
  const std::vector<double> q = value_iteration(mdp, config.gamma);
  const std::vector<double> v = state_values(mdp, q);
  require(std::abs(v[grid.cell_index(config.goal)]) < 1e-12, "goal value not zero");
  const auto greedy = greedy_action_sets(mdp, q);
  const std::vector<int>& corner = greedy[grid.cell_index({1, 1, 1})];
  require(corner == std::vector<int>({1, 3}), "corner greedy set is not {east, north}");
}

void check_quotient_lift() {
  GridWorldConfig config;
  config.size_n = 3;
  config.goal = {2, 2, 1};
  const GridWorld grid(config);
  const TabularMDP mdp = grid.tabular();
  const SymmetryMap sym = grid.axis_reflection(0);
  require(check_symmetry(mdp, sym), "axis reflection is not a symmetry");
  const Partition classes = equivalence_classes(mdp, sym);
  const Quotient quotient = build_quotient(mdp, classes);
  const std::vector<double> q = value_iteration(mdp, config.gamma);
  const std::vector<double> lifted =
      lift_q(quotient, mdp, value_iteration(quotient.mdp, config.gamma));
  double max_diff = 0.0;
  for (std::size_t p = 0; p < q.size(); ++p)
    max_diff = std::max(max_diff, std::abs(q[p] - lifted[p]));
  require(max_diff <= 1e-6, "lifted quotient values differ by " + std::to_string(max_diff));
}

void check_cartpole_dynamics() {
  const CartPole cart((CartPoleConfig()));
  const std::array<double, 4> next = cart.dynamics({0, 0, 0, 0}, 1);
  require(std::abs(next[3] - 0.1951219512195122) < 1e-12, "cart velocity after push wrong");
  require(std::abs(next[2] - -0.2926829268292683) < 1e-12, "pole rate after push wrong");
  const std::array<double, 4> state = {0.04, -0.3, 0.2, 0.11};
  std::array<double, 4> mirrored;
  for (int k = 0; k < 4; ++k) mirrored[k] = -state[k];
  const std::array<double, 4> left = cart.dynamics(state, 0);
  const std::array<double, 4> right = cart.dynamics(mirrored, 1);
  for (int k = 0; k < 4; ++k)
    require(left[k] == -right[k], "negated state with swapped action not equivariant");
}

void check_similarity() {
  RewardHistoryTree tree(2);
  tree.insert_episode({{0, 0}}, {5.0});
  tree.insert_episode({{1, 1}}, {5.0});
  const SimilarityTable table = compute_similarities(tree, 1, 1);
  const auto chi = table.similarity({0, 0}, {1, 1});
  require(chi.has_value() && std::abs(*chi - 1.0) < 1e-12, "identical histories not at chi = 1");
  SymmetryIndex index;
  index.update(table, 0.9, 1, 5);
  require(index.partner_pair_count() == 1, "mutual partners not indexed");
}

void check_welch() {
  const WelchResult result = welch_t_test({1, 2, 3, 4, 5}, {2, 3, 4, 5, 6});
  require(std::abs(result.t + 1.0) < 1e-12, "t statistic wrong");
  require(std::abs(result.dof - 8.0) < 1e-12, "degrees of freedom wrong");
  require(std::abs(result.p - 0.3466) < 1e-3, "p-value wrong");
}

void check_agent_determinism() {
  GridWorldConfig grid_config;
  grid_config.size_n = 3;
  grid_config.goal = {3, 3, 1};
  AgentConfig agent_config;
  agent_config.gamma = 0.9;
  agent_config.lambda_sym = 0.4;
  agent_config.batch_size = 4;
  agent_config.warmup_episodes = 1;
  agent_config.learning_rate = 0.01;
  agent_config.hidden_sizes = {12};
  agent_config.detector.min_support = 2;
  agent_config.epsilon = {0.1, 0.1, 1.0};
  agent_config.init_seed = 7;
  std::vector<std::vector<std::uint8_t>> nets;
  for (int repeat = 0; repeat < 2; ++repeat) {
    GridWorld env(grid_config);
    Agent agent(env, agent_config);
    Rng rng(11);
    for (int episode = 0; episode < 3; ++episode) agent.run_episode(env, rng);
    nets.push_back(agent.network().save_bytes());
  }
  require(nets[0] == nets[1], "identical seeds produced different networks");
}

void check_csv_roundtrip() {
  RunRecord record;
  record.seed = 17;
  for (int episode = 0; episode < 3; ++episode) {
    EpisodeRow row;
    row.stats.episode = episode;
    row.stats.steps = 10 + episode;
    row.stats.base_return = episode == 0 ? -0.125 : 1.0 / 3.0 + episode;
    row.stats.shaped_return = row.stats.base_return + 0.25;
    row.stats.epsilon = 0.1;
    row.stats.td_loss_mean = 0.01 * episode;
    row.warmup = episode == 0;
    row.eval_ran = true;
    row.eval_success = episode == 2;
    row.eval_steps = 4;
    record.episodes.push_back(row);
  }
  const std::string path =
      (std::filesystem::temp_directory_path() / "symrl_self_check.csv").string();
  write_run_csv(path, record);
  const RunRecord loaded = read_run_csv(path);
  std::filesystem::remove(path);
  require(loaded.seed == record.seed, "seed not preserved");
  require(loaded.episodes.size() == record.episodes.size(), "row count not preserved");
  for (std::size_t e = 0; e < record.episodes.size(); ++e) {
    require(loaded.episodes[e].stats.base_return == record.episodes[e].stats.base_return,
            "base return not bit-exact after roundtrip");
    require(loaded.episodes[e].warmup == record.episodes[e].warmup, "warmup flag lost");
    require(loaded.episodes[e].eval_success == record.episodes[e].eval_success,
            "eval flag lost");
  }
  const RunSummary summary = summarize_run(loaded, 1);
  require(std::abs(summary.mean_total_reward - (4.0 / 3.0 + 7.0 / 3.0) / 2.0) < 1e-12,
          "mean over learning episodes wrong");
}

}  // namespace

bool run_self_check(std::ostream& out) {
  const std::vector<std::pair<std::string, std::function<void()>>> checks = {
      {"rng determinism", check_rng},
      {"gridworld value iteration", check_gridworld_values},
      {"quotient lift", check_quotient_lift},
      {"cartpole dynamics", check_cartpole_dynamics},
      {"similarity and index", check_similarity},
      {"welch t-test", check_welch},
      {"agent determinism", check_agent_determinism},
      {"csv roundtrip", check_csv_roundtrip},
  };
  bool all_ok = true;
  for (const auto& [name, fn] : checks) {
    try {
      fn();
      out << "ok   " << name << "\n";
    } catch (const std::exception& error) {
      all_ok = false;
      out << "FAIL " << name << ": " << error.what() << "\n";
    }
  }
  return all_ok;
}

}  // namespace symrl
