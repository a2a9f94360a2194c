#include "symrl/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <ostream>
#include <stdexcept>

namespace symrl {

namespace {

GridCoords parse_coords(const std::string& text, int dims, const std::string& key) {
  GridCoords coords = {1, 1, 1};
  std::string::size_type begin = 0;
  int filled = 0;
  while (begin <= text.size()) {
    const auto end = text.find(',', begin);
    const std::string part =
        text.substr(begin, end == std::string::npos ? end : end - begin);
    char* stop = nullptr;
    const long value = std::strtol(part.c_str(), &stop, 10);
    if (stop == part.c_str() || *stop != '\0' || filled >= dims)
      throw std::invalid_argument(key + ": expected " + std::to_string(dims) +
                                  " comma-separated coordinates, got '" + text + "'");
    coords[filled++] = static_cast<int>(value);
    if (end == std::string::npos) break;
    begin = end + 1;
  }
  if (filled != dims)
    throw std::invalid_argument(key + ": expected " + std::to_string(dims) +
                                " comma-separated coordinates, got '" + text + "'");
  return coords;
}

Shaping parse_shaping(const std::string& text) {
  if (text == "none") return Shaping::None;
  if (text == "pot1") return Shaping::Pot1;
  if (text == "pot2") return Shaping::Pot2;
  throw std::invalid_argument("grid.shaping: expected none, pot1, or pot2, got '" + text + "'");
}

int default_grid_max_steps(int size, int dims) {
  if (dims == 3) return size >= 7 ? 1500 : 1000;
  return size >= 13 ? 800 : 480;
}

}  // namespace

ExperimentConfig experiment_from_config(Config& config) {
  ExperimentConfig exp;
  exp.name = config.get_string("experiment.name", "experiment");
  exp.episodes = static_cast<int>(config.get_int("experiment.episodes", 300));
  exp.iterations = static_cast<int>(config.get_int("experiment.iterations", 10));
  exp.base_seed = static_cast<std::uint64_t>(config.get_int("experiment.base_seed", 1));
  exp.output_dir = config.get_string("experiment.output_dir", "out");
  if (exp.episodes < 1) throw std::invalid_argument("experiment.episodes must be positive");
  if (exp.iterations < 1) throw std::invalid_argument("experiment.iterations must be positive");

  const std::string env_kind = config.get_string("env.kind", "gridworld");
  if (env_kind == "gridworld")
    exp.env_kind = EnvKind::GridWorld;
  else if (env_kind == "cartpole")
    exp.env_kind = EnvKind::CartPole;
  else
    throw std::invalid_argument("env.kind: expected gridworld or cartpole, got '" + env_kind +
                                "'");

  const std::string agent_kind = config.get_string("experiment.agent", "symdqn");
  if (agent_kind == "dqn")
    exp.agent_kind = AgentKind::DQN;
  else if (agent_kind == "symdqn")
    exp.agent_kind = AgentKind::SymDQN;
  else
    throw std::invalid_argument("experiment.agent: expected dqn or symdqn, got '" + agent_kind +
                                "'");

  AgentConfig& agent = exp.agent;
  if (exp.env_kind == EnvKind::GridWorld) {
    GridWorldConfig& grid = exp.grid;
    grid.size_n = static_cast<int>(config.get_int("grid.size", 9));
    grid.dims_d = static_cast<int>(config.get_int("grid.dims", 2));
    grid.slip_prob = config.get_double("grid.slip_prob", 0.1);
    grid.max_steps = static_cast<int>(
        config.get_int("grid.max_steps", default_grid_max_steps(grid.size_n, grid.dims_d)));
    grid.shaping = parse_shaping(config.get_string("grid.shaping", "none"));
    grid.shaping_sign = static_cast<int>(config.get_int("grid.shaping_sign", -1));
    if (grid.shaping_sign != 1 && grid.shaping_sign != -1)
      throw std::invalid_argument("grid.shaping_sign must be 1 or -1");
    const std::string goal = config.get_string("grid.goal", "random");
    exp.grid_goal_random = goal == "random";
    if (!exp.grid_goal_random) grid.goal = parse_coords(goal, grid.dims_d, "grid.goal");
    const std::string start = config.get_string("grid.start", "uniform");
    grid.uniform_start = start == "uniform";
    if (!grid.uniform_start) grid.start = parse_coords(start, grid.dims_d, "grid.start");

    agent.gamma = 0.9;
    agent.lambda_sym = 0.4;
    agent.batch_size = 32;
    agent.warmup_episodes = 0;
    agent.learning_rate = 0.01;
    agent.replay_capacity = 100000;
    agent.hidden_sizes = grid.dims_d == 3 ? std::vector<int>{300, 120} : std::vector<int>{120, 40};
    agent.epsilon = {0.1, 0.1, 1.0};
  } else {
    CartPoleConfig& cart = exp.cartpole;
    cart.levels = static_cast<int>(config.get_int("cartpole.levels", 9));
    cart.max_steps = static_cast<int>(config.get_int("cartpole.max_steps", 1500));
    cart.omega_bound = config.get_double("cartpole.omega_bound", cart.omega_bound);
    cart.v_bound = config.get_double("cartpole.v_bound", cart.v_bound);
    cart.reset_range = config.get_double("cartpole.reset_range", cart.reset_range);
    cart.shaping = config.get_bool("cartpole.shaping", true);

    agent.gamma = 0.99;
    agent.lambda_sym = 1.0;
    agent.batch_size = 128;
    agent.warmup_episodes = 25;
    agent.learning_rate = 0.001;
    agent.target_refresh_period = 500;
    agent.replay_capacity = 100000;
    agent.hidden_sizes = {100, 100};
    agent.epsilon = {1.0, 0.1, 0.98};
  }

  agent.gamma = config.get_double("agent.gamma", agent.gamma);
  agent.lambda_sym = config.get_double("agent.lambda", agent.lambda_sym);
  agent.batch_size = static_cast<int>(config.get_int("agent.batch_size", agent.batch_size));
  agent.warmup_episodes =
      static_cast<int>(config.get_int("agent.warmup_episodes", agent.warmup_episodes));
  agent.learning_rate = config.get_double("agent.learning_rate", agent.learning_rate);
  agent.target_refresh_period =
      static_cast<int>(config.get_int("agent.target_refresh_period", agent.target_refresh_period));
  agent.replay_capacity =
      static_cast<int>(config.get_int("agent.replay_capacity", agent.replay_capacity));
  agent.hidden_sizes = config.get_int_list("agent.hidden", agent.hidden_sizes);
  agent.epsilon.start = config.get_double("agent.epsilon_start", agent.epsilon.start);
  agent.epsilon.floor = config.get_double("agent.epsilon_floor", agent.epsilon.floor);
  agent.epsilon.decay_rate = config.get_double("agent.epsilon_decay", agent.epsilon.decay_rate);
  if (agent.warmup_episodes < 0)
    throw std::invalid_argument("agent.warmup_episodes must be non-negative");

  DetectorConfig& det = agent.detector;
  det.enabled = config.get_bool("detector.enabled", det.enabled);
  det.delta = config.get_double("detector.delta", det.delta);
  det.l0 = static_cast<int>(config.get_int("detector.l0", det.l0));
  det.i = static_cast<int>(config.get_int("detector.i", det.i));
  det.min_support = config.get_int("detector.min_support", det.min_support);
  det.partner_cap = static_cast<int>(config.get_int("detector.partner_cap", det.partner_cap));
  det.reward_quantum = config.get_double("detector.quantum", det.reward_quantum);
  det.node_entry_cap =
      static_cast<int>(config.get_int("detector.node_entry_cap", det.node_entry_cap));
  det.recompute_period =
      static_cast<int>(config.get_int("detector.recompute_period", det.recompute_period));

  if (exp.agent_kind == AgentKind::DQN) {
    agent.lambda_sym = 0.0;
    det.enabled = false;
  }

  ConvergenceConfig& conv = exp.convergence;
  conv.enabled = config.get_bool("convergence.enabled", exp.env_kind == EnvKind::GridWorld);
  conv.window = static_cast<int>(config.get_int("convergence.window", conv.window));
  conv.tolerance_factor =
      config.get_double("convergence.tolerance_factor", conv.tolerance_factor);
  if (conv.enabled && exp.env_kind != EnvKind::GridWorld)
    throw std::invalid_argument("convergence tracking requires env.kind = gridworld");
  if (conv.window < 1) throw std::invalid_argument("convergence.window must be positive");
  if (conv.tolerance_factor < 1.0)
    throw std::invalid_argument("convergence.tolerance_factor must be at least 1");

  exp.grid.gamma = agent.gamma;

  const std::vector<std::string> unread = config.unread_keys();
  if (!unread.empty()) {
    std::string message = "unknown config key(s):";
    for (const std::string& key : unread) message += " " + key;
    throw std::invalid_argument(message);
  }
  exp.config_lines = config.canonical_lines();
  exp.config_fingerprint = config.fingerprint();
  return exp;
}

std::optional<int> first_window_of_successes(const std::vector<char>& success, int window) {
  if (window < 1) throw std::invalid_argument("window must be positive");
  int streak = 0;
  for (int e = 0; e < static_cast<int>(success.size()); ++e) {
    streak = success[e] ? streak + 1 : 0;
    if (streak >= window) return e - window + 1;
  }
  return std::nullopt;
}

std::optional<int> convergence_episode(const RunRecord& record, int window) {
  std::vector<char> success;
  success.reserve(record.episodes.size());
  for (const EpisodeRow& row : record.episodes)
    success.push_back(row.eval_ran && row.eval_success ? 1 : 0);
  return first_window_of_successes(success, window);
}

namespace {

GridCoords random_goal(const GridWorldConfig& grid, Rng& rng) {
  GridCoords goal = {1, 1, 1};
  for (int axis = 0; axis < grid.dims_d; ++axis) goal[axis] = 1 + rng.uniform_int(grid.size_n);
  return goal;
}

void run_single(const ExperimentConfig& config, std::uint64_t seed, RunRecord& record) {
  Rng root(seed);
  Rng goal_rng = root.split(0);
  Rng init_rng = root.split(1);
  Rng episode_rng = root.split(2);
  Rng eval_rng = root.split(3);

  record.seed = seed;

  std::unique_ptr<Env> env;
  std::unique_ptr<GridWorld> eval_env;
  if (config.env_kind == EnvKind::GridWorld) {
    GridWorldConfig grid = config.grid;
    grid.gamma = config.agent.gamma;
    if (config.grid_goal_random) grid.goal = random_goal(grid, goal_rng);
    record.goal = grid.goal;
    auto grid_env = std::make_unique<GridWorld>(grid);
    eval_env = std::make_unique<GridWorld>(grid_env->deterministic_copy());
    env = std::move(grid_env);
  } else {
    env = std::make_unique<CartPole>(config.cartpole);
  }

  AgentConfig agent_config = config.agent;
  agent_config.init_seed = init_rng.next_u64();
  Agent agent(*env, agent_config);

  const int total_episodes = agent_config.warmup_episodes + config.episodes;
  std::vector<char> successes;
  for (int episode = 0; episode < total_episodes; ++episode) {
    EpisodeRow row;
    const auto started = std::chrono::steady_clock::now();
    row.stats = agent.run_episode(*env, episode_rng);
    row.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
            .count();
    row.warmup = episode < agent_config.warmup_episodes;
    if (config.convergence.enabled && eval_env) {
      eval_env->reset(eval_rng);
      const GridCoords start = eval_env->coords();
      const GreedyEpisodeResult greedy = agent.greedy_rollout(*eval_env, eval_rng);
      row.eval_ran = true;
      row.eval_steps = greedy.steps;
      const int optimal = std::max(1, eval_env->optimal_steps(start));
      row.eval_success =
          greedy.terminated && greedy.steps <= config.convergence.tolerance_factor * optimal;
      successes.push_back(row.eval_success ? 1 : 0);
    }
    record.total_wall_ms += row.wall_ms;
    record.episodes.push_back(row);
  }
  if (config.convergence.enabled)
    record.convergence_episode = first_window_of_successes(successes, config.convergence.window);
}

void write_run_outputs(const std::filesystem::path& base, const RunRecord& record) {
  write_run_csv((base / ("run_" + std::to_string(record.seed) + ".csv")).string(), record);
  write_timing_csv((base / ("timing_" + std::to_string(record.seed) + ".csv")).string(), record);
}

}  // namespace

std::vector<RunRecord> run_experiment(const ExperimentConfig& config, std::ostream* log) {
  namespace fs = std::filesystem;
  const fs::path base(config.output_dir);
  fs::create_directories(base);
  std::vector<RunRecord> records;
  for (int k = 0; k < config.iterations; ++k) {
    RunRecord record;
    try {
      run_single(config, config.base_seed + static_cast<std::uint64_t>(k), record);
    } catch (...) {
      // Keep whatever completed so the failure can be inspected.
      if (!record.episodes.empty()) {
        write_run_outputs(base, record);
        records.push_back(record);
      }
      write_manifest((base / "manifest.txt").string(), config, records);
      throw;
    }
    write_run_outputs(base, record);
    records.push_back(record);
    write_manifest((base / "manifest.txt").string(), config, records);
    if (log) {
      *log << "run seed=" << record.seed << " episodes=" << record.episodes.size()
           << " converged_at=";
      if (record.convergence_episode)
        *log << *record.convergence_episode;
      else
        *log << '-';
      *log << " wall_ms=" << static_cast<long long>(record.total_wall_ms + 0.5) << std::endl;
    }
  }
  return records;
}

}  // namespace symrl
