#pragma once

#include "symrl/agent.hpp"
#include "symrl/cartpole.hpp"
#include "symrl/config.hpp"
#include "symrl/gridworld.hpp"
#include "symrl/stats.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace symrl {

enum class EnvKind { GridWorld, CartPole };
enum class AgentKind { DQN, SymDQN };

struct ConvergenceConfig {
  bool enabled = false;  // grid-world runs only
  int window = 10;
  double tolerance_factor = 1.05;
};

// A fully resolved experiment: environment, agent, detector, and run grid.
// `episodes` counts learning episodes; warmup episodes run in addition,
// so each run performs agent.warmup_episodes + episodes episodes total.
struct ExperimentConfig {
  std::string name = "experiment";
  EnvKind env_kind = EnvKind::GridWorld;
  AgentKind agent_kind = AgentKind::SymDQN;
  GridWorldConfig grid;
  bool grid_goal_random = true;
  CartPoleConfig cartpole;
  AgentConfig agent;
  ConvergenceConfig convergence;
  int episodes = 300;
  int iterations = 10;
  std::uint64_t base_seed = 1;
  std::string output_dir = "out";
  std::vector<std::string> config_lines;  // canonical key=value lines for the manifest
  std::uint64_t config_fingerprint = 0;
};

// Builds an ExperimentConfig from parsed key=value data, applying
// environment-specific defaults. Rejects unknown keys.
ExperimentConfig experiment_from_config(Config& config);

struct EpisodeRow {
  EpisodeStats stats;
  bool warmup = false;
  bool eval_ran = false;
  bool eval_success = false;
  int eval_steps = 0;
  double wall_ms = 0.0;  // kept out of the deterministic run CSV
};

struct RunRecord {
  std::uint64_t seed = 0;
  std::vector<EpisodeRow> episodes;
  std::optional<int> convergence_episode;  // row index of the first all-success window
  double total_wall_ms = 0.0;
  GridCoords goal = {1, 1, 1};  // resolved goal for grid-world runs
};

// First index e such that success[e .. e+window-1] are all true.
std::optional<int> first_window_of_successes(const std::vector<char>& success, int window);
std::optional<int> convergence_episode(const RunRecord& record, int window);

// Executes `iterations` seeded runs, writing per-run CSVs, timing CSVs, and
// a manifest into config.output_dir. Deterministic up to wall-clock fields.
// On a failing run, partial outputs are written before the error propagates.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr);

// --- CSV and manifest ---

inline constexpr int kCsvSchemaVersion = 1;

void write_run_csv(const std::string& path, const RunRecord& record);
void write_timing_csv(const std::string& path, const RunRecord& record);
RunRecord read_run_csv(const std::string& path);
void write_manifest(const std::string& path, const ExperimentConfig& config,
                    const std::vector<RunRecord>& records);

// --- Summaries across runs ---

struct RunSummary {
  std::uint64_t seed = 0;
  double mean_total_reward = 0.0;  // mean base return over learning episodes
  double max_total_reward = 0.0;
  std::optional<int> convergence_episode;
  int total_episodes = 0;
  int learning_episodes = 0;
};

struct LoadedExperiment {
  std::string name;
  int episodes = 0;  // learning episodes per run
  int warmup = 0;
  std::vector<RunSummary> runs;
};

RunSummary summarize_run(const RunRecord& record, int warmup_episodes);
LoadedExperiment load_experiment_dir(const std::string& dir);

enum class Metric { MeanTotalReward, MaxTotalReward, ConvergenceEpisode };
Metric metric_from_name(const std::string& name);
std::string metric_name(Metric metric);

struct SummaryStats {
  Metric metric = Metric::MeanTotalReward;
  MeanStd a, b;
  WelchResult welch;
  // Convergence metric only: runs that never converged, censored at their
  // learning-episode count.
  int censored_a = 0;
  int censored_b = 0;
};

SummaryStats summarize(const LoadedExperiment& a, const LoadedExperiment& b, Metric metric);
std::string format_summary(const SummaryStats& stats, const std::string& label_a,
                           const std::string& label_b);
std::string summary_csv(const SummaryStats& stats, const std::string& label_a,
                        const std::string& label_b);

}  // namespace symrl
