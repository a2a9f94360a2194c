#include "symrl/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace symrl {

namespace {

constexpr const char* kRunHeader =
    "episode,warmup,steps,base_return,shaped_return,epsilon,td_loss_mean,sym_loss_mean,"
    "sym_updates,partner_pairs,tree_nodes,tree_keys,eval_ran,eval_success,eval_steps";

std::string fmt(double x) {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10) << x;
  return out.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string::size_type begin = 0;
  while (true) {
    const auto end = line.find(sep, begin);
    parts.push_back(line.substr(begin, end == std::string::npos ? end : end - begin));
    if (end == std::string::npos) break;
    begin = end + 1;
  }
  return parts;
}

double parse_double(const std::string& text, const std::string& where) {
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0')
    throw std::runtime_error(where + ": bad number '" + text + "'");
  return value;
}

std::int64_t parse_int(const std::string& text, const std::string& where) {
  char* end = nullptr;
  const long long value = std::strtoll(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0')
    throw std::runtime_error(where + ": bad integer '" + text + "'");
  return value;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::string coords_text(const GridCoords& c) {
  return std::to_string(c[0]) + "," + std::to_string(c[1]) + "," + std::to_string(c[2]);
}

}  // namespace

void write_run_csv(const std::string& path, const RunRecord& record) {
  std::ofstream out = open_out(path);
  out << "# symrl-csv " << kCsvSchemaVersion << "\n";
  out << "# seed " << record.seed << "\n";
  out << kRunHeader << "\n";
  for (const EpisodeRow& row : record.episodes) {
    const EpisodeStats& s = row.stats;
    out << s.episode << ',' << (row.warmup ? 1 : 0) << ',' << s.steps << ','
        << fmt(s.base_return) << ',' << fmt(s.shaped_return) << ',' << fmt(s.epsilon) << ','
        << fmt(s.td_loss_mean) << ',' << fmt(s.sym_loss_mean) << ',' << s.sym_updates << ','
        << s.partner_pairs << ',' << s.tree_nodes << ',' << s.tree_keys << ','
        << (row.eval_ran ? 1 : 0) << ',' << (row.eval_success ? 1 : 0) << ',' << row.eval_steps
        << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_timing_csv(const std::string& path, const RunRecord& record) {
  std::ofstream out = open_out(path);
  out << "# symrl-timing " << kCsvSchemaVersion << "\n";
  out << "# seed " << record.seed << "\n";
  out << "episode,wall_ms\n";
  for (const EpisodeRow& row : record.episodes)
    out << row.stats.episode << ',' << fmt(row.wall_ms) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

RunRecord read_run_csv(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || line != "# symrl-csv " + std::to_string(kCsvSchemaVersion))
    throw std::runtime_error(path + ": not a run CSV (bad schema line)");
  RunRecord record;
  if (!std::getline(in, line) || line.rfind("# seed ", 0) != 0)
    throw std::runtime_error(path + ": missing seed line");
  record.seed = static_cast<std::uint64_t>(parse_int(line.substr(7), path));
  if (!std::getline(in, line) || line != kRunHeader)
    throw std::runtime_error(path + ": unexpected column header");
  int line_no = 3;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != 15) throw std::runtime_error(where + ": expected 15 fields");
    EpisodeRow row;
    row.stats.episode = static_cast<int>(parse_int(f[0], where));
    row.warmup = parse_int(f[1], where) != 0;
    row.stats.steps = static_cast<int>(parse_int(f[2], where));
    row.stats.base_return = parse_double(f[3], where);
    row.stats.shaped_return = parse_double(f[4], where);
    row.stats.epsilon = parse_double(f[5], where);
    row.stats.td_loss_mean = parse_double(f[6], where);
    row.stats.sym_loss_mean = parse_double(f[7], where);
    row.stats.sym_updates = parse_int(f[8], where);
    row.stats.partner_pairs = static_cast<int>(parse_int(f[9], where));
    row.stats.tree_nodes = static_cast<int>(parse_int(f[10], where));
    row.stats.tree_keys = static_cast<int>(parse_int(f[11], where));
    row.eval_ran = parse_int(f[12], where) != 0;
    row.eval_success = parse_int(f[13], where) != 0;
    row.eval_steps = static_cast<int>(parse_int(f[14], where));
    record.episodes.push_back(row);
  }
  return record;
}

void write_manifest(const std::string& path, const ExperimentConfig& config,
                    const std::vector<RunRecord>& records) {
  std::ofstream out = open_out(path);
  out << "symrl-manifest 1\n";
  out << "name " << config.name << "\n";
  out << "env " << (config.env_kind == EnvKind::GridWorld ? "gridworld" : "cartpole") << "\n";
  out << "agent " << (config.agent_kind == AgentKind::DQN ? "dqn" : "symdqn") << "\n";
  out << "episodes " << config.episodes << "\n";
  out << "warmup " << config.agent.warmup_episodes << "\n";
  out << "iterations " << config.iterations << "\n";
  out << "base-seed " << config.base_seed << "\n";
  out << "fingerprint " << std::hex << std::setw(16) << std::setfill('0')
      << config.config_fingerprint << std::dec << std::setfill(' ') << "\n";
  for (const std::string& cfg_line : config.config_lines) out << "cfg " << cfg_line << "\n";
  for (const RunRecord& record : records) {
    out << "run seed=" << record.seed << " rows=" << record.episodes.size() << " converged_at=";
    if (record.convergence_episode)
      out << *record.convergence_episode;
    else
      out << '-';
    out << " goal=" << coords_text(record.goal) << " csv=run_" << record.seed << ".csv\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

RunSummary summarize_run(const RunRecord& record, int warmup_episodes) {
  RunSummary summary;
  summary.seed = record.seed;
  summary.total_episodes = static_cast<int>(record.episodes.size());
  summary.convergence_episode = record.convergence_episode;
  bool first = true;
  double sum = 0.0;
  for (const EpisodeRow& row : record.episodes) {
    if (row.warmup) continue;
    ++summary.learning_episodes;
    sum += row.stats.base_return;
    if (first || row.stats.base_return > summary.max_total_reward)
      summary.max_total_reward = row.stats.base_return;
    first = false;
  }
  if (summary.learning_episodes == 0)
    throw std::invalid_argument("summarize_run: no learning episodes (seed " +
                                std::to_string(record.seed) + ")");
  if (summary.total_episodes - summary.learning_episodes != warmup_episodes)
    throw std::invalid_argument("summarize_run: warmup row count mismatch (seed " +
                                std::to_string(record.seed) + ")");
  summary.mean_total_reward = sum / summary.learning_episodes;
  return summary;
}

LoadedExperiment load_experiment_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path base(dir);
  const std::string manifest_path = (base / "manifest.txt").string();
  std::ifstream in = open_in(manifest_path);
  std::string line;
  if (!std::getline(in, line) || line != "symrl-manifest 1")
    throw std::runtime_error(manifest_path + ": not a manifest");
  LoadedExperiment loaded;
  int warmup = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto space = line.find(' ');
    const std::string head = line.substr(0, space);
    const std::string rest = space == std::string::npos ? "" : line.substr(space + 1);
    if (head == "name") {
      loaded.name = rest;
    } else if (head == "episodes") {
      loaded.episodes = static_cast<int>(parse_int(rest, manifest_path));
    } else if (head == "warmup") {
      warmup = static_cast<int>(parse_int(rest, manifest_path));
    } else if (head == "run") {
      std::string csv_name;
      std::optional<int> converged;
      std::uint64_t seed = 0;
      for (const std::string& field : split(rest, ' ')) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "seed")
          seed = static_cast<std::uint64_t>(parse_int(value, manifest_path));
        else if (key == "csv")
          csv_name = value;
        else if (key == "converged_at" && value != "-")
          converged = static_cast<int>(parse_int(value, manifest_path));
      }
      if (csv_name.empty()) throw std::runtime_error(manifest_path + ": run line without csv=");
      RunRecord record = read_run_csv((base / csv_name).string());
      if (record.seed != seed)
        throw std::runtime_error(manifest_path + ": seed mismatch for " + csv_name);
      record.convergence_episode = converged;
      loaded.runs.push_back(summarize_run(record, warmup));
    }
  }
  loaded.warmup = warmup;
  if (loaded.runs.empty()) throw std::runtime_error(manifest_path + ": no runs");
  return loaded;
}

Metric metric_from_name(const std::string& name) {
  if (name == "mean_total_reward") return Metric::MeanTotalReward;
  if (name == "max_total_reward") return Metric::MaxTotalReward;
  if (name == "convergence_episode") return Metric::ConvergenceEpisode;
  throw std::invalid_argument("unknown metric '" + name +
                              "' (expected mean_total_reward, max_total_reward, or "
                              "convergence_episode)");
}

std::string metric_name(Metric metric) {
  switch (metric) {
    case Metric::MeanTotalReward: return "mean_total_reward";
    case Metric::MaxTotalReward: return "max_total_reward";
    case Metric::ConvergenceEpisode: return "convergence_episode";
  }
  throw std::logic_error("metric_name: bad metric");
}

namespace {

std::vector<double> metric_samples(const LoadedExperiment& exp, Metric metric, int* censored) {
  std::vector<double> samples;
  samples.reserve(exp.runs.size());
  for (const RunSummary& run : exp.runs) {
    switch (metric) {
      case Metric::MeanTotalReward: samples.push_back(run.mean_total_reward); break;
      case Metric::MaxTotalReward: samples.push_back(run.max_total_reward); break;
      case Metric::ConvergenceEpisode:
        if (run.convergence_episode) {
          samples.push_back(static_cast<double>(*run.convergence_episode));
        } else {
          // Censored: the run never converged within its episode budget.
          samples.push_back(static_cast<double>(run.total_episodes));
          ++*censored;
        }
        break;
    }
  }
  return samples;
}

}  // namespace

SummaryStats summarize(const LoadedExperiment& a, const LoadedExperiment& b, Metric metric) {
  SummaryStats stats;
  stats.metric = metric;
  const std::vector<double> xs = metric_samples(a, metric, &stats.censored_a);
  const std::vector<double> ys = metric_samples(b, metric, &stats.censored_b);
  stats.a = mean_std(xs);
  stats.b = mean_std(ys);
  stats.welch = welch_t_test(xs, ys);
  return stats;
}

std::string format_summary(const SummaryStats& stats, const std::string& label_a,
                           const std::string& label_b) {
  std::ostringstream out;
  const int label_width =
      static_cast<int>(std::max<std::size_t>({label_a.size(), label_b.size(), 4})) + 2;
  out << "metric: " << metric_name(stats.metric) << "\n";
  out << std::left << std::setw(label_width) << "side" << std::right << std::setw(6) << "n"
      << std::setw(14) << "mean" << std::setw(14) << "std";
  if (stats.metric == Metric::ConvergenceEpisode) out << std::setw(10) << "censored";
  out << "\n";
  const auto row = [&](const std::string& label, const MeanStd& m, int censored) {
    out << std::left << std::setw(label_width) << label << std::right << std::setw(6) << m.n
        << std::setw(14) << std::fixed << std::setprecision(4) << m.mean << std::setw(14)
        << m.stddev;
    out.unsetf(std::ios::fixed);
    if (stats.metric == Metric::ConvergenceEpisode) out << std::setw(10) << censored;
    out << "\n";
  };
  row(label_a, stats.a, stats.censored_a);
  row(label_b, stats.b, stats.censored_b);
  out << std::setprecision(6) << "welch: t = " << stats.welch.t << ", dof = " << stats.welch.dof
      << ", p = " << stats.welch.p << "\n";
  return out.str();
}

std::string summary_csv(const SummaryStats& stats, const std::string& label_a,
                        const std::string& label_b) {
  std::ostringstream out;
  out << "metric,side_a,n_a,mean_a,std_a,censored_a,side_b,n_b,mean_b,std_b,censored_b,t,dof,p\n";
  out << metric_name(stats.metric) << ',' << label_a << ',' << stats.a.n << ','
      << fmt(stats.a.mean) << ',' << fmt(stats.a.stddev) << ',' << stats.censored_a << ','
      << label_b << ',' << stats.b.n << ',' << fmt(stats.b.mean) << ',' << fmt(stats.b.stddev)
      << ',' << stats.censored_b << ',' << fmt(stats.welch.t) << ',' << fmt(stats.welch.dof)
      << ',' << fmt(stats.welch.p) << "\n";
  return out.str();
}

}  // namespace symrl
