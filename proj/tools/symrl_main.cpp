#include "CLI11.hpp"

#include "symrl/config.hpp"
#include "symrl/experiment.hpp"
#include "symrl/self_check.hpp"

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

std::string side_label(const symrl::LoadedExperiment& loaded, const std::string& dir,
                       const std::string& other_name) {
  if (!loaded.name.empty() && loaded.name != other_name) return loaded.name;
  return dir;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symmetry-aware Q-learning experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  CLI::App* run_cmd = app.add_subcommand("run", "run an experiment from a config file");
  run_cmd->add_option("config", config_path, "key=value config file")->required();
  run_cmd->add_option("--set", overrides, "override a config entry as KEY=VALUE (repeatable)");

  std::string dir_a, dir_b, metric_text, out_path;
  CLI::App* sum_cmd =
      app.add_subcommand("summarize", "compare two experiment output directories");
  sum_cmd->add_option("dir_a", dir_a, "first output directory")->required();
  sum_cmd->add_option("dir_b", dir_b, "second output directory")->required();
  sum_cmd
      ->add_option("--metric", metric_text,
                   "mean_total_reward, max_total_reward, or convergence_episode")
      ->required();
  sum_cmd->add_option("--out", out_path, "also write the comparison as a one-row CSV");

  CLI::App* check_cmd = app.add_subcommand("check", "run the built-in self checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      symrl::Config config = symrl::Config::parse_file(config_path);
      for (const std::string& assignment : overrides) config.apply_override(assignment);
      const symrl::ExperimentConfig experiment = symrl::experiment_from_config(config);
      symrl::run_experiment(experiment, &std::cerr);
      std::cout << experiment.output_dir << "/manifest.txt\n";
      return 0;
    }
    if (sum_cmd->parsed()) {
      const symrl::Metric metric = symrl::metric_from_name(metric_text);
      const symrl::LoadedExperiment a = symrl::load_experiment_dir(dir_a);
      const symrl::LoadedExperiment b = symrl::load_experiment_dir(dir_b);
      const symrl::SummaryStats stats = symrl::summarize(a, b, metric);
      const std::string label_a = side_label(a, dir_a, b.name);
      const std::string label_b = side_label(b, dir_b, a.name);
      std::cout << symrl::format_summary(stats, label_a, label_b);
      if (!out_path.empty()) {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot open " + out_path + " for writing");
        out << symrl::summary_csv(stats, label_a, label_b);
      }
      return 0;
    }
    if (check_cmd->parsed()) return symrl::run_self_check(std::cout) ? 0 : 1;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 0;
}
