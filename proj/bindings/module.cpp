#include <pybind11/eigen.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "symrl/agent.hpp"
#include "symrl/cartpole.hpp"
#include "symrl/config.hpp"
#include "symrl/experiment.hpp"
#include "symrl/gridworld.hpp"
#include "symrl/mlp.hpp"
#include "symrl/quotient.hpp"
#include "symrl/replay.hpp"
#include "symrl/reward_tree.hpp"
#include "symrl/rng.hpp"
#include "symrl/self_check.hpp"
#include "symrl/similarity.hpp"
#include "symrl/stats.hpp"
#include "symrl/symmetry_map.hpp"
#include "symrl/tabular_mdp.hpp"
#include "symrl/value_iteration.hpp"

#include <sstream>

namespace py = pybind11;
using namespace symrl;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Symmetry detection and symmetry-regularized Q-learning";

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("next_u64", &Rng::next_u64)
      .def("uniform", &Rng::uniform)
      .def("uniform_int", &Rng::uniform_int, py::arg("bound"))
      .def("uniform_range", &Rng::uniform_range, py::arg("lo"), py::arg("hi"))
      .def("split", &Rng::split, py::arg("stream"))
      .def_property_readonly("seed", &Rng::seed);

  py::class_<Partition>(m, "Partition")
      .def_static("from_blocks", &Partition::from_blocks, py::arg("universe_size"),
                  py::arg("blocks"))
      .def_static("from_block_of", &Partition::from_block_of, py::arg("block_of"))
      .def_readonly("universe_size", &Partition::universe_size)
      .def_readonly("block_count", &Partition::block_count)
      .def_readonly("block_of", &Partition::block_of)
      .def("blocks", &Partition::blocks)
      .def(py::self == py::self);
  m.def("validate_partition", &validate_partition, py::arg("blocks"), py::arg("universe_size"));
  m.def("is_coarser", &is_coarser, py::arg("coarse"), py::arg("fine"));
  m.def("project_partition", &project_partition, py::arg("partition"),
        py::arg("pair_of_element"), py::arg("x_size"));

  py::class_<TabularMDP>(m, "TabularMDP")
      .def(py::init<int, int>(), py::arg("states"), py::arg("actions"))
      .def("add_transition", &TabularMDP::add_transition, py::arg("state"), py::arg("action"),
           py::arg("next"), py::arg("prob"), py::arg("reward") = 0.0)
      .def("set_terminal", &TabularMDP::set_terminal, py::arg("state"))
      .def("freeze", &TabularMDP::freeze, py::arg("tol") = TabularMDP::kDefaultTol)
      .def_property_readonly("state_count", &TabularMDP::state_count)
      .def_property_readonly("action_count", &TabularMDP::action_count)
      .def_property_readonly("pair_count", &TabularMDP::pair_count)
      .def("pair_id", &TabularMDP::pair_id, py::arg("state"), py::arg("action"))
      .def("pair", &TabularMDP::pair, py::arg("pair_id"))
      .def("admissible", &TabularMDP::admissible)
      .def("actions_at", &TabularMDP::actions_at, py::arg("state"))
      .def("is_terminal", &TabularMDP::is_terminal, py::arg("state"))
      .def("transition", &TabularMDP::transition, py::arg("state"), py::arg("action"),
           py::arg("next"))
      .def("reward", &TabularMDP::reward, py::arg("state"), py::arg("action"), py::arg("next"))
      .def("to_text", &TabularMDP::to_text)
      .def_static("from_text", &TabularMDP::from_text, py::arg("text"));

  py::class_<SymmetryMap>(m, "SymmetryMap")
      .def(py::init<>())
      .def_static("identity", &SymmetryMap::identity, py::arg("mdp"))
      .def_readwrite("f", &SymmetryMap::f)
      .def_readwrite("g", &SymmetryMap::g)
      .def("apply", &SymmetryMap::apply, py::arg("state"), py::arg("action"));
  m.def("check_symmetry", &check_symmetry, py::arg("mdp"), py::arg("map"),
        py::arg("tol") = 1e-9);
  m.def("equivalence_classes", &equivalence_classes, py::arg("mdp"), py::arg("map"),
        py::arg("tol") = 1e-9);

  py::class_<Quotient>(m, "Quotient")
      .def_readonly("mdp", &Quotient::mdp)
      .def_readonly("state_blocks", &Quotient::state_blocks)
      .def_readonly("classes", &Quotient::classes);
  m.def("build_quotient", &build_quotient, py::arg("mdp"), py::arg("classes"),
        py::arg("tol") = 1e-9);
  m.def("lift_q", &lift_q, py::arg("quotient"), py::arg("original"), py::arg("quotient_q"));

  m.def("value_iteration", &value_iteration, py::arg("mdp"), py::arg("gamma"),
        py::arg("tol") = 1e-9, py::arg("max_iterations") = 1000000);
  m.def("state_values", &state_values, py::arg("mdp"), py::arg("q"));
  m.def("greedy_action_sets", &greedy_action_sets, py::arg("mdp"), py::arg("q"),
        py::arg("tie_tol") = 1e-6);

  py::class_<SAKey>(m, "SAKey")
      .def(py::init([](int state, int action) {
             return SAKey{state, action};
           }),
           py::arg("state"), py::arg("action"))
      .def_readwrite("state", &SAKey::state)
      .def_readwrite("action", &SAKey::action)
      .def(py::self == py::self)
      .def(py::self < py::self)
      .def("__repr__", [](const SAKey& key) {
        std::ostringstream out;
        out << "SAKey(" << key.state << ", " << key.action << ")";
        return out.str();
      });

  py::class_<StepResult>(m, "StepResult")
      .def_readonly("base_reward", &StepResult::base_reward)
      .def_readonly("shaped_reward", &StepResult::shaped_reward)
      .def_readonly("terminated", &StepResult::terminated)
      .def_readonly("truncated", &StepResult::truncated);

  py::enum_<QLayout>(m, "QLayout")
      .value("PerPair", QLayout::PerPair)
      .value("PerState", QLayout::PerState);

  py::class_<Env>(m, "Env")
      .def_property_readonly("action_count", &Env::action_count)
      .def_property_readonly("observation_size", &Env::observation_size)
      .def_property_readonly("input_size", &Env::input_size)
      .def_property_readonly("q_layout", &Env::q_layout)
      .def("reset", &Env::reset, py::arg("rng"))
      .def("step", &Env::step, py::arg("action"), py::arg("rng"))
      .def("observation", &Env::observation)
      .def_property_readonly("done", &Env::done)
      .def_property_readonly("steps", &Env::steps)
      .def("encode",
           [](const Env& env, const std::vector<double>& obs, int action) {
             std::vector<double> out(env.input_size());
             env.encode(obs.data(), action, out.data());
             return out;
           },
           py::arg("obs"), py::arg("action"))
      .def("discrete_key",
           [](const Env& env, const std::vector<double>& obs, int action) {
             return env.discrete_key(obs.data(), action);
           },
           py::arg("obs"), py::arg("action"));

  py::enum_<Shaping>(m, "Shaping")
      .value("NoShaping", Shaping::None)
      .value("Pot1", Shaping::Pot1)
      .value("Pot2", Shaping::Pot2);

  py::class_<GridWorldConfig>(m, "GridWorldConfig")
      .def(py::init<>())
      .def_readwrite("size_n", &GridWorldConfig::size_n)
      .def_readwrite("dims_d", &GridWorldConfig::dims_d)
      .def_readwrite("slip_prob", &GridWorldConfig::slip_prob)
      .def_readwrite("goal", &GridWorldConfig::goal)
      .def_readwrite("gamma", &GridWorldConfig::gamma)
      .def_readwrite("max_steps", &GridWorldConfig::max_steps)
      .def_readwrite("shaping", &GridWorldConfig::shaping)
      .def_readwrite("shaping_sign", &GridWorldConfig::shaping_sign)
      .def_readwrite("uniform_start", &GridWorldConfig::uniform_start)
      .def_readwrite("start", &GridWorldConfig::start);

  m.def("potential", &potential, py::arg("kind"), py::arg("state"), py::arg("goal"),
        py::arg("dims"), py::arg("gamma"));
  m.def("potential_shaping", &potential_shaping, py::arg("kind"), py::arg("s"),
        py::arg("s_next"), py::arg("goal"), py::arg("dims"), py::arg("gamma"));

  py::class_<GridWorld, Env>(m, "GridWorld")
      .def(py::init<const GridWorldConfig&>(), py::arg("config"))
      .def_property_readonly("config", &GridWorld::config)
      .def_property_readonly("coords", &GridWorld::coords)
      .def_property_readonly("cell_count", &GridWorld::cell_count)
      .def("cell_index", &GridWorld::cell_index, py::arg("coords"))
      .def("coords_of", &GridWorld::coords_of, py::arg("index"))
      .def("optimal_steps", &GridWorld::optimal_steps, py::arg("from_coords"))
      .def("deterministic_copy", &GridWorld::deterministic_copy)
      .def("tabular", &GridWorld::tabular)
      .def("axis_reflection", &GridWorld::axis_reflection, py::arg("axis"));

  py::class_<CartPoleConfig>(m, "CartPoleConfig")
      .def(py::init<>())
      .def_readwrite("theta_bound", &CartPoleConfig::theta_bound)
      .def_readwrite("x_bound", &CartPoleConfig::x_bound)
      .def_readwrite("omega_bound", &CartPoleConfig::omega_bound)
      .def_readwrite("v_bound", &CartPoleConfig::v_bound)
      .def_readwrite("levels", &CartPoleConfig::levels)
      .def_readwrite("max_steps", &CartPoleConfig::max_steps)
      .def_readwrite("reset_range", &CartPoleConfig::reset_range)
      .def_readwrite("shaping", &CartPoleConfig::shaping);

  m.def("discretize_component", &discretize_component, py::arg("value"), py::arg("bound"),
        py::arg("levels"));
  m.def("cartpole_shaping", &cartpole_shaping, py::arg("indices"), py::arg("levels"));

  py::class_<CartPole, Env>(m, "CartPole")
      .def(py::init<const CartPoleConfig&>(), py::arg("config"))
      .def_property_readonly("config", &CartPole::config)
      .def_property_readonly("state", &CartPole::state)
      .def("set_state", &CartPole::set_state, py::arg("state"))
      .def("discretize", &CartPole::discretize, py::arg("state"))
      .def("dynamics", &CartPole::dynamics, py::arg("state"), py::arg("action"));

  m.def("quantize_reward", &quantize_reward, py::arg("reward"), py::arg("quantum"));
  py::class_<RewardHistoryTree>(m, "RewardHistoryTree")
      .def(py::init<int, double, int>(), py::arg("depth_limit"), py::arg("quantum") = 1e-6,
           py::arg("node_entry_cap") = 512)
      .def("insert_episode", &RewardHistoryTree::insert_episode, py::arg("keys"),
           py::arg("rewards"))
      .def_property_readonly("node_count", &RewardHistoryTree::node_count)
      .def_property_readonly("key_count", &RewardHistoryTree::key_count)
      .def_property_readonly("depth_limit", &RewardHistoryTree::depth_limit)
      .def_property_readonly("dropped_entries", &RewardHistoryTree::dropped_entries)
      .def("keys", &RewardHistoryTree::keys);

  py::class_<SimilarityTable>(m, "SimilarityTable")
      .def("similarity",
           [](const SimilarityTable& table, const SAKey& a, const SAKey& b) {
             return table.similarity(a, b);
           },
           py::arg("a"), py::arg("b"))
      .def("occurrences",
           [](const SimilarityTable& table, const SAKey& key) -> std::int64_t {
             const int id = table.id_of_key(key);
             return id < 0 ? 0 : table.occurrences(id);
           },
           py::arg("key"))
      .def("co_occurrences",
           [](const SimilarityTable& table, const SAKey& a, const SAKey& b) -> std::int64_t {
             const int id_a = table.id_of_key(a);
             const int id_b = table.id_of_key(b);
             return (id_a < 0 || id_b < 0) ? 0 : table.co_occurrences(id_a, id_b);
           },
           py::arg("a"), py::arg("b"));
  m.def("compute_similarities", &compute_similarities, py::arg("tree"), py::arg("l0"),
        py::arg("i"));

  py::class_<SymmetryIndex>(m, "SymmetryIndex")
      .def(py::init<>())
      .def("update", &SymmetryIndex::update, py::arg("table"), py::arg("delta"),
           py::arg("min_support"), py::arg("cap"))
      .def("partners",
           [](const SymmetryIndex& index, const SAKey& key) {
             std::vector<std::pair<SAKey, double>> out;
             for (const auto& partner : index.partners(key))
               out.emplace_back(partner.key, partner.chi);
             return out;
           },
           py::arg("key"))
      .def_property_readonly("partner_pair_count", &SymmetryIndex::partner_pair_count);

  py::class_<MLP>(m, "MLP")
      .def(py::init<const std::vector<int>&, std::uint64_t>(), py::arg("layer_sizes"),
           py::arg("seed"))
      .def("forward", &MLP::forward, py::arg("inputs"))
      .def_property_readonly("layer_sizes", &MLP::layer_sizes)
      .def("save_bytes", &MLP::save_bytes)
      .def_static("load_bytes", &MLP::load_bytes, py::arg("bytes"));

  py::class_<EpsilonSchedule>(m, "EpsilonSchedule")
      .def(py::init<>())
      .def_readwrite("start", &EpsilonSchedule::start)
      .def_readwrite("floor", &EpsilonSchedule::floor)
      .def_readwrite("decay_rate", &EpsilonSchedule::decay_rate);
  m.def("epsilon_at", &epsilon_at, py::arg("schedule"), py::arg("episode"));

  py::class_<DetectorConfig>(m, "DetectorConfig")
      .def(py::init<>())
      .def_readwrite("enabled", &DetectorConfig::enabled)
      .def_readwrite("delta", &DetectorConfig::delta)
      .def_readwrite("l0", &DetectorConfig::l0)
      .def_readwrite("i", &DetectorConfig::i)
      .def_readwrite("min_support", &DetectorConfig::min_support)
      .def_readwrite("partner_cap", &DetectorConfig::partner_cap)
      .def_readwrite("reward_quantum", &DetectorConfig::reward_quantum)
      .def_readwrite("node_entry_cap", &DetectorConfig::node_entry_cap)
      .def_readwrite("recompute_period", &DetectorConfig::recompute_period);

  py::class_<AgentConfig>(m, "AgentConfig")
      .def(py::init<>())
      .def_readwrite("gamma", &AgentConfig::gamma)
      .def_readwrite("lambda_sym", &AgentConfig::lambda_sym)
      .def_readwrite("batch_size", &AgentConfig::batch_size)
      .def_readwrite("warmup_episodes", &AgentConfig::warmup_episodes)
      .def_readwrite("learning_rate", &AgentConfig::learning_rate)
      .def_readwrite("target_refresh_period", &AgentConfig::target_refresh_period)
      .def_readwrite("replay_capacity", &AgentConfig::replay_capacity)
      .def_readwrite("hidden_sizes", &AgentConfig::hidden_sizes)
      .def_readwrite("epsilon", &AgentConfig::epsilon)
      .def_readwrite("detector", &AgentConfig::detector)
      .def_readwrite("init_seed", &AgentConfig::init_seed);

  m.def("select_action", &select_action, py::arg("q_values"), py::arg("epsilon"),
        py::arg("rng"));

  py::class_<EpisodeStats>(m, "EpisodeStats")
      .def_readonly("episode", &EpisodeStats::episode)
      .def_readonly("steps", &EpisodeStats::steps)
      .def_readonly("base_return", &EpisodeStats::base_return)
      .def_readonly("shaped_return", &EpisodeStats::shaped_return)
      .def_readonly("epsilon", &EpisodeStats::epsilon)
      .def_readonly("td_loss_mean", &EpisodeStats::td_loss_mean)
      .def_readonly("sym_loss_mean", &EpisodeStats::sym_loss_mean)
      .def_readonly("sym_updates", &EpisodeStats::sym_updates)
      .def_readonly("partner_pairs", &EpisodeStats::partner_pairs)
      .def_readonly("tree_nodes", &EpisodeStats::tree_nodes)
      .def_readonly("tree_keys", &EpisodeStats::tree_keys);

  py::class_<GreedyEpisodeResult>(m, "GreedyEpisodeResult")
      .def_readonly("steps", &GreedyEpisodeResult::steps)
      .def_readonly("terminated", &GreedyEpisodeResult::terminated);

  py::class_<Agent>(m, "Agent")
      .def(py::init<const Env&, const AgentConfig&>(), py::arg("env"), py::arg("config"))
      .def("run_episode", &Agent::run_episode, py::arg("env"), py::arg("rng"))
      .def("run_greedy_episode", &Agent::run_greedy_episode, py::arg("env"), py::arg("rng"))
      .def("greedy_rollout", &Agent::greedy_rollout, py::arg("env"), py::arg("rng"))
      .def("q_values", &Agent::q_values, py::arg("env"), py::arg("obs"))
      .def_property_readonly("episodes_run", &Agent::episodes_run)
      .def_property_readonly("tree", &Agent::tree, py::return_value_policy::reference_internal)
      .def_property_readonly("index", &Agent::index, py::return_value_policy::reference_internal)
      .def_property_readonly("network",
                             static_cast<const MLP& (Agent::*)() const>(&Agent::network),
                             py::return_value_policy::reference_internal);

  py::class_<MeanStd>(m, "MeanStd")
      .def_readonly("mean", &MeanStd::mean)
      .def_readonly("stddev", &MeanStd::stddev)
      .def_readonly("n", &MeanStd::n);
  m.def("mean_std", &mean_std, py::arg("xs"));
  py::class_<WelchResult>(m, "WelchResult")
      .def_readonly("t", &WelchResult::t)
      .def_readonly("dof", &WelchResult::dof)
      .def_readonly("p", &WelchResult::p);
  m.def("welch_t_test", &welch_t_test, py::arg("xs"), py::arg("ys"));
  m.def("regularized_incomplete_beta", &regularized_incomplete_beta, py::arg("a"), py::arg("b"),
        py::arg("x"));

  py::class_<Config>(m, "Config")
      .def_static("parse_file", &Config::parse_file, py::arg("path"))
      .def_static("parse_text", &Config::parse_text, py::arg("text"),
                  py::arg("origin") = "<text>")
      .def("apply_override", &Config::apply_override, py::arg("assignment"))
      .def("fingerprint", &Config::fingerprint)
      .def("canonical_lines", &Config::canonical_lines);

  py::enum_<EnvKind>(m, "EnvKind")
      .value("GridWorld", EnvKind::GridWorld)
      .value("CartPole", EnvKind::CartPole);
  py::enum_<AgentKind>(m, "AgentKind")
      .value("DQN", AgentKind::DQN)
      .value("SymDQN", AgentKind::SymDQN);

  py::class_<ConvergenceConfig>(m, "ConvergenceConfig")
      .def(py::init<>())
      .def_readwrite("enabled", &ConvergenceConfig::enabled)
      .def_readwrite("window", &ConvergenceConfig::window)
      .def_readwrite("tolerance_factor", &ConvergenceConfig::tolerance_factor);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("name", &ExperimentConfig::name)
      .def_readwrite("env_kind", &ExperimentConfig::env_kind)
      .def_readwrite("agent_kind", &ExperimentConfig::agent_kind)
      .def_readwrite("grid", &ExperimentConfig::grid)
      .def_readwrite("grid_goal_random", &ExperimentConfig::grid_goal_random)
      .def_readwrite("cartpole", &ExperimentConfig::cartpole)
      .def_readwrite("agent", &ExperimentConfig::agent)
      .def_readwrite("convergence", &ExperimentConfig::convergence)
      .def_readwrite("episodes", &ExperimentConfig::episodes)
      .def_readwrite("iterations", &ExperimentConfig::iterations)
      .def_readwrite("base_seed", &ExperimentConfig::base_seed)
      .def_readwrite("output_dir", &ExperimentConfig::output_dir);
  m.def("experiment_from_config", &experiment_from_config, py::arg("config"));

  py::class_<EpisodeRow>(m, "EpisodeRow")
      .def_readonly("stats", &EpisodeRow::stats)
      .def_readonly("warmup", &EpisodeRow::warmup)
      .def_readonly("eval_ran", &EpisodeRow::eval_ran)
      .def_readonly("eval_success", &EpisodeRow::eval_success)
      .def_readonly("eval_steps", &EpisodeRow::eval_steps);
  py::class_<RunRecord>(m, "RunRecord")
      .def_readonly("seed", &RunRecord::seed)
      .def_readonly("episodes", &RunRecord::episodes)
      .def_readonly("convergence_episode", &RunRecord::convergence_episode)
      .def_readonly("goal", &RunRecord::goal);
  m.def("run_experiment",
        [](const ExperimentConfig& config) { return run_experiment(config, nullptr); },
        py::arg("config"));
  m.def("read_run_csv", &read_run_csv, py::arg("path"));
  m.def("load_experiment_dir", &load_experiment_dir, py::arg("dir"));
  py::enum_<Metric>(m, "Metric")
      .value("MeanTotalReward", Metric::MeanTotalReward)
      .value("MaxTotalReward", Metric::MaxTotalReward)
      .value("ConvergenceEpisode", Metric::ConvergenceEpisode);
  m.def("metric_from_name", &metric_from_name, py::arg("name"));
  m.def("metric_name", &metric_name, py::arg("metric"));
  m.def("summarize", &summarize, py::arg("a"), py::arg("b"), py::arg("metric"));
  m.def("summarize",
        [](const LoadedExperiment& a, const LoadedExperiment& b, const std::string& metric) {
          return summarize(a, b, metric_from_name(metric));
        },
        py::arg("a"), py::arg("b"), py::arg("metric"));
  py::class_<LoadedExperiment>(m, "LoadedExperiment")
      .def_readonly("name", &LoadedExperiment::name)
      .def_readonly("episodes", &LoadedExperiment::episodes)
      .def_readonly("warmup", &LoadedExperiment::warmup)
      .def_readonly("runs", &LoadedExperiment::runs);
  py::class_<RunSummary>(m, "RunSummary")
      .def_readonly("seed", &RunSummary::seed)
      .def_readonly("mean_total_reward", &RunSummary::mean_total_reward)
      .def_readonly("max_total_reward", &RunSummary::max_total_reward)
      .def_readonly("convergence_episode", &RunSummary::convergence_episode)
      .def_readonly("total_episodes", &RunSummary::total_episodes)
      .def_readonly("learning_episodes", &RunSummary::learning_episodes);
  py::class_<SummaryStats>(m, "SummaryStats")
      .def_readonly("metric", &SummaryStats::metric)
      .def_readonly("a", &SummaryStats::a)
      .def_readonly("b", &SummaryStats::b)
      .def_readonly("welch", &SummaryStats::welch)
      .def_readonly("censored_a", &SummaryStats::censored_a)
      .def_readonly("censored_b", &SummaryStats::censored_b);

  m.def("run_self_check", [] {
    std::ostringstream out;
    const bool ok = run_self_check(out);
    return py::make_tuple(ok, out.str());
  });
}
