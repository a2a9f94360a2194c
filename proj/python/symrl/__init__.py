"""Symmetry detection and symmetry-regularized Q-learning."""

from symrl._core import (  # noqa: F401
    Agent,
    AgentConfig,
    AgentKind,
    CartPole,
    CartPoleConfig,
    Config,
    ConvergenceConfig,
    DetectorConfig,
    Env,
    EnvKind,
    EpisodeRow,
    EpisodeStats,
    EpsilonSchedule,
    ExperimentConfig,
    GreedyEpisodeResult,
    GridWorld,
    GridWorldConfig,
    LoadedExperiment,
    MLP,
    MeanStd,
    Metric,
    Partition,
    QLayout,
    Quotient,
    RewardHistoryTree,
    Rng,
    RunRecord,
    RunSummary,
    SAKey,
    Shaping,
    SimilarityTable,
    StepResult,
    SummaryStats,
    SymmetryIndex,
    SymmetryMap,
    TabularMDP,
    WelchResult,
    build_quotient,
    cartpole_shaping,
    check_symmetry,
    compute_similarities,
    discretize_component,
    epsilon_at,
    equivalence_classes,
    experiment_from_config,
    greedy_action_sets,
    is_coarser,
    lift_q,
    load_experiment_dir,
    mean_std,
    metric_from_name,
    metric_name,
    potential,
    potential_shaping,
    project_partition,
    quantize_reward,
    read_run_csv,
    regularized_incomplete_beta,
    run_experiment,
    run_self_check,
    select_action,
    state_values,
    summarize,
    validate_partition,
    value_iteration,
    welch_t_test,
)

__all__ = [name for name in dir() if not name.startswith("_")]
