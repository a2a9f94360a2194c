"""End-to-end checks that the python module exposes a working core."""

import math

import pytest

symrl = pytest.importorskip("symrl")


def test_self_check_passes():
    ok, text = symrl.run_self_check()
    assert ok, text
    assert "ok" in text


def test_value_iteration_on_a_grid():
    config = symrl.GridWorldConfig()
    config.size_n = 3
    config.dims_d = 2
    config.slip_prob = 0.0
    config.goal = (2, 2, 1)
    env = symrl.GridWorld(config)
    mdp = env.tabular()
    q = symrl.value_iteration(mdp, 0.9)
    v = symrl.state_values(mdp, q)
    assert v[env.cell_index((2, 2, 1))] == pytest.approx(0.0)
    assert v[env.cell_index((1, 1, 1))] == pytest.approx(0.9)  # one step from the goal
    assert max(v) <= 1.0 + 1e-12


def test_reflection_symmetry_detected():
    config = symrl.GridWorldConfig()
    config.size_n = 3
    config.slip_prob = 0.1
    config.goal = (2, 2, 1)
    env = symrl.GridWorld(config)
    mdp = env.tabular()
    for axis in (0, 1):
        assert symrl.check_symmetry(mdp, env.axis_reflection(axis))


def test_similarity_tree_roundtrip():
    tree = symrl.RewardHistoryTree(5, 1e-6, 512)
    keys = [symrl.SAKey(0, 0), symrl.SAKey(1, 0), symrl.SAKey(0, 1)]
    tree.insert_episode(keys, [1.0, 0.0, 1.0])
    tree.insert_episode(list(reversed(keys)), [1.0, 0.0, 1.0])
    table = symrl.compute_similarities(tree, 1, 5)
    chi = table.similarity(symrl.SAKey(0, 0), symrl.SAKey(0, 1))
    assert chi is not None
    assert 0.0 <= chi <= 1.0
    assert table.similarity(symrl.SAKey(0, 0), symrl.SAKey(0, 0)) == pytest.approx(1.0)
    assert table.similarity(symrl.SAKey(9, 9), symrl.SAKey(0, 0)) is None


def test_welch_reference_value():
    result = symrl.welch_t_test([1, 2, 3, 4, 5], [2, 3, 4, 5, 6])
    assert result.t == pytest.approx(-1.0)
    assert result.dof == pytest.approx(8.0)
    assert result.p == pytest.approx(0.3466, abs=1e-3)


def test_experiment_roundtrip(tmp_path):
    text = "\n".join(
        [
            "experiment.name = smoke",
            "experiment.episodes = 6",
            "experiment.iterations = 2",
            "env.kind = gridworld",
            "grid.size = 3",
            "grid.max_steps = 30",
            "agent.hidden = 8",
            "agent.batch_size = 4",
            f"experiment.output_dir = {tmp_path / 'out'}",
        ]
    )
    config = symrl.Config.parse_text(text)
    experiment = symrl.experiment_from_config(config)
    records = symrl.run_experiment(experiment)
    assert len(records) == 2
    assert all(len(record.episodes) == 6 for record in records)

    loaded = symrl.load_experiment_dir(str(tmp_path / "out"))
    assert loaded.episodes == 6
    stats = symrl.summarize(loaded, loaded, symrl.Metric.MeanTotalReward)
    assert stats.welch.p == pytest.approx(1.0)
    assert math.isfinite(stats.a.mean)
