import numpy as np
import pytest

from covclust import (
    Clustering,
    ExperimentConfig,
    GroundTruth,
    aggregate_rates,
    build_offline_dataset,
    build_online_dataset,
    ground_truth_restrict,
    misclassification_rate,
    run_experiment,
)
from covclust.evaluation import (
    group_hurst,
    offline_path_count,
    online_group_size,
    online_path_length,
)


def clustering_from(labels, kappa):
    labels = np.asarray(labels)
    centers = tuple(
        int(np.flatnonzero(labels == k).min()) if np.any(labels == k) else None
        for k in range(kappa)
    )
    return Clustering(kappa=kappa, labels=labels, centers=centers)


# ---------------------------------------------------------------------------
# misclassification rate
# ---------------------------------------------------------------------------


def test_rate_zero_under_relabeling():
    g = GroundTruth(kappa=3, labels=np.array([0, 0, 1, 1, 2, 2]))
    c = clustering_from([2, 2, 0, 0, 1, 1], 3)
    assert misclassification_rate(c, g) == 0.0


def test_rate_single_misplacement():
    g = GroundTruth(kappa=2, labels=np.array([0] * 5 + [1] * 5))
    c = clustering_from([0, 0, 0, 0, 1, 1, 1, 1, 1, 1], 2)
    assert misclassification_rate(c, g) == pytest.approx(0.1)


def test_rate_degenerate_all_one_cluster():
    g = GroundTruth(kappa=5, labels=np.repeat(np.arange(5), 20))
    c = clustering_from([0] * 100, 5)
    assert misclassification_rate(c, g) == pytest.approx(0.8)


def test_rate_relabel_invariance_both_sides():
    rng = np.random.default_rng(0)
    truth = rng.integers(0, 4, size=30)
    guess = rng.integers(0, 4, size=30)
    base = misclassification_rate(
        clustering_from(guess, 4), GroundTruth(kappa=4, labels=truth)
    )
    perm = np.array([2, 3, 1, 0])
    assert misclassification_rate(
        clustering_from(perm[guess], 4), GroundTruth(kappa=4, labels=truth)
    ) == pytest.approx(base)


def test_rate_large_kappa_assignment_path():
    # kappa above the exhaustive-permutation limit exercises the optimal
    # assignment branch; a perfect relabeling must still score 0
    kappa = 9
    truth = np.repeat(np.arange(kappa), 3)
    perm = np.random.default_rng(1).permutation(kappa)
    c = clustering_from(perm[truth], kappa)
    assert misclassification_rate(c, GroundTruth(kappa=kappa, labels=truth)) == 0.0


def test_rate_input_validation():
    g = GroundTruth(kappa=2, labels=np.array([0, 1]))
    with pytest.raises(ValueError):
        misclassification_rate(clustering_from([0, 1, 0], 2), g)
    with pytest.raises(ValueError):
        misclassification_rate(clustering_from([0, 1], 2), GroundTruth(3, np.array([0, 2])))


# ---------------------------------------------------------------------------
# ground truth restriction
# ---------------------------------------------------------------------------


def test_restrict_full_size_unchanged():
    g = GroundTruth(kappa=3, labels=np.array([0, 1, 2, 0]))
    r = ground_truth_restrict(g, 4)
    assert r.kappa == 3
    assert np.array_equal(r.labels, g.labels)


def test_restrict_to_one():
    g = GroundTruth(kappa=3, labels=np.array([1, 2, 0]))
    r = ground_truth_restrict(g, 1)
    assert r.kappa == 1
    assert r.labels.tolist() == [0]


def test_restrict_drops_empty_groups():
    g = GroundTruth(kappa=5, labels=np.repeat(np.arange(5), 20))
    r = ground_truth_restrict(g, 25)
    assert r.kappa == 2
    counts = np.bincount(r.labels)
    assert counts.tolist() == [20, 5]


# ---------------------------------------------------------------------------
# schedules
# ---------------------------------------------------------------------------


def test_offline_schedule_lengths():
    assert offline_path_count(1) == 8
    assert offline_path_count(100) == 305


def test_online_schedule():
    assert online_group_size(1) == 6
    assert online_group_size(11) == 7
    assert online_group_size(100) == 15
    assert online_path_length(11, 7) == 35
    assert online_path_length(100, 1) == 305
    assert online_path_length(1, 1) == 8


def test_build_offline_dataset_shapes():
    ec = ExperimentConfig(paths_per_group=2)
    paths, truth = build_offline_dataset(ec, 5, seed=0)
    assert len(paths) == 10
    assert all(len(p) == 20 for p in paths)
    assert truth.kappa == 5
    assert np.array_equal(truth.labels, np.repeat(np.arange(5), 2))


def test_offline_prefix_extension():
    ec = ExperimentConfig(paths_per_group=1)
    early, _ = build_offline_dataset(ec, 5, seed=3)
    late, _ = build_offline_dataset(ec, 20, seed=3)
    for a, b in zip(early, late):
        assert np.array_equal(a.values, b.values[: len(a)])


def test_build_online_dataset_schedule():
    ec = ExperimentConfig(mode="online")
    snap, truth = build_online_dataset(ec, 1, seed=0)
    assert len(snap) == 30
    assert all(len(p) == 8 for p in snap.paths)
    snap11, truth11 = build_online_dataset(ec, 11, seed=0)
    assert len(snap11) == 35
    lengths = sorted({len(p) for p in snap11.paths})
    assert lengths == [35, 38]  # 7th arrivals are 3 epochs younger


def test_online_prefix_extension():
    ec = ExperimentConfig(mode="online")
    early, _ = build_online_dataset(ec, 10, seed=1)
    late, _ = build_online_dataset(ec, 30, seed=1)
    for a in early.paths:
        match = [b for b in late.paths if b.id == a.id]
        assert len(match) == 1
        assert np.array_equal(a.values, match[0].values[: len(a)])


def test_online_arrival_interleaves_groups():
    ec = ExperimentConfig(mode="online")
    snap, truth = build_online_dataset(ec, 1, seed=0)
    assert truth.labels.tolist() == list(range(5)) * 6


def test_group_hurst_profiles():
    mono = group_hurst("mono", 0.4)
    assert mono(0.0) == pytest.approx(0.5)
    assert mono(1.0) == pytest.approx(0.9)
    sin = group_hurst("sin", -0.4)
    assert sin(0.5) == pytest.approx(0.1)
    with pytest.raises(ValueError):
        group_hurst("nope", 0.1)


# ---------------------------------------------------------------------------
# experiment driver
# ---------------------------------------------------------------------------


def test_run_experiment_deterministic():
    ec = ExperimentConfig(paths_per_group=2, seeds=(0, 1), epochs=(1, 2))
    a = run_experiment(ec)
    b = run_experiment(ec)
    assert a == b
    assert len(a) == 4
    for seed, t, rate in a:
        assert 0.0 <= rate <= 1.0


def test_run_experiment_separated_constant_h():
    # two well-separated constant-Hurst groups must be perfectly recovered
    ec = ExperimentConfig(
        case="const", h_values=(0.2, 0.8), paths_per_group=3, seeds=(0,), epochs=(40,)
    )
    rows = run_experiment(ec)
    assert rows[0][2] == 0.0


def test_run_experiment_online_mode():
    ec = ExperimentConfig(mode="online", paths_per_group=6, seeds=(0,), epochs=(1,))
    rows = run_experiment(ec)
    assert len(rows) == 1
    assert 0.0 <= rows[0][2] <= 1.0


def test_run_experiment_bad_mode():
    with pytest.raises(ValueError):
        run_experiment(ExperimentConfig(mode="sideways", epochs=(1,)))
    with pytest.raises(ValueError):
        run_experiment(ExperimentConfig(seeds=()))


def test_aggregate_rates():
    rows = [(0, 5, 0.4), (1, 5, 0.2), (0, 10, 0.1), (1, 10, 0.3)]
    agg = aggregate_rates(rows)
    assert agg[0][0] == 5 and agg[0][1] == pytest.approx(0.3)
    assert agg[1][0] == 10 and agg[1][1] == pytest.approx(0.2)
    assert agg[0][2] == pytest.approx(0.1)
