import numpy as np
import pytest

from blisnet.errors import GraphDisconnected, MissingDataset
from blisnet.synthetic import (
    DIFFERENT_MU,
    SAME_MU,
    five_replicates,
    gaussian_bump,
    generate_dataset,
    load_dataset,
    save_dataset,
)


def test_bump_at_center():
    pts = np.array([[0.3, 0.7], [0.0, 0.0]])
    vals = gaussian_bump(pts, (0.3, 0.7), 0.2)
    assert vals[0] == 1.0


def test_bump_at_sigma_sqrt2():
    sigma = 0.25
    pts = np.array([[sigma * np.sqrt(2), 0.0]])
    vals = gaussian_bump(pts, (0.0, 0.0), sigma)
    assert vals[0] == pytest.approx(np.exp(-1.0), rel=1e-12)


def test_bump_wide_limit():
    pts = np.random.default_rng(0).uniform(size=(20, 2))
    vals = gaussian_bump(pts, (0.5, 0.5), 1e6)
    assert np.abs(vals - 1.0).max() < 1e-9


def test_bump_rejects_nonpositive_sigma():
    with pytest.raises(ValueError):
        gaussian_bump(np.zeros((1, 2)), (0, 0), 0.0)


def test_generate_balanced_labels():
    ds = generate_dataset(DIFFERENT_MU, seed=5, n_signals=60)
    assert np.sum(ds.labels == 0) == 30
    assert np.sum(ds.labels == 1) == 30
    assert ds.signals.shape == (60, 100)


def test_generate_requires_even_count():
    with pytest.raises(ValueError):
        generate_dataset(DIFFERENT_MU, n_signals=41)


def test_generate_deterministic():
    a = generate_dataset(SAME_MU, seed=11, n_signals=20)
    b = generate_dataset(SAME_MU, seed=11, n_signals=20)
    assert np.array_equal(a.signals, b.signals)
    assert np.array_equal(a.points, b.points)
    assert np.array_equal(
        a.graph.dense_adjacency(), b.graph.dense_adjacency()
    )


def test_signal_value_range():
    # sums/differences of bumps in (0, 1] stay inside [-1, 2]
    for mode in (DIFFERENT_MU, SAME_MU):
        ds = generate_dataset(mode, seed=2, n_signals=100)
        assert ds.signals.min() >= -1.0
        assert ds.signals.max() <= 2.0


def test_class_sign_structure():
    ds = generate_dataset(DIFFERENT_MU, seed=3, n_signals=200)
    class0 = ds.signals[ds.labels == 0]
    class1 = ds.signals[ds.labels == 1]
    assert (class0 > 0).all()
    frac_with_negative = np.mean(class1.min(axis=1) < 0)
    assert frac_with_negative >= 0.9


def test_same_mu_mode_structure():
    # both bumps share a center; entries differ through bandwidths only, so
    # every class-0 signal peaks near the center with value close to 2
    ds = generate_dataset(SAME_MU, seed=7, n_signals=40)
    class0 = ds.signals[ds.labels == 0]
    assert (class0.max(axis=1) <= 2.0).all()
    assert (class0 > 0).all()


def test_graph_disconnected_after_retries():
    with pytest.raises(GraphDisconnected):
        generate_dataset(DIFFERENT_MU, n_nodes=12, k=1, n_signals=4, seed=0)


def test_five_replicates_differ():
    reps = five_replicates(DIFFERENT_MU, base_seed=100, n_signals=20)
    assert len(reps) == 5
    assert [r.seed for r in reps] == [100, 101, 102, 103, 104]
    adjacency = [r.graph.dense_adjacency() for r in reps]
    assert not np.array_equal(adjacency[0], adjacency[1])
    for r in reps:
        assert np.sum(r.labels == 0) == np.sum(r.labels == 1)


def test_replicate_edge_counts_in_band():
    # OR-symmetrized 5-NN graphs at 100 nodes land near 300 edges
    reps = five_replicates(DIFFERENT_MU, base_seed=0, n_signals=2)
    for r in reps:
        assert 280 <= r.graph.edge_count <= 330


def test_dataset_roundtrip(tmp_path):
    ds = generate_dataset(SAME_MU, seed=9, n_signals=20)
    save_dataset(ds, tmp_path / "d")
    loaded = load_dataset(tmp_path / "d")
    assert np.array_equal(loaded.signals, ds.signals)
    assert np.array_equal(loaded.labels, ds.labels)
    assert np.array_equal(loaded.points, ds.points)
    assert np.array_equal(
        loaded.graph.dense_adjacency(), ds.graph.dense_adjacency()
    )
    assert loaded.mode == SAME_MU
    assert loaded.meta["rng"] == "numpy-pcg64"


def test_load_missing_dataset(tmp_path):
    with pytest.raises(MissingDataset):
        load_dataset(tmp_path / "nope")
