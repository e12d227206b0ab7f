"""Synthetic two-class signal datasets on random 5-NN graphs.

Signals are sums (class 0) or differences (class 1) of two planar Gaussian
bumps sampled on the graph's node positions.  The "different-mu" task draws
both centers independently with a shared bandwidth; the "same-mu" task
stacks both bumps on one center with the second bandwidth halved, so the
classes differ only through an interference pattern.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import GraphDisconnected, MissingDataset
from .graphs import (
    DisconnectedGraph,
    Graph,
    knn_graph,
    load_graph_csv,
    load_points_csv,
    save_graph_csv,
    save_points_csv,
)

DIFFERENT_MU = "different-mu"
SAME_MU = "same-mu"

# bandwidths are drawn uniformly above this floor; near-zero bandwidths
# produce numerically all-zero signals at 100 nodes
SIGMA_MIN = 0.05

MAX_GRAPH_ATTEMPTS = 20
RNG_ALGORITHM = "numpy-pcg64"


@dataclass(frozen=True)
class GaussianParams:
    mu1: tuple[float, float]
    mu2: tuple[float, float]
    sigma1: float
    sigma2: float


@dataclass(frozen=True, eq=False)
class SignalDataset:
    """A labeled matrix of graph signals over one random graph."""

    graph: Graph
    points: np.ndarray
    signals: np.ndarray  # (N, n)
    labels: np.ndarray  # (N,) values in {0, 1}
    mode: str
    seed: int
    meta: dict

    def __post_init__(self):
        for arr in (self.points, self.signals, self.labels):
            arr.setflags(write=False)


def gaussian_bump(points, mu, sigma: float) -> np.ndarray:
    """exp(-||p - mu||^2 / (2 sigma^2)) sampled at each point."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    pts = np.asarray(points, dtype=float)
    sq = ((pts - np.asarray(mu, dtype=float)) ** 2).sum(axis=1)
    return np.exp(-sq / (2.0 * sigma**2))


def _draw_params(rng, mode: str, sigma_min: float) -> GaussianParams:
    if mode == DIFFERENT_MU:
        mu1 = tuple(rng.uniform(size=2))
        mu2 = tuple(rng.uniform(size=2))
        sigma = float(rng.uniform(sigma_min, 1.0))
        return GaussianParams(mu1, mu2, sigma, sigma)
    if mode == SAME_MU:
        mu = tuple(rng.uniform(size=2))
        sigma1 = float(rng.uniform(sigma_min, 1.0))
        return GaussianParams(mu, mu, sigma1, sigma1 / 2.0)
    raise ValueError(f"unknown mode {mode!r}")


def generate_dataset(
    mode: str,
    n_nodes: int = 100,
    k: int = 5,
    n_signals: int = 400,
    seed: int = 0,
    sigma_min: float = SIGMA_MIN,
) -> SignalDataset:
    """One graph plus n_signals/2 class-0 and n_signals/2 class-1 signals.

    Points are resampled up to 20 times if the 5-NN graph comes out
    disconnected.  Byte-identical under a fixed seed.
    """
    if n_signals % 2 != 0:
        raise ValueError("n_signals must be even for balanced classes")
    rng = np.random.default_rng(seed)
    graph = points = None
    for _ in range(MAX_GRAPH_ATTEMPTS):
        candidate = rng.uniform(size=(n_nodes, 2))
        try:
            graph = knn_graph(candidate, k)
        except DisconnectedGraph:
            continue
        points = candidate
        break
    if graph is None:
        raise GraphDisconnected(
            f"no connected {k}-NN graph in {MAX_GRAPH_ATTEMPTS} attempts"
        )

    half = n_signals // 2
    signals = np.empty((n_signals, n_nodes))
    for row in range(n_signals):
        params = _draw_params(rng, mode, sigma_min)
        b1 = gaussian_bump(points, params.mu1, params.sigma1)
        b2 = gaussian_bump(points, params.mu2, params.sigma2)
        signals[row] = b1 + b2 if row < half else b1 - b2
    labels = np.repeat([0, 1], half)
    meta = {
        "mode": mode,
        "seed": seed,
        "n_nodes": n_nodes,
        "k": k,
        "n_signals": n_signals,
        "sigma_min": sigma_min,
        "rng": RNG_ALGORITHM,
        "edge_count": graph.edge_count,
    }
    return SignalDataset(
        graph=graph,
        points=points,
        signals=signals,
        labels=labels,
        mode=mode,
        seed=seed,
        meta=meta,
    )


def five_replicates(mode: str, base_seed: int, **kwargs) -> list[SignalDataset]:
    """Five independent graph+signal draws with seeds base_seed..base_seed+4."""
    return [generate_dataset(mode, seed=base_seed + r, **kwargs) for r in range(5)]


def save_dataset(dataset: SignalDataset, directory) -> None:
    """Write graph.csv(+.json), points.csv, signals.csv, labels.csv, meta.json."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    save_graph_csv(dataset.graph, directory / "graph.csv")
    save_points_csv(dataset.points, directory / "points.csv")
    np.savetxt(directory / "signals.csv", dataset.signals, delimiter=",", fmt="%.17g")
    np.savetxt(directory / "labels.csv", dataset.labels, delimiter=",", fmt="%d")
    (directory / "meta.json").write_text(json.dumps(dataset.meta, indent=2))


def load_dataset(directory) -> SignalDataset:
    directory = Path(directory)
    meta_path = directory / "meta.json"
    if not meta_path.exists():
        raise MissingDataset(f"no dataset at {directory}")
    meta = json.loads(meta_path.read_text())
    graph = load_graph_csv(directory / "graph.csv")
    points = load_points_csv(directory / "points.csv")
    signals = np.loadtxt(directory / "signals.csv", delimiter=",", ndmin=2)
    labels = np.loadtxt(directory / "labels.csv", delimiter=",", dtype=int, ndmin=1)
    return SignalDataset(
        graph=graph,
        points=points,
        signals=signals,
        labels=labels,
        mode=meta["mode"],
        seed=meta["seed"],
        meta=meta,
    )
