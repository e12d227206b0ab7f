"""Signal pairs that modulus scattering cannot tell apart but BLIS can.

Two constructions realize the failure mode constructively: on bipartite
graphs, sums and differences of the extreme eigenvectors of K; on graphs of
large diameter, indicator signals on sets separated by more than twice the
maximal wavelet scale.  Both yield x1 != +-x2 with identical wavelet-modulus
outputs, hence identical scattering coefficients at every order >= 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .blis import blis_coeffs, mixed_distance_sq
from .errors import (
    DiameterTooSmall,
    EigenvalueMissing,
    NotBipartite,
    SetsTooClose,
)
from .graphs import Graph, all_pairs_distances, is_bipartite
from .operators import (
    DiffusionOperator,
    WeightVector,
    conjugate_K,
    diffusion_operator,
    eig_sym,
    normalized_laplacian,
    weighted_norm,
)
from .scattering import scatter_all
from .wavelets import ScaleSequence, WaveletFrame, build_frame

# numerical thresholds from the pair's contract
DISTINCT_TOL = 1e-6
COINCIDE_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class CounterexamplePair:
    """Two signals, distinct even up to sign, with equal wavelet moduli."""

    x1: np.ndarray
    x2: np.ndarray
    regime: str  # "bipartite" or "large_diameter"
    witness: dict
    frame: WaveletFrame  # the w2 frame the pair was verified against

    def __post_init__(self):
        self.x1.setflags(write=False)
        self.x2.setflags(write=False)


def _check_pair(x1, x2, frame, regime, witness) -> CounterexamplePair:
    if (
        np.linalg.norm(x1 - x2) <= DISTINCT_TOL
        or np.linalg.norm(x1 + x2) <= DISTINCT_TOL
    ):
        raise RuntimeError("constructed signals are equal up to sign")
    dev = modulus_deviation(frame, x1, x2)
    if dev >= COINCIDE_TOL:
        raise RuntimeError(f"wavelet moduli differ by {dev}; construction failed")
    return CounterexamplePair(
        x1=np.asarray(x1, float),
        x2=np.asarray(x2, float),
        regime=regime,
        witness=witness,
        frame=frame,
    )


def modulus_deviation(frame: WaveletFrame, x1, x2) -> float:
    """max over band-pass filters of || |Psi_j x1| - |Psi_j x2| ||_inf."""
    f1 = frame.apply_matrix(np.asarray(x1, float)[:, None])[:-1, :, 0]
    f2 = frame.apply_matrix(np.asarray(x2, float)[:, None])[:-1, :, 0]
    return float(np.abs(np.abs(f1) - np.abs(f2)).max())


def bipartite_counterexample(
    op: DiffusionOperator, scales: ScaleSequence
) -> CounterexamplePair:
    """x1 = u1 + u2 and x2 = u1 - u2 from the eigenvalue-1 and eigenvalue-0
    eigenvectors of K, which exist exactly when the graph is bipartite."""
    if op.graph is not None:
        bipartite, _ = is_bipartite(op.graph)
        if not bipartite:
            raise NotBipartite("the operator's graph admits no 2-coloring")
    lam = op.g_values
    top = np.flatnonzero(np.abs(lam - 1.0) <= 1e-8)
    bottom = np.flatnonzero(np.abs(lam) <= 1e-8)
    if len(top) == 0 or len(bottom) == 0:
        raise EigenvalueMissing(
            "K needs eigenvalues 1 and 0; the graph is likely not bipartite"
        )
    u1 = op.k_eigenvectors[:, top[0]]
    u2 = op.k_eigenvectors[:, bottom[0]]
    frame = build_frame(op, scales, "w2")
    return _check_pair(
        u1 + u2,
        u1 - u2,
        frame,
        regime="bipartite",
        witness={"u1": u1, "u2": u2},
    )


def _indicator(n: int, nodes) -> np.ndarray:
    x = np.zeros(n)
    x[np.asarray(list(nodes), dtype=int)] = 1.0
    return x


def _auto_endpoints(dist: np.ndarray) -> tuple[int, int]:
    a, b = np.unravel_index(np.argmax(dist), dist.shape)
    return int(a), int(b)


def diameter_counterexample(
    graph: Graph,
    scales: ScaleSequence,
    weight: WeightVector | None = None,
    s1=None,
    s2=None,
) -> CounterexamplePair:
    """Indicator pair delta_S1 +- delta_S2 on sets at least 2*s_last + 1 apart.

    Requires diam(G) > 2*s_last and the canonical diffusion profile, whose
    operator spreads supports by at most one hop per power.  When no sets
    are supplied, the two endpoints of a diameter-realizing pair are used.
    """
    sep_needed = 2 * scales.last + 1
    dist = all_pairs_distances(graph)
    if dist.max() <= 2 * scales.last:
        raise DiameterTooSmall(
            f"diameter {dist.max()} needs to exceed {2 * scales.last}"
        )
    if s1 is None or s2 is None:
        a, b = _auto_endpoints(dist)
        s1, s2 = [a], [b]
    s1 = sorted(int(v) for v in s1)
    s2 = sorted(int(v) for v in s2)
    separation = int(dist[np.ix_(s1, s2)].min())
    if separation < sep_needed:
        raise SetsTooClose(f"sets are {separation} apart, need {sep_needed}")
    if weight is None:
        weight = WeightVector.from_degrees(graph.degrees, -0.5)
    op = _operator_with_weight(graph, weight)
    frame = build_frame(op, scales, "w2")
    x1 = _indicator(graph.n, s1) + _indicator(graph.n, s2)
    x2 = _indicator(graph.n, s1) - _indicator(graph.n, s2)
    return _check_pair(
        x1,
        x2,
        frame,
        regime="large_diameter",
        witness={"s1": s1, "s2": s2, "separation": separation},
    )


def _operator_with_weight(graph: Graph, weight: WeightVector) -> DiffusionOperator:
    return conjugate_K(eig_sym(normalized_laplacian(graph)), weight, graph=graph)


def diameter_counterexample_three_sets(
    graph: Graph,
    scales: ScaleSequence,
    s1=None,
    s2=None,
    s3=None,
) -> CounterexamplePair:
    """Variant with three equal-size far-apart sets and K = P.

    x1 = d_S1 + d_S2 - d_S3 and x2 = d_S1 - d_S2 + d_S3; since P preserves
    column sums, the node-summed low-pass outputs of both signals equal |S1|.
    """
    sep_needed = 2 * scales.last + 1
    dist = all_pairs_distances(graph)
    if s1 is None:
        a, b = _auto_endpoints(dist)
        # a middle node at least sep_needed from both endpoints
        mid = np.flatnonzero((dist[a] >= sep_needed) & (dist[b] >= sep_needed))
        if len(mid) == 0:
            raise DiameterTooSmall(
                f"no node is {sep_needed} away from both diameter endpoints"
            )
        s1, s2, s3 = [a], [int(mid[0])], [b]
    s1, s2, s3 = (sorted(int(v) for v in s) for s in (s1, s2, s3))
    if not (len(s1) == len(s2) == len(s3)):
        raise ValueError("the three sets must have equal size")
    for left, right in ((s1, s2), (s1, s3), (s2, s3)):
        sep = int(dist[np.ix_(left, right)].min())
        if sep < sep_needed:
            raise SetsTooClose(f"sets are {sep} apart, need {sep_needed}")
    op = diffusion_operator(graph, alpha=-0.5)  # K = P, a Markov matrix
    frame = build_frame(op, scales, "w2")
    d1, d2, d3 = (_indicator(graph.n, s) for s in (s1, s2, s3))
    return _check_pair(
        d1 + d2 - d3,
        d1 - d2 + d3,
        frame,
        regime="large_diameter",
        witness={"s1": s1, "s2": s2, "s3": s3},
    )


@dataclass(frozen=True)
class ScatterComparison:
    """Deviations between the scattering outputs of a signal pair.

    ``max_deviation`` covers every order 1..m coefficient; the raw
    zeroth-order output Phi x is sign-sensitive and reported separately,
    next to its modulus |Phi x| which does coincide for valid pairs.
    """

    max_deviation: float
    lowpass_raw_deviation: float
    lowpass_modulus_deviation: float


def verify_scatter_identical(
    frame: WaveletFrame, pair: CounterexamplePair, max_order: int
) -> ScatterComparison:
    """Largest entrywise gap between the pair's scattering coefficients."""
    c1 = scatter_all(frame, pair.x1, max_order)
    c2 = scatter_all(frame, pair.x2, max_order)
    dev = 0.0
    for p in c1.paths():
        if len(p) == 0:
            continue
        dev = max(dev, float(np.abs(c1[p] - c2[p]).max()))
    low = frame.size - 1
    phi1 = frame.apply_matrix(pair.x1[:, None])[low, :, 0]
    phi2 = frame.apply_matrix(pair.x2[:, None])[low, :, 0]
    return ScatterComparison(
        max_deviation=dev,
        lowpass_raw_deviation=float(np.abs(phi1 - phi2).max()),
        lowpass_modulus_deviation=float(np.abs(np.abs(phi1) - np.abs(phi2)).max()),
    )


def verify_blis_separates(
    frame: WaveletFrame, pair: CounterexamplePair, order: int
) -> tuple[float, float]:
    """(mixed-norm distance^2, its guaranteed lower bound (c/2)^m ||x1-x2||_w^2)."""
    b1 = blis_coeffs(frame, pair.x1, order)
    b2 = blis_coeffs(frame, pair.x2, order)
    dist_sq = mixed_distance_sq(b1, b2, frame.weight)
    gap = weighted_norm(pair.x1 - pair.x2, frame.weight) ** 2
    bound = (frame.frame_lower / 2.0) ** order * gap
    return dist_sq, bound


def counterexample_report(
    frame: WaveletFrame, pair: CounterexamplePair, order: int
) -> dict:
    """JSON-ready summary of one constructed pair."""
    comparison = verify_scatter_identical(frame, pair, order)
    dist_sq, bound = verify_blis_separates(frame, pair, order)
    return {
        "regime": pair.regime,
        "n": frame.n,
        "J": frame.scales.J,
        "scales": list(frame.scales.scales),
        "distinctness_norms": {
            "minus": float(np.linalg.norm(pair.x1 - pair.x2)),
            "plus": float(np.linalg.norm(pair.x1 + pair.x2)),
        },
        "max_scatter_deviation": comparison.max_deviation,
        "blis_distance_sq": dist_sq,
        "blis_lower_bound": bound,
    }
