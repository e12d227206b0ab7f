"""Constructive verification battery over the fixed graph zoo.

Every guarantee the transforms come with is checked numerically on each zoo
graph: exact frame bounds with attaining probes, per-layer energy
conservation, the bi-Lipschitz distance sandwich, permutation equivariance,
single-layer inversion, and the scattering counterexample constructions.
Each check reports measured values against its bound; nothing is skipped
silently.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .blis import blis_coeffs, blis_layer, invert_layer, mixed_distance_sq, mixed_norm_sq
from .counterexamples import (
    bipartite_counterexample,
    counterexample_report,
    diameter_counterexample,
)
from .errors import BlisError
from .graphs import Graph, diameter, is_bipartite, permute_graph
from .operators import diffusion_operator, weighted_norm
from .wavelets import WaveletFrame, build_frame, dyadic_scales
from .zoo import graph_zoo

RAYLEIGH_SLACK = 1e-9
ENERGY_W1_RTOL = 1e-8
BOUND_ATTAIN_TOL = 1e-7
EQUIVARIANCE_ENTRY_TOL = 1e-7
EQUIVARIANCE_AGG_TOL = 1e-8
INVERSION_RTOL = 1e-7
SCATTER_DEV_TOL = 1e-8


@dataclass
class CheckResult:
    name: str
    graph: str
    status: str  # "pass" | "fail" | "skip"
    measured: float | None = None
    bound: float | None = None
    note: str = ""


def _result(name, graph, ok, measured=None, bound=None, note=""):
    return CheckResult(
        name=name,
        graph=graph,
        status="pass" if ok else "fail",
        measured=measured,
        bound=bound,
        note=note,
    )


def _random_signals(rng, n, count):
    return rng.normal(size=(n, count))


def check_frame_bounds(name: str, frame: WaveletFrame, rng, probes: int):
    """Measured Rayleigh quotients must sit inside [c, C]; eigenvector probes
    must attain both bounds; w2 additionally has C <= 1."""
    results = []
    c, C = frame.frame_lower, frame.frame_upper
    X = _random_signals(rng, frame.n, probes)
    filtered = frame.apply_matrix(X)
    w = frame.weight.w
    energies = np.einsum("fib,i->b", filtered**2, w)
    norms = np.einsum("ib,i->b", X**2, w)
    ratios = energies / norms
    inside = (ratios >= c - RAYLEIGH_SLACK) & (ratios <= C + RAYLEIGH_SLACK)
    results.append(
        _result(
            f"frame-bounds-sandwich[{frame.family}]",
            name,
            bool(inside.all()),
            measured=float(ratios.min()),
            bound=c,
            note=f"ratios in [{ratios.min():.12f}, {ratios.max():.12f}], "
            f"(c, C) = ({c:.12f}, {C:.12f})",
        )
    )
    if frame.family == "w1":
        results.append(
            _result(
                "frame-bounds-isometry[w1]",
                name,
                abs(c - 1) <= 1e-10 and abs(C - 1) <= 1e-10,
                measured=max(abs(c - 1), abs(C - 1)),
                bound=1e-10,
            )
        )
    else:
        results.append(
            _result(
                "frame-upper-nonexpansive[w2]",
                name,
                C <= 1 + 1e-10,
                measured=C,
                bound=1.0,
            )
        )
        # eigenvector probes attain the exact bounds
        lam = frame.operator.g_values
        from .wavelets import _band_energy

        energy_at = _band_energy(frame.scales, lam)
        worst = 0.0
        for idx, target in ((int(np.argmin(energy_at)), c), (int(np.argmax(energy_at)), C)):
            probe = frame.operator.k_eigenvectors[:, idx]
            probe_out = frame.apply_matrix(probe[:, None])
            ratio = float(np.einsum("fib,i->", probe_out**2, w) / np.sum(probe**2 * w))
            worst = max(worst, abs(ratio - target))
        results.append(
            _result(
                "frame-bounds-attained[w2]",
                name,
                worst <= BOUND_ATTAIN_TOL,
                measured=worst,
                bound=BOUND_ATTAIN_TOL,
            )
        )
    return results


def check_energy(name: str, frame: WaveletFrame, rng, probes: int, order: int):
    """c^m ||x||_w^2 <= mixed norm^2 of order-m coefficients <= C^m ||x||_w^2."""
    c, C = frame.frame_lower, frame.frame_upper
    worst_low, worst_high = np.inf, -np.inf
    for _ in range(probes):
        x = rng.normal(size=frame.n)
        ratio = mixed_norm_sq(blis_coeffs(frame, x, order), frame.weight) / (
            weighted_norm(x, frame.weight) ** 2
        )
        worst_low = min(worst_low, ratio)
        worst_high = max(worst_high, ratio)
    if frame.family == "w1":
        ok = (
            abs(worst_low - 1) <= ENERGY_W1_RTOL
            and abs(worst_high - 1) <= ENERGY_W1_RTOL
        )
        note = f"w1 ratios in [{worst_low:.12f}, {worst_high:.12f}]"
    else:
        ok = worst_low >= c**order - RAYLEIGH_SLACK and worst_high <= C**order + RAYLEIGH_SLACK
        note = (
            f"ratios in [{worst_low:.10f}, {worst_high:.10f}], "
            f"bounds [{c ** order:.10f}, {C ** order:.10f}]"
        )
    return [
        _result(
            f"energy-order-{order}[{frame.family}]",
            name,
            ok,
            measured=worst_low,
            bound=c**order,
            note=note,
        )
    ]


def check_bilipschitz(name: str, frame: WaveletFrame, rng, probes: int, order: int):
    """(c/2)^m <= squared coefficient distance / squared input distance <= C^m."""
    c, C = frame.frame_lower, frame.frame_upper
    lo, hi = (c / 2) ** order, C**order
    worst_low, worst_high = np.inf, -np.inf
    for _ in range(probes):
        x = rng.normal(size=frame.n)
        y = rng.normal(size=frame.n)
        bx = blis_coeffs(frame, x, order)
        by = blis_coeffs(frame, y, order)
        ratio = mixed_distance_sq(bx, by, frame.weight) / (
            weighted_norm(x - y, frame.weight) ** 2
        )
        worst_low = min(worst_low, ratio)
        worst_high = max(worst_high, ratio)
    ok = worst_low >= lo - RAYLEIGH_SLACK and worst_high <= hi + RAYLEIGH_SLACK
    return [
        _result(
            f"bi-lipschitz-order-{order}[{frame.family}]",
            name,
            ok,
            measured=worst_low,
            bound=lo,
            note=f"ratios in [{worst_low:.10f}, {worst_high:.10f}], bounds [{lo:.10f}, {hi:.10f}]",
        )
    ]


def check_equivariance(
    name: str,
    graph: Graph,
    family: str,
    J: int,
    alpha: float,
    rng,
    order: int,
    perms: int,
):
    """Relabeling nodes relabels every coefficient vector the same way."""
    scales = dyadic_scales(J)
    frame = build_frame(diffusion_operator(graph, alpha=alpha), scales, family)
    worst_entry, worst_agg = 0.0, 0.0
    for _ in range(perms):
        perm = rng.permutation(graph.n)
        x = rng.normal(size=graph.n)
        base = blis_coeffs(frame, x, order)
        frame_p = build_frame(
            diffusion_operator(permute_graph(graph, perm), alpha=alpha),
            scales,
            family,
        )
        permuted = blis_coeffs(frame_p, x[perm], order)
        worst_entry = max(
            worst_entry,
            float(np.abs(permuted.values - base.values[:, perm]).max()),
        )
        worst_agg = max(
            worst_agg,
            float(
                np.abs(permuted.values.sum(axis=1) - base.values.sum(axis=1)).max()
            ),
        )
    ok = worst_entry <= EQUIVARIANCE_ENTRY_TOL and worst_agg <= EQUIVARIANCE_AGG_TOL
    return [
        _result(
            f"equivariance-order-{order}[{family}]",
            name,
            ok,
            measured=worst_entry,
            bound=EQUIVARIANCE_ENTRY_TOL,
            note=f"entrywise {worst_entry:.3e}, aggregated {worst_agg:.3e}",
        )
    ]


def check_inversion(name: str, frame: WaveletFrame, rng, probes: int):
    """invert_layer must undo blis_layer to relative error 1e-7."""
    worst = 0.0
    for _ in range(probes):
        x = rng.normal(size=frame.n)
        outputs = blis_layer(frame, [x])
        rebuilt = invert_layer(frame, outputs)
        worst = max(worst, float(np.linalg.norm(rebuilt - x) / np.linalg.norm(x)))
    return [
        _result(
            f"inversion[{frame.family}]",
            name,
            worst <= INVERSION_RTOL,
            measured=worst,
            bound=INVERSION_RTOL,
        )
    ]


def check_counterexamples(name: str, graph: Graph, J: int, alpha: float, order: int):
    """Constructive non-injectivity: identical scattering, positive BLIS gap."""
    results = []
    scales = dyadic_scales(J)
    bipartite, _ = is_bipartite(graph)
    if bipartite:
        op = diffusion_operator(graph, alpha=alpha)
        pair = bipartite_counterexample(op, scales)
        results.extend(_pair_checks("bipartite", name, pair, order))
    else:
        results.append(
            CheckResult(
                name="counterexample-bipartite",
                graph=name,
                status="skip",
                note="graph is not bipartite",
            )
        )
    if diameter(graph) > 2 * scales.last:
        pair = diameter_counterexample(graph, scales)
        results.extend(_pair_checks("diameter", name, pair, order))
    else:
        results.append(
            CheckResult(
                name="counterexample-diameter",
                graph=name,
                status="skip",
                note=f"diameter {diameter(graph)} <= {2 * scales.last}",
            )
        )
    return results


def _pair_checks(regime, name, pair, order):
    report = counterexample_report(pair.frame, pair, order)
    scatter_ok = report["max_scatter_deviation"] < SCATTER_DEV_TOL
    blis_ok = (
        report["blis_distance_sq"] >= report["blis_lower_bound"] - RAYLEIGH_SLACK
        and report["blis_lower_bound"] > 0
    )
    return [
        _result(
            f"counterexample-{regime}-scatter-identical",
            name,
            scatter_ok,
            measured=report["max_scatter_deviation"],
            bound=SCATTER_DEV_TOL,
            note=f"distinctness {report['distinctness_norms']}",
        ),
        _result(
            f"counterexample-{regime}-blis-separates",
            name,
            blis_ok,
            measured=report["blis_distance_sq"],
            bound=report["blis_lower_bound"],
        ),
    ]


def run_verification(
    family: str = "w1",
    J: int = 2,
    order: int = 2,
    alpha: float = -0.5,
    seed: int = 0,
    probes: int = 25,
    perms: int = 5,
    graphs: dict[str, Graph] | None = None,
    tamper=None,
) -> dict:
    """Run the whole battery; returns a JSON-ready report.

    ``tamper(frame) -> frame`` lets tests inject faults into built frames
    before the frame-dependent checks run.
    """
    graphs = graph_zoo() if graphs is None else graphs
    checks: list[CheckResult] = []
    for graph_idx, (name, graph) in enumerate(graphs.items()):
        rng = np.random.default_rng((seed, graph_idx))
        op = diffusion_operator(graph, alpha=alpha)
        frame = build_frame(op, dyadic_scales(J), family)
        if tamper is not None:
            frame = tamper(frame)
        checks.extend(check_frame_bounds(name, frame, rng, probes))
        checks.extend(check_energy(name, frame, rng, probes, order))
        checks.extend(check_bilipschitz(name, frame, rng, max(probes // 2, 5), order))
        checks.extend(
            check_equivariance(name, graph, family, J, alpha, rng, order, perms)
        )
        checks.extend(check_inversion(name, frame, rng, max(probes // 5, 3)))
        try:
            checks.extend(check_counterexamples(name, graph, J, alpha, order))
        except BlisError as exc:
            checks.append(
                CheckResult(
                    name="counterexample",
                    graph=name,
                    status="fail",
                    note=f"{type(exc).__name__}: {exc}",
                )
            )
    passed = all(c.status != "fail" for c in checks)
    return {
        "config": {
            "family": family,
            "J": J,
            "m": order,
            "alpha": alpha,
            "seed": seed,
            "probes": probes,
        },
        "checks": [asdict(c) for c in checks],
        "passed": passed,
    }
