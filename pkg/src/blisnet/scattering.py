"""Classical geometric scattering: iterated wavelet-modulus, low-pass readout.

Paths use the band-pass filters 0..J only; the low-pass enters once, after
the final modulus, when coefficients S[path] = Phi |Psi ...| are extracted.
All (J+1)^m index combinations appear at order m.  The transform is blind to
a global sign flip for every order >= 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import BadPathIndex, LengthMismatch
from .wavelets import WaveletFrame


def modulus(x) -> np.ndarray:
    """Componentwise absolute value."""
    return np.abs(np.asarray(x, dtype=float))


@dataclass(frozen=True, eq=False)
class ScatterCoefficients:
    """Map from scale paths (tuples over 0..J) to coefficient vectors."""

    J: int
    max_order: int
    coeffs: dict

    def paths(self, order: int | None = None):
        """Paths in lexicographic order within each order."""
        orders = range(self.max_order + 1) if order is None else [order]
        for m in orders:
            yield from product(range(self.J + 1), repeat=m)

    def __getitem__(self, path) -> np.ndarray:
        return self.coeffs[tuple(path)]

    def count(self, order: int) -> int:
        return sum(1 for p in self.coeffs if len(p) == order)


def scatter_U(frame: WaveletFrame, x, path) -> np.ndarray:
    """Iterated modulus-wavelet chain |Psi_{j_m} ... |Psi_{j_1} x||."""
    x = np.asarray(x, dtype=float)
    if len(x) != frame.n:
        raise LengthMismatch(f"signal length {len(x)} != {frame.n}")
    J = frame.scales.J
    cur = x
    for j in path:
        if not 0 <= j <= J:
            raise BadPathIndex(f"wavelet index {j} outside 0..{J}")
        cur = np.abs(frame.apply_matrix(cur[:, None])[j, :, 0])
    return cur


def scatter_all(frame: WaveletFrame, x, max_order: int) -> ScatterCoefficients:
    """All coefficients S[path] = Phi U[path] x for orders 0..max_order."""
    if max_order < 0:
        raise ValueError("max_order must be nonnegative")
    x = np.asarray(x, dtype=float)
    if len(x) != frame.n:
        raise LengthMismatch(f"signal length {len(x)} != {frame.n}")
    J = frame.scales.J
    low = frame.size - 1
    coeffs: dict[tuple, np.ndarray] = {}
    level = {(): x}
    for order in range(max_order + 1):
        # extract coefficients for the current level, then branch deeper
        stacked = np.stack([level[p] for p in sorted(level)], axis=1)
        filtered = frame.apply_matrix(stacked)
        for col, p in enumerate(sorted(level)):
            coeffs[p] = filtered[low, :, col]
        if order == max_order:
            break
        level = {
            p + (j,): np.abs(filtered[j, :, col])
            for col, p in enumerate(sorted(level))
            for j in range(J + 1)
        }
    return ScatterCoefficients(J=J, max_order=max_order, coeffs=coeffs)


def scatter_aggregate(coeffs: ScatterCoefficients) -> np.ndarray:
    """First moments (node sums) concatenated in path-lexicographic order."""
    return np.asarray([coeffs[p].sum() for p in coeffs.paths()])


def feature_names(J: int, max_order: int) -> list[str]:
    """CSV header labels like S[] and S[3,1], in aggregation order."""
    names = []
    for m in range(max_order + 1):
        for p in product(range(J + 1), repeat=m):
            names.append("S[" + ",".join(str(j) for j in p) + "]")
    return names


def first_moment_features(frame: WaveletFrame, signals, max_order: int) -> np.ndarray:
    """Aggregated scattering features for a batch of signals, one row each."""
    signals = np.atleast_2d(np.asarray(signals, dtype=float))
    return np.stack(
        [scatter_aggregate(scatter_all(frame, x, max_order)) for x in signals]
    )
