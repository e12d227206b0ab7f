"""The BLIS transform: paired ReLU activations over the full wavelet frame.

Each layer maps a signal x to sigma_k(F_j x) for every filter j = 0..J+1
(low-pass included) and k in {1, 2}, where sigma_1 = ReLU and sigma_2 is the
reflected ReLU.  Order-m coefficients are the outputs of m stacked layers
only; nothing from intermediate layers is kept.  Coefficients are stored in
a flat array under a mixed-radix path encoding (radix 2(J+2) per layer,
layer-1 digit most significant).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import LengthMismatch, OrderTooLarge, ShapeMismatch
from .operators import weighted_norm_sq_columns
from .wavelets import WaveletFrame

DEFAULT_ORDER_CAP = 4


def sigma1(x) -> np.ndarray:
    """ReLU(x)."""
    return np.maximum(np.asarray(x, dtype=float), 0.0)


def sigma2(x) -> np.ndarray:
    """ReLU(-x); together with sigma1: sigma1 - sigma2 = x, sigma1 + sigma2 = |x|."""
    return np.maximum(-np.asarray(x, dtype=float), 0.0)


def layer_width(J: int) -> int:
    """Branching factor 2(J+2) of one layer."""
    return 2 * (J + 2)


@dataclass(frozen=True, eq=False)
class BlisCoefficients:
    """Order-m coefficients as a (2(J+2))^m by n array in canonical path order.

    Row index encodes the path ((j_1,k_1),...,(j_m,k_m)) in mixed radix with
    digit 2*j + (k-1) per layer and the layer-1 digit varying slowest.
    """

    order: int
    J: int
    values: np.ndarray

    def __post_init__(self):
        self.values.setflags(write=False)

    @property
    def radix(self) -> int:
        return layer_width(self.J)

    def path_index(self, pairs) -> int:
        pairs = tuple(pairs)
        if len(pairs) != self.order:
            raise ShapeMismatch(f"path has {len(pairs)} pairs, order is {self.order}")
        idx = 0
        for j, k in pairs:
            if not (0 <= j <= self.J + 1 and k in (1, 2)):
                raise ShapeMismatch(f"invalid path pair ({j},{k})")
            idx = idx * self.radix + 2 * j + (k - 1)
        return idx

    def path_at(self, idx: int) -> tuple:
        digits = []
        for _ in range(self.order):
            digits.append(idx % self.radix)
            idx //= self.radix
        return tuple((d // 2, d % 2 + 1) for d in reversed(digits))

    def paths(self):
        """All paths in canonical (row) order."""
        jk = [(j, k) for j in range(self.J + 2) for k in (1, 2)]
        return product(jk, repeat=self.order)

    def __getitem__(self, pairs) -> np.ndarray:
        return self.values[self.path_index(pairs)]

    def __len__(self) -> int:
        return len(self.values)


def _layer_matrix(frame: WaveletFrame, X: np.ndarray) -> np.ndarray:
    """One BLIS layer on signal columns: (n, B) -> (n, B * 2(J+2)).

    Children of column b land at columns b*R + 2j + (k-1), so the layer
    digit varies fastest and earlier layers stay most significant.
    """
    filtered = frame.apply_matrix(X)  # (J+2, n, B)
    n, B = X.shape
    R = layer_width(frame.scales.J)
    out = np.empty((n, B * R))
    for j in range(frame.size):
        out[:, 2 * j :: R] = np.maximum(filtered[j], 0.0)
        out[:, 2 * j + 1 :: R] = np.maximum(-filtered[j], 0.0)
    return out


def blis_layer(frame: WaveletFrame, inputs) -> list[np.ndarray]:
    """Apply one layer to a list of signals.

    Output order is input-major: for each input, sigma_k(F_j x) over
    (j, k) lexicographic, 2(J+2) signals per input.
    """
    X = np.stack([np.asarray(x, dtype=float) for x in inputs], axis=1)
    if X.shape[0] != frame.n:
        raise LengthMismatch(f"signals have length {X.shape[0]}, need {frame.n}")
    out = _layer_matrix(frame, X)
    return [out[:, c] for c in range(out.shape[1])]


def blis_coeffs(
    frame: WaveletFrame, x, order: int, order_cap: int = DEFAULT_ORDER_CAP
) -> BlisCoefficients:
    """Order-m coefficients of one signal: m stacked layers, final layer only."""
    if order < 1:
        raise ValueError("order must be at least 1")
    if order > order_cap:
        raise OrderTooLarge(
            f"order {order} exceeds cap {order_cap}; "
            f"pass order_cap explicitly to override"
        )
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or len(x) != frame.n:
        raise LengthMismatch(f"signal length {np.shape(x)} != {frame.n}")
    cur = x[:, None]
    for _ in range(order):
        cur = _layer_matrix(frame, cur)
    return BlisCoefficients(order=order, J=frame.scales.J, values=cur.T.copy())


def mixed_norm_sq(coeffs: BlisCoefficients, weight) -> float:
    """Sum over paths of the squared weighted norm of each coefficient vector."""
    return float(np.sum(weighted_norm_sq_columns(coeffs.values.T, weight)))


def mixed_distance_sq(a: BlisCoefficients, b: BlisCoefficients, weight) -> float:
    """Mixed-norm squared distance between two coefficient sets."""
    if a.values.shape != b.values.shape or a.order != b.order:
        raise ShapeMismatch("coefficient sets have different shapes")
    return float(np.sum(weighted_norm_sq_columns((a.values - b.values).T, weight)))


def _final_layer_columns(frame: WaveletFrame, signals, order: int) -> np.ndarray:
    signals = np.atleast_2d(np.asarray(signals, dtype=float))
    if signals.shape[1] != frame.n:
        raise LengthMismatch(f"signals have length {signals.shape[1]}, need {frame.n}")
    cur = signals.T
    for _ in range(order):
        cur = _layer_matrix(frame, cur)
    return cur


def mixed_norm_sq_batch(frame: WaveletFrame, signals, order: int) -> np.ndarray:
    """Per-signal mixed norm^2 of order-m coefficients, computed in one pass."""
    cur = _final_layer_columns(frame, signals, order)
    per_col = weighted_norm_sq_columns(cur, frame.weight)
    return per_col.reshape(-1, layer_width(frame.scales.J) ** order).sum(axis=1)


def mixed_distance_sq_batch(frame: WaveletFrame, xs, ys, order: int) -> np.ndarray:
    """Pairwise (row i of xs vs row i of ys) mixed-norm squared distances."""
    cx = _final_layer_columns(frame, xs, order)
    cy = _final_layer_columns(frame, ys, order)
    per_col = weighted_norm_sq_columns(cx - cy, frame.weight)
    return per_col.reshape(-1, layer_width(frame.scales.J) ** order).sum(axis=1)


def invert_layer(frame: WaveletFrame, layer_outputs) -> np.ndarray:
    """Exact single-layer inverse from the 2(J+2) outputs of one input.

    Undo the activations per filter (x = sigma1 - sigma2), then collapse the
    filter bank: for w2 the bands telescope to the identity, for w1 each
    band is applied once more (q_j^2 = p_j) before telescoping.
    """
    outputs = [np.asarray(v, dtype=float) for v in layer_outputs]
    R = layer_width(frame.scales.J)
    if len(outputs) != R:
        raise ShapeMismatch(f"need {R} outputs for one input, got {len(outputs)}")
    if any(v.shape != (frame.n,) for v in outputs):
        raise ShapeMismatch("layer outputs must be length-n signals")
    bands = [outputs[2 * j] - outputs[2 * j + 1] for j in range(frame.size)]
    if frame.family == "w1":
        # q_j(K)^2 = p_j(K), so one more pass turns w1 bands into w2 bands
        bands = [f @ b for f, b in zip(frame.filters, bands)]
    return np.sum(bands, axis=0)


def path_labels(J: int, order: int) -> list[str]:
    """CSV header labels like B[j1.k1|j2.k2|...] in canonical path order."""
    jk = [(j, k) for j in range(J + 2) for k in (1, 2)]
    return [
        "B[" + "|".join(f"{j}.{k}" for j, k in path) + "]"
        for path in product(jk, repeat=order)
    ]


def first_moment_features(frame: WaveletFrame, signals, order: int) -> np.ndarray:
    """Node-summed order-m coefficients for a batch of signals.

    Rows are signals, columns follow the canonical path order.  Layers are
    evaluated on all signals at once; the final layer is reduced to column
    sums without materializing the full coefficient tensor.
    """
    signals = np.atleast_2d(np.asarray(signals, dtype=float))
    N, n = signals.shape
    if n != frame.n:
        raise LengthMismatch(f"signals have length {n}, need {frame.n}")
    R = layer_width(frame.scales.J)
    cur = signals.T
    for _ in range(order - 1):
        cur = _layer_matrix(frame, cur)
    filtered = frame.apply_matrix(cur)  # (J+2, n, N * R^(m-1))
    feats = np.empty((N, R**order))
    block = R ** (order - 1)  # final-layer columns per signal, per (j, k)
    for j in range(frame.size):
        pos = np.maximum(filtered[j], 0.0).sum(axis=0).reshape(N, block)
        neg = np.maximum(-filtered[j], 0.0).sum(axis=0).reshape(N, block)
        feats[:, 2 * j :: R] = pos
        feats[:, 2 * j + 1 :: R] = neg
    return feats
