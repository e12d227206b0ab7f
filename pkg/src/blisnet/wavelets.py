"""Diffusion wavelet frames built from scale-difference polynomials.

Given scales 0 = s_0 < s_1 = 1 < ... < s_{J+1} the band polynomials are
p_j(t) = t^{s_j} - t^{s_{j+1}} with the low-pass p_{J+1}(t) = t^{s_{J+1}};
they telescope to 1 on [0, 1].  Family "w2" uses p_j(K) directly (a
non-expansive frame); family "w1" uses q_j(K) with q_j = sqrt(p_j) (an
isometry).  Frame bounds are exact: min/max of sum_j p_j(lambda)^2 over
the eigenvalues of K for w2, and (1, 1) for w1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import LengthMismatch, NegativeUnderSqrt
from .operators import DiffusionOperator, weighted_norm_sq_columns

FrameFamily = Literal["w1", "w2"]

# roundoff this far below zero is absorbed before taking sqrt(p_j)
SQRT_CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class ScaleSequence:
    """Strictly increasing integer scales with s_0 = 0 and s_1 = 1."""

    scales: tuple[int, ...]

    def __post_init__(self):
        s = tuple(int(v) for v in self.scales)
        object.__setattr__(self, "scales", s)
        if len(s) < 2 or s[0] != 0 or s[1] != 1:
            raise ValueError("scales must start 0, 1")
        if any(a >= b for a, b in zip(s, s[1:])):
            raise ValueError("scales must be strictly increasing")

    @property
    def J(self) -> int:
        return len(self.scales) - 2

    @property
    def last(self) -> int:
        return self.scales[-1]

    @property
    def is_dyadic(self) -> bool:
        return self.scales == dyadic_scales(self.J).scales


def dyadic_scales(J: int) -> ScaleSequence:
    """0, 1, 2, 4, ..., 2^J (length J + 2)."""
    if J < 0:
        raise ValueError("J must be nonnegative")
    return ScaleSequence((0, 1) + tuple(2**j for j in range(1, J + 1)))


@dataclass(frozen=True)
class ScalePolynomial:
    """t^lo - t^hi, or the terminal low-pass t^lo when hi is None."""

    lo: int
    hi: int | None = None

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if self.hi is None:
            return t**self.lo
        return t**self.lo - t**self.hi


def wavelet_polys(scales: ScaleSequence) -> list[ScalePolynomial]:
    """Band polynomials p_0 .. p_{J+1}; they sum to 1 identically on [0, 1]."""
    s = scales.scales
    polys = [ScalePolynomial(a, b) for a, b in zip(s, s[1:])]
    polys.append(ScalePolynomial(s[-1]))
    return polys


@dataclass(frozen=True, eq=False)
class WaveletFrame:
    """Ordered filter bank F_0..F_J (band-pass) plus F_{J+1} (low-pass).

    ``filters`` is a stacked (J+2, n, n) array, or None in matrix-free mode
    (family w2 only) where filtered signals are produced from powers of K
    on demand.
    """

    family: FrameFamily
    scales: ScaleSequence
    operator: DiffusionOperator
    filters: np.ndarray | None
    frame_lower: float
    frame_upper: float

    def __post_init__(self):
        if self.filters is not None:
            self.filters.setflags(write=False)

    @property
    def size(self) -> int:
        return self.scales.J + 2

    @property
    def n(self) -> int:
        return self.operator.n

    @property
    def weight(self):
        return self.operator.weight

    def apply_matrix(self, X: np.ndarray) -> np.ndarray:
        """All filters applied to signal columns: (J+2, n, B)."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[0] != self.n:
            raise LengthMismatch(f"signals have length {X.shape[0]}, need {self.n}")
        if self.filters is not None:
            return self.filters @ X
        return _power_route_apply(self.operator.matrix, self.scales, X)


def apply_frame(frame: WaveletFrame, x) -> list[np.ndarray]:
    """[F_0 x, ..., F_{J+1} x] for a single signal."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise LengthMismatch("apply_frame expects a single 1-D signal")
    out = frame.apply_matrix(x[:, None])
    return [out[j, :, 0] for j in range(frame.size)]


def _power_route_apply(k_mat, scales: ScaleSequence, X) -> np.ndarray:
    """Filtered signals via successive K powers (no stored filters)."""
    captures = []
    cur = X
    next_idx = 0
    for t in range(scales.last + 1):
        if t == scales.scales[next_idx]:
            captures.append(cur)
            next_idx += 1
        if t < scales.last:
            cur = k_mat @ cur
    out = np.empty((len(scales.scales), X.shape[0], X.shape[1]))
    for j in range(len(captures) - 1):
        out[j] = captures[j] - captures[j + 1]
    out[-1] = captures[-1]
    return out


def _k_powers(op: DiffusionOperator, scales: ScaleSequence) -> dict[int, np.ndarray]:
    k_mat = op.matrix
    powers = {0: np.eye(op.n), 1: k_mat.copy()}
    if scales.is_dyadic:
        cur, s = k_mat, 1
        while s < scales.last:
            cur = cur @ cur
            s *= 2
            powers[s] = cur
    else:
        for s in scales.scales:
            if s not in powers:
                powers[s] = np.linalg.matrix_power(k_mat, s)
    return powers


def _spectral_filters(op: DiffusionOperator, values: np.ndarray) -> np.ndarray:
    """Stacked filters W^-1 V diag(values_j) V^T W from filter eigenvalues."""
    c = op.weight.conjugator
    V = op.spectral.eigenvectors
    left = V / c[:, None]  # W^-1 V
    right = V.T * c[None, :]  # V^T W
    return np.stack([(left * row) @ right for row in values])


def build_frame(
    op: DiffusionOperator,
    scales: ScaleSequence,
    family: FrameFamily,
    method: str = "auto",
    matrix_free: bool = False,
) -> WaveletFrame:
    """Construct a wavelet frame over the diffusion operator.

    Family w2 defaults to the K-power route (repeated squaring for dyadic
    scales); ``method="spectral"`` applies p_j to the eigenvalues instead,
    and the two routes agree to roundoff.  Family w1 is spectral-only since
    it needs sqrt(p_j).  ``matrix_free=True`` (w2 only) skips storing dense
    filters and applies them from K powers on demand.
    """
    if family not in ("w1", "w2"):
        raise ValueError(f"unknown family {family!r}")
    polys = wavelet_polys(scales)
    lam = op.g_values
    lower, upper = compute_frame_bounds(op, scales, family)

    if family == "w1":
        if matrix_free:
            raise ValueError("matrix-free mode is available for family w2 only")
        if method not in ("auto", "spectral"):
            raise ValueError("family w1 is built spectrally")
        p_vals = np.stack([p(lam) for p in polys])
        if p_vals.min() < -SQRT_CLAMP_TOL:
            raise NegativeUnderSqrt(
                f"p_j eigenvalue {p_vals.min()} is too negative for sqrt"
            )
        filters = _spectral_filters(op, np.sqrt(np.maximum(p_vals, 0.0)))
    elif matrix_free:
        filters = None
    elif method in ("auto", "power"):
        powers = _k_powers(op, scales)
        s = scales.scales
        mats = [powers[a] - powers[b] for a, b in zip(s, s[1:])]
        mats.append(powers[s[-1]])
        filters = np.stack(mats)
    elif method == "spectral":
        filters = _spectral_filters(op, np.stack([p(lam) for p in polys]))
    else:
        raise ValueError(f"unknown method {method!r}")

    return WaveletFrame(
        family=family,
        scales=scales,
        operator=op,
        filters=filters,
        frame_lower=lower,
        frame_upper=upper,
    )


def compute_frame_bounds(
    op: DiffusionOperator, scales: ScaleSequence, family: FrameFamily
) -> tuple[float, float]:
    """Exact frame bounds from the operator spectrum.

    w1 is an isometry, so (1, 1).  For w2 the Rayleigh quotient of the frame
    energy equals sum_j p_j(lambda)^2 at eigenvalues of K, so the bounds are
    its min and max over the spectrum.
    """
    if family == "w1":
        return 1.0, 1.0
    pj_sq = _band_energy(scales, op.g_values)
    return float(pj_sq.min()), float(pj_sq.max())


def _band_energy(scales: ScaleSequence, t) -> np.ndarray:
    polys = wavelet_polys(scales)
    return np.sum([p(t) ** 2 for p in polys], axis=0)


def universal_lower_bound(scales: ScaleSequence, grid: int = 200_001) -> float:
    """Graph-independent w2 lower bound: inf over [0,1] of (1-t)^2 + t^(2 s_last).

    Evaluated on a dense grid; conservative for any operator spectrum.
    """
    t = np.linspace(0.0, 1.0, grid)
    return float(np.min((1.0 - t) ** 2 + t ** (2 * scales.last)))


def frame_energy(frame: WaveletFrame, x) -> float:
    """sum_j ||F_j x||_w^2 for a single signal."""
    out = frame.apply_matrix(np.asarray(x, dtype=float)[:, None])
    return float(
        sum(weighted_norm_sq_columns(out[j], frame.weight)[0] for j in range(frame.size))
    )


def save_filters_csv(frame: WaveletFrame, directory) -> None:
    """Dump each dense filter matrix as filter_<j>.csv for inspection."""
    from pathlib import Path

    from .operators import save_matrix_csv

    if frame.filters is None:
        raise ValueError("matrix-free frames store no filter matrices")
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for j in range(frame.size):
        save_matrix_csv(frame.filters[j], directory / f"filter_{j}.csv")
