"""Normalized Laplacian spectra, spectral calculus, and diffusion operators.

The weighted inner product is <x, y>_w = sum_i x_i y_i w_i.  The conjugated
diffusion operator K = W^-1 T W uses W = diag(sqrt(w)) so that
<Wx, Wy>_2 = <x, y>_w holds exactly and K is self-adjoint on L2_w.
The degree preset with exponent alpha conjugates by D^alpha, i.e. the norm
weights are d_i^(2*alpha); alpha = -1/2 makes K the lazy random walk matrix
P = (I + A D^-1) / 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    EigSolverFailure,
    InvalidG,
    LengthMismatch,
    NonPositiveWeight,
    SpectrumOutOfRange,
)
from .graphs import Graph

# eigenvalues this close to the [0, 2] endpoints are snapped onto them
EIG_CLAMP_TOL = 1e-8
# eigenvalues beyond this distance outside [0, 2] signal a broken Laplacian
EIG_HARD_TOL = 1e-6


def g_canonical(t):
    """Default diffusion profile g(t) = 1 - t/2 on [0, 2]."""
    return 1.0 - np.asarray(t, dtype=float) / 2.0


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Orthonormal eigendecomposition of a symmetric normalized Laplacian."""

    eigenvalues: np.ndarray  # ascending, inside [0, 2]
    eigenvectors: np.ndarray  # columns are eigenvectors

    def __post_init__(self):
        self.eigenvalues.setflags(write=False)
        self.eigenvectors.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.eigenvalues)


@dataclass(frozen=True, eq=False)
class WeightVector:
    """Strictly positive norm weights w with the conjugation diagonal sqrt(w)."""

    w: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.w, dtype=float)
        if w.ndim != 1:
            raise ValueError("weight vector must be 1-D")
        if not (w > 0).all():
            raise NonPositiveWeight("all norm weights must be strictly positive")
        object.__setattr__(self, "w", w)
        w.setflags(write=False)

    @cached_property
    def conjugator(self) -> np.ndarray:
        """Diagonal entries of W in K = W^-1 T W."""
        c = np.sqrt(self.w)
        c.setflags(write=False)
        return c

    @classmethod
    def ones(cls, n: int) -> "WeightVector":
        return cls(np.ones(n))

    @classmethod
    def from_degrees(cls, degrees, alpha: float) -> "WeightVector":
        """Preset conjugating by D^alpha (norm weights d^(2*alpha))."""
        if not -0.5 <= alpha <= 0.5:
            raise ValueError("alpha must lie in [-0.5, 0.5]")
        d = np.asarray(degrees, dtype=float)
        return cls(d ** (2.0 * alpha))


def _weights(weight) -> np.ndarray:
    return weight.w if isinstance(weight, WeightVector) else np.asarray(weight, float)


def weighted_inner(x, y, weight) -> float:
    """<x, y>_w = sum_i x_i y_i w_i."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w = _weights(weight)
    if not (len(x) == len(y) == len(w)):
        raise LengthMismatch(f"lengths {len(x)}, {len(y)}, {len(w)} differ")
    return float(np.sum(x * y * w))


def weighted_norm(x, weight) -> float:
    return float(np.sqrt(max(weighted_inner(x, x, weight), 0.0)))


def weighted_norm_sq_columns(X, weight) -> np.ndarray:
    """Squared weighted norms of the columns of X."""
    w = _weights(weight)
    return np.einsum("ib,i->b", np.asarray(X, float) ** 2, w)


def normalized_laplacian(graph: Graph) -> np.ndarray:
    """L = I - D^-1/2 A D^-1/2 (symmetric, PSD, spectrum in [0, 2])."""
    d = graph.degrees
    if not (d > 0).all():
        raise ValueError("normalized Laplacian needs strictly positive degrees")
    inv_sqrt = graph.degree_data.power(-0.5)
    A = graph.dense_adjacency()
    lap = np.eye(graph.n) - inv_sqrt[:, None] * A * inv_sqrt[None, :]
    return (lap + lap.T) / 2.0


def eig_sym(lap: np.ndarray) -> SpectralDecomposition:
    """Eigendecomposition of a symmetric Laplacian with [0, 2] clamping."""
    lap = np.asarray(lap, dtype=float)
    if lap.shape[0] != lap.shape[1]:
        raise ValueError("matrix must be square")
    if np.abs(lap - lap.T).max() > 1e-10:
        raise ValueError("matrix is not symmetric within 1e-10")
    try:
        vals, vecs = np.linalg.eigh(lap)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - rare
        raise EigSolverFailure(str(exc)) from exc
    if vals.min() < -EIG_HARD_TOL or vals.max() > 2.0 + EIG_HARD_TOL:
        raise SpectrumOutOfRange(
            f"eigenvalues [{vals.min()}, {vals.max()}] leave [0, 2]"
        )
    vals = vals.copy()
    vals[np.abs(vals) <= EIG_CLAMP_TOL] = 0.0
    vals[np.abs(vals - 2.0) <= EIG_CLAMP_TOL] = 2.0
    vals = np.clip(vals, 0.0, 2.0)
    return SpectralDecomposition(eigenvalues=vals, eigenvectors=vecs)


def spectral_apply(decomp: SpectralDecomposition, f) -> np.ndarray:
    """f applied through the eigendecomposition: V diag(f(omega)) V^T."""
    vals = _eval_scalar_function(f, decomp.eigenvalues)
    return (decomp.eigenvectors * vals) @ decomp.eigenvectors.T


def _eval_scalar_function(f, grid: np.ndarray) -> np.ndarray:
    out = f(grid)
    out = np.asarray(out, dtype=float)
    if out.shape != grid.shape:  # scalar-only callable
        out = np.asarray([float(f(t)) for t in grid])
    return out


def _validate_g(g) -> None:
    """g must be nonincreasing on [0, 2] with g(0) = 1 and g(2) = 0."""
    grid = np.linspace(0.0, 2.0, 41)
    vals = _eval_scalar_function(g, grid)
    if abs(vals[0] - 1.0) > 1e-12 or abs(vals[-1]) > 1e-12:
        raise InvalidG("g must satisfy g(0) = 1 and g(2) = 0")
    if np.any(np.diff(vals) > 1e-12):
        raise InvalidG("g must be decreasing on [0, 2]")


def diffusion_T(decomp: SpectralDecomposition, g=g_canonical) -> np.ndarray:
    """Symmetric diffusion operator T = g(L); default g(t) = 1 - t/2."""
    _validate_g(g)
    return spectral_apply(decomp, g)


@dataclass(frozen=True, eq=False)
class DiffusionOperator:
    """K = W^-1 g(L) W together with its spectral data and weights."""

    spectral: SpectralDecomposition
    g_values: np.ndarray  # eigenvalues of T and K, inside [0, 1]
    weight: WeightVector
    matrix: np.ndarray  # realized K
    graph: Graph | None = None

    def __post_init__(self):
        self.g_values.setflags(write=False)
        self.matrix.setflags(write=False)

    @property
    def n(self) -> int:
        return self.spectral.n

    @cached_property
    def k_eigenvectors(self) -> np.ndarray:
        """Columns are eigenvectors of K: W^-1 times the Laplacian eigenbasis."""
        vecs = self.spectral.eigenvectors / self.weight.conjugator[:, None]
        vecs.setflags(write=False)
        return vecs


def conjugate_K(
    decomp: SpectralDecomposition,
    weight: WeightVector,
    g=g_canonical,
    graph: Graph | None = None,
) -> DiffusionOperator:
    """Conjugated diffusion operator K = W^-1 g(L) W, self-adjoint on L2_w."""
    if not isinstance(weight, WeightVector):
        weight = WeightVector(np.asarray(weight, dtype=float))
    if len(weight.w) != decomp.n:
        raise LengthMismatch("weight length does not match the decomposition")
    _validate_g(g)
    lam = _eval_scalar_function(g, decomp.eigenvalues)
    if lam.min() < -1e-8 or lam.max() > 1.0 + 1e-8:
        raise InvalidG("g must map [0, 2] into [0, 1]")
    lam = np.clip(lam, 0.0, 1.0)
    t_mat = (decomp.eigenvectors * lam) @ decomp.eigenvectors.T
    c = weight.conjugator
    k_mat = (t_mat * c[None, :]) / c[:, None]
    return DiffusionOperator(
        spectral=decomp, g_values=lam, weight=weight, matrix=k_mat, graph=graph
    )


def diffusion_operator(
    graph: Graph, alpha: float = -0.5, g=g_canonical
) -> DiffusionOperator:
    """Laplacian -> eigendecomposition -> K, with the D^alpha weight preset.

    The default alpha = -1/2 yields the lazy random walk K = P.
    """
    decomp = eig_sym(normalized_laplacian(graph))
    weight = WeightVector.from_degrees(graph.degrees, alpha)
    return conjugate_K(decomp, weight, g=g, graph=graph)


def lazy_random_walk(graph: Graph) -> np.ndarray:
    """P = (I + A D^-1) / 2, assembled directly from the adjacency."""
    inv_d = graph.degree_data.power(-1.0)
    return 0.5 * (np.eye(graph.n) + graph.dense_adjacency() * inv_d[None, :])


def save_matrix_csv(matrix: np.ndarray, path) -> None:
    """Full dense row-major CSV dump, for debugging."""
    np.savetxt(path, np.asarray(matrix, dtype=float), delimiter=",")
