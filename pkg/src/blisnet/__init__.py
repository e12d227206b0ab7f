"""Graph-signal processing with diffusion wavelet frames, classical geometric
scattering, and the bi-Lipschitz BLIS transform, plus a verification suite
that checks every guarantee constructively."""

from .graphs import (
    Graph,
    build_graph,
    diameter,
    is_bipartite,
    knn_graph,
    path_distance,
)
from .operators import (
    DiffusionOperator,
    SpectralDecomposition,
    WeightVector,
    conjugate_K,
    diffusion_T,
    diffusion_operator,
    eig_sym,
    g_canonical,
    normalized_laplacian,
    spectral_apply,
    weighted_inner,
    weighted_norm,
)
from .wavelets import (
    ScaleSequence,
    WaveletFrame,
    apply_frame,
    build_frame,
    compute_frame_bounds,
    dyadic_scales,
    wavelet_polys,
)
from .scattering import modulus, scatter_aggregate, scatter_all, scatter_U
from .blis import (
    BlisCoefficients,
    blis_coeffs,
    blis_layer,
    invert_layer,
    mixed_norm_sq,
    sigma1,
    sigma2,
)
from .counterexamples import (
    CounterexamplePair,
    bipartite_counterexample,
    diameter_counterexample,
    verify_blis_separates,
    verify_scatter_identical,
)
from .synthetic import five_replicates, gaussian_bump, generate_dataset
from .mlp import finite_diff_gradcheck, train_mlp
from .pipeline import aggregate_first_moment, cross_validate, featurize, run_experiment

__all__ = [
    "Graph",
    "build_graph",
    "knn_graph",
    "path_distance",
    "diameter",
    "is_bipartite",
    "SpectralDecomposition",
    "WeightVector",
    "DiffusionOperator",
    "normalized_laplacian",
    "eig_sym",
    "spectral_apply",
    "diffusion_T",
    "conjugate_K",
    "diffusion_operator",
    "g_canonical",
    "weighted_inner",
    "weighted_norm",
    "ScaleSequence",
    "WaveletFrame",
    "dyadic_scales",
    "wavelet_polys",
    "build_frame",
    "compute_frame_bounds",
    "apply_frame",
    "modulus",
    "scatter_U",
    "scatter_all",
    "scatter_aggregate",
    "sigma1",
    "sigma2",
    "BlisCoefficients",
    "blis_layer",
    "blis_coeffs",
    "mixed_norm_sq",
    "invert_layer",
    "CounterexamplePair",
    "bipartite_counterexample",
    "diameter_counterexample",
    "verify_scatter_identical",
    "verify_blis_separates",
    "gaussian_bump",
    "generate_dataset",
    "five_replicates",
    "train_mlp",
    "finite_diff_gradcheck",
    "featurize",
    "aggregate_first_moment",
    "cross_validate",
    "run_experiment",
]
