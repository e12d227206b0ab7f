"""End-to-end classification: features -> moment aggregation -> MLP.

Features come from either the BLIS transform (final-layer coefficients,
node-summed) or classical scattering (orders 0..2, node-summed).  Evaluation
repeats a stratified 70/30 split five times; hidden-layer sizes are chosen
per split by stratified 5-fold cross-validation on the training part, with
per-column standardization fitted on training data only.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import blis, scattering
from .blis import BlisCoefficients
from .mlp import HIDDEN_GRID, accuracy, train_mlp
from .scattering import ScatterCoefficients
from .synthetic import SignalDataset
from .wavelets import build_frame, dyadic_scales
from .operators import diffusion_operator

SCATTER_MAX_ORDER = 2

FEATURIZERS = (
    ("scattering", "w1"),
    ("scattering", "w2"),
    ("blis", "w1"),
    ("blis", "w2"),
)


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """N x F feature block with provenance and canonical column names."""

    values: np.ndarray
    kind: str  # "blis" or "scattering"
    family: str
    J: int
    order: int
    columns: tuple[str, ...]

    def __post_init__(self):
        if not np.isfinite(self.values).all():
            raise ValueError("feature matrix contains NaN or Inf")
        self.values.setflags(write=False)


def aggregate_first_moment(coeffs) -> np.ndarray:
    """Node sums of each coefficient vector, in canonical path order."""
    if isinstance(coeffs, BlisCoefficients):
        return coeffs.values.sum(axis=1)
    if isinstance(coeffs, ScatterCoefficients):
        return scattering.scatter_aggregate(coeffs)
    raise TypeError(f"cannot aggregate {type(coeffs).__name__}")


def featurize(
    dataset: SignalDataset,
    kind: str,
    family: str,
    J: int = 4,
    order: int = 3,
    alpha: float = -0.5,
    scatter_order: int = SCATTER_MAX_ORDER,
) -> FeatureMatrix:
    """Aggregated features for every signal of a dataset."""
    op = diffusion_operator(dataset.graph, alpha=alpha)
    frame = build_frame(op, dyadic_scales(J), family)
    if kind == "blis":
        values = blis.first_moment_features(frame, dataset.signals, order)
        columns = tuple(blis.path_labels(J, order))
    elif kind == "scattering":
        values = scattering.first_moment_features(
            frame, dataset.signals, scatter_order
        )
        columns = tuple(scattering.feature_names(J, scatter_order))
        order = scatter_order
    else:
        raise ValueError(f"unknown featurizer kind {kind!r}")
    return FeatureMatrix(
        values=values, kind=kind, family=family, J=J, order=order, columns=columns
    )


def save_features_csv(features: FeatureMatrix, path) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(features.columns)
        for row in features.values:
            writer.writerow([repr(float(v)) for v in row])


def fit_standardizer(X: np.ndarray):
    """Per-column z-score parameters; constant columns get unit scale."""
    mu = X.mean(axis=0)
    sd = X.std(axis=0)
    sd = np.where(sd < 1e-12, 1.0, sd)
    return mu, sd


def stratified_split(labels, test_frac: float, rng) -> tuple[np.ndarray, np.ndarray]:
    """Random class-stratified train/test split (test size rounded per class)."""
    labels = np.asarray(labels)
    train, test = [], []
    for cls in np.unique(labels):
        idx = rng.permutation(np.flatnonzero(labels == cls))
        n_test = int(round(test_frac * len(idx)))
        test.extend(idx[:n_test])
        train.extend(idx[n_test:])
    return np.sort(np.asarray(train)), np.sort(np.asarray(test))


def stratified_kfold(labels, folds: int, rng):
    """Class-stratified partition into ``folds`` (train, val) index pairs."""
    labels = np.asarray(labels)
    assignment = np.empty(len(labels), dtype=int)
    for cls in np.unique(labels):
        idx = rng.permutation(np.flatnonzero(labels == cls))
        assignment[idx] = np.arange(len(idx)) % folds
    return [
        (np.flatnonzero(assignment != f), np.flatnonzero(assignment == f))
        for f in range(folds)
    ]


@dataclass(frozen=True)
class CrossValResult:
    fold_accuracies: tuple[float, ...]
    chosen_hidden: tuple[tuple[int, ...], ...]
    mean: float
    std: float


def _fit_and_score(X_train, y_train, X_eval, y_eval, hidden, seed, mlp_kwargs):
    mu, sd = fit_standardizer(X_train)
    model = train_mlp(
        (X_train - mu) / sd, y_train, hidden=hidden, seed=seed, **mlp_kwargs
    )
    return accuracy(model, (X_eval - mu) / sd, y_eval)


def cross_validate(
    features,
    labels,
    folds: int = 5,
    hidden_grid=HIDDEN_GRID,
    seed: int = 0,
    inner_folds: int = 5,
    **mlp_kwargs,
) -> CrossValResult:
    """Repeated stratified 70/30 evaluation with nested hidden-size selection.

    Per outer fold: split 70/30, pick the hidden configuration with the best
    mean validation accuracy over an inner stratified k-fold of the training
    part, retrain on the full training part, record test accuracy.
    """
    X = features.values if isinstance(features, FeatureMatrix) else np.asarray(features)
    y = np.asarray(labels)
    hidden_grid = tuple(tuple(h) for h in hidden_grid)
    accs, chosen = [], []
    for fold in range(folds):
        rng = np.random.default_rng((seed, fold))
        train_idx, test_idx = stratified_split(y, 0.3, rng)
        if len(hidden_grid) == 1:
            best_hidden = hidden_grid[0]
        else:
            scores = []
            inner = stratified_kfold(y[train_idx], inner_folds, rng)
            for hidden in hidden_grid:
                vals = [
                    _fit_and_score(
                        X[train_idx][tr],
                        y[train_idx][tr],
                        X[train_idx][va],
                        y[train_idx][va],
                        hidden,
                        seed * 1000 + fold,
                        mlp_kwargs,
                    )
                    for tr, va in inner
                ]
                scores.append(float(np.mean(vals)))
            best_hidden = hidden_grid[int(np.argmax(scores))]
        accs.append(
            _fit_and_score(
                X[train_idx],
                y[train_idx],
                X[test_idx],
                y[test_idx],
                best_hidden,
                seed * 1000 + fold,
                mlp_kwargs,
            )
        )
        chosen.append(best_hidden)
    return CrossValResult(
        fold_accuracies=tuple(accs),
        chosen_hidden=tuple(chosen),
        mean=float(np.mean(accs)),
        std=float(np.std(accs)),
    )


def _limit_worker_threads():
    # one BLAS thread per pool worker, otherwise workers thrash each other
    try:
        import threadpoolctl

        threadpoolctl.threadpool_limits(1)
    except ImportError:
        pass


def _experiment_unit(args):
    """One (featurizer, replicate) evaluation; module-level for pickling."""
    dataset, kind, family, J, order, folds, hidden_grid, seed, rep, kwargs = args
    fm = featurize(dataset, kind, family, J=J, order=order)
    result = cross_validate(
        fm, dataset.labels, folds=folds, hidden_grid=hidden_grid,
        seed=seed + rep, **kwargs,
    )
    return {
        "replicate": rep,
        "folds": list(result.fold_accuracies),
        "mean": result.mean,
        "std": result.std,
        "chosen_hidden": [list(h) for h in result.chosen_hidden],
    }


def run_experiment(
    datasets,
    featurizers=FEATURIZERS,
    J: int = 4,
    order: int = 3,
    folds: int = 5,
    hidden_grid=HIDDEN_GRID,
    seed: int = 0,
    n_jobs: int = 1,
    **mlp_kwargs,
) -> list[dict]:
    """Evaluate featurizer rows over dataset replicates.

    Returns one record per (kind, family) with per-replicate fold results
    and the replicate-level mean/std of accuracy.  Replicates are
    independent, so with ``n_jobs > 1`` the (featurizer, replicate) units
    run in a process pool; results are identical either way.  Training
    runs in float32 by default here: the BLIS feature blocks are large and
    classification accuracy does not need double precision.
    """
    mlp_kwargs.setdefault("dtype", np.float32)
    featurizers = tuple(tuple(f) for f in featurizers)
    units = [
        (datasets[rep], kind, family, J, order, folds, hidden_grid, seed, rep, mlp_kwargs)
        for kind, family in featurizers
        for rep in range(len(datasets))
    ]
    if n_jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(
            max_workers=n_jobs, initializer=_limit_worker_threads
        ) as pool:
            details = list(pool.map(_experiment_unit, units))
    else:
        details = [_experiment_unit(u) for u in units]

    records = []
    n_rep = len(datasets)
    for block, (kind, family) in enumerate(featurizers):
        replicate_details = details[block * n_rep : (block + 1) * n_rep]
        replicate_means = [d["mean"] for d in replicate_details]
        records.append(
            {
                "task": datasets[0].mode,
                "featurizer": kind,
                "frame": family,
                "J": J,
                "m": order if kind == "blis" else SCATTER_MAX_ORDER,
                "replicates": replicate_details,
                "mean": float(np.mean(replicate_means)),
                "std": float(np.std(replicate_means)),
            }
        )
    return records


def experiment_table(records) -> str:
    """CSV accuracy table, one row per featurizer x frame."""
    lines = ["featurizer,frame,mean_accuracy,std"]
    for rec in records:
        name = "BLIS-Net" if rec["featurizer"] == "blis" else "Scattering"
        lines.append(
            f"{name},{rec['frame'].upper()},{rec['mean']:.4f},{rec['std']:.4f}"
        )
    return "\n".join(lines) + "\n"
