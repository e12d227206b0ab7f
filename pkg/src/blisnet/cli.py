"""Command-line entry point: verify / synth / experiment.

Exit codes: 0 success, 1 verification failure, 2 usage or validation error,
3 I/O error.  A JSON config file can preset any flag; explicit flags win.
Machine-readable output goes to files, a short human summary to stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import BlisError, MissingDataset
from .mlp import HIDDEN_GRID
from .pipeline import FEATURIZERS, experiment_table, run_experiment
from .synthetic import (
    DIFFERENT_MU,
    SAME_MU,
    five_replicates,
    load_dataset,
    save_dataset,
)
from .verify import run_verification

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blisnet",
        description="Wavelet frames, scattering, and BLIS on graphs: "
        "verification suites, synthetic datasets, and experiments.",
    )
    parser.add_argument("--config", type=Path, help="JSON file with flag defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run the theorem verification battery")
    p_verify.add_argument("--frame", choices=["w1", "w2"], default=None)
    p_verify.add_argument("--J", type=int, default=None)
    p_verify.add_argument("--m", type=int, default=None)
    p_verify.add_argument("--alpha", type=float, default=None)
    p_verify.add_argument("--seed", type=int, default=None)
    p_verify.add_argument("--probes", type=int, default=None)
    p_verify.add_argument("--out", type=Path, default=None, help="JSON report path")

    p_synth = sub.add_parser("synth", help="generate synthetic dataset replicates")
    p_synth.add_argument(
        "--mode", choices=[DIFFERENT_MU, SAME_MU], default=None, dest="mode"
    )
    p_synth.add_argument("--seed", type=int, default=None)
    p_synth.add_argument("--nodes", type=int, default=None)
    p_synth.add_argument("--k", type=int, default=None)
    p_synth.add_argument("--signals", type=int, default=None)
    p_synth.add_argument("--out", type=Path, default=None)

    p_exp = sub.add_parser("experiment", help="run featurizer x frame accuracy table")
    p_exp.add_argument("--data", type=Path, default=None, help="dataset directory")
    p_exp.add_argument("--J", type=int, default=None)
    p_exp.add_argument("--m", type=int, default=None)
    p_exp.add_argument("--folds", type=int, default=None)
    p_exp.add_argument("--seed", type=int, default=None)
    p_exp.add_argument("--jobs", type=int, default=None, help="worker processes")
    p_exp.add_argument(
        "--only",
        action="append",
        default=None,
        help="restrict rows, e.g. --only blis:w1 --only scattering:w2",
    )
    p_exp.add_argument(
        "--hidden",
        action="append",
        default=None,
        help="hidden sizes like 50 or 150,50; repeat to build a grid",
    )
    p_exp.add_argument("--out", type=Path, default=None)
    return parser


DEFAULTS = {
    "verify": {"frame": "w1", "J": 2, "m": 2, "alpha": -0.5, "seed": 0, "probes": 25},
    "synth": {
        "mode": DIFFERENT_MU,
        "seed": 0,
        "nodes": 100,
        "k": 5,
        "signals": 400,
        "out": Path("synth-out"),
    },
    "experiment": {"J": 4, "m": 3, "folds": 5, "seed": 0, "jobs": 1},
}


def _merge_config(args: argparse.Namespace) -> dict:
    """defaults < config file < explicit flags."""
    merged = dict(DEFAULTS.get(args.command, {}))
    if args.config is not None:
        merged.update(json.loads(Path(args.config).read_text()))
    for key, value in vars(args).items():
        if key in ("config", "command") or value is None:
            continue
        merged[key] = value
    return merged


def _cmd_verify(cfg: dict) -> int:
    report = run_verification(
        family=cfg["frame"],
        J=cfg["J"],
        order=cfg["m"],
        alpha=cfg["alpha"],
        seed=cfg["seed"],
        probes=cfg["probes"],
    )
    if cfg.get("out"):
        Path(cfg["out"]).write_text(json.dumps(report, indent=2))
    counts = {"pass": 0, "fail": 0, "skip": 0}
    for check in report["checks"]:
        counts[check["status"]] += 1
        if check["status"] == "fail":
            print(
                f"FAIL {check['name']} on {check['graph']}: "
                f"measured={check['measured']} bound={check['bound']} {check['note']}"
            )
    print(
        f"verify[{cfg['frame']}, J={cfg['J']}, m={cfg['m']}]: "
        f"{counts['pass']} passed, {counts['fail']} failed, {counts['skip']} skipped"
    )
    return EXIT_OK if report["passed"] else EXIT_VERIFY_FAILED


def _cmd_synth(cfg: dict) -> int:
    out = Path(cfg["out"])
    datasets = five_replicates(
        cfg["mode"],
        cfg["seed"],
        n_nodes=cfg["nodes"],
        k=cfg["k"],
        n_signals=cfg["signals"],
    )
    for rep, dataset in enumerate(datasets):
        save_dataset(dataset, out / f"replicate_{rep}")
    print(f"wrote 5 replicates ({cfg['mode']}, seed {cfg['seed']}) under {out}")
    return EXIT_OK


def _load_replicates(data_dir: Path):
    if not data_dir.exists():
        raise MissingDataset(f"{data_dir} does not exist")
    replicate_dirs = sorted(data_dir.glob("replicate_*"))
    if replicate_dirs:
        return [load_dataset(d) for d in replicate_dirs]
    return [load_dataset(data_dir)]


def _parse_hidden(specs) -> tuple:
    return tuple(tuple(int(v) for v in spec.split(",")) for spec in specs)


def _cmd_experiment(cfg: dict) -> int:
    if not cfg.get("data"):
        print("experiment requires --data", file=sys.stderr)
        return EXIT_USAGE
    datasets = _load_replicates(Path(cfg["data"]))
    featurizers = FEATURIZERS
    if cfg.get("only"):
        featurizers = []
        for item in cfg["only"]:
            parts = tuple(item.split(":"))
            good = (
                len(parts) == 2
                and parts[0] in ("blis", "scattering")
                and parts[1] in ("w1", "w2")
            )
            if not good:
                print(f"bad --only value {item!r}; use kind:frame", file=sys.stderr)
                return EXIT_USAGE
            featurizers.append(parts)
    hidden_grid = (
        _parse_hidden(cfg["hidden"]) if cfg.get("hidden") else HIDDEN_GRID
    )
    records = run_experiment(
        datasets,
        featurizers=featurizers,
        J=cfg["J"],
        order=cfg["m"],
        folds=cfg["folds"],
        hidden_grid=hidden_grid,
        seed=cfg["seed"],
        n_jobs=cfg["jobs"],
    )
    table = experiment_table(records)
    if cfg.get("out"):
        out = Path(cfg["out"])
        out.mkdir(parents=True, exist_ok=True)
        (out / "results.json").write_text(json.dumps(records, indent=2))
        (out / "accuracy.csv").write_text(table)
    print(table, end="")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    cfg = _merge_config(args)
    try:
        if args.command == "verify":
            return _cmd_verify(cfg)
        if args.command == "synth":
            return _cmd_synth(cfg)
        return _cmd_experiment(cfg)
    except MissingDataset as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (BlisError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
