import json

import numpy as np
import pytest

from blisnet.cli import main
from blisnet.verify import run_verification
from blisnet.wavelets import WaveletFrame
from blisnet.zoo import graph_zoo


@pytest.fixture(scope="module")
def small_zoo():
    zoo = graph_zoo()
    return {k: zoo[k] for k in ("K2", "C3", "C6")}


def test_run_verification_passes(small_zoo):
    report = run_verification(
        family="w1", J=2, order=2, probes=10, perms=2, graphs=small_zoo
    )
    assert report["passed"]
    names = {c["name"] for c in report["checks"]}
    assert any("frame-bounds" in n for n in names)
    assert any("energy" in n for n in names)
    assert any("bi-lipschitz" in n for n in names)
    assert any("equivariance" in n for n in names)
    assert any("inversion" in n for n in names)
    assert any("counterexample" in n for n in names)
    # skipped regimes are reported, never silently dropped
    skipped = [c for c in report["checks"] if c["status"] == "skip"]
    assert any(c["graph"] == "C3" for c in skipped)


def test_run_verification_detects_tampering(small_zoo):
    def double_first_filter(frame):
        filters = frame.filters.copy()
        filters[0] = 2.0 * filters[0]
        return WaveletFrame(
            family=frame.family,
            scales=frame.scales,
            operator=frame.operator,
            filters=filters,
            frame_lower=frame.frame_lower,
            frame_upper=frame.frame_upper,
        )

    report = run_verification(
        family="w1", J=2, order=2, probes=10, perms=2,
        graphs=small_zoo, tamper=double_first_filter,
    )
    assert not report["passed"]
    failing = {c["name"] for c in report["checks"] if c["status"] == "fail"}
    assert any("energy" in n or "frame-bounds" in n for n in failing)


def test_cli_verify_writes_report(tmp_path, small_zoo, monkeypatch):
    import blisnet.verify as verify_mod

    monkeypatch.setattr(verify_mod, "graph_zoo", lambda: small_zoo)
    out = tmp_path / "report.json"
    code = main(
        ["verify", "--frame", "w2", "--J", "1", "--m", "1",
         "--probes", "8", "--out", str(out)]
    )
    assert code == 0
    report = json.loads(out.read_text())
    assert report["passed"] is True
    assert report["config"]["family"] == "w2"


def test_cli_synth_deterministic(tmp_path):
    out1 = tmp_path / "a"
    out2 = tmp_path / "b"
    args = ["synth", "--mode", "same-mu", "--seed", "7",
            "--nodes", "30", "--k", "3", "--signals", "8"]
    assert main(args + ["--out", str(out1)]) == 0
    assert main(args + ["--out", str(out2)]) == 0
    reps = sorted(p.name for p in out1.iterdir())
    assert reps == [f"replicate_{i}" for i in range(5)]
    for rep in reps:
        for fname in ("graph.csv", "points.csv", "signals.csv", "labels.csv", "meta.json"):
            a = (out1 / rep / fname).read_bytes()
            b = (out2 / rep / fname).read_bytes()
            assert a == b, f"{rep}/{fname} differs between identical runs"


def test_cli_synth_k_too_large(tmp_path, capsys):
    code = main(
        ["synth", "--nodes", "10", "--k", "12", "--signals", "4",
         "--out", str(tmp_path / "x")]
    )
    assert code == 2
    assert "KTooLarge" in capsys.readouterr().err


def test_cli_experiment_missing_dataset(tmp_path):
    code = main(["experiment", "--data", str(tmp_path / "missing")])
    assert code == 3


def test_cli_experiment_small_run(tmp_path):
    data = tmp_path / "data"
    assert main(
        ["synth", "--mode", "different-mu", "--seed", "3", "--nodes", "30",
         "--k", "4", "--signals", "30", "--out", str(data)]
    ) == 0
    out = tmp_path / "results"
    code = main(
        ["experiment", "--data", str(data), "--J", "1", "--m", "1",
         "--folds", "2", "--only", "blis:w1", "--only", "scattering:w2",
         "--hidden", "8", "--out", str(out)]
    )
    assert code == 0
    table = (out / "accuracy.csv").read_text().splitlines()
    assert table[0] == "featurizer,frame,mean_accuracy,std"
    assert len(table) == 3
    assert table[1].startswith("BLIS-Net,W1")
    assert table[2].startswith("Scattering,W2")
    records = json.loads((out / "results.json").read_text())
    assert len(records) == 2
    assert all(len(r["replicates"]) == 5 for r in records)


def test_cli_verify_failure_exit_code(monkeypatch):
    import blisnet.cli as cli_mod

    monkeypatch.setattr(
        cli_mod,
        "run_verification",
        lambda **kw: {"config": kw, "checks": [], "passed": False},
    )
    assert main(["verify"]) == 1


def test_cli_config_file_with_flag_override(tmp_path, small_zoo, monkeypatch):
    import blisnet.verify as verify_mod

    monkeypatch.setattr(verify_mod, "graph_zoo", lambda: small_zoo)
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"frame": "w2", "J": 1, "probes": 6}))
    out = tmp_path / "r.json"
    # flag beats config for J; config beats default for frame and probes
    code = main(
        ["--config", str(cfg), "verify", "--J", "0", "--m", "1", "--out", str(out)]
    )
    assert code == 0
    report = json.loads(out.read_text())
    assert report["config"]["family"] == "w2"
    assert report["config"]["J"] == 0
    assert report["config"]["probes"] == 6
