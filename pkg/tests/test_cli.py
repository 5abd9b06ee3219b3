import json
import subprocess
import sys

import numpy as np
import pytest

from betatw import cli
from betatw.cli import RunConfig, UsageError, main, parse_config
from betatw.formats import read_batch, read_table


def run(capsys, *args):
    code = main(list(args))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_sample_example():
    cfg = parse_config("sample --beta 2 --n-dim 200 --count 1000 --seed 7".split())
    assert isinstance(cfg, RunConfig)
    assert (cfg.command, cfg.beta, cfg.n_dim, cfg.count, cfg.seed) == ("sample", 2.0, 200, 1000, 7)


def test_negative_beta_names_the_key(capsys):
    code, _, err = run(capsys, "sample", "--beta", "-1")
    assert code == 2 and "beta" in err


def test_empty_args_prints_usage(capsys):
    code, _, err = run(capsys)
    assert code == 2 and "usage" in err


@pytest.mark.parametrize(
    "args",
    [
        ["sample", "--bogus", "1"],
        ["frobnicate"],
        ["sample", "--count", "0"],
        ["sample", "--n-dim", "abc"],
        ["cdf", "--x-min", "2", "--x-max", "1"],
        ["cdf", "--x-min", "-9", "--x-max", "0"],
        ["tails", "--x-min", "0"],
        ["idcheck", "--x-min", "0.5"],
        ["idcheck", "--source", "painleve", "--beta", "3"],
        ["idcheck", "--bound", "1,2"],
        ["verify", "--only", "99"],
        ["sample", "--kind", "goe_dense", "--beta", "2"],
    ],
)
def test_usage_errors(capsys, args):
    assert run(capsys, *args)[0] == 2


def test_config_file_precedence(tmp_path):
    conf = tmp_path / "run.cfg"
    conf.write_text("# defaults for a small run\nbeta = 4\nn-dim = 30\nseed = 5\n")
    cfg = parse_config(["sample", "--config", str(conf), "--seed", "9"])
    assert (cfg.beta, cfg.n_dim, cfg.seed) == (4.0, 30, 9)
    cfg = parse_config(["sample"], config_file=str(conf))
    assert cfg.seed == 5
    assert parse_config(["sample"]).beta == 2.0


@pytest.mark.parametrize(
    "text, key",
    [("colour = red\n", "colour"), ("beta = -2\n", "beta"), ("count = many\n", "count"), ("quick = maybe\n", "quick")],
)
def test_config_errors_name_the_key(tmp_path, text, key):
    conf = tmp_path / "bad.cfg"
    conf.write_text(text)
    with pytest.raises(UsageError, match=key):
        parse_config(["sample", "--config", str(conf)])


def test_sample_writes_csv_and_sidecar(tmp_path, capsys):
    out = tmp_path / "s.csv"
    code, _, _ = run(capsys, "sample", "--n-dim", "20", "--count", "50", "--seed", "3", "--out", str(out))
    assert code == 0
    batch = read_batch(out)
    assert batch.n == 50 and batch.seed == 3 and batch.spec.n_dim == 20


def test_sample_is_byte_identical_across_runs_and_threads(tmp_path, capsys):
    paths = []
    for i, threads in enumerate(("1", "8", "0")):
        p = tmp_path / f"s{i}.csv"
        run(capsys, "sample", "--n-dim", "20", "--count", "64", "--seed", "3", "--threads", threads, "--out", str(p))
        paths.append(p.read_bytes())
    assert paths[0] == paths[1] == paths[2]


def test_sample_json_stdout(capsys):
    code, out, _ = run(capsys, "sample", "--n-dim", "10", "--count", "4", "--format", "json")
    body = json.loads(out)
    assert code == 0 and len(body["samples"]) == 4 and body["n"] == 4


def test_cdf_table(tmp_path, capsys):
    out = tmp_path / "cdf.csv"
    assert run(capsys, "cdf", "--x-min", "-3", "--x-max", "3", "--x-step", "0.5", "--out", str(out))[0] == 0
    header, rows = read_table(out)
    assert header == ["x", "F1", "F2", "F4"]
    vals = np.array(rows, dtype=float)
    assert vals.shape == (13, 4)
    assert np.all(np.diff(vals[:, 1:], axis=0) > 0)
    assert run(capsys, "cdf", "--format", "json")[0] == 0


def test_tails_table(capsys):
    code, out, _ = run(capsys, "tails", "--beta", "2", "--x-min", "1", "--x-max", "3", "--x-step", "1")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "x,side,log_asymptote" and len(lines) == 10
    assert lines[1].startswith("1.0,left,")


def test_idcheck_verdicts(capsys):
    code, out, _ = run(capsys, "idcheck", "--beta", "0.5")
    assert code == 0 and json.loads(out)["verdict"] == "NotID_GaussianCriterion"
    code, out, _ = run(capsys, "idcheck", "--source", "painleve", "--x-min", "2", "--x-max", "7", "--x-step", "8")
    assert json.loads(out)["verdict"] == "Inconclusive"


def test_verify_subset(tmp_path, capsys):
    out = tmp_path / "report.json"
    code, _, err = run(capsys, "verify", "--quick", "--only", "9,10", "--out", str(out))
    report = json.loads(out.read_text())
    assert code == 0 and report["failed"] == 0
    assert all({"passed", "measured", "tolerance"} <= set(c) for c in report["checks"])
    assert err.count("[PASS]") == len(report["checks"])


def test_verify_quick_full_report(capsys):
    code, out, _ = run(capsys, "verify", "--quick")
    report = json.loads(out)
    assert len(report["checks"]) >= 10
    assert {c["criterion"] for c in report["checks"]} == set(range(1, 12))
    assert all("measured" in c and "tolerance" in c for c in report["checks"])
    assert code == (0 if report["failed"] == 0 else 1)


def test_verify_corrupted_snapshot(tmp_path, capsys):
    snap = tmp_path / "snap.csv"
    snap.write_text("s,q,qprime,I1,I2,I2w\n0,not-a-number,0,0,0,0\n")
    code, _, err = run(capsys, "verify", "--quick", "--painleve-snapshot", str(snap))
    assert code == 3 and "snapshot" in err
    assert run(capsys, "verify", "--painleve-snapshot", str(tmp_path / "missing.csv"))[0] == 3


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "betatw", "tails", "--x-max", "2", "--x-step", "1"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("x,side,log_asymptote")
