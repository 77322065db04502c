import json
import subprocess
import sys

import numpy as np
import pytest

from seismic.cli import main
from seismic.config import load_config
from seismic.kernel import TWITTER_KERNEL, sample_reaction_times


def run(*argv):
    return main([str(a) for a in argv])


def read_tree(path):
    if path.is_file():
        return {path.name: path.read_bytes()}
    return {p.relative_to(path).as_posix(): p.read_bytes() for p in sorted(path.rglob("*"))
            if p.is_file()}


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus")
    assert run("simulate", "--seed", 7, "--count", 30, "--p", "decay:0.012:120",
               "--root-degree", "zipf:1.5:20000", "--horizon-days", 2, "--out", out) == 0
    return out


def test_simulate_byte_identical(tmp_path, corpus):
    again = tmp_path / "again"
    assert run("simulate", "--seed", 7, "--count", 30, "--p", "decay:0.012:120",
               "--root-degree", "zipf:1.5:20000", "--horizon-days", 2, "--out", again) == 0
    assert read_tree(again) == read_tree(corpus)
    manifest = json.loads((corpus / "manifest.json").read_text())
    assert len(manifest["cascades"]) == 30
    other = tmp_path / "other"
    run("simulate", "--seed", 8, "--count", 30, "--p", "decay:0.012:120",
        "--root-degree", "zipf:1.5:20000", "--horizon-days", 2, "--out", other)
    assert read_tree(other) != read_tree(corpus)


def test_predict_states_and_determinism(tmp_path, corpus, capsys):
    files = sorted(corpus.glob("*.csv"))[:5]
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run("predict", *files, "--times", "10,60,360", "--out", a) == 0
    assert run("predict", *files, "--times", "10,60,360", "--out", b) == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert lines[0] == "id,time_seconds,R_t,p_hat,state,r_inf_hat"
    assert len(lines) == 1 + 3 * len(files)
    assert run("predict", *files, "--format", "jsonl", "--times", "60") == 0
    recs = [json.loads(x) for x in capsys.readouterr().out.splitlines()]
    assert len(recs) == len(files)
    for r in recs:
        assert r["state"] in {"OK", "GATED", "SUPERCRITICAL", "NO_PREDICTION"}
        assert (r["r_inf_hat"] is not None) == (r["state"] == "OK")


def test_zero_reshare_cascade_is_gated(tmp_path, capsys):
    f = tmp_path / "lonely.csv"
    f.write_text("0,500\n")
    assert run("predict", f, "--times", "5,60,600") == 0
    rows = capsys.readouterr().out.splitlines()[1:]
    assert len(rows) == 3 and all(r.split(",")[4] == "GATED" for r in rows)


def test_subcritical_simulated_cascade_gives_finite_estimates(tmp_path, capsys):
    out = tmp_path / "sim"
    run("simulate", "--seed", 3, "--count", 1, "--p", "constant:0.008", "--root-degree",
        "constant:20000", "--horizon-days", 1, "--out", out)
    cfg = tmp_path / "c.toml"
    cfg.write_text("[prediction]\nmin_reshares = 5\n")
    assert run("predict", out / "sim-0.csv", "--config", cfg, "--format", "jsonl") == 0
    recs = [json.loads(x) for x in capsys.readouterr().out.splitlines()]
    passing = [r for r in recs if r["state"] != "GATED"]
    assert passing
    assert all(r["state"] == "OK" and np.isfinite(r["r_inf_hat"]) for r in passing)


def test_calibrate_and_fit_kernel(tmp_path, corpus):
    cfg = tmp_path / "base.toml"
    cfg.write_text("[prediction]\nmin_reshares = 5\n")
    outs = [tmp_path / f"cal{i}.toml" for i in range(2)]
    for o in outs:
        assert run("calibrate", corpus, "--config", cfg, "--times", "10,30,60", "--out", o) == 0
    assert outs[0].read_bytes() == outs[1].read_bytes()
    assert len(load_config(outs[0]).prediction.alpha_schedule) >= 1

    delays = tmp_path / "delays.txt"
    np.savetxt(delays, sample_reaction_times(100_000, TWITTER_KERNEL, np.random.default_rng(1)))
    k = [tmp_path / f"k{i}.toml" for i in range(2)]
    for o in k:
        assert run("fit-kernel", delays, "--out", o) == 0
    assert k[0].read_bytes() == k[1].read_bytes()
    assert 0.22 <= load_config(k[0]).kernel.theta <= 0.27


def test_evaluate(tmp_path, corpus):
    cfg = tmp_path / "c.toml"
    cfg.write_text("[prediction]\nmin_reshares = 5\n[evaluation]\ncoverage_top = 5\n"
                   "coverage_m = 10\n")
    prefixes = [tmp_path / f"r{i}" for i in range(2)]
    for p in prefixes:
        assert run("evaluate", corpus, "--train", corpus, "--config", cfg, "--times", "10,60",
                   "--methods", "seismic,lr,observed", "--out", p) == 0
    for ext in (".csv", ".json"):
        a, b = (p.with_name(p.name + ext).read_bytes() for p in prefixes)
        assert a == b
    report = json.loads((tmp_path / "r0.json").read_text())
    assert len(report["results"]) == 6
    for t in (600.0, 3600.0):
        assert sorted(r["method"] for r in report["results"] if r["time_seconds"] == t) == \
            ["lr", "observed", "seismic"]


def test_import_snap_determinism(tmp_path):
    src = tmp_path / "snap"
    src.mkdir()
    (src / "index.csv").write_text("tweet_id,post_time_day,start_ind,end_ind\n7,0,1,2\n")
    (src / "data.csv").write_text("relative_time_second,number_of_followers\n0,10\n4,2\n")
    for o in ("o1", "o2"):
        assert run("import-snap", src, "--out", tmp_path / o) == 0
    assert read_tree(tmp_path / "o1") == read_tree(tmp_path / "o2")


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("0,100\n200,5\n100,7\n")
    assert run("predict", bad) == 3
    err = capsys.readouterr().err.strip()
    assert err.startswith("error: PARSE:") and "line 3" in err and "\n" not in err
    assert run("predict", tmp_path / "missing.csv") == 3
    cfg = tmp_path / "c.toml"
    cfg.write_text("[kernel]\ntheta = -2\n")
    assert run("predict", bad, "--config", cfg) == 2
    assert run("evaluate", tmp_path, "--methods", "rpm", "--out", tmp_path / "x") == 2
    delays = tmp_path / "d.txt"
    delays.write_text("1\n2\n3\n")
    assert run("fit-kernel", delays) == 4
    with pytest.raises(SystemExit) as exc:
        run("predict")
    assert exc.value.code == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "seismic", "--version"], capture_output=True,
                         text=True)
    assert res.returncode == 0 and res.stdout.startswith("seismic ")
