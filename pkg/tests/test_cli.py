import csv
import io
import json
import time
from fractions import Fraction

import pytest

from kakeya.bounds import alpha_root
from kakeya.cli import main
from kakeya.entropy import JointDist
from kakeya.verify import digit_witness


@pytest.fixture
def run(capsys):
    def _run(*argv):
        code = main(list(argv))
        out, err = capsys.readouterr()
        return code, out, err
    return _run


@pytest.fixture
def dist_file(tmp_path):
    def _write(D, name="d.json"):
        path = tmp_path / name
        path.write_text(D.to_json())
        return str(path)
    return _write


class TestEntropyCommand:
    def test_fair_bit(self, run, dist_file):
        code, out, _ = run("entropy", dist_file(JointDist.uniform([0, 1])))
        assert code == 0 and json.loads(out)["H"] == 1.0

    def test_digit_witness(self, run, dist_file):
        code, out, _ = run("entropy", dist_file(digit_witness(2)))
        rep = json.loads(out)
        assert rep["marginals"][1] == 2.0
        assert next(c["H"] for c in rep["conditionals"] if c["a"] == 0 and c["b"] == 1) == 0.0
        assert rep["shearer"]["holds"]

    def test_bad_sum(self, run, tmp_path):
        f = tmp_path / "bad.json"
        f.write_text('{"dim": 1, "atoms": [{"key": ["0"], "prob": "1/2"}]}')
        code, _, err = run("entropy", str(f))
        assert code == 2 and "sum" in err

    def test_missing_file(self, run, tmp_path):
        assert run("entropy", str(tmp_path / "nope.json"))[0] == 2


class TestBetaSearch:
    def test_single_r(self, run):
        code, _, err = run("beta-search", "--rset", "0")
        assert code == 2 and "unbounded" in err

    def test_seed_repeat(self, run):
        args = ("beta-search", "--rset", "0,1", "--restarts", "2", "--max-iters", "800", "--seed", "3")
        a, b = run(*args), run(*args)
        assert a[0] == 0 and a[1] == b[1]
        assert json.loads(a[1])["seed"] == 3

    @pytest.mark.slow
    def test_default_config(self, run):
        code, out, _ = run("beta-search", "--rset", "0,1")
        assert code == 0 and json.loads(out)["value"] >= 1.95

    def test_config_file(self, run, tmp_path):
        cfg = tmp_path / "s.toml"
        cfg.write_text("[search]\nrestarts = 2\nmax_iters = 500\nseed = 11\n")
        code, out, _ = run("beta-search", "--rset", "0,1", "--config", str(cfg))
        assert code == 0 and json.loads(out)["extra"]["config"]["restarts"] == 2

    def test_bad_config(self, run, tmp_path):
        cfg = tmp_path / "s.toml"
        cfg.write_text("[search]\nrestarts = \n")
        assert run("beta-search", "--rset", "0,1", "--config", str(cfg))[0] == 2


class TestBoundTable:
    def test_csv(self, run):
        code, out, _ = run("bound-table", "--beta", "2")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and len(rows) == 8
        assert float(rows[2]["beta_out"]) == pytest.approx(24 / 7, abs=1e-12)
        assert float(rows[1]["beta_out"]) == pytest.approx(8 / 3, abs=1e-12)

    def test_alpha_json(self, run):
        code, out, _ = run("bound-table", "--beta", "alpha", "--format", "json", "--d-max", "3")
        rows = json.loads(out)
        assert rows[0]["beta_out"] == pytest.approx(alpha_root().value, abs=1e-12)
        assert rows[0]["note"]

    def test_out_of_range(self, run):
        assert run("bound-table", "--beta", "2.5")[0] == 2

    def test_not_a_number(self, run):
        assert run("bound-table", "--beta", "two")[0] == 2


class TestVerify:
    def test_bounds_suite(self, run):
        code, out, _ = run("verify", "--suite", "bounds")
        assert code == 0 and json.loads(out)["passed"]

    def test_corrupted_tolerance(self, run):
        code, out, _ = run("verify", "--suite", "fourier", "--p-cap", "13", "--tol", "parseval=-1")
        rep = json.loads(out)
        assert code == 1
        failed = {r["invariant"] for r in rep["results"] if not r["passed"]}
        assert failed == {"parseval"}

    def test_bad_tol(self, run):
        assert run("verify", "--tol", "parseval")[0] == 2

    @pytest.mark.slow
    def test_fourier_large_cap(self, run):
        t0 = time.perf_counter()
        code, out, _ = run("verify", "--suite", "fourier", "--p-cap", "499")
        assert code == 0 and json.loads(out)["passed"]
        assert time.perf_counter() - t0 < 60


class TestManifest:
    def test_out_and_replay(self, run, tmp_path):
        out = tmp_path / "table.csv"
        code, stdout, _ = run("bound-table", "--beta", "1.5", "--out", str(out))
        assert code == 0 and stdout == ""
        manifest = json.loads((tmp_path / "table.csv.manifest.json").read_text())
        assert manifest["command"] == "bound-table" and manifest["tool_version"]
        code, stdout, _ = run("replay", str(tmp_path / "table.csv.manifest.json"))
        assert code == 0 and json.loads(stdout)["identical"]

    def test_replay_detects_tamper(self, run, tmp_path):
        out = tmp_path / "t.csv"
        run("bound-table", "--beta", "2", "--out", str(out))
        mpath = tmp_path / "t.csv.manifest.json"
        m = json.loads(mpath.read_text())
        m["output_sha256"] = "0" * 64
        mpath.write_text(json.dumps(m))
        assert run("replay", str(mpath))[0] == 1

    def test_stderr_manifest(self, run):
        _, _, err = run("bound-table", "--beta", "2", "--d-max", "2")
        assert json.loads(err.strip().splitlines()[-1])["argv"] == ["bound-table", "--beta", "2", "--d-max", "2"]


class TestPipelineCommand:
    def test_digit_witness(self, run, dist_file):
        code, out, _ = run("pipeline", dist_file(digit_witness(2)), "--rset", "0,1", "--n", "3", "--p", "2003")
        rep = json.loads(out)
        assert code == 0 and all(rep["checks"].values())


def test_usage_errors(run):
    assert run()[0] == 2
    assert run("nonsense")[0] == 2
    assert run("verify", "--seed", "-1")[0] == 2
