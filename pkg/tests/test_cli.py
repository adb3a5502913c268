import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from symdis import cli, verify
from symdis.cube import load_dist
from symdis.learner import Hypothesis, LabeledSample, write_samples


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


class TestApproxLayer:
    def test_example_n8(self, capsys):
        code, rep = run_json(capsys, "approx-layer", "--n", "8", "--r", "3", "--pos", "1,2", "--epsilon", "0.1")
        assert code == 0
        row = rep["rows"][0]
        assert Fraction(row["l1"]["exact"]) <= Fraction(1, 10)
        assert row["oracle_match"] is True and row["bound_ok"] is True
        assert rep["config"]["epsilon"] == "1/10"
        assert rep["provenance"]["version"]

    def test_top_layer_constant(self, capsys):
        code, rep = run_json(capsys, "approx-layer", "--n", "6", "--r", "6", "--k", "4", "--epsilon", "1/4")
        row = rep["rows"][0]
        assert code == 0 and row["strategy"] == "constant_one" and row["l1"]["exact"] == "0/1"

    def test_profile_input(self, capsys, tmp_path):
        prof = tmp_path / "u.json"
        assert cli.main(["hard-dist", "--n", "6", "--degree", "5", "--out", str(prof)]) == 0
        capsys.readouterr()
        code, rep = run_json(capsys, "approx-layer", "--in", str(prof), "--k", "3", "--epsilon", "1/4")
        assert code == 0
        assert [r["r"] for r in rep["rows"]] == list(range(7))
        assert Fraction(rep["results"]["total_l1"]["exact"]) <= Fraction(1, 4)

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "p.json"
        code, _, _ = run(capsys, "approx-layer", "--n", "5", "--r", "2", "--k", "2", "--out", str(path))
        assert code == 0 and json.loads(path.read_text())["type"] == "layer_polynomial"

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "approx-layer", "--n", "8", "--r", "2", "--k", "5", "--epsilon", "1/2", "--format", "csv")
        assert code == 0
        body = [line for line in out.splitlines() if not line.startswith("#")]
        assert any(line.startswith("# config.epsilon=") for line in out.splitlines())
        rows = list(csv.DictReader(io.StringIO("\n".join(body))))
        exact = Fraction(rows[0]["l1_exact"])
        assert exact == Fraction(3, 28) and abs(float(rows[0]["l1"]) - float(exact)) <= 1e-11 * float(exact)
        assert len(rows[0]["l1"].replace(".", "").lstrip("0")) <= 12

    @pytest.mark.parametrize(
        "argv",
        [
            ["approx-layer", "--n", "8", "--r", "3", "--k", "2", "--epsilon", "1"],
            ["approx-layer", "--n", "8", "--r", "9", "--k", "2"],
            ["approx-layer", "--n", "8", "--r", "3", "--pos", "1,9"],
            ["approx-layer", "--n", "8", "--r", "3", "--pos", "1", "--neg", "1"],
            ["approx-layer", "--r", "3", "--k", "2"],
            ["approx-layer", "--n", "8", "--r", "3", "--epsilon", "abc"],
        ],
    )
    def test_invalid(self, capsys, argv):
        code, out, err = run(capsys, *argv)
        assert code == 1 and out == "" and err.startswith("symdis: error:")


class TestHardDist:
    def test_n2_r1(self, capsys):
        code, rep = run_json(capsys, "hard-dist", "--n", "2", "--degree", "1")
        assert code == 0
        assert rep["rows"][0]["eps_star"]["exact"] == "1/4" and rep["rows"][0]["duality_ok"] is True

    def test_n1_r0_profile(self, capsys, tmp_path):
        path = tmp_path / "h.json"
        code, _, _ = run(capsys, "hard-dist", "--n", "1", "--degree", "0", "--out", str(path))
        assert code == 0
        assert load_dist(path).rho == (Fraction(1, 2), Fraction(1, 2))

    def test_sweep_n25(self, capsys):
        code, rep = run_json(capsys, "hard-dist", "--n", "25", "--degree", "0..10")
        assert code == 0 and rep["results"]["nonincreasing"] is True
        eps = [Fraction(r["eps_star"]["exact"]) for r in rep["rows"]]
        assert eps == sorted(eps, reverse=True) and len(eps) == 11

    def test_full_degree_reports_zero(self, capsys):
        code, rep = run_json(capsys, "hard-dist", "--n", "4", "--degree", "4")
        assert code == 0 and rep["results"]["profile"] is None

    @pytest.mark.parametrize(
        "argv",
        [
            ["hard-dist", "--n", "61", "--degree", "1"],
            ["hard-dist", "--n", "4", "--degree", "5"],
            ["hard-dist", "--n", "4"],
            ["hard-dist", "--n", "4", "--degree", "0..2", "--out", "x.json"],
            ["hard-dist", "--n", "4", "--degree", "4", "--out", "x.json"],
        ],
    )
    def test_invalid(self, capsys, argv, tmp_path, monkeypatch):
        monkeypatch.chdir(tmp_path)
        assert run(capsys, *argv)[0] == 1


class TestLearn:
    def _uniform(self, tmp_path, n):
        path = tmp_path / "d.json"
        assert cli.main(["hard-dist", "--n", str(n), "--degree", str(n - 1), "--out", str(path)]) == 0
        return path

    def test_noise_free_uniform(self, capsys, tmp_path):
        path = self._uniform(tmp_path, 10)
        capsys.readouterr()
        code, rep = run_json(capsys, "learn", "--in", str(path), "--k", "3", "--epsilon", "0.05", "--seed", "1")
        row = rep["rows"][0]
        assert code == 0 and row["samples"] == 36044800
        assert Fraction(row["heldout_l1"]["exact"]) <= Fraction(1, 20)

    def test_empty_clause(self, capsys, tmp_path):
        path = self._uniform(tmp_path, 6)
        capsys.readouterr()
        code, rep = run_json(capsys, "learn", "--in", str(path), "--epsilon", "1/4", "--samples", "2000")
        assert code == 0 and rep["rows"][0]["heldout_l1"]["exact"] == "0/1"

    def test_sample_file(self, capsys, tmp_path):
        samples = [LabeledSample(x, int(x[0] or x[1])) for x in [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)]] * 5
        path = tmp_path / "s.txt"
        write_samples(samples, path)
        hyp = tmp_path / "h.json"
        code, rep = run_json(capsys, "learn", "--in", str(path), "--epsilon", "1/4", "--out", str(hyp))
        row = rep["rows"][0]
        assert code == 0 and row["samples"] == 32 and row["heldout_l1"]["exact"] == "0/1"
        h = Hypothesis.from_json(json.loads(hyp.read_text()))
        assert h.predict((0, 1, 0)) == 1 and h.predict((0, 0, 1)) == 0

    @pytest.mark.parametrize("content", ["{not json", '{"kind": "symmetric", "n": 2, "values": ["1/2"]}'])
    def test_malformed_distribution(self, capsys, tmp_path, content):
        path = tmp_path / "bad.json"
        path.write_text(content)
        assert run(capsys, "learn", "--in", str(path), "--k", "1")[0] == 1

    @pytest.mark.parametrize("extra", [["--eta", "1/2"], ["--epsilon", "0"]])
    def test_invalid_rates(self, capsys, tmp_path, extra):
        path = self._uniform(tmp_path, 4)
        assert run(capsys, "learn", "--in", str(path), "--k", "1", *extra)[0] == 1

    def test_missing_input(self, capsys):
        assert run(capsys, "learn", "--k", "1")[0] == 1


class TestVerify:
    @pytest.mark.parametrize("argv", [["verify", "correlation"], ["verify", "--suite", "interpolant"]])
    def test_suites_pass(self, capsys, argv):
        code, rep = run_json(capsys, *argv)
        assert code == 0 and rep["results"]["passed"] == rep["results"]["total"] > 0

    def test_unknown_suite(self, capsys):
        assert run(capsys, "verify", "nonsense")[0] == 1

    def test_missing_suite(self, capsys):
        assert run(capsys, "verify")[0] == 1

    def test_failure_exit_code(self, capsys, monkeypatch):
        monkeypatch.setitem(verify.SUITES, "broken", lambda: [verify.Check("always fails", False)])
        code, rep = run_json(capsys, "verify", "broken")
        assert code == 2 and rep["rows"][0]["passed"] is False


def test_no_subcommand(capsys):
    assert run(capsys)[0] == 1


DETERMINISM_RUNS = [
    ["approx-layer", "--n", "9", "--r", "4", "--pos", "1,2,3", "--neg", "4"],
    ["approx-layer", "--n", "9", "--r", "4", "--k", "5", "--format", "csv"],
    ["hard-dist", "--n", "12", "--degree", "0..6"],
    ["hard-dist", "--n", "8", "--degree", "3", "--format", "csv"],
    ["verify", "correlation"],
]


@pytest.mark.parametrize("argv", DETERMINISM_RUNS, ids=lambda a: "-".join(a[:3]))
def test_byte_identical_in_process(capsys, argv):
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second and first[0] == 0


def test_learn_byte_identical_across_processes(tmp_path):
    prof = tmp_path / "d.json"
    assert cli.main(["hard-dist", "--n", "7", "--degree", "6", "--out", str(prof)]) == 0
    argv = [sys.executable, "-m", "symdis", "learn", "--in", str(prof), "--k", "2", "--eta", "1/10",
            "--seed", "7", "--samples", "5000", "--epsilon", "1/4"]
    outs = [subprocess.run(argv, capture_output=True, check=True).stdout for _ in range(2)]
    assert outs[0] == outs[1] and outs[0]
