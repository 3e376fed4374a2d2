import json

import pytest

from gbv.cli import main, parse_gauge, parse_weights


@pytest.fixture()
def zigzag_csv(tmp_path):
    path = tmp_path / "f.csv"
    path.write_text("0\n1\n0\n1\n0\n")
    return str(path)


def run(argv):
    return main(argv)


class TestParsing:
    def test_weight_specs(self):
        assert parse_weights("harmonic", 64).kind == "harmonic"
        w = parse_weights("constant:2.5", 64)
        assert w.kind == "constant" and w.weight(3) == 2.5
        assert parse_weights("power:0.5", 64).alpha == 0.5
        w = parse_weights("explicit:1,2,3", 64)
        assert w.terms == (1.0, 2.0, 3.0)
        w = parse_weights('{"kind": "harmonic", "k_max": 32}')
        assert w.k_max == 32

    def test_weight_spec_from_file(self, tmp_path):
        path = tmp_path / "w.json"
        path.write_text(json.dumps({"kind": "constant", "value": 3.0}))
        w = parse_weights(str(path), 16)
        assert w.weight(1) == 3.0 and w.k_max == 16

    def test_gauge_specs(self):
        g = parse_gauge("linear", "pow2", 6)
        assert g.level(2) == (2.0, 4.0)
        g = parse_gauge("const:1.5", "list:4,8,16", 3)
        assert g.level(3) == (1.5, 16.0)


class TestVariationCommand:
    def test_modulus(self, zigzag_csv, tmp_path, capsys):
        out = tmp_path / "rep.json"
        code = run(["variation", "--input", zigzag_csv, "--functional",
                    "modulus", "--n", "2", "--output", str(out)])
        assert code == 0
        rep = json.loads(out.read_text())
        assert rep["result"]["value"] == 2.0
        assert rep["tool"] == "gbv"

    def test_lambda_functional(self, zigzag_csv, tmp_path):
        out = tmp_path / "rep.json"
        code = run(["variation", "--input", zigzag_csv, "--functional",
                    "lambda", "--weights", "harmonic", "--p", "1",
                    "--kmax", "64", "--output", str(out)])
        assert code == 0
        rep = json.loads(out.read_text())
        assert rep["result"]["value"] == pytest.approx(25 / 12)
        assert rep["result"]["mode"] == "exact-oracle"

    def test_missing_input_exits_one(self, tmp_path):
        code = run(["variation", "--input", str(tmp_path / "absent.csv"),
                    "--functional", "modulus"])
        assert code == 1


class TestCriterionCommand:
    def test_theorem_14_with_csv(self, tmp_path):
        out = tmp_path / "rep.json"
        csv_out = tmp_path / "plot.csv"
        code = run(["criterion", "--theorem", "1.4", "--lambda", "harmonic",
                    "--gamma", "constant", "--p", "1", "--qn", "const:1",
                    "--delta", "pow2", "--ncap", "10", "--kmax", "2048",
                    "--output", str(out), "--csv", str(csv_out)])
        assert code == 0
        rep = json.loads(out.read_text())
        assert rep["result"]["verdict"] == "diverging-trend"
        lines = csv_out.read_text().splitlines()
        assert lines[0] == "n,a_n,argmax_k" and len(lines) == 11

    def test_hypothesis_error_exits_two(self, tmp_path):
        code = run(["criterion", "--theorem", "1.4", "--lambda", "harmonic",
                    "--gamma", "constant", "--p", "2", "--qn", "linear",
                    "--delta", "pow2", "--ncap", "8", "--kmax", "512",
                    "--output", str(tmp_path / "r.json")])
        assert code == 2

    def test_theorem_18(self, tmp_path):
        out = tmp_path / "rep.json"
        fam = json.dumps({"kind": "power", "p": 2,
                          "weights": {"kind": "harmonic"}})
        code = run(["criterion", "--theorem", "1.8", "--family", fam,
                    "--qn", "const:2", "--delta", "pow2", "--ncap", "10",
                    "--kmax", "2048", "--output", str(out)])
        assert code == 0
        assert json.loads(out.read_text())["result"]["verdict"] == \
            "diverging-trend"


class TestCounterexampleCommand:
    ARGS = ["counterexample", "--kind", "lambda", "--lambda", "harmonic",
            "--gamma", "constant", "--p", "1", "--qn", "const:1",
            "--delta", "list:64,1024", "--levels", "2", "--blow-base", "4",
            "--kmax", "4096"]

    def test_plan_build_certify(self, tmp_path):
        out = tmp_path / "rep.json"
        witness = tmp_path / "w.json"
        code = run(self.ARGS + ["--build", "--certify", "--witness-out",
                                str(witness), "--output", str(out)])
        assert code == 0
        rep = json.loads(out.read_text())["result"]
        assert rep["membership"]["total_bound"] < 2.0
        levels = rep["blowup"]["levels"]
        assert all(r["growth_ok"] and r["floor_ok"] for r in levels)
        doc = json.loads(witness.read_text())
        assert doc["m"] == rep["m"]

    def test_infeasible_exits_two(self, tmp_path):
        code = run(["counterexample", "--kind", "lambda", "--lambda",
                    "constant", "--gamma", "constant", "--qn", "const:1",
                    "--delta", "pow2", "--levels", "3", "--kmax", "64",
                    "--output", str(tmp_path / "r.json")])
        assert code == 2


class TestInequalityCommand:
    def test_master_suite(self, tmp_path):
        out = tmp_path / "rep.json"
        code = run(["inequality", "--suite", "master", "--samples", "100",
                    "--seed", "5", "--output", str(out)])
        assert code == 0
        assert json.loads(out.read_text())["result"]["failures"] == 0

    def test_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        argv = ["inequality", "--suite", "master", "--samples", "100",
                "--seed", "5"]
        assert run(argv + ["--output", str(a)]) == 0
        assert run(argv + ["--output", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_holder_suite(self, tmp_path):
        out = tmp_path / "rep.json"
        code = run(["inequality", "--suite", "holder", "--samples", "100",
                    "--seed", "5", "--lambda", "harmonic", "--gamma",
                    "constant", "--p", "2", "--q", "1", "--kmax", "256",
                    "--output", str(out)])
        assert code == 0


class TestNormCommand:
    def test_single_jump(self, tmp_path):
        path = tmp_path / "f.csv"
        path.write_text("0\n3\n3\n")
        out = tmp_path / "rep.json"
        fam = json.dumps({"kind": "power", "p": 1,
                          "weights": {"kind": "constant", "value": 1.0}})
        code = run(["norm", "--input", str(path), "--family", fam,
                    "--kmax", "64", "--output", str(out)])
        assert code == 0
        assert json.loads(out.read_text())["result"]["norm"] == \
            pytest.approx(3.0, rel=1e-8)


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0


def test_bad_jobs_rejected(zigzag_csv):
    with pytest.raises(SystemExit):
        main(["variation", "--input", zigzag_csv, "--functional", "modulus",
              "--jobs", "0"])
