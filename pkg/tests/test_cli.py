import json
import math

import pytest

from klconc.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestBound:
    def test_json(self, capsys):
        code, out, _ = run(
            capsys, "bound", "--n", "100", "--k", "2", "--eps", "0.1",
            "--format", "json",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["schema_version"] == 1
        assert payload["this_paper"] == pytest.approx(0.0012340980408667956, rel=1e-12)
        assert payload["interpretable_mardia"] is None
        assert payload["tightest"] == "this_paper"

    def test_human_vacuous_marker(self, capsys):
        code, out, _ = run(
            capsys, "bound", "--n", "10", "--k", "3", "--eps", "0.21",
        )
        assert code == 0
        assert "[vacuous >= 1]" in out  # method of types is above 1 here

    def test_out_of_region_exit_1(self, capsys):
        code, _, err = run(capsys, "bound", "--n", "100", "--k", "3", "--eps", "0.01")
        assert code == 1
        assert "0.02" in err  # boundary (k-1)/n named in the message

    def test_unknown_flag_exit_2(self, capsys):
        with pytest.raises(SystemExit) as e:
            main(["bound", "--n", "10", "--k", "2", "--eps", "0.5", "--bogus", "1"])
        assert e.value.code == 2


class TestThresholdAndSampleSize:
    def test_round_trip(self, capsys):
        code, out, _ = run(
            capsys, "threshold", "--n", "100", "--k", "2", "--alpha", "0.05",
            "--format", "json",
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["tail_bound"] == pytest.approx(0.05, rel=1e-9)

    def test_samplesize(self, capsys):
        code, out, _ = run(
            capsys, "samplesize", "--k", "2", "--eps", "0.1", "--alpha",
            "0.0012340980408667956", "--format", "json",
        )
        assert code == 0
        assert json.loads(out)["n"] == 100


class TestExact:
    def test_atoms_csv(self, capsys):
        code, out, _ = run(capsys, "exact", "--n", "2", "--p", "0.5,0.5")
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "value,prob"
        assert len(lines) == 4

    def test_tail(self, capsys):
        code, out, _ = run(
            capsys, "exact", "--n", "2", "--p", "0.5,0.5", "--eps", "0.1",
            "--format", "json",
        )
        assert json.loads(out)["exact_tail"] == pytest.approx(0.5, abs=1e-12)

    def test_cap_error_exit_1(self, capsys):
        code, _, err = run(
            capsys, "exact", "--n", "100", "--p",
            ",".join(["0.125"] * 8), "--cap", "100",
        )
        assert code == 1
        assert "cap" in err


class TestMgf:
    def test_bound_and_exact(self, capsys):
        code, out, _ = run(
            capsys, "mgf", "--n", "2", "--k", "2", "--t", "1", "--p", "0.5,0.5",
            "--format", "json",
        )
        payload = json.loads(out)
        assert payload["mgf_bound"] == pytest.approx(2.0, rel=1e-12)
        assert payload["exact_mgf"] == pytest.approx(1.5, rel=1e-12)


class TestMoments:
    def test_exact_rows(self, capsys):
        code, out, _ = run(
            capsys, "moments", "--n", "4", "--p", "0.5,0.5", "--m-max", "2",
        )
        lines = out.strip().splitlines()
        assert lines[0] == "n,k,m,raw,central,chi2_raw,chi2_central"
        assert len(lines) == 3

    def test_targets_only(self, capsys):
        code, out, _ = run(capsys, "moments", "--k", "3", "--m-max", "1")
        row = out.strip().splitlines()[1].split(",")
        assert float(row[5]) == pytest.approx(2.0, rel=1e-12)


class TestMc:
    def test_deterministic_output(self, capsys):
        args = ("mc", "--n", "50", "--p", "0.3,0.7", "--eps", "0.05",
                "--samples", "500", "--seed", "4")
        _, out1, _ = run(capsys, *args)
        _, out2, _ = run(capsys, *args)
        assert out1 == out2
        assert out1.splitlines()[0] == "n,k,eps_or_m,point,ci_low,ci_high,samples,seed"


class TestVerify:
    def test_lemmas_pass(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "lemmas", "--n-max", "20")
        assert code == 0
        assert out.count("PASS") == 2 and "FAIL" not in out

    def test_identity_pass(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "identity", "--n-max", "15")
        assert code == 0

    def test_majorization_pass(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "majorization", "--n-max", "40")
        assert code == 0


class TestConjecture:
    def test_small_scan_json(self, capsys):
        code, out, _ = run(
            capsys, "conjecture", "--which", "main", "--n-max", "10",
            "--format", "json",
        )
        payload = json.loads(out)
        assert code == 0
        assert payload["counterexamples"] == []

    def test_naive_scan_finds_violation(self, capsys):
        code, out, _ = run(
            capsys, "conjecture", "--which", "naive", "--n-max", "5",
            "--format", "json",
        )
        assert code == 0
        payload = json.loads(out)
        assert len(payload["counterexamples"]) > 0

    def test_margins_csv(self, capsys, tmp_path):
        path = tmp_path / "margins.csv"
        run(
            capsys, "conjecture", "--which", "half", "--n-max", "3",
            "--margins-csv", str(path), "--format", "json",
        )
        assert path.read_text().splitlines()[0] == "n,p,x,exact,bound,margin"


class TestCompare:
    def test_sorted_rows_with_exact(self, capsys):
        code, out, _ = run(
            capsys, "compare", "--n-list", "20,10", "--k-list", "3,2",
            "--eps-mults", "2,1.5",
        )
        assert code == 0
        lines = out.strip().splitlines()
        header = lines[0].split(",")
        assert header[:3] == ["n", "k", "eps"]
        keys = [
            (int(r.split(",")[0]), int(r.split(",")[1]), float(r.split(",")[2]))
            for r in lines[1:]
        ]
        assert keys == sorted(keys)
        # exact uniform tail present and dominated by the bound
        for r in lines[1:]:
            fields = r.split(",")
            assert float(fields[3]) >= float(fields[6]) - 1e-12


def test_byte_identical_json(capsys):
    args = ("bound", "--n", "100", "--k", "3", "--eps", "0.1", "--format", "json")
    _, out1, _ = run(capsys, *args)
    _, out2, _ = run(capsys, *args)
    assert out1 == out2
