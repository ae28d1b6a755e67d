import json
from fractions import Fraction

import pytest

import commprob as cp
from commprob.cli import decimal_string, main, parse_fraction

F = Fraction


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestProb:
    def test_dihedral_golden(self, capsys):
        code, out, _ = run(capsys, "prob", "dihedral:n=4", "--rmax", "5")
        assert code == 0
        payload = json.loads(out)
        assert payload["schema"] == 1
        values = [(row["num"], row["den"]) for row in payload["results"]]
        assert values == [("5", "8"), ("11", "32"), ("23", "128"), ("47", "512")]

    def test_file_source(self, capsys, tmp_path, s3):
        path = tmp_path / "s3.json"
        path.write_text(
            json.dumps({"name": "S3", "order": 6, "table": [list(r) for r in s3.table]})
        )
        code, out, _ = run(capsys, "prob", f"file:{path}", "--rmax", "4")
        assert code == 0
        payload = json.loads(out)
        got = [F(int(r["num"]), int(r["den"])) for r in payload["results"]]
        assert got == [F(1, 2), F(2, 9), F(7, 72)]

    def test_abelian(self, capsys):
        code, out, _ = run(capsys, "prob", "cyclic:n=7", "--rmax", "3")
        payload = json.loads(out)
        assert code == 0
        assert all(row["num"] == "1" and row["den"] == "1" for row in payload["results"])

    def test_table_format(self, capsys):
        code, out, _ = run(capsys, "prob", "dihedral:n=4", "--rmax", "2", "--format", "table")
        assert code == 0
        assert "5/8" in out

    def test_bad_source_exit2(self, capsys):
        code, _, err = run(capsys, "prob", "nosuchfamily:n=1")
        assert code == 2 and "error" in err

    def test_missing_file_exit2(self, capsys):
        code, _, err = run(capsys, "prob", "file:/nonexistent/g.json")
        assert code == 2

    def test_budget_exit3(self, capsys):
        code, _, err = run(
            capsys,
            "prob",
            "symmetric:n=4",
            "--rmax",
            "4",
            "--method",
            "bruteforce",
            "--budget",
            "10",
        )
        assert code == 3 and "budget" in err


class TestVerify:
    def test_bounds_pass(self, capsys):
        code, out, _ = run(capsys, "verify", "dihedral:n=4", "--suite", "bounds")
        assert code == 0
        payload = json.loads(out)
        assert all(e["ok"] for e in payload["assertions"])

    def test_cyclic_index_negative_control(self, capsys):
        code, out, _ = run(
            capsys,
            "verify",
            "semidirect_cyclic:a=5,u=4,m=4",
            "--suite",
            "cyclic-index",
            "--subgroup-gens",
            "4",
        )
        assert code == 0
        payload = json.loads(out)
        entries = {e["name"]: e for e in payload["assertions"]}
        hyp = entries["fixed_subgroup_hypothesis"]
        assert hyp["status"] == "fail" and hyp["expected"] == "fail" and hyp["ok"]
        mismatch = entries["formula_equals_engine_r2"]
        assert mismatch["status"] == "fail" and mismatch["ok"]

    def test_cyclic_index_positive(self, capsys):
        code, out, _ = run(capsys, "verify", "dihedral:n=6", "--suite", "cyclic-index")
        assert code == 0
        payload = json.loads(out)
        assert all(e["ok"] for e in payload["assertions"])
        assert all(e["status"] == "pass" for e in payload["assertions"])

    def test_class2_heisenberg(self, capsys):
        code, out, _ = run(
            capsys, "verify", "heisenberg:p=3,m=1,n=1", "--suite", "class2"
        )
        assert code == 0
        payload = json.loads(out)
        assert all(e["ok"] for e in payload["assertions"])

    def test_hypothesis_not_met_exit4(self, capsys):
        code, out, _ = run(capsys, "verify", "cyclic:n=4", "--suite", "gap")
        assert code == 4

    def test_allow_skip(self, capsys):
        code, out, _ = run(
            capsys, "verify", "cyclic:n=4", "--suite", "gap", "--allow-skip"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["assertions"][0]["status"] == "skip"

    def test_inequalities_suite(self, capsys):
        code, out, _ = run(capsys, "verify", "symmetric:n=3", "--suite", "inequalities")
        assert code == 0

    def test_prime_index_suite(self, capsys):
        code, out, _ = run(capsys, "verify", "dihedral:n=4", "--suite", "prime-index")
        assert code == 0
        payload = json.loads(out)
        assert all(e["ok"] for e in payload["assertions"])


class TestScan:
    def test_dihedral_csv(self, capsys):
        code, out, _ = run(
            capsys, "scan", "dihedral", "--n", "3..40", "--rmax", "3", "--format", "csv"
        )
        assert code == 0
        lines = out.strip().splitlines()
        assert len(lines) == 39  # header + 38 rows
        assert lines[0].startswith("name,order,P_2")
        last = lines[-1].split(",")
        p3 = F(*map(int, last[4].split("/")))
        assert abs(p3 - F(1, 8)) < F(1, 100)

    def test_heisenberg_rows(self, capsys):
        code, out, _ = run(
            capsys, "scan", "heisenberg", "--q", "3", "--n", "1..3", "--rmax", "4"
        )
        assert code == 0
        payload = json.loads(out)
        assert [row["order"] for row in payload["rows"]] == [27, 243, 2187]
        first = payload["rows"][0]["values"]["P_2"]
        assert (first["num"], first["den"]) == ("11", "27")

    def test_empty_range(self, capsys):
        code, out, _ = run(capsys, "scan", "cyclic", "--n", "5..4", "--format", "csv")
        assert code == 0
        assert len(out.strip().splitlines()) == 1  # header only

    def test_bad_range_exit2(self, capsys):
        code, _, err = run(capsys, "scan", "cyclic", "--n", "x..y")
        assert code == 2


class TestIdentify:
    def test_heisenberg_match(self, capsys):
        code, out, _ = run(capsys, "identify", "--p2", "11/27", "--p3", "35/243")
        assert code == 0
        assert json.loads(out)["match"] == {"q": 3, "n": 1}

    def test_rank1(self, capsys):
        code, out, _ = run(capsys, "identify", "--p2", "5/8", "--mode", "rank1:2")
        assert code == 0
        assert json.loads(out)["match"] == {"p": 2, "n": 1}

    def test_no_match(self, capsys):
        code, out, _ = run(capsys, "identify", "--p2", "1/2", "--p3", "2/9")
        assert code == 0
        assert json.loads(out)["match"] is None

    def test_parse_failure_exit2(self, capsys):
        code, _, err = run(capsys, "identify", "--p2", "eleven/27", "--p3", "1/2")
        assert code == 2


class TestReportConventions:
    def test_determinism(self, capsys):
        _, out1, _ = run(capsys, "prob", "dihedral:n=6", "--rmax", "4")
        _, out2, _ = run(capsys, "prob", "dihedral:n=6", "--rmax", "4")
        assert out1 == out2

    def test_stamp_outside_body(self, capsys):
        _, plain, _ = run(capsys, "prob", "cyclic:n=3")
        _, stamped, _ = run(capsys, "prob", "cyclic:n=3", "--stamp")
        a, b = json.loads(plain), json.loads(stamped)
        stamp = b.pop("stamp")
        assert a == b and stamp

    def test_fraction_roundtrip(self, capsys):
        _, out, _ = run(capsys, "prob", "dihedral:n=7", "--rmax", "5")
        for row in json.loads(out)["results"]:
            value = F(int(row["num"]), int(row["den"]))
            assert parse_fraction(f"{row['num']}/{row['den']}") == value

    def test_output_file(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        code, out, _ = run(capsys, "prob", "cyclic:n=5", "-o", str(target))
        assert code == 0 and out == ""
        assert json.loads(target.read_text())["schema"] == 1


class TestSampleFiles:
    def test_bundled_samples(self, capsys):
        root = __file__.rsplit("/", 2)[0]
        code, out, _ = run(capsys, "prob", f"file:{root}/sample_groups/s3.json")
        assert code == 0
        assert json.loads(out)["group"]["order"] == 6
        code, out, _ = run(capsys, "prob", f"file:{root}/sample_groups/q8_perm.json")
        assert code == 0
        payload = json.loads(out)
        assert payload["group"]["order"] == 8
        assert payload["results"][0]["num"] == "5"


class TestHelpers:
    def test_parse_fraction(self):
        assert parse_fraction("3/4") == F(3, 4)
        assert parse_fraction("7") == F(7)
        with pytest.raises(cp.DomainError):
            parse_fraction("1/0")
        with pytest.raises(cp.DomainError):
            parse_fraction("a/b")

    def test_decimal_string(self):
        assert decimal_string(F(11, 32)) == "0.34375"
        assert decimal_string(F(2, 9)).startswith("0.2222222222222222222")
        assert decimal_string(F(1, 1)) == "1"
