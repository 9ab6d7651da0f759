"""End-to-end runs of the command-line interface."""

import csv
import json

import pytest

from rhoforge.cli import main
from rhoforge.groups import FiniteAbelianGroup
from rhoforge.polytopes import octagon_cells, octagon_polytope


def run(*argv):
    return main(list(argv))


def load(path):
    with open(path) as fh:
        return json.load(fh)


class TestBoundChain:
    def test_octagon_mod2(self, tmp_path, capsys):
        out = tmp_path / "report.json"
        rc = run(
            "bound-chain", "--group", "2", "--octagon",
            "--report", str(out),
        )
        assert rc == 0
        report = load(out)
        assert report["status"] == "pass"
        assert report["bounding"]["multiplicity"] == 16
        names = {c["name"]: c["status"] for c in report["checks"]}
        assert names["boundary-identity"] == "pass"
        assert names["complexity-bound"] == "pass"

    def test_cycle_file_mod3(self, tmp_path):
        G = FiniteAbelianGroup([3])
        g = G.element([1])
        cells = octagon_cells(g, g, g, g)
        payload = {
            "group": G.to_json(),
            "cells": [
                {
                    "gen": [list(e.residues) for e in cell.gen],
                    "sign": cell.sign,
                }
                for cell in cells
            ],
        }
        src = tmp_path / "cycle.json"
        src.write_text(json.dumps(payload))
        out = tmp_path / "report.json"
        rc = run("bound-chain", "--cycle", str(src), "--report", str(out))
        assert rc == 0
        assert load(out)["bounding"]["multiplicity"] == 81

    def test_collapsed_terms_input(self, tmp_path, capsys):
        payload = {
            "group": [4],
            "degree": 1,
            "terms": [{"gen": [[1]], "coef": 1}],
        }
        src = tmp_path / "cycle.json"
        src.write_text(json.dumps(payload))
        rc = run("bound-chain", "--cycle", str(src))
        assert rc == 0
        report = json.loads(capsys.readouterr().out)
        assert report["bounding"]["multiplicity"] == 4

    def test_non_cycle_fails(self, tmp_path):
        payload = {
            "group": [2],
            "cells": [{"gen": [[1], [1]], "sign": 1}],
        }
        src = tmp_path / "cycle.json"
        src.write_text(json.dumps(payload))
        out = tmp_path / "report.json"
        rc = run("bound-chain", "--cycle", str(src), "--report", str(out))
        assert rc == 1
        report = load(out)
        assert report["status"] == "fail"
        assert report["failed_checks"] == ["input-is-cycle"]

    def test_octagon_without_group_is_usage_error(self, capsys):
        assert run("bound-chain", "--octagon") == 2
        assert "group" in capsys.readouterr().err

    def test_group_mismatch_rejected(self, tmp_path, capsys):
        payload = {"group": [3], "cells": [{"gen": [[1], [1]], "sign": 1}]}
        src = tmp_path / "cycle.json"
        src.write_text(json.dumps(payload))
        assert run("bound-chain", "--group", "2", "--cycle", str(src)) == 2

    def test_cell_cap_exit_code(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv("RHOFORGE_CELL_CAP", "5")
        rc = run("bound-chain", "--group", "3", "--octagon")
        assert rc == 3
        assert "resource cap" in capsys.readouterr().err

    def test_report_deterministic(self, tmp_path):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        run("bound-chain", "--group", "2", "--octagon", "--report", str(a))
        run("bound-chain", "--group", "2", "--octagon", "--report", str(b))
        ra, rb = load(a), load(b)
        ra.pop("elapsed_s")
        rb.pop("elapsed_s")
        assert ra == rb


class TestVerifyPolytope:
    def test_octagon_builtin(self, tmp_path):
        out = tmp_path / "r.json"
        rc = run(
            "verify-polytope", "--group", "2,2", "--octagon",
            "--report", str(out),
        )
        assert rc == 0
        report = load(out)
        names = {c["name"]: c for c in report["checks"]}
        assert names["coloring"]["status"] == "pass"
        assert names["endowment-consistent"]["status"] == "pass"
        assert names["boundary-pairs"]["values"]["count"] == 4

    def test_polytope_file(self, tmp_path):
        G = FiniteAbelianGroup([5])
        g = G.element([1])
        P = octagon_polytope(g, g * g, g ** 3, g)
        src = tmp_path / "p.json"
        src.write_text(json.dumps(P.to_json()))
        assert run("verify-polytope", "--polytope", str(src)) == 0


class TestComplexCommands:
    def test_homology_builtin(self, tmp_path):
        out = tmp_path / "r.json"
        assert run(
            "homology", "--builtin", "lens:5,2", "--report", str(out)
        ) == 0
        H = load(out)["homology"]
        assert H["betti"] == [1, 0, 0, 1]
        assert H["torsion"][1] == [5]

    def test_homology_from_file(self, tmp_path, capsys):
        from rhoforge.delta import boundary_simplex

        src = tmp_path / "k.json"
        src.write_text(json.dumps(boundary_simplex(3).to_json()))
        assert run("homology", "--complex", str(src)) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["homology"]["betti"] == [1, 0, 1]

    def test_torsion(self, tmp_path):
        out = tmp_path / "r.json"
        assert run(
            "torsion", "--builtin", "ngon:5", "--report", str(out)
        ) == 0
        report = load(out)
        assert abs(report["torsion"] - 25.0) < 1e-6

    def test_fvector(self, capsys):
        assert run("fvector", "--builtin", "simplex:3") == 0
        report = json.loads(capsys.readouterr().out)
        assert report["f_vector"] == [4, 6, 4, 1]
        assert report["euler"] == 1

    def test_bad_builtin(self, capsys):
        assert run("homology", "--builtin", "torus:3") == 2
        assert run("homology", "--builtin", "lens:2,2") == 2
        assert run("homology") == 2


class TestHyperbolize:
    def test_dim1(self, capsys):
        assert run("hyperbolize", "--dim", "1") == 0
        report = json.loads(capsys.readouterr().out)
        assert report["sphere"]["f_vector"] == [6, 6]

    def test_dim2_report(self, tmp_path):
        out = tmp_path / "y2.json"
        assert run("hyperbolize", "--dim", "2", "--out", str(out)) == 0
        report = load(out)
        assert report["sphere"]["f_vector"] == [100, 432, 288]
        assert report["sphere"]["euler"] == -44
        names = {c["name"]: c["status"] for c in report["checks"]}
        assert names["closed-surface"] == "pass"
        assert names["triangle-count"] == "pass"
        assert names["orientable-torsion-free"] == "pass"
        table = {row["n"]: row for row in report["z_table"]}
        assert table[4]["z_formula"] == 1728
        assert table[4]["ratio"] == 240
        # the emitted complex is loadable
        assert len(report["complex"]["faces"]) == 2

    def test_dim3_counts(self, capsys):
        assert run("hyperbolize", "--dim", "3") == 0
        report = json.loads(capsys.readouterr().out)
        assert report["stage_counts"] == [200, 1396, 2016, 864]
        assert "sphere" not in report

    def test_dim_out_of_range(self, capsys):
        assert run("hyperbolize", "--dim", "4") == 2


class TestLens:
    def test_report(self, tmp_path):
        out = tmp_path / "lens.json"
        assert run(
            "lens", "--N", "7", "--d", "3", "--report", str(out)
        ) == 0
        report = load(out)
        assert report["f_vector"][-1] == 49
        assert report["status"] == "pass"

    def test_n2_usage_error(self, capsys):
        assert run("lens", "--N", "2", "--d", "2") == 2


class TestRhoSweep:
    def test_d2_all_pass(self, tmp_path):
        out = tmp_path / "rho.csv"
        rep = tmp_path / "rho.json"
        rc = run(
            "rho-sweep", "--d", "2", "--from", "3", "--to", "50",
            "--csv", str(out), "--report", str(rep),
        )
        assert rc == 0
        with open(out) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["N", "rho", "lower_bound", "pass"]
        assert len(rows) == 49
        # N=3 sits outside the hypothesis and does not gate the exit
        assert rows[1][0] == "3" and rows[1][3] == "false"
        assert all(r[3] == "true" for r in rows[2:])

    def test_d4_reports_failures(self, tmp_path):
        rep = tmp_path / "rho.json"
        rc = run(
            "rho-sweep", "--d", "4", "--from", "4", "--to", "10",
            "--report", str(rep),
        )
        assert rc == 1
        report = load(rep)
        check = report["checks"][0]
        assert check["values"]["failures"] == [4]

    def test_bad_range(self, capsys):
        assert run("rho-sweep", "--d", "2", "--from", "9", "--to", "3") == 2


class TestConstantsAndUsage:
    def test_constants(self, tmp_path):
        out = tmp_path / "c.json"
        assert run("constants", "--report", str(out)) == 0
        report = load(out)
        assert report["status"] == "pass"
        assert report["thm12"]["1"] == 2764800
        assert report["catalan"] == [1, 2, 5, 14, 42]

    def test_unknown_flag_exits_2(self):
        with pytest.raises(SystemExit) as err:
            run("constants", "--frobnicate")
        assert err.value.code == 2

    def test_missing_subcommand_exits_2(self):
        with pytest.raises(SystemExit) as err:
            run()
        assert err.value.code == 2
