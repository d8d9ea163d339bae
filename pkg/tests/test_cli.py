"""CLI tests: parsing, exit codes, reports, determinism."""

import csv
import io
import json

import pytest

from qwasser.cli import main, parse_state_spec


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestStateParsing:
    def test_named(self):
        rho = parse_state_spec("plus_z", "s")
        assert rho[0, 0] == 1.0

    def test_bloch(self):
        rho = parse_state_spec("bloch:0,0,-1", "s")
        assert rho[1, 1] == 1.0

    def test_inline_json_bloch(self):
        rho = parse_state_spec('{"bloch": [0, 0, 1]}', "s")
        assert rho[0, 0] == 1.0

    def test_inline_json_matrix(self):
        spec = '{"matrix": [[0.5, 0], [0, -0.5], [0, 0.5], [0.5, 0]]}'
        rho = parse_state_spec(spec, "s")
        assert rho[0, 1] == -0.5j

    def test_bad_spec_raises(self):
        from qwasser.errors import DomainError

        with pytest.raises(DomainError):
            parse_state_spec("plus_w", "s")


class TestDistanceCommand:
    def test_pole_distance(self, capsys):
        code, out, _ = run_cli(capsys, ["distance", "--cost", "z", "plus_z", "minus_z"])
        assert code == 0
        assert "D          = 2" in out

    def test_pure_self_sym(self, capsys):
        code, out, _ = run_cli(capsys, ["distance", "--cost", "sym", "plus_x", "plus_x"])
        assert code == 0
        assert "D^2        = 4" in out

    def test_mixed_center(self, capsys):
        code, out, _ = run_cli(
            capsys, ["distance", "--cost", "z", "maximally_mixed", "maximally_mixed"]
        )
        assert code == 0
        assert "D          = 0" in out

    def test_custom_cost_matches_z(self, capsys):
        sigma_z = [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]]
        gens = json.dumps([sigma_z])
        code, out, _ = run_cli(
            capsys,
            ["distance", "--cost", "custom", "--generators", gens, "plus_z", "minus_z"],
        )
        assert code == 0
        assert "D          = 2" in out

    def test_parse_error_exit_2(self, capsys):
        code, _, err = run_cli(capsys, ["distance", "--cost", "z", "plus_w", "minus_z"])
        assert code == 2
        assert "error" in err

    def test_bad_bloch_norm_exit_2(self, capsys):
        code, _, _ = run_cli(capsys, ["distance", "--cost", "z", "bloch:0,0,1.5", "plus_z"])
        assert code == 2

    def test_bad_matrix_exit_2(self, capsys):
        spec = '{"matrix": [[1, 0], [0, 0], [0, 0], [1, 0]]}'  # trace 2
        code, _, _ = run_cli(capsys, ["distance", "--cost", "z", spec, "plus_z"])
        assert code == 2

    def test_json_report_and_determinism(self, capsys):
        argv = ["distance", "--cost", "z", "bloch:0,0,0.9", "bloch:0,0,-0.4", "--json"]
        code1, out1, _ = run_cli(capsys, argv)
        code2, out2, _ = run_cli(capsys, argv)
        assert code1 == code2 == 0
        rep1, rep2 = json.loads(out1), json.loads(out2)
        assert rep1["schema_version"] == 1
        for rep in (rep1, rep2):
            del rep["wall_time_s"]
            for r in rep["results"]:
                del r["wall_time_s"]
        assert rep1 == rep2
        result = rep1["results"][0]
        assert result["value_sq"] == pytest.approx(2.6, abs=1e-6)
        assert result["solver_status"] == "converged"

    def test_stdin_state(self, capsys, monkeypatch):
        monkeypatch.setattr("sys.stdin", io.StringIO('{"bloch": [0, 0, -1]}'))
        code, out, _ = run_cli(capsys, ["distance", "--cost", "z", "plus_z", "-"])
        assert code == 0
        assert "D          = 2" in out


class TestDivergenceCommand:
    def test_antipodal(self, capsys):
        code, out, _ = run_cli(capsys, ["divergence", "--cost", "sym", "plus_z", "minus_z"])
        assert code == 0
        assert "d                = 2" in out
        assert "radicand" in out

    def test_identical(self, capsys):
        code, out, _ = run_cli(capsys, ["divergence", "--cost", "sym", "plus_y", "plus_y"])
        assert code == 0
        assert "d                = 0" in out


class TestVerifyCommand:
    def test_small_suite_passes(self, capsys):
        code, out, _ = run_cli(
            capsys, ["verify", "dz-theorem", "--samples", "3", "--seed", "7"]
        )
        assert code == 0
        assert "PASS" in out

    def test_impossible_tolerance_fails(self, capsys):
        code, out, _ = run_cli(
            capsys,
            ["verify", "sym-closed-forms", "--samples", "5", "--tolerance", "1e-18"],
        )
        assert code == 1
        assert "FAIL" in out

    def test_json_report(self, capsys):
        code, out, _ = run_cli(
            capsys, ["verify", "z-closed-forms", "--samples", "5", "--json"]
        )
        assert code == 0
        rep = json.loads(out)
        assert rep["results"][0]["passed"] is True
        names = {c["name"] for c in rep["results"][0]["checks"]}
        assert "published-self-distance-formula-flagged" in names


class TestSelfdistTable:
    def test_grid_values(self, capsys):
        code, out, _ = run_cli(
            capsys, ["selfdist-table", "--cost", "z", "--norm-steps", "3", "--b3-steps", "3"]
        )
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 9
        by_key = {(row["bloch_norm"], row["b3"]): row for row in rows}
        center = by_key[("0", "-0")] if ("0", "-0") in by_key else by_key[("0", "0")]
        assert float(center["selfdist_sq_purification"]) == pytest.approx(0.0, abs=1e-9)
        equator = by_key[("1", "0")]
        assert float(equator["selfdist_sq_purification"]) == pytest.approx(2.0, abs=1e-9)
        assert float(equator["selfdist_sq_closed_form"]) == pytest.approx(2.0, abs=1e-9)
        assert float(equator["selfdist_sq_published_form"]) == pytest.approx(0.5, abs=1e-9)
        assert float(equator["selfdist_sq_sdp"]) == pytest.approx(2.0, abs=1e-6)
        assert float(equator["abs_diff_published_sdp"]) == pytest.approx(1.5, abs=1e-6)

    def test_sym_pure_row(self, capsys):
        code, out, _ = run_cli(
            capsys, ["selfdist-table", "--cost", "sym", "--norm-steps", "2", "--b3-steps", "2"]
        )
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        pure = [r for r in rows if r["bloch_norm"] == "1"]
        for row in pure:
            assert float(row["selfdist_sq_purification"]) == pytest.approx(4.0, abs=1e-9)
            assert float(row["selfdist_sq_sdp"]) == pytest.approx(4.0, abs=1e-6)
            assert float(row["selfdist_sq_published_form"]) == pytest.approx(2.0, abs=1e-9)

    def test_output_file(self, capsys, tmp_path):
        path = tmp_path / "table.csv"
        code, out, _ = run_cli(
            capsys,
            ["selfdist-table", "--cost", "z", "--norm-steps", "2", "--b3-steps", "2",
             "--output", str(path)],
        )
        assert code == 0
        assert out == ""
        rows = list(csv.DictReader(path.open()))
        assert rows and rows[0]["schema_version"] == "1"


class TestThreadsEnv:
    def test_thread_count_does_not_change_results(self, capsys, monkeypatch):
        argv = ["verify", "dz-theorem", "--samples", "2", "--seed", "11", "--json"]
        monkeypatch.setenv("QWASSER_THREADS", "1")
        _, out1, _ = run_cli(capsys, argv)
        monkeypatch.setenv("QWASSER_THREADS", "4")
        _, out4, _ = run_cli(capsys, argv)
        rep1, rep4 = json.loads(out1), json.loads(out4)
        del rep1["wall_time_s"], rep4["wall_time_s"]
        del rep1["config"]["qwasser_threads"], rep4["config"]["qwasser_threads"]
        assert rep1 == rep4


class TestUsageErrors:
    def test_unknown_suite_exit_2(self, capsys):
        assert run_cli(capsys, ["verify", "nope"])[0] == 2

    def test_missing_args_exit_2(self, capsys):
        assert run_cli(capsys, ["distance"])[0] == 2

    def test_custom_without_generators_exit_2(self, capsys):
        code, _, err = run_cli(capsys, ["distance", "--cost", "custom", "plus_z", "minus_z"])
        assert code == 2
