import csv
import io
import json
import math

import numpy as np
import pytest

from horoxform import cli, suites
from horoxform.cli import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_VERIFY, ExperimentConfig, main
from horoxform.errors import NumericalFailure, PreconditionError
from horoxform.suites import COLUMNS, SCHEMA_VERSION, SUITES, OracleCase, build_suite, run_cases, run_suite


def _case(cid, value, reference, tol=1e-12, kind="rel"):
    return OracleCase(cid, "fixture", lambda: value, lambda: reference, tol, {}, kind)


class TestRunner:
    def test_empty_suite(self):
        report = run_cases([])
        assert report.results == () and report.passed and report.exit_status == 0

    def test_forced_failure(self):
        report = run_cases([_case("exact", 1.0, 1.0, 0.0), _case("off", 1.0 + 1e-15, 1.0, 0.0)])
        assert [r.status for r in report.results] == ["PASS", "FAIL"]
        assert report.exit_status == 1

    def test_exceptions_are_recorded(self):
        def boom():
            raise NumericalFailure("did not converge")
        report = run_cases([OracleCase("raises", "fixture", boom, lambda: 1.0, 1e-6)])
        row = report.results[0]
        assert row.status == "FAIL" and row.note.startswith("NumericalFailure: did not converge")
        assert math.isnan(row.computed)

    def test_absolute_kind_and_zero_reference(self):
        report = run_cases([_case("abs", 1e-9, 0.0, 1e-8, "abs"), _case("rel0", 1e-9, 0.0, 1e-8)])
        assert [r.status for r in report.results] == ["PASS", "FAIL"]
        assert math.isinf(report.results[1].rel_err)

    def test_validation(self):
        with pytest.raises(PreconditionError):
            run_cases([_case("dup", 1.0, 1.0), _case("dup", 2.0, 2.0)])
        with pytest.raises(PreconditionError):
            _case("neg", 1.0, 1.0, -1e-3)
        with pytest.raises(PreconditionError):
            _case("kind", 1.0, 1.0, 1e-3, "ratio")
        with pytest.raises(PreconditionError):
            build_suite("nonexistent")

    def test_order_preserved_in_parallel(self):
        cases = [_case(f"c{i}", float(i), float(i)) for i in range(20)]
        report = run_cases(cases, workers=4)
        assert [r.id for r in report.results] == [c.id for c in cases]

    def test_worker_limit_from_environment(self, monkeypatch):
        monkeypatch.setenv("HOROXFORM_WORKERS", "3")
        assert suites.worker_limit() == 3
        monkeypatch.setenv("HOROXFORM_WORKERS", "many")
        with pytest.raises(PreconditionError):
            suites.worker_limit()
        monkeypatch.delenv("HOROXFORM_WORKERS")
        assert suites.worker_limit() >= 1

    def test_csv_and_json_schema(self):
        report = run_cases([_case("a", 1.0, 1.0), _case("b", math.nan, 1.0)], suite="fixture", seed=7)
        text = report.to_csv()
        assert text.endswith("\r\n")
        rows = list(csv.DictReader(io.StringIO(text)))
        assert tuple(rows[0].keys()) == COLUMNS
        assert rows[0]["schema_version"] == str(SCHEMA_VERSION) and rows[0]["status"] == "PASS"
        data = json.loads(report.to_json())
        assert data["schema_version"] == SCHEMA_VERSION and data["seed"] == 7 and data["passed"] is False
        assert data["rows"][1]["computed"] is None

    def test_suites_have_unique_ids(self):
        ids = [c.id for c in build_suite("all")]
        assert len(ids) == len(set(ids)) and len(ids) > 150

    def test_builds_are_deterministic(self):
        a = [c.id for c in build_suite("geometry", seed=3)]
        b = [c.id for c in build_suite("geometry", seed=3)]
        assert a == b

    @pytest.mark.parametrize("suite", SUITES)
    def test_every_suite_passes(self, suite):
        report = run_suite(suite)
        failing = [(r.id, r.rel_err, r.note) for r in report.results if r.status != "PASS"]
        assert not failing


def _write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def _rows(text):
    return list(csv.DictReader(io.StringIO(text)))


class TestConfig:
    def test_valid(self, tmp_path):
        cfg = ExperimentConfig.load(_write(tmp_path, "p.json", {"n": 3, "field": {"kind": "power", "beta": 3}}))
        assert cfg.n == 3 and cfg.rel_tol > 0 and cfg.heights() == [1.0, 1.5, 2.0]

    @pytest.mark.parametrize("data", [
        {"n": 1, "field": {"kind": "power", "beta": 3}},
        {"n": 3, "field": {"kind": "gaussian"}},
        {"n": 3, "field": {"kind": "power"}},
        {"n": 3, "field": {"kind": "sampled"}},
        {"n": 3, "field": {"kind": "dual_pair"}},
        {"n": 3, "field": {"kind": "exp_bump"}, "schema_version": 2},
        {"n": 3, "field": {"kind": "exp_bump"}, "method": "guess"},
        {"n": 3, "field": {"kind": "exp_bump"}, "overrides": [1, 2]},
        [1, 2, 3],
    ])
    def test_invalid(self, data):
        with pytest.raises(PreconditionError):
            ExperimentConfig.from_dict(data)

    def test_sampled_path_relative_to_config(self, tmp_path):
        from horoxform.fields import exp_bump
        exp_bump(3.0).to_csv(tmp_path / "bump.csv", np.linspace(1.0, 10.0, 300))
        cfg = ExperimentConfig.load(_write(tmp_path, "s.json", {"n": 3, "field": {"kind": "sampled", "path": "bump.csv"}}))
        f = cfg.scalar_field()
        from horoxform.lorentz import HPoint
        assert f(HPoint.on_axis(3, 1.5)) == pytest.approx(math.exp(-1.5), rel=1e-5)


class TestCommandLine:
    def test_missing_config(self, tmp_path, capsys):
        assert main(["forward", "--config", str(tmp_path / "absent.json")]) == EXIT_CONFIG
        assert "not found" in capsys.readouterr().err

    def test_bad_json_and_bad_subcommand(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        assert main(["forward", "--config", str(path)]) == EXIT_CONFIG
        assert main(["transmogrify"]) == EXIT_CONFIG

    def test_forward(self, tmp_path, capsys):
        cfg = _write(tmp_path, "p.json", {"n": 3, "field": {"kind": "power", "beta": 3}})
        assert main(["forward", "--config", cfg]) == 0
        rows = _rows(capsys.readouterr().out)
        assert [float(r["t"]) for r in rows] == [-1.0, 0.0, 1.0]
        assert all(float(r["rel_err"]) <= 1e-6 for r in rows)
        assert set(rows[0]) == {"schema_version", "t", "computed", "reference", "rel_err"}

    def test_dual_pair_json(self, tmp_path):
        cfg = _write(tmp_path, "d.json", {"n": 3, "field": {"kind": "dual_pair", "alpha": 0.5}})
        out = tmp_path / "dual.json"
        assert main(["dual", "--config", cfg, "--format", "json", "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        assert data["schema_version"] == SCHEMA_VERSION and data["command"] == "dual"
        assert all(r["rel_err"] <= 1e-6 for r in data["rows"])

    def test_dual_of_transform(self, tmp_path, capsys):
        cfg = _write(tmp_path, "e.json", {"n": 3, "field": {"kind": "compact_bump", "w": 1},
                                          "overrides": {"heights": [1.0, 1.5]}})
        assert main(["dual", "--config", cfg]) == 0
        assert all(float(r["rel_err"]) <= 1e-4 for r in _rows(capsys.readouterr().out))

    def test_forward_refuses_cone_kernel(self, tmp_path):
        cfg = _write(tmp_path, "d.json", {"n": 3, "field": {"kind": "dual_pair", "alpha": 0.5}})
        assert main(["forward", "--config", cfg]) == EXIT_CONFIG

    def test_inversions(self, tmp_path, capsys):
        cfg = _write(tmp_path, "e.json", {"n": 3, "field": {"kind": "exp_bump", "a": 3}})
        assert main(["invert-mean", "--config", cfg]) == 0
        assert all(float(r["rel_err"]) <= 1e-2 for r in _rows(capsys.readouterr().out))
        cfg_b = _write(tmp_path, "b.json", {"n": 3, "field": {"kind": "compact_bump", "w": 1},
                                            "overrides": {"heights": [1.0, 1.3]}})
        assert main(["invert-bl", "--config", cfg_b]) == 0
        assert all(float(r["rel_err"]) <= 1e-2 for r in _rows(capsys.readouterr().out))

    def test_table_sweep_converges(self, tmp_path, capsys):
        cfg = _write(tmp_path, "t.json", {"n": 3, "field": {"kind": "exp_bump", "a": 3},
                                          "overrides": {"heights": [1.5], "nodes_list": [16, 64]}})
        assert main(["table", "--config", cfg, "--method", "invert-mean"]) == 0
        rows = _rows(capsys.readouterr().out)
        assert [int(r["nodes"]) for r in rows] == [16, 64]
        assert float(rows[1]["rel_err"]) < float(rows[0]["rel_err"])

    def test_verify_geometry(self, capsys):
        assert main(["verify", "--suite", "geometry", "--seed", "5"]) == 0
        rows = _rows(capsys.readouterr().out)
        assert rows and all(r["status"] == "PASS" for r in rows)

    def test_verify_failure_exit(self, monkeypatch, capsys):
        monkeypatch.setattr(cli, "run_suite", lambda suite, seed=0: run_cases([_case("bad", 2.0, 1.0)]))
        assert main(["verify", "--suite", "geometry"]) == EXIT_VERIFY
        assert "FAIL" in capsys.readouterr().out

    def test_numerical_failure_exit(self, tmp_path, monkeypatch):
        def fail(*args, **kwargs):
            raise NumericalFailure("tail did not close")
        monkeypatch.setattr(cli, "forward", fail)
        cfg = _write(tmp_path, "e.json", {"n": 3, "field": {"kind": "exp_bump", "a": 3}})
        assert main(["forward", "--config", cfg]) == EXIT_NUMERICAL
