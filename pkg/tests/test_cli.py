"""Command-line surface: parsing, exit codes, reports, round trips."""

import json

import numpy as np
import pytest

from bcinv.cli import (
    JobSpec,
    STATUS_INVALID,
    STATUS_OK,
    STATUS_REFUTED,
    main,
    parse_element,
    parse_ring,
    run,
    serialize_value,
)
from bcinv.rings import RingDescriptor


def test_parse_ring_literals():
    assert parse_ring("Zn:6").name == "Zn:6"
    assert parse_ring("Z6").name == "Zn:6"
    assert parse_ring("MFp:2:2").name == "MFp:2:2"
    assert parse_ring("M2F2").name == "MFp:2:2"
    assert parse_ring("Q:3").name == "Q:3"
    assert parse_ring("R:4").name == "R:4"
    assert parse_ring("R:2:1e-11").tol == 1e-11
    with pytest.raises(ValueError):
        parse_ring("hexagons")


def test_parse_elements():
    z6 = parse_ring("Z6")
    assert parse_element(z6, "5").payload == 5
    r2 = parse_ring("R:2")
    e12 = parse_element(r2, "E12")
    assert np.allclose(e12.payload, [[0.0, 1.0], [0.0, 0.0]])
    m = parse_element(r2, "[[0,1],[1,0]]")
    assert np.allclose(m.payload, [[0.0, 1.0], [1.0, 0.0]])
    assert np.allclose(parse_element(r2, "I").payload, np.eye(2))
    assert np.allclose(parse_element(r2, "3").payload, 3 * np.eye(2))
    q2 = parse_ring("Q:2")
    half = parse_element(q2, '[["1/2", 0], [0, 2]]')
    assert str(half.payload[0, 0]) == "1/2"
    with pytest.raises(ValueError):
        parse_element(r2, "E13")


def test_compute_command_z6():
    job = JobSpec("compute", ring="Z6", elements={"a": "5", "b": "4", "c": "4"})
    status, report = run(job)
    assert status == STATUS_OK
    assert report["outputs"]["inverse"] == 2
    assert report["verdicts"]["certified"] is True
    assert all(v == 0.0 for v in report["residuals"].values())


def test_compute_command_absent_inverse():
    job = JobSpec("compute", ring="R:2",
                  elements={"a": "[[0,1],[1,0]]", "b": "E11", "c": "E11"})
    status, report = run(job)
    assert status == STATUS_REFUTED
    assert report["diagnostic"]["error"] == "InverseAbsent"
    assert "corner-rank" in report["diagnostic"]["message"]


def test_lab_command_m2f2():
    job = JobSpec("lab", ring="M2F2", suite="equivalences")
    status, report = run(job)
    assert status == STATUS_OK
    assert report["outputs"]["counterexample_count"] == 0
    assert report["outputs"]["examined"] == 16 ** 4


def test_verify_command():
    good = JobSpec("verify", ring="Z6",
                   elements={"a": "5", "b": "4", "c": "4", "y": "2"})
    assert run(good)[0] == STATUS_OK
    bad = JobSpec("verify", ring="Z6",
                  elements={"a": "5", "b": "4", "c": "4", "y": "3"})
    status, report = run(bad)
    assert status == STATUS_REFUTED
    assert report["verdicts"]["certified"] is False


def test_invalid_input_is_status_2():
    job = JobSpec("compute", ring="Z1", elements={"a": "1", "b": "1", "c": "1"})
    assert run(job)[0] == STATUS_INVALID
    job = JobSpec("compute", ring="Z6", elements={"a": "5", "b": "4", "c": "4"},
                  method="nonsense")
    assert run(job)[0] == STATUS_INVALID
    job = JobSpec("lab", ring="Z6", suite="nonsense")
    assert run(job)[0] == STATUS_INVALID


def test_banach_command_with_bound():
    job = JobSpec("banach", ring="R:2", method="series", lambda0=0.1,
                  elements={"a": "[[2,0],[0,3]]", "b": "E11", "c": "E11"})
    status, report = run(job)
    assert status == STATUS_OK
    assert report["verdicts"]["agrees"] and report["verdicts"]["bound_holds"]
    assert report["outputs"]["bound"]["measured"] == pytest.approx(0.5 - 1 / 2.1)
    assert report["outputs"]["bound"]["bound"] == pytest.approx(0.0375 / 0.925)


def test_rol_command_witnessed_failure():
    job = JobSpec("rol", ring="R:2",
                  elements={"a": "[[1,1],[0,1]]", "a2": "[[1,0],[1,1]]",
                            "b": "E11", "c": "E11", "b2": "E11", "c2": "E11"})
    status, report = run(job)
    assert status == STATUS_OK
    assert report["outputs"]["condition"] is False
    assert report["outputs"]["law_holds"] is False
    assert report["residuals"]["obstruction_norm"] == pytest.approx(1.0)


def test_continuity_command():
    job = JobSpec("continuity", ring="R:2", family="unbounded", count=200)
    status, report = run(job)
    assert status == STATUS_OK
    assert report["outputs"]["classification"] == "divergent"


def test_report_round_trip(tmp_path):
    path = tmp_path / "report.json"
    rc = main(["compute", "--ring", "Z6", "--a", "5", "--b", "4", "--c", "4",
               "--report", str(path)])
    assert rc == STATUS_OK
    first = json.loads(path.read_text())
    # a report file works as a job file and reproduces the outputs
    job = JobSpec.from_file(str(path))
    status, second = run(job)
    assert status == STATUS_OK
    assert second["outputs"] == first["outputs"]
    assert second["residuals"] == first["residuals"]
    assert second["job"] == first["job"]


def test_summary_output(tmp_path):
    summary = tmp_path / "summary.csv"
    rc = main(["compute", "--ring", "Z6", "--a", "5", "--b", "4", "--c", "4",
               "--report", str(tmp_path / "r.json"), "--summary", str(summary)])
    assert rc == STATUS_OK
    header, values = summary.read_text().strip().splitlines()
    columns = dict(zip(header.split(","), values.split(",")))
    assert columns["outputs.inverse"] == "2"
    assert columns["status"] == "0"
    assert columns["verdicts.certified"] == "True"


def test_main_exit_codes(capsys):
    assert main(["compute", "--ring", "Z6", "--a", "5", "--b", "4", "--c", "4"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["outputs"]["inverse"] == 2
    assert main(["compute", "--ring", "R:2", "--a", "[[0,1],[1,0]]",
                 "--b", "E11", "--c", "E11"]) == 1
    capsys.readouterr()
    assert main(["compute", "--ring", "bogus", "--a", "1", "--b", "1", "--c", "1"]) == 2


def test_tolerance_env_var(monkeypatch):
    monkeypatch.setenv("BCINV_TOL", "1e-7")
    assert parse_ring("R:3").tol == 1e-7
    monkeypatch.delenv("BCINV_TOL")
    assert parse_ring("R:3").tol == 1e-9


def test_serialize_value_shapes():
    z6 = RingDescriptor.modular(6)
    assert serialize_value(z6.element(4)) == 4
    q2 = RingDescriptor.rational_matrices(2)
    assert serialize_value(q2.element([[1, 0], [0, 1]])) == [["1", "0"], ["0", "1"]]
    m = RingDescriptor.matrices_over_prime(2, 2)
    assert serialize_value(m.element([[1, 0], [1, 1]])) == [[1, 0], [1, 1]]
