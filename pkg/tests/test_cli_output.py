import csv
import xml.etree.ElementTree as ET

import pytest

from handplan.cli import run
from handplan.output import (
    CLUSTERS_HEADER,
    CONFIG_HEADER,
    FILES,
    TRACE_HEADER,
    WEIGHTS_HEADER,
    Bundle,
    emit_bundle,
    fmt,
    read_configurations,
)
from handplan.geometry import distance


def rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_fmt():
    assert fmt(0.0) == "0"
    assert fmt(-0.0) == "0"
    assert fmt(1 / 3) == "0.333333333333"
    assert fmt(123456789012345.0) == "1.23456789012e+14"
    assert fmt(7) == "7" and fmt(None) == "" and fmt(True) == "1"


def test_empty_bundle(tmp_path):
    manifest = emit_bundle(Bundle(), tmp_path)
    assert len(manifest) == 6
    assert sorted(p.name for p, _ in manifest) == sorted(FILES)
    for path, size in manifest:
        assert path.stat().st_size == size
    assert rows(tmp_path / "configurations.csv") == [CONFIG_HEADER]
    assert rows(tmp_path / "weights.csv") == [WEIGHTS_HEADER]
    assert rows(tmp_path / "clusters.csv") == [CLUSTERS_HEADER]
    assert rows(tmp_path / "trace.csv") == [TRACE_HEADER]
    root = ET.parse(tmp_path / "workspace.svg").getroot()
    assert root.get("viewBox")
    assert not list(tmp_path.glob("*.tmp"))


def test_solve_identity(tmp_path, capsys):
    assert run(["solve", "--scenario", "builtin:identity", "--out", str(tmp_path)]) == 0
    body = rows(tmp_path / "configurations.csv")[1:]
    assert len(body) == 1
    out = capsys.readouterr().out
    assert out.count("\n") == 6


def test_plan_row_count_and_round_trip(tmp_path):
    assert run(["plan", "--scenario", "builtin:ellipse_2f_roll15", "--out", str(tmp_path), "--count", "25"]) == 0
    parsed = read_configurations(tmp_path / "configurations.csv")
    assert len(parsed) == 2 * 25
    assert sum(r.selected for r in parsed) == 2
    for r in parsed:
        q1, q2, q3 = r.solution.joints
        c = r.solution.contact
        # lengths of the default synthesized fingers
        for got, want in zip((distance(q1, q2), distance(q2, q3), distance(q3, c)), (5.4, 3.8, 4.4)):
            assert got == pytest.approx(want, rel=1e-9)
        e2, e3 = r.solution.displacements
        assert abs(r.solution.cost - 1) <= 0.05 + 1e-11
        assert len(r.solution.angles) == 2
    report = (tmp_path / "report.txt").read_text()
    assert "relative error" in report.lower()


def test_csv_byte_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert run(["plan", "--scenario", "builtin:circle_roll", "--out", str(d), "--seed", "3", "--count", "20"]) == 0
    for name in FILES:
        ta, tb = (a / name).read_bytes(), (b / name).read_bytes()
        if name.endswith(".svg"):
            strip = lambda t: b"\n".join(l for l in t.splitlines() if b"generator:" not in l)
            assert strip(ta) == strip(tb)
        else:
            assert ta == tb, name


def test_sweep_cloud(tmp_path):
    assert run(["sweep", "--scenario", "builtin:circle_roll", "--out", str(tmp_path)]) == 0
    assert len(rows(tmp_path / "configurations.csv")) - 1 >= 100


def test_cluster_and_report(tmp_path):
    assert run(["cluster", "--scenario", "builtin:circle_roll", "--out", str(tmp_path), "--count", "30"]) == 0
    assert len(rows(tmp_path / "clusters.csv")) > 1
    before = (tmp_path / "configurations.csv").read_bytes()
    assert run(["report", "--scenario", "builtin:circle_roll", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "configurations.csv").read_bytes() == before


def test_suite_report(tmp_path):
    argv = ["suite", "--scenario", "builtin:benchmark", "--out", str(tmp_path), "--repetitions", "1", "--count", "20"]
    assert run(argv) == 0
    lines = (tmp_path / "report.txt").read_text().splitlines()
    header = next(l for l in lines if "Ellipse" in l)
    assert len(header.split()) == 5
    assert any(l.startswith("B2F e") for l in lines)
    assert any(l.startswith("B2F kSR") for l in lines)


def test_unreachable_exit_one(tmp_path, capsys):
    assert run(["plan", "--scenario", "builtin:unreachable", "--out", str(tmp_path)]) == 1
    assert "finger 0" in capsys.readouterr().err


def test_budget_exit_one(tmp_path):
    argv = ["plan", "--scenario", "builtin:ellipse_b2f", "--out", str(tmp_path), "--max-attempts", "10"]
    assert run(argv) == 1


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["fly", "--scenario", "builtin:identity", "--out", "x"],
        ["plan", "--out", "x"],
        ["plan", "--scenario", "builtin:nope", "--out", "x"],
        ["plan", "--scenario", "builtin:identity", "--out", "x", "--epsilon-f", "-1"],
        ["plan", "--scenario", "builtin:identity", "--out", "x", "--strategy", "other"],
        ["plan", "--scenario", "builtin:benchmark", "--out", "x"],
    ],
)
def test_usage_errors_exit_two(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert run(argv) == 2


def test_parse_error_exit_two(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{\n  nope\n}")
    assert run(["plan", "--scenario", str(bad), "--out", str(tmp_path / "o")]) == 2
    assert "bad.json:2:3" in capsys.readouterr().err
