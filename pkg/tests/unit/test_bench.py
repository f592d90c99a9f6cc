"""Unit tests for benchmark metrics, the matrix runner and Gantt charts"""

import csv
import math

import pytest

from bench.gantt import gantt_svg
from bench.harness import SuiteEntry, load_suite, parse_config, run_matrix
from bench.metrics import (
    BenchRow,
    aggregate_gaps,
    improvement_curve,
    improvement_pct,
    pairwise,
    relative_gap,
    sample_times,
    value_at,
    with_gaps,
)
from common.errors import NoIncumbent
from common.models import BatchSizeBounds, ModelVariant, TraceEntry
from core.io import save_instance
from core.timing import left_shift_timing


def row(instance, config, objective, trace=(), cls="j5_f2_m1"):
    return BenchRow(
        instance=instance,
        instance_class=cls,
        config=config,
        status="feasible" if objective is not None else "unknown",
        objective=objective,
        trace=tuple(TraceEntry(elapsed=t, objective=v) for t, v in trace),
    )


def test_relative_gap():
    """Test the gap against the best known objective"""
    assert relative_gap(10, 8) == pytest.approx(0.2)
    assert relative_gap(8, 8) == 0.0
    assert relative_gap(0, 0) == 0.0
    with pytest.raises(ZeroDivisionError):
        relative_gap(0, 5)


def test_improvement_pct():
    """Test signed improvement over the reference"""
    assert improvement_pct(100, 90) == pytest.approx(0.1)
    assert improvement_pct(100, 110) == pytest.approx(-0.1)
    with pytest.raises(NoIncumbent):
        improvement_pct(None, 90)


def test_value_at_steps():
    """Test that the last incumbent carries forward"""
    trace = [TraceEntry(elapsed=1.0, objective=50), TraceEntry(elapsed=3.0, objective=40)]
    assert value_at(trace, 0.5) is None
    assert value_at(trace, 1.0) == 50
    assert value_at(trace, 2.9) == 50
    assert value_at(trace, 10.0) == 40


def test_gaps_and_confidence():
    """Test per-class mean gaps with a normal interval"""
    rows = with_gaps(
        [row("a", "ia", 10), row("a", "h", 8), row("b", "ia", 100), row("b", "h", 100)]
    )
    assert [r.gap for r in rows] == pytest.approx([0.2, 0.0, 0.0, 0.0])
    table = {g.config: g for g in aggregate_gaps(rows)}
    assert table["ia"].n == 2
    assert table["ia"].mean_gap == pytest.approx(0.1)
    assert table["ia"].ci_half_width == pytest.approx(1.96 * math.sqrt(0.02) / math.sqrt(2))
    assert table["h"].ci_half_width == 0.0


def test_pairwise_shares():
    """Test better, equal and worse shares between configurations"""
    rows = [
        row("a", "ia", 10),
        row("a", "h", 8),
        row("b", "ia", 5),
        row("b", "h", 5),
        row("c", "ia", None),
        row("c", "h", 3),
    ]
    table = {(p.config_a, p.config_b): p for p in pairwise(rows, ["ia", "h"])}
    assert table[("h", "ia")].n == 2
    assert table[("h", "ia")].better_pct == pytest.approx(50.0)
    assert table[("h", "ia")].equal_pct == pytest.approx(50.0)
    assert table[("ia", "h")].worse_pct == pytest.approx(50.0)


def test_improvement_curve():
    """Test mean improvement over time with incumbent coverage"""
    rows = [
        row("a", "ia", 80, trace=[(1.0, 100), (5.0, 80)]),
        row("a", "h", 70, trace=[(2.0, 70)]),
        row("b", "ia", 50, trace=[(1.0, 50)]),
        row("b", "h", 40, trace=[(6.0, 40)]),
    ]
    points = improvement_curve(rows, "ia", [1.0, 3.0, 6.0])
    assert [p.coverage for p in points] == [0, 1, 2]
    assert points[0].mean_improvement is None
    assert points[1].mean_improvement == pytest.approx(0.3)
    assert points[2].mean_improvement == pytest.approx((0.125 + 0.2) / 2)


def test_sample_times():
    """Test sampling grid up to the budget"""
    assert sample_times(120, 60) == [60, 120]
    assert sample_times(150, 60) == [60, 120, 150]
    assert sample_times(10, 60) == [60]


def test_parse_config():
    """Test configuration names"""
    cfg = parse_config("h+sbt:bc", time_limit=5.0)
    assert cfg.solver.model_variant is ModelVariant.H
    assert cfg.solver.sbt and not cfg.solver.sb
    assert cfg.solver.time_limit == 5.0
    assert not parse_config("ia+nodom", 1.0).solver.dominance
    with pytest.raises(ValueError):
        parse_config("ia+fast", 1.0)


async def test_run_matrix(tmp_path, example_instance, two_machine_instance):
    """Test a small matrix with an infeasible instance recorded as an error row"""
    suite_dir = tmp_path / "suite"
    suite_dir.mkdir()
    save_instance(example_instance, suite_dir / "example.json")
    save_instance(two_machine_instance, suite_dir / "pair.json")
    (suite_dir / "manifest.json").write_text("{}")
    suite = load_suite(suite_dir)
    assert [entry.name for entry in suite] == ["example", "pair"]

    tight = example_instance.with_bounds(BatchSizeBounds(min_size=(2, 2), max_size=(2, 2)))
    suite.append(SuiteEntry("tight", tight))
    configs = [parse_config("ia:ipf", 10.0), parse_config("h+sb:ipf", 10.0)]
    report = await run_matrix(suite, configs, out_dir=tmp_path / "out", workers=2, curve_step=5.0)

    assert len(report.rows) == 6
    errors = [r for r in report.rows if r.status == "error"]
    assert len(errors) == 2
    assert all("InfeasibleInstance" in r.error for r in errors)
    example_rows = [r for r in report.rows if r.instance == "example"]
    assert {r.objective for r in example_rows} == {61}
    assert all(r.gap == 0.0 for r in example_rows)

    with open(tmp_path / "out" / "rows.csv", newline="") as handle:
        records = list(csv.DictReader(handle))
    assert len(records) == 6
    assert (tmp_path / "out" / "traces" / "example__ia-ipf.json").exists()
    for name in ("gaps.csv", "pairwise.csv", "curve.csv"):
        assert (tmp_path / "out" / name).exists()


def test_gantt_svg(example_instance, bc):
    """Test element ids and byte-identical output"""
    schedule = left_shift_timing(example_instance, [[[1, 2, 5], [3, 4]]], bc)
    svg = gantt_svg(example_instance, schedule)
    assert svg == gantt_svg(example_instance, schedule)
    for gid in ("job-1", "job-4", "batch-0-0", "batch-0-1", "setup-0-0", "setup-0-1", "release-5"):
        assert f'id="{gid}"' in svg
    assert "Date" not in svg
