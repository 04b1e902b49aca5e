from __future__ import annotations

import json
from pathlib import Path
from types import SimpleNamespace

import pytest

from src.selftest import (
    CRITERIA,
    SelftestCase,
    build_markdown_summary,
    evaluate_case,
    load_cases,
    main,
    run_selftest,
)

ROOT = Path(__file__).resolve().parent.parent
MODELS = ROOT / "models"


def test_acceptance_case_list_covers_every_criterion() -> None:
    cases = load_cases(ROOT / "benchmarks" / "acceptance_cases.json")

    assert {case.criterion for case in cases} == set(CRITERIA)
    assert len({case.case_id for case in cases}) == len(cases)


@pytest.mark.parametrize(
    "case",
    [
        SelftestCase("p2-closed-form", 1, "p2", "2", {"n": 2}),
        SelftestCase("wp12-sectors", 2, "wp_1_2", "1"),
        SelftestCase("localp2-mirror", 3, "local_p2", "2"),
        SelftestCase("conifold-two-path", 5, "conifold", "2"),
        SelftestCase("wp112-enumeration", 8, "wp_1_1_2", "2"),
        SelftestCase("cubic", 9, "p2", "1", {"eta": [3]}),
    ],
    ids=lambda case: case.case_id,
)
def test_single_cases_pass_through_the_engine(case) -> None:
    result = evaluate_case(case, MODELS)

    assert result.passed is True, result.detail


def test_dimension_rows_are_compared() -> None:
    case = SelftestCase(
        "p1-dims",
        10,
        "p1",
        options={"expected": [{"beta": ["1"], "dim_stack": 3, "virtual_dim": 4}]},
    )

    result = evaluate_case(case, MODELS)

    assert result.passed is False
    assert "virtual_dim=3 != 4" in result.detail


def test_engine_errors_and_unknown_criteria_fail_the_case() -> None:
    unstable = evaluate_case(SelftestCase("unstable", 4, "ssfail", "1"), MODELS)
    unknown = evaluate_case(SelftestCase("unknown", 42, "p1"), MODELS)

    assert unstable.passed is False
    assert unstable.detail.startswith("StabilityError")
    assert unknown.passed is False
    assert "unknown criterion" in unknown.detail


def test_summary_renders_overview_and_matrix() -> None:
    results = [
        evaluate_case(SelftestCase("p1-grading", 4, "p1", "2"), MODELS),
        evaluate_case(SelftestCase("unknown", 42, "p1"), MODELS),
    ]

    summary = build_markdown_summary(results)

    assert "# Self-check Summary" in summary
    assert "Cases: **2**" in summary
    assert "Failed: **1**" in summary
    assert "| p1-grading | 4 | p1 | yes |" in summary


def test_empty_case_list_reports_no_models(tmp_path) -> None:
    cases = tmp_path / "cases.json"
    cases.write_text("[]", encoding="utf-8")
    report = tmp_path / "reports" / "summary.md"

    results = run_selftest(cases, MODELS, report)

    assert results == []
    assert "No models" in report.read_text(encoding="utf-8")


def test_main_exit_status_follows_case_outcomes(tmp_path, capsys) -> None:
    cases = tmp_path / "cases.json"
    cases.write_text(
        json.dumps([{"case_id": "bad", "criterion": 42, "model": "p1"}]), encoding="utf-8"
    )

    code = main(["--cases", str(cases), "--report", str(tmp_path / "summary.md")])

    assert code == 1
    assert "| bad | 42 | p1 | no |" in capsys.readouterr().out


def test_runtime_limits_are_declared_for_closed_form_cases() -> None:
    cases = load_cases(ROOT / "benchmarks" / "acceptance_cases.json")

    limits = {case.case_id: case.max_seconds for case in cases if case.max_seconds is not None}

    assert limits == {
        "acc-01-p1": 5,
        "acc-01-p2": 5,
        "acc-01-p3": 5,
        "acc-01-p4": 5,
        "acc-03-localp2": 1,
    }


def test_slow_case_fails_its_runtime_limit(monkeypatch) -> None:
    ticks = iter([0.0, 7.5])
    monkeypatch.setattr("src.selftest.time", SimpleNamespace(perf_counter=lambda: next(ticks)))
    case = SelftestCase("p1-slow", 1, "p1", "1", {"n": 1}, max_seconds=5)

    result = evaluate_case(case, MODELS)

    assert result.passed is False
    assert result.seconds == 7.5
    assert "over the 5s limit" in result.detail
