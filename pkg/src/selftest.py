"""Deterministic self-check battery for the qtoric engine.

Each case names a model from the ``models/`` corpus and an acceptance
criterion; the criterion runs the production engine on the model and compares
the result with an exact oracle. The battery measures whether the engine
reproduces known closed forms and structural identities, not performance.
"""
from __future__ import annotations

import argparse
import json
import logging
import time
from collections import Counter
from collections.abc import Callable
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .checks import semipositive_structure_check, two_path_check_all
from .curve_classes import (
    enumerate_effective,
    loop_space_dims,
    make_class,
    semipositivity_report,
    virtual_dim_moduli,
)
from .errors import QToricError
from .git_model import exponent_lcm_e, load_presentation
from .iseries import TwistData, grading_check, mirror_map, small_i, twisted_small_i
from .models import GitPresentation
from .oracles import (
    brute_force_classes,
    cubic_twist_term,
    local_p2_mirror_coefficient,
    projective_space_term,
)
from .render import term_table
from .sectors import age, enumerate_sectors, involution

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SelftestCase:
    """One acceptance case: a criterion applied to one corpus model."""

    case_id: str
    criterion: int
    model: str
    d_max: str = "3"
    options: dict[str, Any] = field(default_factory=dict)
    max_seconds: float | None = None


@dataclass(frozen=True)
class SelftestResult:
    """Observed outcome of one case."""

    case_id: str
    criterion: int
    model: str
    passed: bool
    detail: str
    seconds: float = 0.0


Outcome = tuple[bool, str]


def repo_root() -> Path:
    """Return repository root when executed as ``python -m src.selftest``."""
    return Path(__file__).resolve().parent.parent


def load_cases(path: Path) -> list[SelftestCase]:
    """Load acceptance cases from JSON."""
    payload = json.loads(path.read_text(encoding="utf-8"))
    return [SelftestCase(**item) for item in payload]


def _projective_space(presentation: GitPresentation, case: SelftestCase) -> Outcome:
    n = int(case.options.get("n", presentation.dimension))
    series = small_i(presentation, case.d_max)
    for d in range(int(Fraction(case.d_max)) + 1):
        observed = term_table(series.term([d]).laurent)
        if observed != projective_space_term(n, d):
            return False, f"q^{d} coefficient differs from the P^{n} closed form"
    return True, f"P^{n} matches the closed form through q^{case.d_max}"


def _weighted_p12(presentation: GitPresentation, case: SelftestCase) -> Outcome:
    ages = sorted(sector.age for sector in enumerate_sectors(presentation))
    if ages != [Fraction(0), Fraction(1, 2)]:
        return False, f"sector ages {ages}"
    if exponent_lcm_e(presentation) != 2:
        return False, "exponent e is not 2"
    term = small_i(presentation, case.d_max).term([Fraction(1, 2)])
    if term.sector.is_untwisted or term_table(term.laurent) != {(0, -2): Fraction(2)}:
        return False, "q^{1/2} term is not 2 z^-2 on the twisted sector"
    return True, "ages {0, 1/2}, e = 2, q^{1/2} term 2 z^-2"


def _local_p2(presentation: GitPresentation, case: SelftestCase) -> Outcome:
    series = small_i(presentation, case.d_max)
    expected = {(1, -1): Fraction(-6), (2, -2): Fraction(-9)}
    if term_table(series.term([1]).laurent) != expected:
        return False, "q^1 term is not -6H/z - 9H^2/z^2"
    mirror = mirror_map(presentation, case.d_max)
    if any(value != (1 if beta.is_zero else 0) for beta, value in mirror.j0):
        return False, "J0 is not identically 1"
    for d in range(1, int(Fraction(case.d_max)) + 1):
        coefficient = mirror.i1_coefficient([d])
        observed = term_table_from_element(coefficient)
        if observed != {1: local_p2_mirror_coefficient(d)}:
            return False, f"I1 q^{d} coefficient {observed} differs from the hypergeometric value"
    return True, "q^1 term, J0 = 1 and I1 coefficients match"


def term_table_from_element(element) -> dict[int, Fraction]:
    if element is None:
        return {}
    return {monom[0]: coeff for monom, coeff in element.terms()}


def _grading(presentation: GitPresentation, case: SelftestCase) -> Outcome:
    decision = grading_check(small_i(presentation, case.d_max))
    return decision.passed, decision.reason


def _two_path(presentation: GitPresentation, case: SelftestCase) -> Outcome:
    decision = two_path_check_all(presentation, Fraction(case.d_max))
    return decision.passed, decision.reason


def _semipositive(presentation: GitPresentation, case: SelftestCase) -> Outcome:
    report = semipositivity_report(presentation, case.d_max)
    if not report.passed:
        return False, f"model is not semi-positive up to degree {case.d_max}"
    series = small_i(presentation, case.d_max)
    decision = semipositive_structure_check(presentation, series, strict=report.strict)
    if not decision.passed:
        return False, "; ".join(decision.violations)
    if report.strict:
        mirror = mirror_map(presentation, case.d_max)
        if mirror.i1 or any(value for beta, value in mirror.j0 if not beta.is_zero):
            return False, "strictly positive model has a nontrivial mirror map"
    return True, decision.reason


def _involution(presentation: GitPresentation, case: SelftestCase) -> Outcome:
    for sector in enumerate_sectors(presentation):
        inverse = involution(sector)
        if involution(inverse) != sector:
            return False, f"involution is not an involution on {sector.label()}"
        moved = sum(1 for value in sector.action if value != 0)
        if age(sector) + age(inverse) != moved:
            return False, f"age duality fails on {sector.label()}"
    return True, f"{len(enumerate_sectors(presentation))} sectors satisfy involution and age duality"


def _enumeration(presentation: GitPresentation, case: SelftestCase) -> Outcome:
    d_max = Fraction(case.d_max)
    engine = [beta.components for beta in enumerate_effective(presentation, d_max)]
    radius = case.options.get("radius")
    scanned = brute_force_classes(presentation, d_max, radius)
    if engine != scanned:
        return False, f"engine lists {len(engine)} classes, lattice scan {len(scanned)}"
    return True, f"{len(engine)} classes agree with the lattice scan"


def _cubic_twist(presentation: GitPresentation, case: SelftestCase) -> Outcome:
    twist = TwistData(characters=(tuple(case.options.get("eta", [3])),))
    series = twisted_small_i(presentation, twist, case.d_max)
    for d in range(1, int(Fraction(case.d_max)) + 1):
        if term_table(series.term([d]).laurent) != cubic_twist_term(d):
            return False, f"twisted q^{d} coefficient differs from the hypergeometric factor"
    return True, "cubic-twisted coefficients match"


def _dimensions(presentation: GitPresentation, case: SelftestCase) -> Outcome:
    rows = case.options.get("expected", [])
    for row in rows:
        beta = make_class(presentation, [Fraction(value) for value in row["beta"]])
        dims = loop_space_dims(presentation, beta)
        for key in ("dim_stack", "obstruction_dim", "virtual_dim"):
            if key in row and getattr(dims, key) != row[key]:
                return False, f"beta={beta.label()} {key}={getattr(dims, key)} != {row[key]}"
        moduli = row.get("moduli")
        if moduli:
            value = virtual_dim_moduli(
                presentation,
                moduli["genus"],
                len(moduli.get("ages", [])),
                beta,
                [Fraction(text) for text in moduli.get("ages", [])],
            )
            if value != Fraction(moduli["expected"]):
                return False, f"beta={beta.label()} moduli dimension {value}"
    return True, f"{len(rows)} dimension rows match"


CRITERIA: dict[int, Callable[[GitPresentation, SelftestCase], Outcome]] = {
    1: _projective_space,
    2: _weighted_p12,
    3: _local_p2,
    4: _grading,
    5: _two_path,
    6: _semipositive,
    7: _involution,
    8: _enumeration,
    9: _cubic_twist,
    10: _dimensions,
}


def evaluate_case(case: SelftestCase, models_dir: Path) -> SelftestResult:
    """Evaluate one case through the production engine."""
    started = time.perf_counter()
    check = CRITERIA.get(case.criterion)
    if check is None:
        passed, detail = False, f"unknown criterion {case.criterion}"
    else:
        try:
            presentation = load_presentation(models_dir / f"{case.model}.json")
            passed, detail = check(presentation, case)
        except QToricError as exc:
            passed, detail = False, f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - started
    if passed and case.max_seconds is not None and elapsed > case.max_seconds:
        passed = False
        detail = f"{detail}; took {elapsed:.2f}s, over the {case.max_seconds}s limit"
    logger.info("Case %s: %s (%.2fs)", case.case_id, "pass" if passed else "FAIL", elapsed)
    return SelftestResult(
        case_id=case.case_id,
        criterion=case.criterion,
        model=case.model,
        passed=passed,
        detail=detail,
        seconds=elapsed,
    )


def evaluate_cases(cases: list[SelftestCase], models_dir: Path) -> list[SelftestResult]:
    """Evaluate all cases."""
    return [evaluate_case(case, models_dir) for case in cases]


def build_markdown_summary(results: list[SelftestResult]) -> str:
    """Build the self-check summary report."""
    if not results:
        return "# Self-check Summary\n\nNo models: the case list is empty.\n"

    counts = Counter("passed" if result.passed else "failed" for result in results)
    criteria = sorted({result.criterion for result in results})
    lines = [
        "# Self-check Summary",
        "",
        "## Overview",
        "",
        f"- Cases: **{len(results)}**",
        f"- Passed: **{counts.get('passed', 0)}**",
        f"- Failed: **{counts.get('failed', 0)}**",
        "",
        "## Criteria",
        "",
    ]
    for criterion in criteria:
        subset = [result for result in results if result.criterion == criterion]
        ok = sum(result.passed for result in subset)
        lines.append(f"- Criterion {criterion}: **{ok}/{len(subset)}**")
    lines.extend(
        [
            "",
            "## Case matrix",
            "",
            "| Case | Criterion | Model | Passed | Seconds | Detail |",
            "|---|---|---|---|---|---|",
        ]
    )
    for result in results:
        lines.append(
            f"| {result.case_id} | {result.criterion} | {result.model} | "
            f"{'yes' if result.passed else 'no'} | {result.seconds:.2f} | {result.detail} |"
        )
    return "\n".join(lines) + "\n"


def write_summary(path: Path, results: list[SelftestResult]) -> None:
    """Write the summary markdown to disk."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(build_markdown_summary(results), encoding="utf-8")


def run_selftest(
    cases_path: Path | None = None,
    models_dir: Path | None = None,
    report_path: Path | None = None,
) -> list[SelftestResult]:
    """Run the battery and write the report; returns the per-case results."""
    root = repo_root()
    cases = load_cases(cases_path or root / "benchmarks" / "acceptance_cases.json")
    if not cases:
        logger.info("No models in the self-check case list")
    results = evaluate_cases(cases, models_dir or root / "models")
    write_summary(report_path or root / "reports" / "selftest_summary.md", results)
    return results


def main(argv: list[str] | None = None) -> int:
    """Run the self-check battery; exit status 0 iff every case passes."""
    parser = argparse.ArgumentParser(description="Run the qtoric self-check battery.")
    parser.add_argument("--cases", type=Path, default=None)
    parser.add_argument("--models-dir", type=Path, default=None)
    parser.add_argument("--report", type=Path, default=None)
    args = parser.parse_args(argv)

    results = run_selftest(args.cases, args.models_dir, args.report)
    print(build_markdown_summary(results), end="")
    return 0 if all(result.passed for result in results) else 1


if __name__ == "__main__":
    raise SystemExit(main())
