"""Deterministic structural audits for computed I-functions.

A series is treated as data to be audited, not as correct by construction.
Every check returns a ``CheckDecision``; none of them raise on a failed audit,
so callers can collect a full verification block before deciding an exit code.
"""
from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from fractions import Fraction

from .curve_classes import enumerate_effective, semipositivity_report
from .executors import TermExecutor
from .iseries import ISeries, grading_check, residue_two_path_check, small_i
from .models import CheckDecision, GitPresentation

logger = logging.getLogger(__name__)

__all__ = [
    "CheckDecision",
    "all_passed",
    "grading_check",
    "residue_two_path_check",
    "run_series_checks",
    "semipositive_structure_check",
    "two_path_check_all",
    "twisted_pole_order_check",
]


def semipositive_structure_check(
    presentation: GitPresentation, series: ISeries, *, strict: bool | None = None
) -> CheckDecision:
    """1_X + I1/z + O(1/z^2) shape of a semi-positive small series.

    ``strict`` defaults to the semi-positivity scan up to the series' degree;
    strictly positive models must also have no z^0 and no z^-1 content off beta = 0.
    """
    if strict is None:
        strict = semipositivity_report(presentation, series.d_max).strict
    violations = []
    for term in series.terms:
        if term.beta.is_zero:
            continue
        label = term.beta.label()
        positive = [power for power in term.laurent.powers() if power > 0]
        if positive:
            violations.append(f"beta={label}: positive z-powers {positive}")
        if not term.laurent.coefficient(0).is_zero():
            violations.append(f"beta={label}: nonzero z^0 part")
        linear = term.laurent.coefficient(-1)
        if not linear.is_zero():
            if not term.sector.is_untwisted:
                violations.append(f"beta={label}: z^-1 part on twisted sector {term.sector.label()}")
            elif any(degree > 1 for degree in linear.degrees()):
                violations.append(f"beta={label}: z^-1 part above complex degree 1")
            elif strict:
                violations.append(f"beta={label}: z^-1 part on a strictly positive model")

    if violations:
        return CheckDecision(
            "semi-positive structure",
            False,
            "Series does not have the semi-positive shape.",
            tuple(violations),
        )
    return CheckDecision(
        "semi-positive structure",
        True,
        "Series is 1_X + I1/z + O(1/z^2)" + (" with I1 = 0." if strict else "."),
    )


def twisted_pole_order_check(presentation: GitPresentation, series: ISeries) -> CheckDecision:
    """Twisted-sector terms start at z^-(sum ceil(b_rho) + #negative integer b_rho) or lower."""
    violations = []
    checked = 0
    for term in series.terms:
        if term.sector.is_untwisted or term.laurent.is_zero():
            continue
        checked += 1
        b = term.beta.b
        bound = sum(math.ceil(value) for value in b) + sum(
            1 for value in b if value < 0 and value.denominator == 1
        )
        top = max(term.laurent.powers())
        if top > -bound:
            violations.append(
                f"beta={term.beta.label()}: leading power z^{top} above z^{-bound}"
            )
    if violations:
        return CheckDecision(
            "twisted pole order", False, "Twisted sector term has a short pole.", tuple(violations)
        )
    return CheckDecision(
        "twisted pole order", True, f"{checked} twisted-sector terms have the expected pole order."
    )


def two_path_check_all(
    presentation: GitPresentation,
    d_max: Fraction,
    *,
    max_degree: int | None = None,
    executor: TermExecutor | None = None,
) -> CheckDecision:
    """Residue two-path equality over every enumerated class."""
    classes = enumerate_effective(presentation, d_max, executor=executor)
    violations: list[str] = []
    for beta in classes:
        decision = residue_two_path_check(presentation, beta, max_degree=max_degree)
        violations.extend(decision.violations)
    if violations:
        return CheckDecision("two-path residue", False, "Residue paths disagree.", tuple(violations))
    return CheckDecision(
        "two-path residue", True, f"{len(classes)} classes agree on both residue paths."
    )


def run_series_checks(
    presentation: GitPresentation,
    d_max: Fraction,
    *,
    series: ISeries | None = None,
    max_degree: int | None = None,
    executor: TermExecutor | None = None,
) -> list[CheckDecision]:
    """Grading, two-path, pole-order and (when applicable) semi-positive checks."""
    d_max = Fraction(d_max)
    if series is None or series.flavor != "small":
        series = small_i(presentation, d_max, max_degree=max_degree, executor=executor)

    decisions = [
        grading_check(series),
        two_path_check_all(presentation, d_max, max_degree=max_degree, executor=executor),
        twisted_pole_order_check(presentation, series),
    ]
    report = semipositivity_report(presentation, d_max)
    if report.passed:
        decisions.append(
            semipositive_structure_check(presentation, series, strict=report.strict)
        )

    failed = [decision.name for decision in decisions if not decision.passed]
    if failed:
        logger.warning("Checks failed on %s: %s", presentation.name, ", ".join(failed))
    else:
        logger.info("All %d checks passed on %s", len(decisions), presentation.name)
    return decisions


def all_passed(decisions: Sequence[CheckDecision]) -> bool:
    return all(decision.passed for decision in decisions)
