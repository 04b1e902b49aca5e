from __future__ import annotations

from dataclasses import replace
from fractions import Fraction
from pathlib import Path

import pytest

from src.checks import (
    all_passed,
    run_series_checks,
    semipositive_structure_check,
    two_path_check_all,
    twisted_pole_order_check,
)
from src.cohomology import ZLaurent
from src.git_model import load_presentation
from src.iseries import small_i

MODELS = Path(__file__).resolve().parent.parent / "models"


def _model(name: str):
    return load_presentation(MODELS / f"{name}.json")


@pytest.mark.parametrize("name", ["p2", "wp_1_2", "wp_1_1_2", "local_p2", "conifold"])
def test_corpus_models_pass_every_applicable_check(name) -> None:
    decisions = run_series_checks(_model(name), Fraction(2))

    assert all_passed(decisions), [d.violations for d in decisions if not d.passed]
    names = [decision.name for decision in decisions]
    assert names[:3] == ["grading", "two-path residue", "twisted pole order"]
    assert "semi-positive structure" in names


def test_strictly_positive_model_has_no_inverse_z_term() -> None:
    presentation = _model("p2")
    series = small_i(presentation, 2)

    decision = semipositive_structure_check(presentation, series)

    assert decision.passed is True
    assert "I1 = 0" in decision.reason


def test_semipositive_check_flags_a_nonzero_constant_term() -> None:
    presentation = _model("local_p2")
    series = small_i(presentation, 1)
    term = series.term([1])
    unit = ZLaurent.one(term.laurent.ring)
    broken = replace(series, terms=(series.terms[0], replace(term, laurent=term.laurent + unit)))

    decision = semipositive_structure_check(presentation, broken)

    assert decision.passed is False
    assert decision.violations == ("beta=(1): nonzero z^0 part",)


def test_strict_flag_rejects_linear_inverse_z_content() -> None:
    presentation = _model("local_p2")
    series = small_i(presentation, 1)

    assert semipositive_structure_check(presentation, series, strict=False).passed is True
    assert semipositive_structure_check(presentation, series, strict=True).passed is False


def test_twisted_pole_order_counts_twisted_terms() -> None:
    presentation = _model("wp_1_2")

    decision = twisted_pole_order_check(presentation, small_i(presentation, 3))

    assert decision.passed is True
    assert decision.reason.startswith("3 twisted-sector terms")


def test_twisted_pole_order_flags_a_short_pole() -> None:
    presentation = _model("wp_1_2")
    series = small_i(presentation, 1)
    term = series.term([Fraction(1, 2)])
    shortened = replace(term, laurent=term.laurent.shift(1))
    broken = replace(
        series, terms=tuple(shortened if t is term else t for t in series.terms)
    )

    decision = twisted_pole_order_check(presentation, broken)

    assert decision.passed is False
    assert "z^-1 above z^-2" in decision.violations[0]


def test_two_path_check_covers_every_class() -> None:
    decision = two_path_check_all(_model("local_p2"), Fraction(3))

    assert decision.passed is True
    assert decision.reason.startswith("4 classes")
