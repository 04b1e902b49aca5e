from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest

from src.curve_classes import enumerate_effective
from src.git_model import load_presentation
from src.oracles import (
    brute_force_classes,
    cubic_twist_term,
    local_p2_mirror_coefficient,
    projective_space_term,
)

MODELS = Path(__file__).resolve().parent.parent / "models"


def _model(name: str):
    return load_presentation(MODELS / f"{name}.json")


def test_projective_line_table() -> None:
    assert projective_space_term(1, 0) == {(0, 0): Fraction(1)}
    assert projective_space_term(1, 1) == {(0, -2): Fraction(1), (1, -3): Fraction(-2)}


def test_local_p2_mirror_coefficients() -> None:
    assert [local_p2_mirror_coefficient(d) for d in (1, 2, 3)] == [-6, 45, -560]


def test_cubic_twist_degree_one_leading_terms() -> None:
    table = cubic_twist_term(1)

    # 3H * (3H + z)(3H + 2z)(3H + 3z) / (H + z)^3
    assert table[(1, 0)] == 18
    assert max(z for _, z in table) == 0


@pytest.mark.parametrize(
    ("name", "d_max"),
    [("p1", 2), ("wp_1_2", Fraction(3, 2)), ("wp_1_1_2", 2), ("local_p2", 2), ("p1xp1", 2)],
)
def test_enumeration_matches_brute_force_scan(name, d_max) -> None:
    presentation = _model(name)

    scanned = brute_force_classes(presentation, d_max)
    enumerated = [beta.components for beta in enumerate_effective(presentation, d_max)]

    assert scanned == enumerated
