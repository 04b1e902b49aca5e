from __future__ import annotations

from fractions import Fraction
from pathlib import Path

import pytest

from src.curve_classes import (
    enumerate_effective,
    f_beta_nonempty,
    integral_nonnegative_rays,
    loop_space_dims,
    make_class,
    minimal_a,
    monomial_count,
    semipositivity_report,
    virtual_dim_moduli,
)
from src.errors import PreconditionError, StabilityError
from src.executors import ThreadedExecutor
from src.git_model import load_presentation, parse_presentation

MODELS = Path(__file__).resolve().parent.parent / "models"


def _model(name: str):
    return load_presentation(MODELS / f"{name}.json")


def test_make_class_attaches_pairings_and_degree() -> None:
    beta = make_class(_model("local_p2"), [1])

    assert beta.b == (1, 1, 1, -3)
    assert beta.degree == 1
    assert beta.anticanonical_degree == 0


def test_weighted_line_enumerates_half_integral_classes() -> None:
    classes = enumerate_effective(_model("wp_1_2"), 1)

    assert [beta.components for beta in classes] == [
        (Fraction(0),),
        (Fraction(1, 2),),
        (Fraction(1),),
    ]


def test_product_of_lines_enumerates_bidegrees() -> None:
    classes = enumerate_effective(_model("p1xp1"), 2)

    assert [beta.components for beta in classes] == [
        (0, 0),
        (0, 1),
        (1, 0),
        (0, 2),
        (1, 1),
        (2, 0),
    ]


def test_enumeration_is_independent_of_executor() -> None:
    presentation = _model("wp_1_1_2")

    serial = enumerate_effective(presentation, 3)
    threaded = enumerate_effective(presentation, 3, executor=ThreadedExecutor(max_workers=3))

    assert serial == threaded


def test_enumeration_rejects_negative_bound_and_unstable_models() -> None:
    with pytest.raises(PreconditionError):
        enumerate_effective(_model("p1"), -1)
    with pytest.raises(StabilityError):
        enumerate_effective(_model("ssfail"), 1)


def test_f_beta_detects_non_contributing_classes() -> None:
    presentation = _model("wp_1_2")

    assert f_beta_nonempty(presentation, make_class(presentation, [Fraction(1, 2)])) is True
    assert f_beta_nonempty(presentation, make_class(presentation, [Fraction(1, 3)])) is False
    assert integral_nonnegative_rays(make_class(presentation, [Fraction(1, 2)])) == (1,)


def test_minimal_a_and_monomial_count() -> None:
    presentation = _model("wp_1_1_2")

    assert minimal_a(make_class(presentation, [Fraction(3, 2)])) == 2
    assert monomial_count(2, 3) == 2
    assert monomial_count(2, -1) == 0


@pytest.mark.parametrize(
    ("model", "beta", "dim_stack", "obstruction", "virtual"),
    [
        ("p1", [1], 3, 0, 3),
        ("p1", [2], 5, 0, 5),
        ("local_p2", [1], 5, 2, 3),
        ("wp_1_2", [Fraction(1, 2)], 2, 0, 2),
    ],
)
def test_loop_space_dimensions(model, beta, dim_stack, obstruction, virtual) -> None:
    presentation = _model(model)

    dims = loop_space_dims(presentation, make_class(presentation, beta))

    assert dims.dim_stack == dim_stack
    assert dims.obstruction_dim == obstruction
    assert dims.virtual_dim == virtual


def test_loop_space_dims_require_nonempty_fixed_locus() -> None:
    presentation = _model("wp_1_2")

    with pytest.raises(PreconditionError):
        loop_space_dims(presentation, make_class(presentation, [Fraction(1, 3)]))


def test_virtual_dimension_of_stable_map_moduli() -> None:
    p1 = _model("p1")
    wp = _model("wp_1_2")

    assert virtual_dim_moduli(p1, 0, 0, make_class(p1, [2]), []) == 2
    assert virtual_dim_moduli(wp, 0, 1, make_class(wp, [Fraction(1, 2)]), [Fraction(1, 2)]) == 0
    with pytest.raises(PreconditionError):
        virtual_dim_moduli(p1, 0, 2, make_class(p1, [1]), [0])


def test_semipositivity_verdicts() -> None:
    assert semipositivity_report(_model("p2"), 3).verdict == "STRICT"
    assert semipositivity_report(_model("local_p2"), 3).verdict == "PASS"
    assert semipositivity_report(_model("conifold"), 3).verdict == "PASS"


def test_semipositivity_failure_names_the_class() -> None:
    presentation = _model("p1")
    negative = parse_presentation(
        {"n_rays": 3, "rank": 1, "charges": [[1, 1, -4]], "theta": [1]}, default_name="o_minus_4"
    )

    report = semipositivity_report(negative, 1)

    assert report.verdict == "FAIL"
    assert report.violation is not None
    assert report.violation.components == (Fraction(1),)
    assert semipositivity_report(presentation, 1).passed is True


def _weighted_monomials(a: int, degree: int) -> int:
    """Monomials x^i y^j with deg x = a, deg y = 1, listed one by one."""
    if degree < 0:
        return 0
    return sum(1 for i in range(degree + 1) for j in range(degree + 1) if a * i + j == degree)


@pytest.mark.parametrize("name", ["p2", "wp_1_2", "wp_1_1_2", "local_p2", "conifold", "p1xp1"])
def test_loop_space_dims_match_explicit_monomial_counts(name) -> None:
    presentation = _model(name)

    for beta in enumerate_effective(presentation, 3):
        dims = loop_space_dims(presentation, beta)
        a = minimal_a(beta)
        sections = sum(_weighted_monomials(a, int(a * b)) for b in beta.b if b >= 0)
        # H^1 of O(m) on P(a, 1) is dual to sections of O(-m - a - 1)
        obstruction = sum(_weighted_monomials(a, int(-a * b) - a - 1) for b in beta.b if b < 0)

        assert dims.a == a
        assert dims.dim_W_beta == sections
        assert dims.dim_stack == sections - presentation.rank
        assert dims.obstruction_dim == obstruction
        assert dims.virtual_dim == sections - presentation.rank - obstruction
