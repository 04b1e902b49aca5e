from __future__ import annotations

import json
import random
from fractions import Fraction
from itertools import combinations
from pathlib import Path

import pytest

from src.errors import InputError, PreconditionError, StabilityError
from src.exactmath import cone_contains, rational_rank
from src.git_model import (
    check_ss_equals_s,
    coarse_space_is_proper,
    exponent_lcm_e,
    fixed_point_subsets,
    load_presentation,
    parse_presentation,
    require_stable,
    sr_generators,
)

MODELS = Path(__file__).resolve().parent.parent / "models"


def _model(name: str):
    return load_presentation(MODELS / f"{name}.json")


def test_load_presentation_fills_default_ray_names() -> None:
    presentation = _model("p2")

    assert presentation.name == "p2"
    assert presentation.ray_names == ("D1", "D2", "D3")
    assert presentation.dimension == 2


def test_parse_presentation_rejects_rank_deficient_charges() -> None:
    document = {"n_rays": 3, "rank": 2, "charges": [[1, 1, 1], [2, 2, 2]], "theta": [1, 0]}

    with pytest.raises(InputError, match="rank"):
        parse_presentation(document)


@pytest.mark.parametrize(
    "document",
    [
        {"n_rays": 2, "rank": 1, "charges": [[1, 1]]},
        {"n_rays": 2, "rank": 1, "charges": [[1, 1.5]], "theta": [1]},
        {"n_rays": 2, "rank": 1, "charges": [[1, 1]], "theta": [0]},
        {"n_rays": 2, "rank": 1, "charges": [[1, 1]], "theta": [1], "ray_names": ["x", "x"]},
        [1, 2, 3],
    ],
)
def test_parse_presentation_rejects_malformed_documents(document) -> None:
    with pytest.raises(InputError):
        parse_presentation(document)


def test_load_presentation_reports_invalid_json(tmp_path) -> None:
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")

    with pytest.raises(InputError, match="not valid JSON"):
        load_presentation(path)


def test_projective_line_has_two_fixed_points_and_trivial_exponent() -> None:
    presentation = _model("p1")

    subsets = fixed_point_subsets(presentation)

    assert [subset.sigma for subset in subsets] == [(0,), (1,)]
    assert all(subset.stab_order == 1 for subset in subsets)
    assert check_ss_equals_s(presentation).ss_equals_s is True
    assert exponent_lcm_e(presentation) == 1


def test_weighted_projective_line_has_exponent_two() -> None:
    presentation = _model("wp_1_2")

    report = check_ss_equals_s(presentation)

    assert report.ss_equals_s is True
    assert report.exponent_e == 2
    assert [subset.stab_order for subset in report.fixed_subsets] == [1, 2]


def test_strictly_semistable_model_reports_witness() -> None:
    presentation = _model("ssfail")

    report = check_ss_equals_s(presentation)

    assert report.ss_equals_s is False
    assert report.witness == (0,)
    with pytest.raises(StabilityError) as excinfo:
        require_stable(presentation)
    assert excinfo.value.witness == (0,)


def test_empty_semistable_locus_is_not_stable() -> None:
    presentation = parse_presentation(
        {"n_rays": 2, "rank": 1, "charges": [[1, 1]], "theta": [-1]}, default_name="empty"
    )

    report = check_ss_equals_s(presentation)

    assert report.ss_equals_s is False
    assert report.fixed_subsets == ()
    assert "empty" in report.reason


def test_fixed_point_coefficients_are_positive_for_product_of_lines() -> None:
    presentation = _model("p1xp1")

    subsets = fixed_point_subsets(presentation)

    assert len(subsets) == 4
    for subset in subsets:
        assert subset.coeffs == (Fraction(1), Fraction(1))


def test_sr_generators_match_known_presentations() -> None:
    assert sr_generators(_model("p2"), (0, 1, 2)) == ((0, 1, 2),)
    assert sr_generators(_model("p1xp1"), (0, 1, 2, 3)) == ((0, 1), (2, 3))
    assert sr_generators(_model("wp_1_2"), (1,)) == ((1,),)


def test_sr_generators_require_semistable_support() -> None:
    with pytest.raises(PreconditionError):
        sr_generators(_model("local_p2"), (3,))


def test_properness_of_coarse_spaces() -> None:
    assert coarse_space_is_proper(_model("p2"), (0, 1, 2)) is True
    assert coarse_space_is_proper(_model("local_p2"), (0, 1, 2, 3)) is False
    assert coarse_space_is_proper(_model("conifold"), (0, 1, 2, 3)) is False


def test_model_files_round_trip_through_json(tmp_path) -> None:
    document = json.loads((MODELS / "local_p2.json").read_text(encoding="utf-8"))
    path = tmp_path / "copy.json"
    path.write_text(json.dumps(document), encoding="utf-8")

    presentation = load_presentation(path)

    assert presentation.ray_charge(3) == (-3,)
    assert presentation.ray_names[3] == "P"


def _random_presentations(seed: int, count: int):
    rng = random.Random(seed)
    found = []
    while len(found) < count:
        rank = rng.randint(1, 2)
        n_rays = rng.randint(rank + 1, 7)
        theta = [rng.randint(-2, 2) for _ in range(rank)]
        document = {
            "name": f"random_{len(found)}",
            "n_rays": n_rays,
            "rank": rank,
            "charges": [[rng.randint(-2, 3) for _ in range(n_rays)] for _ in range(rank)],
            "theta": theta,
        }
        try:
            found.append(parse_presentation(document))
        except InputError:
            continue
    return found


def _ss_equals_s_by_subsets(presentation) -> bool:
    semistable = [
        subset
        for size in range(1, presentation.n_rays + 1)
        for subset in combinations(range(presentation.n_rays), size)
        if cone_contains(presentation.ray_charges(subset), presentation.theta).contains
    ]
    return bool(semistable) and all(
        rational_rank(presentation.ray_charges(subset)) == presentation.rank
        for subset in semistable
    )


def test_ss_equals_s_agrees_with_subset_enumeration() -> None:
    corpus = [_model(name) for name in ("p1", "p2", "wp_1_1_2", "local_p2", "p1xp1", "ssfail")]
    presentations = corpus + _random_presentations(7, 40)

    outcomes = set()
    for presentation in presentations:
        expected = _ss_equals_s_by_subsets(presentation)

        assert check_ss_equals_s(presentation).ss_equals_s is expected, presentation
        outcomes.add(expected)

    assert outcomes == {True, False}


def test_ss_equals_s_on_ten_rays_matches_subset_enumeration() -> None:
    presentation = parse_presentation(
        {
            "name": "ten_rays",
            "n_rays": 10,
            "rank": 2,
            "charges": [[1, 1, 1, 0, 0, 2, 1, 1, -1, 0], [0, 0, 1, 1, 1, 1, 2, -1, 1, 3]],
            "theta": [2, 3],
        }
    )

    assert check_ss_equals_s(presentation).ss_equals_s is _ss_equals_s_by_subsets(presentation)


def _permuted(presentation, order: list[int]):
    rows = presentation.charges.to_rows()
    return parse_presentation(
        {
            "name": f"{presentation.name}_permuted",
            "n_rays": presentation.n_rays,
            "rank": presentation.rank,
            "charges": [[row[j] for j in order] for row in rows],
            "theta": list(presentation.theta),
        }
    )


def _fixed_point_table(presentation, order: list[int]):
    table = {}
    for subset in fixed_point_subsets(presentation):
        rays = tuple(order[j] for j in subset.sigma)
        table[frozenset(rays)] = (
            subset.stab_order,
            subset.stab_exponent,
            dict(zip(rays, subset.coeffs)),
        )
    return table


def test_fixed_point_subsets_are_invariant_under_column_permutation() -> None:
    rng = random.Random(11)
    presentations = [_model(name) for name in ("p2", "wp_1_1_2", "local_p2", "p1xp1")]
    presentations += [p for p in _random_presentations(3, 20) if check_ss_equals_s(p).ss_equals_s]

    for presentation in presentations:
        order = list(range(presentation.n_rays))
        rng.shuffle(order)

        original = _fixed_point_table(presentation, list(range(presentation.n_rays)))
        permuted = _fixed_point_table(_permuted(presentation, order), order)

        assert permuted == original, presentation
