from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from src.cohomology import build_sector_ring
from src.curve_classes import enumerate_effective
from src.git_model import check_ss_equals_s, load_presentation, parse_presentation
from src.iseries import big_i, build_insertion, mirror_map, small_i
from src.render import (
    analysis_to_json,
    analysis_to_pretty,
    classes_to_json,
    classes_to_pretty,
    comparable_terms,
    dump_json,
    mirror_map_text,
    parse_pretty,
    polynomial_text,
    series_to_json,
    series_to_pretty,
)
from src.sectors import enumerate_sectors, sector_of_class

MODELS = Path(__file__).resolve().parent.parent / "models"


def _model(name: str):
    return load_presentation(MODELS / f"{name}.json")


def test_series_json_uses_exact_rational_strings() -> None:
    document = series_to_json(small_i(_model("wp_1_2"), 1))

    half = document["terms"][1]
    assert document["d_max"] == "1"
    assert half["beta"] == ["1/2"]
    assert half["sector"]["c"] == ["1/2", "0"]
    assert list(half["sector"]) == ["c", "support", "age", "dim"]
    assert half["coefficients"] == {"z^-2": {"1": "2"}}
    assert "t" not in half


def test_series_json_is_byte_deterministic() -> None:
    presentation = _model("local_p2")

    first = dump_json(series_to_json(small_i(presentation, 2)))
    second = dump_json(series_to_json(small_i(presentation, 2)))

    assert first == second
    assert json.loads(first)["terms"][1]["coefficients"] == {
        "z^-1": {"H1": "-6"},
        "z^-2": {"H1^2": "-9"},
    }


def test_custom_divisor_names_flow_into_output() -> None:
    document = series_to_json(small_i(_model("p1"), 1), names=["h"])

    assert document["divisor_names"] == ["h"]
    assert document["terms"][1]["coefficients"]["z^-3"] == {"h": "-2"}


def test_polynomial_text_formats_signs_and_units() -> None:
    assert polynomial_text({"H1": "-6", "1": "2"}) == "-6*H1 + 2"
    assert polynomial_text({"H1^2": "1", "H2": "-1/3"}) == "H1^2 - 1/3*H2"
    assert polynomial_text({}) == "0"


def test_pretty_output_round_trips_to_json_terms() -> None:
    for series in (
        small_i(_model("wp_1_1_2"), 2),
        small_i(_model("conifold"), 1),
        big_i(_model("p1"), 1, build_insertion(_model("p1"), [("t1", "H1"), ("t2", "3")], 2)),
    ):
        document = series_to_json(series)

        assert parse_pretty(series_to_pretty(series)) == comparable_terms(document)


def test_pretty_header_lists_class_and_sector() -> None:
    text = series_to_pretty(small_i(_model("wp_1_2"), Fraction(1, 2)))

    assert text.splitlines()[0] == "# wp_1_2 small I-function up to q^{1/2}"
    assert "q^{1/2}  beta=(1/2)  sector=(1/2, 0)" in text
    assert "    z^-2: 2" in text


def test_mirror_map_text_lists_i1_coefficients() -> None:
    mirror = mirror_map(_model("local_p2"), 2)

    assert mirror_map_text(mirror) == "t -> t + (-6*H1) q^(1) + (45*H1) q^(2)"


def test_mirror_map_text_separates_classes_of_equal_degree() -> None:
    local_p1xp1 = parse_presentation(
        {
            "name": "local_p1xp1",
            "n_rays": 5,
            "rank": 2,
            "charges": [[1, 1, 0, 0, -2], [0, 0, 1, 1, -2]],
            "theta": [1, 1],
        }
    )

    text = mirror_map_text(mirror_map(local_p1xp1, 1))

    assert "q^(1, 0)" in text
    assert "q^(0, 1)" in text
    assert "q^{1}" not in text


def test_classes_pretty_reads_top_level_a_and_dims() -> None:
    presentation = _model("wp_1_2")
    classes = enumerate_effective(presentation, 1)
    sectors = [sector_of_class(presentation, beta) for beta in classes]

    document = classes_to_json(presentation, classes, sectors)
    text = classes_to_pretty(document)

    half = document["classes"][1]
    assert half["beta"] == ["1/2"]
    assert half["a"] == 2
    assert "loop_space" not in half
    assert half["sector"]["c"] == ["1/2", "0"]
    assert "beta=(1/2) degree=1/2 b=(1/2, 1) sector=(1/2, 0) a=2" in text


def test_analysis_reports_sectors_and_exponent() -> None:
    presentation = _model("wp_1_2")
    rings = [build_sector_ring(presentation, s) for s in enumerate_sectors(presentation)]

    document = analysis_to_json(presentation, check_ss_equals_s(presentation), rings, None)
    text = analysis_to_pretty(document)

    assert document["e"] == 2
    assert [sector["betti"] for sector in document["sectors"]] == [[1, 1, 0], [1, 0]]
    assert "exponent e = 2" in text
    assert "semi-positivity" not in text
