"""
render.py
---------

JSON and plain-text renderings of engine results.

Rationals are always strings ("p/q" or "n"), never floats. Ring elements are
maps from monomial strings ("1", "H1", "H1^2*H2") to coefficients, and series
coefficients are keyed "z^k" in descending power. Documents are plain dicts
built in a fixed key order so ``dump_json`` is byte-deterministic.
"""
from __future__ import annotations

import json
import re
from collections.abc import Sequence
from fractions import Fraction
from typing import Any

from .cohomology import RingElement, SectorRing, ZLaurent, betti_dims, generator_names
from .curve_classes import SemipositivityReport, loop_space_dims
from .exactmath import format_rational
from .iseries import ISeries, MirrorData, SeriesTerm
from .models import CheckDecision, CurveClass, GitPresentation, SectorLabel, StabilityReport

_NUMBER = re.compile(r"^\d+(/\d+)?$")


def _names(sector_ring_or_rank: SectorRing | int, names: Sequence[str] | None) -> tuple[str, ...]:
    if names:
        return tuple(names)
    rank = sector_ring_or_rank if isinstance(sector_ring_or_rank, int) else sector_ring_or_rank.rank
    return generator_names(rank)


def monomial_string(exponents: Sequence[int], names: Sequence[str]) -> str:
    parts = []
    for name, exponent in zip(names, exponents):
        if exponent == 1:
            parts.append(name)
        elif exponent > 1:
            parts.append(f"{name}^{exponent}")
    return "*".join(parts) or "1"


def element_to_json(x: RingElement, names: Sequence[str] | None = None) -> dict[str, str]:
    labels = _names(x.ring, names)
    return {monomial_string(monom, labels): format_rational(coeff) for monom, coeff in x.terms()}


def laurent_to_json(laurent: ZLaurent, names: Sequence[str] | None = None) -> dict[str, dict]:
    return {f"z^{power}": element_to_json(value, names) for power, value in laurent.terms}


def term_table(laurent: ZLaurent) -> dict[tuple[int, int], Fraction]:
    """Rank-one view {(H-power, z-power): coefficient} for comparison with oracle tables."""
    table = {}
    for power, value in laurent.terms:
        for monom, coeff in value.terms():
            table[(monom[0], power)] = coeff
    return table


def _rationals(values: Sequence[Fraction]) -> list[str]:
    return [format_rational(value) for value in values]


def sector_to_json(sector: SectorLabel) -> dict[str, Any]:
    return {
        "c": _rationals(sector.action),
        "support": list(sector.support),
        "age": format_rational(sector.age),
        "dim": sector.dim,
    }


def _t_monomial_string(series: ISeries, monomial: Sequence[int]) -> str:
    return monomial_string(monomial, series.variables)


def term_to_json(series: ISeries, term: SeriesTerm, names: Sequence[str] | None = None) -> dict:
    doc: dict[str, Any] = {
        "beta": _rationals(term.beta.components),
        "degree": format_rational(term.beta.degree),
    }
    if series.variables:
        doc["t"] = _t_monomial_string(series, term.t_monomial)
    doc["sector"] = sector_to_json(term.sector)
    doc["coefficients"] = laurent_to_json(term.laurent, names)
    return doc


def series_to_json(series: ISeries, names: Sequence[str] | None = None) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "model": series.presentation.name,
        "flavor": series.flavor,
        "d_max": format_rational(series.d_max),
        "z_window": list(series.z_window) if series.z_window is not None else None,
        "divisor_names": list(_names(series.presentation.rank, names)),
    }
    if series.variables:
        doc["variables"] = list(series.variables)
        doc["t_order"] = series.t_order
    if series.twist is not None:
        doc["twist"] = [list(eta) for eta in series.twist.characters]
    doc["terms"] = [term_to_json(series, term, names) for term in series.terms]
    if series.q_rescaling:
        doc["q_rescaling"] = {
            beta.label(): _rationals(linear) for beta, linear in series.q_rescaling
        }
    if series.dropped:
        doc["dropped"] = [
            {
                "beta": _rationals(beta.components),
                "t": monomial_string(monomial, series.variables) if series.variables else "1",
                "powers": list(powers),
            }
            for beta, monomial, powers in series.dropped
        ]
    return doc


def checks_to_json(decisions: Sequence[CheckDecision]) -> dict[str, Any]:
    return {
        "passed": all(decision.passed for decision in decisions),
        "checks": [
            {
                "name": decision.name,
                "passed": decision.passed,
                "reason": decision.reason,
                "violations": list(decision.violations),
            }
            for decision in decisions
        ],
    }


def semipositivity_to_json(report: SemipositivityReport) -> dict[str, Any]:
    return {
        "verdict": report.verdict,
        "d_max": format_rational(report.d_max),
        "violation": report.violation.label() if report.violation else None,
    }


def analysis_to_json(
    presentation: GitPresentation,
    report: StabilityReport,
    rings: Sequence[SectorRing],
    semipositivity: SemipositivityReport | None,
) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "model": presentation.name,
        "n_rays": presentation.n_rays,
        "rank": presentation.rank,
        "theta": list(presentation.theta),
        "ss_equals_s": report.ss_equals_s,
        "reason": report.reason,
        "witness": list(report.witness) if report.witness is not None else None,
        "fixed_subsets": [
            {
                "sigma": list(subset.sigma),
                "coeffs": _rationals(subset.coeffs),
                "stab_order": subset.stab_order,
                "stab_exponent": subset.stab_exponent,
            }
            for subset in report.fixed_subsets
        ],
        "e": report.exponent_e,
        "sectors": [
            {
                **sector_to_json(sector_ring.sector),
                "betti": betti_dims(sector_ring),
                "proper": sector_ring.is_proper,
            }
            for sector_ring in rings
        ],
    }
    if semipositivity is not None:
        doc["semipositivity"] = semipositivity_to_json(semipositivity)
    return doc


def classes_to_json(
    presentation: GitPresentation,
    classes: Sequence[CurveClass],
    sectors: Sequence[SectorLabel],
) -> dict[str, Any]:
    entries = []
    for beta, sector in zip(classes, sectors):
        dims = loop_space_dims(presentation, beta)
        entries.append(
            {
                "beta": _rationals(beta.components),
                "b": _rationals(beta.b),
                "degree": format_rational(beta.degree),
                "a": dims.a,
                "dims": {
                    "dim_W_beta": dims.dim_W_beta,
                    "dim_stack": dims.dim_stack,
                    "obstruction_dim": dims.obstruction_dim,
                    "virtual_dim": dims.virtual_dim,
                },
                "anticanonical_degree": format_rational(beta.anticanonical_degree),
                "sector": sector_to_json(sector),
            }
        )
    return {"model": presentation.name, "classes": entries}


def mirror_to_json(mirror: MirrorData, names: Sequence[str] | None = None) -> dict[str, Any]:
    return {
        "model": mirror.presentation.name,
        "d_max": format_rational(mirror.d_max),
        "J0": {beta.label(): format_rational(value) for beta, value in mirror.j0},
        "I1": {beta.label(): element_to_json(value, names) for beta, value in mirror.i1},
        "mirror_map": mirror_map_text(mirror, names),
    }


def dump_json(document: Any) -> str:
    return json.dumps(document, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------------------
# Pretty text
# ---------------------------------------------------------------------------


def polynomial_text(coefficients: dict[str, str]) -> str:
    """{"H1": "-6", "1": "2"} -> "-6*H1 + 2"."""
    pieces = []
    for monomial, text in coefficients.items():
        value = Fraction(text)
        magnitude = format_rational(abs(value))
        if monomial == "1":
            body = magnitude
        elif abs(value) == 1:
            body = monomial
        else:
            body = f"{magnitude}*{monomial}"
        sign = "-" if value < 0 else "+"
        if not pieces:
            pieces.append(body if sign == "+" else f"-{body}")
        else:
            pieces.append(f"{sign} {body}")
    return " ".join(pieces) or "0"


def mirror_map_text(mirror: MirrorData, names: Sequence[str] | None = None) -> str:
    parts = [
        f"({polynomial_text(element_to_json(value, names))}) q^{beta.label()}"
        for beta, value in mirror.i1
    ]
    return "t -> t" + "".join(f" + {part}" for part in parts)


def series_to_pretty(series: ISeries, names: Sequence[str] | None = None) -> str:
    doc = series_to_json(series, names)
    lines = [f"# {doc['model']} {doc['flavor']} I-function up to q^{{{doc['d_max']}}}"]
    for term in doc["terms"]:
        header = [f"q^{{{term['degree']}}}"]
        if "t" in term:
            header.append(f"t={term['t']}")
        header.append("beta=(" + ", ".join(term["beta"]) + ")")
        header.append("sector=(" + ", ".join(term["sector"]["c"]) + ")")
        lines.append("  ".join(header))
        if not term["coefficients"]:
            lines.append("    0")
        for key, coefficients in term["coefficients"].items():
            lines.append(f"    {key}: {polynomial_text(coefficients)}")
    return "\n".join(lines) + "\n"


def _parse_polynomial(text: str) -> dict[str, str]:
    if text.strip() == "0":
        return {}
    coefficients: dict[str, str] = {}
    for piece in text.replace(" - ", " + -").split(" + "):
        piece = piece.strip()
        sign = -1 if piece.startswith("-") else 1
        factors = piece.lstrip("-").split("*")
        if _NUMBER.match(factors[0]):
            value = Fraction(factors[0])
            factors = factors[1:]
        else:
            value = Fraction(1)
        coefficients["*".join(factors) or "1"] = format_rational(sign * value)
    return coefficients


def parse_pretty(text: str) -> list[dict[str, Any]]:
    """Read ``series_to_pretty`` output back into JSON-shaped term records."""
    terms: list[dict[str, Any]] = []
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        if not line.startswith("    "):
            record: dict[str, Any] = {"coefficients": {}}
            for token in line.split("  "):
                if token.startswith("q^{"):
                    record["degree"] = token[3:-1]
                elif token.startswith("t="):
                    record["t"] = token[2:]
                elif token.startswith("beta=("):
                    record["beta"] = [part.strip() for part in token[6:-1].split(",")]
                elif token.startswith("sector=("):
                    record["sector"] = [part.strip() for part in token[8:-1].split(",")]
            terms.append(record)
            continue
        body = line.strip()
        if body == "0":
            continue
        key, _, polynomial = body.partition(": ")
        terms[-1]["coefficients"][key] = _parse_polynomial(polynomial)
    return terms


def comparable_terms(document: dict[str, Any]) -> list[dict[str, Any]]:
    """Project a series JSON document onto the fields carried by the pretty form."""
    out = []
    for term in document["terms"]:
        record: dict[str, Any] = {"coefficients": term["coefficients"]}
        record["degree"] = term["degree"]
        if "t" in term:
            record["t"] = term["t"]
        record["beta"] = term["beta"]
        record["sector"] = term["sector"]["c"]
        out.append(record)
    return out


def analysis_to_pretty(document: dict[str, Any]) -> str:
    lines = [
        f"model {document['model']}: N={document['n_rays']} r={document['rank']} "
        f"theta={document['theta']}",
        f"W^ss = W^s: {'yes' if document['ss_equals_s'] else 'no'} ({document['reason']})",
    ]
    if document["witness"] is not None:
        lines.append(f"witness subset: {document['witness']}")
    lines.append(f"exponent e = {document['e']}")
    for subset in document["fixed_subsets"]:
        lines.append(
            f"  fixed point sigma={subset['sigma']} |stab|={subset['stab_order']} "
            f"exponent={subset['stab_exponent']}"
        )
    for sector in document["sectors"]:
        lines.append(
            f"  sector ({', '.join(sector['c'])}) age={sector['age']} dim={sector['dim']} "
            f"betti={sector['betti']}{'' if sector['proper'] else ' non-proper'}"
        )
    if "semipositivity" in document:
        report = document["semipositivity"]
        lines.append(f"semi-positivity up to degree {report['d_max']}: {report['verdict']}")
    return "\n".join(lines) + "\n"


def classes_to_pretty(document: dict[str, Any]) -> str:
    lines = [f"# {document['model']} I-contributing classes"]
    for entry in document["classes"]:
        dims = entry["dims"]
        lines.append(
            f"beta=({', '.join(entry['beta'])}) degree={entry['degree']} "
            f"b=({', '.join(entry['b'])}) sector=({', '.join(entry['sector']['c'])}) "
            f"a={entry['a']} vdim={dims['virtual_dim']}"
        )
    return "\n".join(lines) + "\n"


def checks_to_pretty(document: dict[str, Any]) -> str:
    lines = []
    for check in document["checks"]:
        lines.append(f"[{'PASS' if check['passed'] else 'FAIL'}] {check['name']}: {check['reason']}")
        lines.extend(f"    {violation}" for violation in check["violations"])
    return "\n".join(lines) + "\n"


def mirror_to_pretty(document: dict[str, Any]) -> str:
    lines = [f"# {document['model']} mirror data up to q^{{{document['d_max']}}}"]
    lines.extend(f"J0 q^{beta}: {value}" for beta, value in document["J0"].items())
    lines.extend(
        f"I1 q^{beta}: {polynomial_text(value)}" for beta, value in document["I1"].items()
    )
    lines.append(document["mirror_map"])
    return "\n".join(lines) + "\n"
