"""
oracles.py
----------

Reference values computed without the ring or series engine: closed-form
hypergeometric coefficients expanded with plain dictionaries, the classical
local P^2 mirror-map coefficients, and a brute-force lattice scan of curve
classes. Tests and the self-check battery compare the engine against these.

Tables are keyed by (H-power, z-power) and hold ``Fraction`` values.
"""
from __future__ import annotations

import math
from fractions import Fraction
from itertools import product

from .curve_classes import f_beta_nonempty, make_class
from .git_model import exponent_lcm_e
from .models import GitPresentation

Table = dict[tuple[int, int], Fraction]


def _multiply(left: Table, right: Table, h_max: int) -> Table:
    out: Table = {}
    for (h1, z1), a in left.items():
        for (h2, z2), b in right.items():
            if h1 + h2 > h_max:
                continue
            key = (h1 + h2, z1 + z2)
            out[key] = out.get(key, Fraction(0)) + a * b
    return {key: value for key, value in out.items() if value}


def _inverse_linear(weight: int, m: int, h_max: int) -> Table:
    """1/(weight*H + m z) = sum_k (-weight)^k H^k / (m^(k+1) z^(k+1))."""
    return {
        (k, -(k + 1)): Fraction((-weight) ** k, m ** (k + 1)) for k in range(h_max + 1)
    }


def _linear(weight: int, m: int) -> Table:
    table: Table = {}
    if weight:
        table[(1, 0)] = Fraction(weight)
    if m:
        table[(0, 1)] = Fraction(m)
    return table


def projective_space_term(n: int, d: int) -> Table:
    """q^d coefficient 1/prod_{m=1}^d (H + m z)^(n+1) of the P^n I-function."""
    table: Table = {(0, 0): Fraction(1)}
    for m in range(1, d + 1):
        inverse = _inverse_linear(1, m, n)
        for _ in range(n + 1):
            table = _multiply(table, inverse, n)
    return table


def local_p2_mirror_coefficient(d: int) -> Fraction:
    """q^d coefficient of I1 for K_{P^2}, in units of H."""
    return Fraction(3 * (-1) ** d * math.factorial(3 * d - 1), math.factorial(d) ** 3)


def cubic_twist_numerator(d: int) -> Table:
    """prod_{m=0}^{3d} (3H + m z) in Q[H]/(H^3)."""
    table: Table = {(0, 0): Fraction(1)}
    for m in range(0, 3 * d + 1):
        table = _multiply(table, _linear(3, m), 2)
    return table


def cubic_twist_term(d: int) -> Table:
    """q^d coefficient of the cubic-twisted P^2 I-function."""
    table = cubic_twist_numerator(d)
    for m in range(1, d + 1):
        inverse = _inverse_linear(1, m, 2)
        for _ in range(3):
            table = _multiply(table, inverse, 2)
    return table


def brute_force_classes(
    presentation: GitPresentation, d_max: Fraction, radius: int | None = None
) -> list[tuple[Fraction, ...]]:
    """Scan (1/e)Z^r inside a box and keep classes with F_beta nonempty and degree <= d_max."""
    d_max = Fraction(d_max)
    e = exponent_lcm_e(presentation)
    if radius is None:
        radius = 2 * math.ceil(d_max) + 1
    steps = range(-radius * e, radius * e + 1)
    found = []
    for numerators in product(steps, repeat=presentation.rank):
        beta = make_class(presentation, [Fraction(k, e) for k in numerators])
        if 0 <= beta.degree <= d_max and f_beta_nonempty(presentation, beta):
            found.append(beta.components)
    return sorted(found, key=lambda components: (make_class(presentation, components).degree, components))
