"""
curve_classes.py
----------------

Curve classes beta in Hom(Pic, Q) = Q^r: pairings, the classes that contribute
to the I-function (those with a nonempty distinguished fixed locus F_beta),
their enumeration up to a degree bound, and the dimension formulas of the
stacky loop spaces.

"Effective" throughout this module means I-contributing: theta lies in the cone
of the rays rho with beta(L_rho) a nonnegative integer.
"""
from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .errors import PreconditionError
from .exactmath import RationalLike, denominator_lcm, dot, solve_square
from .executors import SerialExecutor, TermExecutor
from .git_model import require_stable, theta_in_cone
from .models import CurveClass, FixedPointSubset, GitPresentation, LoopSpaceDims

logger = logging.getLogger(__name__)


def make_class(presentation: GitPresentation, components: Sequence[RationalLike]) -> CurveClass:
    """Attach the ray pairings and theta-degree to a component vector."""
    if len(components) != presentation.rank:
        raise PreconditionError(
            f"class needs {presentation.rank} components, got {len(components)}"
        )
    beta = tuple(Fraction(value) for value in components)
    b = tuple(dot(presentation.ray_charge(rho), beta) for rho in range(presentation.n_rays))
    return CurveClass(components=beta, b=b, degree=dot(presentation.theta, beta))


def zero_class(presentation: GitPresentation) -> CurveClass:
    return make_class(presentation, [0] * presentation.rank)


def pairing(beta: CurveClass, eta: Sequence[int]) -> Fraction:
    """beta(L_eta) for an integer character eta."""
    return dot(eta, beta.components)


def minimal_a(beta: CurveClass) -> int:
    """Smallest positive a with a*beta integral."""
    return denominator_lcm(beta.components)


def integral_nonnegative_rays(beta: CurveClass) -> tuple[int, ...]:
    """S_beta: the rays with b_rho a nonnegative integer."""
    return tuple(
        rho for rho, value in enumerate(beta.b) if value >= 0 and value.denominator == 1
    )


def f_beta_nonempty(presentation: GitPresentation, beta: CurveClass) -> bool:
    """Whether the distinguished fixed locus F_beta is nonempty."""
    return theta_in_cone(presentation, integral_nonnegative_rays(beta))


def _classes_from_subset(
    presentation: GitPresentation, subset: FixedPointSubset, d_max: Fraction
) -> list[CurveClass]:
    sigma = subset.sigma
    transposed = [list(presentation.ray_charge(rho)) for rho in sigma]
    bounds = [math.floor(d_max / c) for c in subset.coeffs]
    found: list[CurveClass] = []
    for values in product(*(range(bound + 1) for bound in bounds)):
        if dot(subset.coeffs, values) > d_max:
            continue
        components = solve_square(transposed, values)
        found.append(make_class(presentation, components))
    return found


def enumerate_effective(
    presentation: GitPresentation,
    d_max: RationalLike,
    executor: TermExecutor | None = None,
) -> list[CurveClass]:
    """All I-contributing classes with 0 <= beta(L_theta) <= d_max, sorted by degree.

    Each fixed-point subset sigma contributes the classes with prescribed
    nonnegative integer values on sigma; the per-subset lists are merged in a
    fixed order so the result does not depend on the executor.
    """
    d_max = Fraction(d_max)
    if d_max < 0:
        raise PreconditionError(f"d_max must be nonnegative, got {d_max}")
    report = require_stable(presentation)
    runner = executor or SerialExecutor()
    batches = runner.map(
        lambda subset: _classes_from_subset(presentation, subset, d_max),
        list(report.fixed_subsets),
    )

    unique: dict[tuple[Fraction, ...], CurveClass] = {}
    for batch in batches:
        for beta in batch:
            unique.setdefault(beta.components, beta)

    classes = sorted(unique.values(), key=lambda beta: beta.sort_key)
    for beta in classes:
        if beta.degree < 0 or (beta.degree == 0) != beta.is_zero:
            raise PreconditionError(f"class {beta.label()} violates effectivity")
    logger.info(
        "Enumerated %d I-contributing classes of %s up to degree %s",
        len(classes),
        presentation.name,
        d_max,
    )
    return classes


def monomial_count(a: int, m: int) -> int:
    """dim C[x, y]_m with deg x = a, deg y = 1."""
    if m < 0:
        return 0
    return m // a + 1


def loop_space_dims(presentation: GitPresentation, beta: CurveClass) -> LoopSpaceDims:
    """Dimensions of W_beta, the loop-space stack and its obstruction bundle."""
    if not f_beta_nonempty(presentation, beta):
        raise PreconditionError(f"F_beta is empty for beta={beta.label()}")
    a = minimal_a(beta)
    dim_w = sum(monomial_count(a, int(a * value)) for value in beta.b if value >= 0)
    obstruction = sum(math.ceil(-value) - 1 for value in beta.b if value < 0)
    dim_stack = dim_w - presentation.rank
    return LoopSpaceDims(
        a=a,
        dim_W_beta=dim_w,
        dim_stack=dim_stack,
        obstruction_dim=obstruction,
        virtual_dim=dim_stack - obstruction,
    )


def virtual_dim_moduli(
    presentation: GitPresentation,
    genus: int,
    markings: int,
    beta: CurveClass,
    sector_ages: Sequence[RationalLike],
) -> Fraction:
    """k + (1-g)(dim X - 3) + beta(det T) - sum of marking ages."""
    if len(sector_ages) != markings:
        raise PreconditionError(
            f"expected {markings} sector ages, got {len(sector_ages)}"
        )
    return (
        markings
        + (1 - genus) * (presentation.dimension - 3)
        + beta.anticanonical_degree
        - sum((Fraction(age) for age in sector_ages), Fraction(0))
    )


@dataclass(frozen=True)
class SemipositivityReport:
    """Outcome of the semi-positivity scan up to a degree bound."""

    passed: bool
    strict: bool
    d_max: Fraction
    violation: CurveClass | None = None

    @property
    def verdict(self) -> str:
        if not self.passed:
            return "FAIL"
        return "STRICT" if self.strict else "PASS"


def semipositivity_report(presentation: GitPresentation, d_max: RationalLike) -> SemipositivityReport:
    """Check beta(det T) >= 0 (and > 0 for strictness) on all enumerated classes."""
    d_max = Fraction(d_max)
    classes = enumerate_effective(presentation, d_max)
    for beta in classes:
        if beta.anticanonical_degree < 0:
            return SemipositivityReport(passed=False, strict=False, d_max=d_max, violation=beta)
    strict = all(beta.anticanonical_degree > 0 for beta in classes if not beta.is_zero)
    return SemipositivityReport(passed=True, strict=strict, d_max=d_max)
