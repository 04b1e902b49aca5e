"""
iseries.py
----------

The I-function engine.

For every I-contributing class beta the small series carries the term

    q^beta * prod_{b_rho < 0} prod_{b_rho <= nu < 0} (D_rho + (b_rho - nu) z)
           / prod_{b_rho > 0} prod_{0 <= nu < b_rho} (D_rho + (b_rho - nu) z)
           * 1_{g_beta^-1}

computed in the cohomology ring of the sector of g_beta^-1. The big, Givental
and Euler-twisted flavors dress the same per-class terms; the mirror map and
the grading/residue audits read them back.

Per-class work is independent and runs through a ``TermExecutor``; the sector
rings are built up front and shared read-only, and the final merge follows the
class order so output does not depend on the worker count.
"""
from __future__ import annotations

import logging
import math
import time
from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from tokenize import TokenError

from sympy import Poly, Symbol
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    standard_transformations,
)
from sympy.polys.polyerrors import PolynomialError

from .cohomology import (
    RingElement,
    SectorRing,
    ZLaurent,
    build_sector_ring,
    divisor_class,
    generator_names,
    invert_linear_in_z,
)
from .curve_classes import enumerate_effective, pairing, semipositivity_report
from .errors import (
    ConsistencyError,
    ConvexityError,
    InputError,
    PreconditionError,
    SemipositivityError,
)
from .exactmath import RationalLike, from_qq
from .executors import SerialExecutor, TermExecutor
from .models import CheckDecision, CurveClass, GitPresentation, SectorLabel
from .sectors import sector_of_class, untwisted_sector

logger = logging.getLogger(__name__)

FLAVORS = ("small", "twisted", "big", "givental")

TMonomial = tuple[int, ...]


# ---------------------------------------------------------------------------
# Series containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeriesTerm:
    """One coefficient q^beta t^m of a series, living in the ring of ``sector``."""

    beta: CurveClass
    sector: SectorLabel
    laurent: ZLaurent
    t_monomial: TMonomial = ()


@dataclass(frozen=True)
class TwistData:
    """Characters eta_k of a split bundle E = sum_k L_{eta_k}."""

    characters: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if not self.characters:
            return
        width = len(self.characters[0])
        if any(len(eta) != width for eta in self.characters):
            raise InputError("twist characters must all have the same length")


@dataclass(frozen=True)
class InsertionPolynomial:
    """p_i as a polynomial in first Chern classes of the characters it names."""

    variable: str
    text: str
    characters: tuple[tuple[int, ...], ...]
    monomials: tuple[tuple[tuple[int, ...], Fraction], ...]

    @property
    def degree(self) -> int:
        return max((sum(exps) for exps, _ in self.monomials), default=0)


@dataclass(frozen=True)
class TInsertion:
    """The insertion t = sum_i t_i p_i together with the total t-order kept."""

    polynomials: tuple[InsertionPolynomial, ...]
    t_order: int

    def __post_init__(self) -> None:
        if self.t_order < 0:
            raise PreconditionError(f"t_order must be nonnegative, got {self.t_order}")
        names = [poly.variable for poly in self.polynomials]
        if len(set(names)) != len(names):
            raise InputError(f"insertion variables must be distinct: {names}")

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(poly.variable for poly in self.polynomials)


@dataclass(frozen=True)
class ISeries:
    """A truncated I-function with its terms in deterministic order."""

    presentation: GitPresentation
    flavor: str
    d_max: Fraction
    z_window: tuple[int, int] | None
    terms: tuple[SeriesTerm, ...]
    variables: tuple[str, ...] = ()
    t_order: int = 0
    twist: TwistData | None = None
    q_rescaling: tuple[tuple[CurveClass, tuple[Fraction, ...]], ...] = ()
    dropped: tuple[tuple[CurveClass, TMonomial, tuple[int, ...]], ...] = field(default=())

    def classes(self) -> tuple[CurveClass, ...]:
        seen: dict[tuple[Fraction, ...], CurveClass] = {}
        for term in self.terms:
            seen.setdefault(term.beta.components, term.beta)
        return tuple(seen.values())

    def find(
        self, components: Sequence[RationalLike], t_monomial: TMonomial | None = None
    ) -> SeriesTerm | None:
        key = tuple(Fraction(value) for value in components)
        wanted = t_monomial if t_monomial is not None else (0,) * len(self.variables)
        for term in self.terms:
            if term.beta.components == key and term.t_monomial == wanted:
                return term
        return None

    def term(
        self, components: Sequence[RationalLike], t_monomial: TMonomial | None = None
    ) -> SeriesTerm:
        found = self.find(components, t_monomial)
        if found is None:
            raise PreconditionError(f"series has no term for beta={tuple(components)}")
        return found


@dataclass(frozen=True)
class MirrorData:
    """J0(q) and I1(q) read off a semi-positive small I-function."""

    presentation: GitPresentation
    d_max: Fraction
    j0: tuple[tuple[CurveClass, Fraction], ...]
    i1: tuple[tuple[CurveClass, RingElement], ...]
    series: ISeries

    def j0_coefficient(self, components: Sequence[RationalLike]) -> Fraction:
        key = tuple(Fraction(value) for value in components)
        for beta, value in self.j0:
            if beta.components == key:
                return value
        return Fraction(0)

    def i1_coefficient(self, components: Sequence[RationalLike]) -> RingElement | None:
        key = tuple(Fraction(value) for value in components)
        for beta, value in self.i1:
            if beta.components == key:
                return value
        return None


# ---------------------------------------------------------------------------
# Per-class factors
# ---------------------------------------------------------------------------


def numerator_nu_range(b: Fraction) -> range:
    """Integers nu with b <= nu < 0."""
    return range(math.ceil(b), 0)


def denominator_nu_range(b: Fraction) -> range:
    """Integers nu with 0 <= nu < b."""
    return range(0, math.ceil(b))


def virtual_normal_nu_range(b: Fraction) -> range:
    """Integers nu with b < nu < 0: the moving part of the obstruction directions."""
    return range(math.floor(b) + 1, 0)


def theorem_coefficient(beta: CurveClass, sector_ring: SectorRing) -> ZLaurent:
    """The closed-form coefficient of q^beta, denominators inverted one factor at a time."""
    result = ZLaurent.one(sector_ring)
    for rho, b in enumerate(beta.b):
        if b < 0:
            divisor = divisor_class(sector_ring, rho)
            for nu in numerator_nu_range(b):
                result = result * ZLaurent.linear(divisor, b - nu)
    for rho, b in enumerate(beta.b):
        if b > 0:
            divisor = divisor_class(sector_ring, rho)
            for nu in denominator_nu_range(b):
                result = result * invert_linear_in_z(divisor, b - nu)
    return result


def virtual_normal_coefficient(beta: CurveClass, sector_ring: SectorRing) -> ZLaurent:
    """1/e(N^vir) times the Euler class of the fixed obstruction part (bare D_rho, b_rho in Z_<0)."""
    moving = ZLaurent.one(sector_ring)
    for rho, b in enumerate(beta.b):
        divisor = divisor_class(sector_ring, rho)
        if b < 0:
            for nu in virtual_normal_nu_range(b):
                moving = moving * ZLaurent.linear(divisor, b - nu)
        elif b > 0:
            for nu in denominator_nu_range(b):
                moving = moving * invert_linear_in_z(divisor, b - nu)
    fixed = sector_ring.one()
    for rho, b in enumerate(beta.b):
        if b < 0 and b.denominator == 1:
            fixed = fixed * divisor_class(sector_ring, rho)
    return moving.times_element(fixed)


def _moving_denominator(beta: CurveClass, sector_ring: SectorRing) -> ZLaurent:
    product = ZLaurent.one(sector_ring)
    for rho, b in enumerate(beta.b):
        if b > 0:
            divisor = divisor_class(sector_ring, rho)
            for nu in denominator_nu_range(b):
                product = product * ZLaurent.linear(divisor, b - nu)
    return product


def euler_twist_factor(beta: CurveClass, sector_ring: SectorRing, twist: TwistData) -> ZLaurent:
    """prod_k prod_{nu=0}^{b_k} (D_{eta_k} + (b_k - nu) z) with b_k = beta(L_{eta_k})."""
    factor = ZLaurent.one(sector_ring)
    for eta in twist.characters:
        b = pairing(beta, eta)
        _require_convex(beta, eta, b)
        divisor = sector_ring.character_class(eta)
        for nu in range(0, int(b) + 1):
            factor = factor * ZLaurent.linear(divisor, b - nu)
    return factor


def _validate_twist(
    presentation: GitPresentation, twist: TwistData | None, classes: Sequence[CurveClass]
) -> None:
    if twist is None:
        return
    for eta in twist.characters:
        if len(eta) != presentation.rank:
            raise PreconditionError(f"twist character {eta} needs {presentation.rank} entries")
    for beta in classes:
        for eta in twist.characters:
            _require_convex(beta, eta, pairing(beta, eta))


def _require_convex(beta: CurveClass, eta: tuple[int, ...], b: Fraction) -> None:
    if b.denominator != 1 or b < 0:
        raise ConvexityError(
            f"twist character {eta} pairs to {b} with beta={beta.label()}; "
            "expected a nonnegative integer",
            beta=beta.components,
            eta=eta,
        )


def _factor_counts(beta: CurveClass) -> tuple[int, int]:
    numerator = sum(len(numerator_nu_range(b)) for b in beta.b if b < 0)
    denominator = sum(len(denominator_nu_range(b)) for b in beta.b if b > 0)
    return numerator, denominator


def auto_z_window(
    classes: Sequence[CurveClass],
    rings: dict[tuple[Fraction, ...], SectorRing],
    twist: TwistData | None = None,
) -> tuple[int, int]:
    """A window that holds every power the closed form can produce for ``classes``."""
    low, high = 0, 0
    for beta in classes:
        numerator, denominator = _factor_counts(beta)
        top = numerator - denominator
        if twist is not None:
            top += sum(int(pairing(beta, eta)) + 1 for eta in twist.characters)
        low = min(low, -denominator - rings[beta.components].max_degree)
        high = max(high, top)
    return low, high


# ---------------------------------------------------------------------------
# Engines
# ---------------------------------------------------------------------------


def _prepare(
    presentation: GitPresentation,
    d_max: RationalLike,
    max_degree: int | None,
    executor: TermExecutor | None,
) -> tuple[list[CurveClass], dict[tuple[Fraction, ...], SectorRing], dict, TermExecutor]:
    d_max = Fraction(d_max)
    if d_max < 0:
        raise PreconditionError(f"d_max must be nonnegative, got {d_max}")
    runner = executor or SerialExecutor()
    classes = enumerate_effective(presentation, d_max, executor=runner)
    sectors = {beta.components: sector_of_class(presentation, beta) for beta in classes}
    rings = {
        key: build_sector_ring(presentation, sector, max_degree) for key, sector in sectors.items()
    }
    return classes, rings, sectors, runner


def _clip(
    beta: CurveClass,
    t_monomial: TMonomial,
    laurent: ZLaurent,
    window: tuple[int, int] | None,
) -> tuple[ZLaurent, tuple[int, ...]]:
    if window is None:
        return laurent, ()
    clipped, dropped = laurent.clip(*window)
    if dropped:
        logger.warning(
            "z-window [%d, %d] drops powers %s of beta=%s",
            window[0],
            window[1],
            list(dropped),
            beta.label(),
        )
    return clipped, dropped


def _validate_window(z_window: tuple[int, int] | None) -> None:
    if z_window is not None and z_window[0] > z_window[1]:
        raise PreconditionError(f"z-window {z_window} is empty")


def _assert_unit_at_zero(series_terms: Sequence[SeriesTerm]) -> None:
    for term in series_terms:
        if term.beta.is_zero and not any(term.t_monomial):
            expected = ZLaurent.one(term.laurent.ring)
            if term.laurent != expected:
                raise ConsistencyError("the beta = 0 term is not exactly 1_X")


def _small_series(
    presentation: GitPresentation,
    d_max: RationalLike,
    z_window: tuple[int, int] | None,
    twist: TwistData | None,
    max_degree: int | None,
    executor: TermExecutor | None,
) -> ISeries:
    _validate_window(z_window)
    classes, rings, sectors, runner = _prepare(presentation, d_max, max_degree, executor)
    _validate_twist(presentation, twist, classes)

    window = z_window if z_window is not None else auto_z_window(classes, rings, twist)

    def compute(beta: CurveClass) -> tuple[SeriesTerm, tuple[int, ...]]:
        started = time.perf_counter()
        sector_ring = rings[beta.components]
        laurent = theorem_coefficient(beta, sector_ring)
        if twist is not None:
            laurent = euler_twist_factor(beta, sector_ring, twist) * laurent
        laurent, dropped = _clip(beta, (), laurent, window)
        logger.debug(
            "beta=%s computed in %.3fs", beta.label(), time.perf_counter() - started
        )
        return SeriesTerm(beta=beta, sector=sectors[beta.components], laurent=laurent), dropped

    results = runner.map(compute, classes)
    terms = tuple(term for term, _ in results)
    if twist is None:
        _assert_unit_at_zero(terms)
    flavor = "small" if twist is None else "twisted"
    logger.info(
        "Assembled %s I-function of %s: %d terms up to degree %s",
        flavor,
        presentation.name,
        len(terms),
        Fraction(d_max),
    )
    return ISeries(
        presentation=presentation,
        flavor=flavor,
        d_max=Fraction(d_max),
        z_window=window,
        terms=terms,
        twist=twist,
        dropped=tuple((term.beta, (), lost) for term, lost in results if lost),
    )


def small_i(
    presentation: GitPresentation,
    d_max: RationalLike,
    z_window: tuple[int, int] | None = None,
    *,
    max_degree: int | None = None,
    executor: TermExecutor | None = None,
) -> ISeries:
    """Small I-function up to degree ``d_max``; ``z_window=None`` selects the exact window."""
    return _small_series(presentation, d_max, z_window, None, max_degree, executor)


def twisted_small_i(
    presentation: GitPresentation,
    twist: TwistData,
    d_max: RationalLike,
    z_window: tuple[int, int] | None = None,
    *,
    max_degree: int | None = None,
    executor: TermExecutor | None = None,
) -> ISeries:
    """Euler-twisted small I-function; every class must pair integrally and nonnegatively."""
    if not twist.characters:
        return small_i(
            presentation, d_max, z_window, max_degree=max_degree, executor=executor
        )
    return _small_series(presentation, d_max, z_window, twist, max_degree, executor)


# ---------------------------------------------------------------------------
# Insertions and the big I-function
# ---------------------------------------------------------------------------


def character_symbols(
    presentation: GitPresentation, names: Sequence[str] | None = None
) -> dict[str, tuple[int, ...]]:
    """Symbols usable in insertion polynomials and the characters they stand for."""
    r = presentation.rank
    divisor_names = tuple(names) if names else generator_names(r)
    if len(divisor_names) != r:
        raise InputError(f"expected {r} divisor names, got {len(divisor_names)}")
    symbols: dict[str, tuple[int, ...]] = {}
    for rho in range(presentation.n_rays):
        charge = presentation.ray_charge(rho)
        symbols[f"D{rho + 1}"] = charge
        symbols[presentation.ray_names[rho]] = charge
    for i, name in enumerate(divisor_names):
        symbols[name] = tuple(1 if j == i else 0 for j in range(r))
    return symbols


def parse_insertion(
    presentation: GitPresentation,
    variable: str,
    text: str,
    names: Sequence[str] | None = None,
) -> InsertionPolynomial:
    """Parse ``text`` as a rational polynomial in the named divisor classes."""
    symbols = character_symbols(presentation, names)
    local = {name: Symbol(name) for name in symbols}
    try:
        expr = parse_expr(
            text,
            local_dict=local,
            transformations=standard_transformations + (convert_xor,),
            evaluate=True,
        )
    except (SyntaxError, TokenError, TypeError, ValueError) as exc:
        raise InputError(f"cannot parse insertion polynomial {text!r}: {exc}") from exc

    unknown = sorted(str(symbol) for symbol in expr.free_symbols - set(local.values()))
    if unknown:
        raise PreconditionError(
            f"insertion {variable}:{text} references unknown characters {unknown}"
        )
    gens = sorted(expr.free_symbols, key=str)
    try:
        poly = Poly(expr, *gens, domain="QQ") if gens else None
    except PolynomialError as exc:
        raise PreconditionError(f"insertion {text!r} is not a polynomial: {exc}") from exc

    if poly is None:
        constant = Fraction(str(expr))
        return InsertionPolynomial(
            variable=variable,
            text=text,
            characters=(),
            monomials=(((), constant),) if constant else (),
        )
    return InsertionPolynomial(
        variable=variable,
        text=text,
        characters=tuple(symbols[str(gen)] for gen in gens),
        monomials=tuple(
            (tuple(monom), from_qq(coeff)) for monom, coeff in poly.terms() if coeff
        ),
    )


def build_insertion(
    presentation: GitPresentation,
    specs: Sequence[tuple[str, str]],
    t_order: int,
    names: Sequence[str] | None = None,
) -> TInsertion:
    """TInsertion from ``(variable, polynomial text)`` pairs."""
    return TInsertion(
        polynomials=tuple(
            parse_insertion(presentation, variable, text, names) for variable, text in specs
        ),
        t_order=t_order,
    )


def insertion_value(
    poly: InsertionPolynomial,
    beta: CurveClass,
    sector_ring: SectorRing,
    shift_by_class: bool = True,
) -> ZLaurent:
    """p(c_1(L_eta) + beta(L_eta) z) in the sector ring of beta."""
    arguments = [
        ZLaurent.linear(
            sector_ring.character_class(eta),
            pairing(beta, eta) if shift_by_class else 0,
        )
        for eta in poly.characters
    ]
    total = ZLaurent.zero(sector_ring)
    for exponents, coeff in poly.monomials:
        term = ZLaurent.constant(sector_ring.scalar(coeff))
        for argument, exponent in zip(arguments, exponents):
            for _ in range(exponent):
                term = term * argument
        total = total + term
    return total


def _exp_dressing(values: Sequence[ZLaurent], t_order: int, sector_ring: SectorRing) -> dict:
    """exp((1/z) sum_i t_i values_i) up to total t-degree ``t_order``."""
    nvars = len(values)
    origin = (0,) * nvars
    result: dict[TMonomial, ZLaurent] = {origin: ZLaurent.one(sector_ring)}
    level: dict[TMonomial, ZLaurent] = {origin: ZLaurent.one(sector_ring)}
    for k in range(1, t_order + 1):
        following: dict[TMonomial, ZLaurent] = {}
        for monomial, coefficient in level.items():
            for i, value in enumerate(values):
                bumped = tuple(e + 1 if j == i else e for j, e in enumerate(monomial))
                piece = (coefficient * value).shift(-1).scale(Fraction(1, k))
                following[bumped] = following[bumped] + piece if bumped in following else piece
        level = {m: c for m, c in following.items() if not c.is_zero()}
        for monomial, coefficient in level.items():
            result[monomial] = result[monomial] + coefficient if monomial in result else coefficient
    return result


def _t_sort_key(monomial: TMonomial) -> tuple:
    return (sum(monomial), tuple(-e for e in monomial))


def _big_series(
    presentation: GitPresentation,
    d_max: RationalLike,
    insertion: TInsertion,
    z_window: tuple[int, int] | None,
    twist: TwistData | None,
    flavor: str,
    shift_by_class: bool,
    max_degree: int | None,
    executor: TermExecutor | None,
) -> ISeries:
    _validate_window(z_window)
    classes, rings, sectors, runner = _prepare(presentation, d_max, max_degree, executor)
    _validate_twist(presentation, twist, classes)

    def compute(beta: CurveClass) -> list[tuple[SeriesTerm, tuple[int, ...]]]:
        sector_ring = rings[beta.components]
        base = theorem_coefficient(beta, sector_ring)
        if twist is not None and twist.characters:
            base = euler_twist_factor(beta, sector_ring, twist) * base
        values = [
            insertion_value(poly, beta, sector_ring, shift_by_class)
            for poly in insertion.polynomials
        ]
        dressing = _exp_dressing(values, insertion.t_order, sector_ring)
        out = []
        for monomial in sorted(dressing, key=_t_sort_key):
            laurent = dressing[monomial] * base
            if any(monomial) and laurent.is_zero():
                continue
            laurent, dropped = _clip(beta, monomial, laurent, z_window)
            out.append(
                (
                    SeriesTerm(
                        beta=beta,
                        sector=sectors[beta.components],
                        laurent=laurent,
                        t_monomial=monomial,
                    ),
                    dropped,
                )
            )
        return out

    batches = runner.map(compute, classes)
    results = [item for batch in batches for item in batch]
    terms = tuple(term for term, _ in results)
    if twist is None or not twist.characters:
        _assert_unit_at_zero(terms)
    logger.info(
        "Assembled %s I-function of %s: %d (beta, t) terms, t-order %d",
        flavor,
        presentation.name,
        len(terms),
        insertion.t_order,
    )
    return ISeries(
        presentation=presentation,
        flavor=flavor,
        d_max=Fraction(d_max),
        z_window=z_window,
        terms=terms,
        variables=insertion.variables,
        t_order=insertion.t_order,
        twist=twist,
        q_rescaling=()
        if shift_by_class
        else tuple((beta, beta.components) for beta in classes),
        dropped=tuple((term.beta, term.t_monomial, lost) for term, lost in results if lost),
    )


def big_i(
    presentation: GitPresentation,
    d_max: RationalLike,
    insertion: TInsertion,
    z_window: tuple[int, int] | None = None,
    *,
    twist: TwistData | None = None,
    max_degree: int | None = None,
    executor: TermExecutor | None = None,
) -> ISeries:
    """Big I-function sum_beta q^beta exp((1/z) sum_i t_i p_i(c_1 + beta z)) I_beta.

    With ``twist`` the Euler-twisted I_beta^E is dressed instead. ``z_window=None``
    keeps every power.
    """
    return _big_series(
        presentation,
        d_max,
        insertion,
        z_window,
        twist,
        "big",
        True,
        max_degree,
        executor,
    )


def givental_insertion(presentation: GitPresentation, t_order: int) -> TInsertion:
    """t = t0 * 1 + sum_i t_i xi_i."""
    r = presentation.rank
    polynomials = [
        InsertionPolynomial(variable="t0", text="1", characters=(), monomials=(((), Fraction(1)),))
    ]
    for i in range(r):
        eta = tuple(1 if j == i else 0 for j in range(r))
        polynomials.append(
            InsertionPolynomial(
                variable=f"t{i + 1}",
                text=f"H{i + 1}",
                characters=(eta,),
                monomials=(((1,), Fraction(1)),),
            )
        )
    return TInsertion(polynomials=tuple(polynomials), t_order=t_order)


def givental_small_i(
    presentation: GitPresentation,
    d_max: RationalLike,
    t_order: int,
    *,
    absorb_q_rescaling: bool = False,
    z_window: tuple[int, int] | None = None,
    max_degree: int | None = None,
    executor: TermExecutor | None = None,
) -> ISeries:
    """Givental's small I-function in formal t0, t1..tr.

    With ``absorb_q_rescaling`` the scalar factor exp(sum_i t_i beta_i) is left
    unexpanded and reported per class in ``q_rescaling``.
    """
    return _big_series(
        presentation,
        d_max,
        givental_insertion(presentation, t_order),
        z_window,
        None,
        "givental",
        not absorb_q_rescaling,
        max_degree,
        executor,
    )


# ---------------------------------------------------------------------------
# Mirror map and audits
# ---------------------------------------------------------------------------


def mirror_map(
    presentation: GitPresentation,
    d_max: RationalLike,
    *,
    max_degree: int | None = None,
    executor: TermExecutor | None = None,
) -> MirrorData:
    """J0 (z^0 part) and I1 (z^-1 part) of a semi-positive small I-function."""
    report = semipositivity_report(presentation, d_max)
    if not report.passed:
        raise SemipositivityError(
            f"model {presentation.name} is not semi-positive: "
            f"beta={report.violation.label()} has beta(det T) < 0"
        )
    series = small_i(presentation, d_max, max_degree=max_degree, executor=executor)
    untwisted = untwisted_sector(presentation)

    j0: list[tuple[CurveClass, Fraction]] = []
    i1: list[tuple[CurveClass, RingElement]] = []
    for term in series.terms:
        constant = term.laurent.coefficient(0)
        if constant.degrees() not in ((), (0,)) or (
            not constant.is_zero() and term.sector != untwisted
        ):
            raise ConsistencyError(
                f"z^0 part of beta={term.beta.label()} is not a multiple of 1_X"
            )
        j0.append((term.beta, constant.constant_term()))
        if term.beta.is_zero:
            continue
        if constant.constant_term() != 0:
            raise ConsistencyError(
                f"semi-positive J0 has a q-correction at beta={term.beta.label()}"
            )
        linear = term.laurent.coefficient(-1)
        if linear.is_zero():
            continue
        if term.sector != untwisted or any(degree > 1 for degree in linear.degrees()):
            raise ConsistencyError(
                f"z^-1 part of beta={term.beta.label()} escapes untwisted H^<=2"
            )
        i1.append((term.beta, linear))
    logger.info(
        "Mirror map of %s: %d nonzero I1 coefficients up to degree %s",
        presentation.name,
        len(i1),
        series.d_max,
    )
    return MirrorData(
        presentation=presentation,
        d_max=series.d_max,
        j0=tuple(j0),
        i1=tuple(i1),
        series=series,
    )


def grading_check(series: ISeries) -> CheckDecision:
    """sum_rho b_rho + (z-power) + (complex degree + age) = 0 on every component."""
    if series.flavor != "small":
        raise PreconditionError(f"grading applies to the small series, got {series.flavor}")
    violations = []
    for term in series.terms:
        weight = term.beta.anticanonical_degree + term.sector.age
        for power, coefficient in term.laurent.terms:
            for degree in coefficient.degrees():
                total = weight + power + degree
                if total != 0:
                    violations.append(
                        f"beta={term.beta.label()} z^{power} degree {degree}: total {total}"
                    )
    if violations:
        return CheckDecision("grading", False, f"{len(violations)} graded components off", tuple(violations))
    return CheckDecision("grading", True, f"{len(series.terms)} terms homogeneous of degree 0")


def residue_two_path_check(
    presentation: GitPresentation,
    beta: CurveClass,
    *,
    max_degree: int | None = None,
) -> CheckDecision:
    """Closed form versus 1/e(N^vir) times the fixed obstruction Euler class."""
    sector = sector_of_class(presentation, beta)
    sector_ring = build_sector_ring(presentation, sector, max_degree)
    closed = theorem_coefficient(beta, sector_ring)
    localized = virtual_normal_coefficient(beta, sector_ring)
    violations = []
    if closed != localized:
        violations.append(f"beta={beta.label()}: closed form differs from localization")
    else:
        # clearing denominators must reproduce the numerator product exactly
        numerator = ZLaurent.one(sector_ring)
        for rho, b in enumerate(beta.b):
            if b < 0:
                divisor = divisor_class(sector_ring, rho)
                for nu in virtual_normal_nu_range(b):
                    numerator = numerator * ZLaurent.linear(divisor, b - nu)
                if b.denominator == 1:
                    numerator = numerator.times_element(divisor)
        if closed * _moving_denominator(beta, sector_ring) != numerator:
            violations.append(f"beta={beta.label()}: cleared denominators do not match")
    if violations:
        return CheckDecision("two-path residue", False, violations[0], tuple(violations))
    return CheckDecision("two-path residue", True, f"beta={beta.label()} agrees on both paths")
