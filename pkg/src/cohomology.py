"""
cohomology.py
-------------

Degree-truncated rational cohomology of a sector, presented as
Q[xi_1, ..., xi_r] modulo the Stanley-Reisner ideal of the sector's support,
plus Laurent polynomials in z with coefficients in such a ring.

Each graded piece is materialized by exact row reduction: the degree-k span of
{m * g : g an ideal generator, m a monomial} is put in reduced row echelon form
over the monomials sorted from largest to smallest, the pivot monomials are
eliminated and the remaining monomials form the normal-form basis.
"""
from __future__ import annotations

import logging
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement

from sympy.polys.domains import QQ
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyElement, PolyRing, ring

from .errors import PreconditionError
from .exactmath import RationalLike, from_qq, rref_rows, to_qq
from .git_model import coarse_space_is_proper, sr_generators
from .models import GitPresentation, SectorLabel

logger = logging.getLogger(__name__)

Monomial = tuple[int, ...]


def monomials_of_degree(nvars: int, degree: int) -> list[Monomial]:
    """Exponent vectors of total ``degree`` in ``nvars`` variables, largest first."""
    found = []
    for chosen in combinations_with_replacement(range(nvars), degree):
        exponents = [0] * nvars
        for index in chosen:
            exponents[index] += 1
        found.append(tuple(exponents))
    return sorted(found, reverse=True)


def generator_names(rank: int) -> tuple[str, ...]:
    return tuple(f"H{i + 1}" for i in range(rank))


@dataclass(eq=False)
class SectorRing:
    """Q[xi] / SR(support) truncated at ``max_degree``."""

    presentation: GitPresentation
    sector: SectorLabel
    max_degree: int
    poly_ring: PolyRing
    ideal_generators: tuple[PolyElement, ...]
    bases: tuple[tuple[Monomial, ...], ...]
    normal_forms: tuple[dict[Monomial, tuple[Fraction, ...]], ...]
    is_proper: bool
    _warned: bool = field(default=False, repr=False)

    @property
    def rank(self) -> int:
        return self.presentation.rank

    def basis(self, degree: int) -> tuple[Monomial, ...]:
        if 0 <= degree <= self.max_degree:
            return self.bases[degree]
        return ()

    def linear_form(self, eta: Sequence[RationalLike]) -> PolyElement:
        """sum_i eta_i xi_i as a polynomial (before reduction)."""
        gens = self.poly_ring.gens
        return sum((to_qq(value) * gen for value, gen in zip(eta, gens)), self.poly_ring.zero)

    def reduce(self, poly: PolyElement) -> RingElement:
        """Normal form of a polynomial; content above ``max_degree`` is dropped."""
        accum: dict[int, list[Fraction]] = {}
        for monom, coeff in poly.terms():
            degree = sum(monom)
            if degree > self.max_degree:
                if coeff and self.max_degree < self.sector.dim and not self._warned:
                    logger.warning(
                        "Truncation at degree %d drops content below the top degree %d of sector %s",
                        self.max_degree,
                        self.sector.dim,
                        self.sector.label(),
                    )
                    self._warned = True
                continue
            vector = accum.setdefault(degree, [Fraction(0)] * len(self.bases[degree]))
            value = from_qq(coeff)
            for index, entry in enumerate(self.normal_forms[degree][monom]):
                if entry:
                    vector[index] += value * entry
        return RingElement.from_parts(self, accum.items())

    def one(self) -> RingElement:
        return self.reduce(self.poly_ring.one)

    def zero(self) -> RingElement:
        return RingElement(self, ())

    def scalar(self, value: RationalLike) -> RingElement:
        return self.reduce(self.poly_ring.one * to_qq(value))

    def character_class(self, eta: Sequence[RationalLike]) -> RingElement:
        """c_1(L_eta) for a character eta of G."""
        return self.reduce(self.linear_form(eta))


@dataclass(frozen=True, eq=False)
class RingElement:
    """An element of a SectorRing in normal form, graded by degree."""

    ring: SectorRing
    parts: tuple[tuple[int, tuple[Fraction, ...]], ...]

    @classmethod
    def from_parts(cls, ring: SectorRing, parts) -> RingElement:
        kept = tuple(
            (degree, tuple(vector))
            for degree, vector in sorted(parts, key=lambda item: item[0])
            if any(vector)
        )
        return cls(ring, kept)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RingElement):
            return NotImplemented
        return self.ring is other.ring and self.parts == other.parts

    def __hash__(self) -> int:
        return hash((id(self.ring), self.parts))

    def _check(self, other: RingElement) -> None:
        if other.ring is not self.ring:
            raise PreconditionError("ring elements belong to different sector rings")

    @property
    def by_degree(self) -> dict[int, tuple[Fraction, ...]]:
        return dict(self.parts)

    def is_zero(self) -> bool:
        return not self.parts

    def degrees(self) -> tuple[int, ...]:
        return tuple(degree for degree, _ in self.parts)

    def homogeneous(self, degree: int) -> RingElement:
        return RingElement.from_parts(
            self.ring, [(d, v) for d, v in self.parts if d == degree]
        )

    def constant_term(self) -> Fraction:
        """Coefficient of the degree-0 basis element (the sector's fundamental class)."""
        vector = self.by_degree.get(0)
        return vector[0] if vector else Fraction(0)

    def terms(self) -> Iterator[tuple[Monomial, Fraction]]:
        for degree, vector in self.parts:
            for monom, coeff in zip(self.ring.bases[degree], vector):
                if coeff:
                    yield monom, coeff

    def to_poly(self) -> PolyElement:
        return self.ring.poly_ring.from_dict({monom: to_qq(coeff) for monom, coeff in self.terms()})

    def _combine(self, other: RingElement, sign: int) -> RingElement:
        self._check(other)
        merged: dict[int, list[Fraction]] = {d: list(v) for d, v in self.parts}
        for degree, vector in other.parts:
            current = merged.setdefault(degree, [Fraction(0)] * len(vector))
            for index, value in enumerate(vector):
                current[index] += sign * value
        return RingElement.from_parts(self.ring, merged.items())

    def __add__(self, other: RingElement) -> RingElement:
        return self._combine(other, 1)

    def __sub__(self, other: RingElement) -> RingElement:
        return self._combine(other, -1)

    def __neg__(self) -> RingElement:
        return self.scale(-1)

    def scale(self, factor: RationalLike) -> RingElement:
        factor = Fraction(factor)
        return RingElement.from_parts(
            self.ring, [(d, [factor * value for value in v]) for d, v in self.parts]
        )

    def __mul__(self, other: RingElement) -> RingElement:
        return mul(self, other)

    def power(self, exponent: int) -> RingElement:
        result = self.ring.one()
        for _ in range(exponent):
            result = result * self
        return result


def mul(x: RingElement, y: RingElement) -> RingElement:
    """Product in the truncated quotient ring."""
    x._check(y)
    if x.is_zero() or y.is_zero():
        return x.ring.zero()
    return x.ring.reduce(x.to_poly() * y.to_poly())


def _build_degree(
    poly_ring: PolyRing,
    generators: Sequence[PolyElement],
    nvars: int,
    degree: int,
) -> tuple[tuple[Monomial, ...], dict[Monomial, tuple[Fraction, ...]]]:
    monomials = monomials_of_degree(nvars, degree)
    column = {monom: index for index, monom in enumerate(monomials)}

    rows: list[list[Fraction]] = []
    for generator in generators:
        # SR products of linear forms are homogeneous
        gen_degree = sum(generator.terms()[0][0])
        if gen_degree > degree:
            continue
        for multiplier in monomials_of_degree(nvars, degree - gen_degree):
            product_poly = poly_ring.from_dict({multiplier: QQ.one}) * generator
            row = [Fraction(0)] * len(monomials)
            for monom, coeff in product_poly.terms():
                row[column[monom]] = from_qq(coeff)
            rows.append(row)

    reduced, pivots = rref_rows(rows, len(monomials))
    pivot_set = set(pivots)
    basis = tuple(monom for index, monom in enumerate(monomials) if index not in pivot_set)
    position = {monom: index for index, monom in enumerate(basis)}

    normal_forms: dict[Monomial, tuple[Fraction, ...]] = {}
    for monom in basis:
        vector = [Fraction(0)] * len(basis)
        vector[position[monom]] = Fraction(1)
        normal_forms[monom] = tuple(vector)
    for row, pivot in zip(reduced, pivots):
        vector = [Fraction(0)] * len(basis)
        for monom in basis:
            vector[position[monom]] = -row[column[monom]]
        normal_forms[monomials[pivot]] = tuple(vector)
    logger.debug("Degree %d: %d monomials, basis %s", degree, len(monomials), basis)
    return basis, normal_forms


def default_max_degree(presentation: GitPresentation, sector: SectorLabel) -> int:
    return len(sector.support) - presentation.rank + 1


@lru_cache(maxsize=None)
def build_sector_ring(
    presentation: GitPresentation,
    sector: SectorLabel,
    max_degree: int | None = None,
) -> SectorRing:
    """Materialize Q[xi]/SR(S_g) degree by degree up to ``max_degree``."""
    if max_degree is None:
        max_degree = default_max_degree(presentation, sector)
    if max_degree < 0:
        raise PreconditionError(f"max_degree must be nonnegative, got {max_degree}")

    r = presentation.rank
    poly_ring, *_ = ring(",".join(generator_names(r)), QQ, lex)
    gens = poly_ring.gens

    def divisor(rho: int) -> PolyElement:
        return sum(
            (to_qq(value) * gen for value, gen in zip(presentation.ray_charge(rho), gens)),
            poly_ring.zero,
        )

    ideal: list[PolyElement] = []
    for subset in sr_generators(presentation, sector.support):
        generator = poly_ring.one
        for rho in subset:
            generator = generator * divisor(rho)
        if generator:
            ideal.append(generator)

    bases = []
    normal_forms = []
    for degree in range(max_degree + 1):
        basis, forms = _build_degree(poly_ring, ideal, r, degree)
        bases.append(basis)
        normal_forms.append(forms)

    sector_ring = SectorRing(
        presentation=presentation,
        sector=sector,
        max_degree=max_degree,
        poly_ring=poly_ring,
        ideal_generators=tuple(ideal),
        bases=tuple(bases),
        normal_forms=tuple(normal_forms),
        is_proper=coarse_space_is_proper(presentation, sector.support),
    )
    if not sector_ring.is_proper:
        logger.warning(
            "Sector %s of %s has a non-proper coarse space; series are formal",
            sector.label(),
            presentation.name,
        )
    return sector_ring


def divisor_class(sector_ring: SectorRing, rho: int) -> RingElement:
    """D_rho = sum_i a_{i,rho} xi_i in the sector ring."""
    return sector_ring.character_class(sector_ring.presentation.ray_charge(rho))


def betti_dims(sector_ring: SectorRing) -> list[int]:
    """Dimension of each graded piece, degrees 0..max_degree."""
    return [len(basis) for basis in sector_ring.bases]


@dataclass(frozen=True, eq=False)
class ZLaurent:
    """Finite Laurent polynomial in z with coefficients in one sector ring."""

    ring: SectorRing
    terms: tuple[tuple[int, RingElement], ...]

    @classmethod
    def from_dict(cls, sector_ring: SectorRing, coefficients: dict[int, RingElement]) -> ZLaurent:
        kept = tuple(
            (power, value)
            for power, value in sorted(coefficients.items(), key=lambda item: -item[0])
            if not value.is_zero()
        )
        return cls(sector_ring, kept)

    @classmethod
    def constant(cls, value: RingElement, power: int = 0) -> ZLaurent:
        return cls.from_dict(value.ring, {power: value})

    @classmethod
    def zero(cls, sector_ring: SectorRing) -> ZLaurent:
        return cls(sector_ring, ())

    @classmethod
    def one(cls, sector_ring: SectorRing) -> ZLaurent:
        return cls.constant(sector_ring.one())

    @classmethod
    def linear(cls, value: RingElement, z_coefficient: RationalLike) -> ZLaurent:
        """value + c z."""
        return cls.from_dict(
            value.ring, {0: value, 1: value.ring.scalar(z_coefficient)}
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ZLaurent):
            return NotImplemented
        return self.ring is other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((id(self.ring), self.terms))

    @property
    def coefficients(self) -> dict[int, RingElement]:
        return dict(self.terms)

    def coefficient(self, power: int) -> RingElement:
        return self.coefficients.get(power, self.ring.zero())

    def powers(self) -> tuple[int, ...]:
        return tuple(power for power, _ in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: ZLaurent) -> ZLaurent:
        merged = dict(self.terms)
        for power, value in other.terms:
            merged[power] = merged[power] + value if power in merged else value
        return ZLaurent.from_dict(self.ring, merged)

    def __sub__(self, other: ZLaurent) -> ZLaurent:
        return self + other.scale(-1)

    def scale(self, factor: RationalLike) -> ZLaurent:
        return ZLaurent.from_dict(self.ring, {p: v.scale(factor) for p, v in self.terms})

    def shift(self, k: int) -> ZLaurent:
        """Multiply by z^k."""
        return ZLaurent.from_dict(self.ring, {p + k: v for p, v in self.terms})

    def __mul__(self, other: ZLaurent) -> ZLaurent:
        product: dict[int, RingElement] = {}
        for p, x in self.terms:
            for q, y in other.terms:
                term = x * y
                if term.is_zero():
                    continue
                product[p + q] = product[p + q] + term if p + q in product else term
        return ZLaurent.from_dict(self.ring, product)

    def times_element(self, value: RingElement) -> ZLaurent:
        return ZLaurent.from_dict(self.ring, {p: v * value for p, v in self.terms})

    def clip(self, z_min: int, z_max: int) -> tuple[ZLaurent, tuple[int, ...]]:
        """Restrict to the window [z_min, z_max]; also return the dropped powers."""
        kept = {p: v for p, v in self.terms if z_min <= p <= z_max}
        dropped = tuple(p for p, _ in self.terms if not z_min <= p <= z_max)
        return ZLaurent.from_dict(self.ring, kept), dropped


def invert_linear_in_z(value: RingElement, z_coefficient: RationalLike) -> ZLaurent:
    """(D + c z)^{-1} = sum_k (-1)^k D^k / (c^{k+1} z^{k+1}) for nilpotent D."""
    c = Fraction(z_coefficient)
    if c == 0:
        raise PreconditionError("(D + 0 z) is not invertible for a nilpotent D")
    if value.constant_term() != 0 or 0 in value.degrees():
        raise PreconditionError("only nilpotent (positive-degree) D can be inverted")

    coefficients: dict[int, RingElement] = {}
    power = value.ring.one()
    k = 0
    while not power.is_zero():
        coefficients[-(k + 1)] = power.scale(Fraction((-1) ** k) / c ** (k + 1))
        power = power * value
        k += 1
    return ZLaurent.from_dict(value.ring, coefficients)
