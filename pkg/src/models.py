"""
models.py
---------

Shared data structures used across the qtoric engine.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .exactmath import IntMatrix, format_rational


@dataclass(frozen=True)
class GitPresentation:
    """Torus GIT data (W = C^N, G = (C*)^r acting through ``charges``, theta)."""

    name: str
    n_rays: int
    rank: int
    charges: IntMatrix
    theta: tuple[int, ...]
    ray_names: tuple[str, ...]

    def ray_charge(self, rho: int) -> tuple[int, ...]:
        """Character of L_rho as an integer r-vector (column rho of the charge matrix)."""
        return self.charges.column(rho)

    def ray_charges(self, rays: tuple[int, ...] | list[int] | range) -> list[tuple[int, ...]]:
        return [self.ray_charge(rho) for rho in rays]

    @property
    def dimension(self) -> int:
        """Complex dimension N - r of the quotient."""
        return self.n_rays - self.rank

    @property
    def all_rays(self) -> tuple[int, ...]:
        return tuple(range(self.n_rays))


@dataclass(frozen=True)
class FixedPointSubset:
    """An r-subset sigma with theta in the interior of Cone(A_sigma)."""

    sigma: tuple[int, ...]
    coeffs: tuple[Fraction, ...]
    stab_order: int
    stab_exponent: int


@dataclass(frozen=True)
class StabilityReport:
    """Verdict on W^ss = W^s plus the fixed-point combinatorics it certifies."""

    ss_equals_s: bool
    fixed_subsets: tuple[FixedPointSubset, ...]
    exponent_e: int
    witness: tuple[int, ...] | None = None
    reason: str = ""


@dataclass(frozen=True, order=False)
class CurveClass:
    """A class beta with its ray pairings b_rho = beta(L_rho) and degree beta(L_theta)."""

    components: tuple[Fraction, ...]
    b: tuple[Fraction, ...]
    degree: Fraction

    @property
    def sort_key(self) -> tuple:
        return (self.degree, self.components)

    @property
    def anticanonical_degree(self) -> Fraction:
        """beta(det T) = sum_rho b_rho."""
        return sum(self.b, Fraction(0))

    @property
    def is_zero(self) -> bool:
        return all(value == 0 for value in self.components)

    def label(self) -> str:
        return "(" + ", ".join(format_rational(value) for value in self.components) + ")"


@dataclass(frozen=True)
class LoopSpaceDims:
    """Dimensions attached to the stacky loop space [W_beta^ss / G]."""

    a: int
    dim_W_beta: int
    dim_stack: int
    obstruction_dim: int
    virtual_dim: int


@dataclass(frozen=True)
class SectorLabel:
    """A component of the rigidified inertia stack, keyed by its action vector."""

    action: tuple[Fraction, ...]
    support: tuple[int, ...]
    age: Fraction
    dim: int

    @property
    def is_untwisted(self) -> bool:
        return all(value == 0 for value in self.action)

    def label(self) -> str:
        return "(" + ", ".join(format_rational(value) for value in self.action) + ")"


@dataclass(frozen=True)
class CheckDecision:
    """Outcome of a structural audit; failing checks list their violations."""

    name: str
    passed: bool
    reason: str
    violations: tuple[str, ...] = ()
