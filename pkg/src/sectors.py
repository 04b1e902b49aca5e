"""
sectors.py
----------

Chen-Ruan inertia sectors of X = [W^ss / G].

A sector is labeled by the action vector (c_rho) of a group element g, where g
acts on coordinate rho by exp(2 pi i c_rho) with c_rho in [0, 1). Every g with
a nonempty semistable fixed locus fixes some T-fixed point, so the sectors are
the union of the stabilizer groups of the fixed-point subsets.
"""
from __future__ import annotations

import logging
from collections.abc import Sequence
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .curve_classes import f_beta_nonempty
from .errors import ConsistencyError, PreconditionError
from .exactmath import dot, frac_part, smith_normal_form
from .git_model import require_stable
from .models import CurveClass, GitPresentation, SectorLabel

logger = logging.getLogger(__name__)


def make_sector(rank: int, action: Sequence[Fraction]) -> SectorLabel:
    """Build a sector label from its action vector."""
    action = tuple(Fraction(value) for value in action)
    support = tuple(rho for rho, value in enumerate(action) if value == 0)
    return SectorLabel(
        action=action,
        support=support,
        age=sum(action, Fraction(0)),
        dim=len(support) - rank,
    )


def _action_vector(presentation: GitPresentation, gamma: Sequence[Fraction]) -> tuple[Fraction, ...]:
    return tuple(
        frac_part(dot(presentation.ray_charge(rho), gamma)) for rho in range(presentation.n_rays)
    )


def _sort_key(sector: SectorLabel) -> tuple:
    return (not sector.is_untwisted, sector.age, sector.action)


@lru_cache(maxsize=None)
def enumerate_sectors(presentation: GitPresentation) -> tuple[SectorLabel, ...]:
    """All sectors, untwisted first, then by age and action vector."""
    report = require_stable(presentation)
    r = presentation.rank
    found: dict[tuple[Fraction, ...], SectorLabel] = {}

    for subset in report.fixed_subsets:
        # stabilizer of sigma: gamma in (Q/Z)^r with A_sigma^T gamma integral
        block = presentation.charges.select_columns(subset.sigma).transpose()
        snf = smith_normal_form(block)
        for steps in product(*(range(d) for d in snf.diagonal)):
            delta = [Fraction(j, d) for j, d in zip(steps, snf.diagonal)]
            gamma = [
                sum((snf.right[i, k] * delta[k] for k in range(r)), Fraction(0))
                for i in range(r)
            ]
            action = _action_vector(presentation, gamma)
            if action not in found:
                found[action] = make_sector(r, action)

    sectors = tuple(sorted(found.values(), key=_sort_key))
    logger.info("Model %s has %d inertia sectors", presentation.name, len(sectors))
    return sectors


def untwisted_sector(presentation: GitPresentation) -> SectorLabel:
    return make_sector(presentation.rank, [Fraction(0)] * presentation.n_rays)


def sector_of_class(presentation: GitPresentation, beta: CurveClass) -> SectorLabel:
    """Sector of g_beta^{-1}, i.e. action vector frac(-b_rho)."""
    if not f_beta_nonempty(presentation, beta):
        raise PreconditionError(f"F_beta is empty for beta={beta.label()}")
    action = tuple(frac_part(-value) for value in beta.b)
    for sector in enumerate_sectors(presentation):
        if sector.action == action:
            return sector
    raise ConsistencyError(
        f"class {beta.label()} lands on action vector {action} missing from the sector list"
    )


def involution(sector: SectorLabel) -> SectorLabel:
    """The inverse sector: c_rho -> frac(-c_rho)."""
    rank = len(sector.support) - sector.dim
    return make_sector(rank, [frac_part(-value) for value in sector.action])


def age(sector: SectorLabel) -> Fraction:
    """Sum of the nonzero action weights."""
    return sum((value for value in sector.action if value != 0), Fraction(0))
