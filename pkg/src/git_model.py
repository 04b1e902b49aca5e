"""
git_model.py
------------

Loading and validating a torus GIT presentation, and the stability
combinatorics every later stage depends on.

Semistability is the affine-torus criterion: a point x is theta-semistable iff
theta lies in the cone spanned by the charges of its nonzero coordinates. All
questions below reduce to exact cone-membership tests on subsets of columns.
"""
from __future__ import annotations

import json
import logging
import math
from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import Any

from .errors import InputError, PreconditionError, StabilityError
from .exactmath import (
    IntMatrix,
    cone_contains,
    rational_rank,
    smith_normal_form,
    solve_square,
)
from .models import FixedPointSubset, GitPresentation, StabilityReport

logger = logging.getLogger(__name__)


def _require_int(value: Any, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InputError(f"{field} must be an integer, got {value!r}")
    return value


def parse_presentation(document: Any, default_name: str = "model") -> GitPresentation:
    """Validate a decoded model document and build the presentation."""
    if not isinstance(document, dict):
        raise InputError("model document must be a JSON object")

    missing = [key for key in ("n_rays", "rank", "charges", "theta") if key not in document]
    if missing:
        raise InputError(f"model document is missing required keys: {', '.join(missing)}")

    n_rays = _require_int(document["n_rays"], "n_rays")
    rank = _require_int(document["rank"], "rank")
    if n_rays < 1 or rank < 1:
        raise InputError("n_rays and rank must be positive")
    if n_rays < rank:
        raise InputError(f"n_rays={n_rays} is smaller than rank={rank}")

    charges = document["charges"]
    if not isinstance(charges, list) or len(charges) != rank:
        raise InputError(f"charges must be a list of {rank} rows")
    rows: list[list[int]] = []
    for i, row in enumerate(charges):
        if not isinstance(row, list) or len(row) != n_rays:
            raise InputError(f"charges row {i} must list {n_rays} integers")
        rows.append([_require_int(value, f"charges[{i}]") for value in row])

    theta = document["theta"]
    if not isinstance(theta, list) or len(theta) != rank:
        raise InputError(f"theta must list {rank} integers")
    theta_vec = tuple(_require_int(value, "theta") for value in theta)
    if not any(theta_vec):
        raise InputError("theta must be a nonzero character")

    names = document.get("ray_names")
    if names is None:
        ray_names = tuple(f"D{rho + 1}" for rho in range(n_rays))
    else:
        if (
            not isinstance(names, list)
            or len(names) != n_rays
            or not all(isinstance(name, str) and name for name in names)
        ):
            raise InputError(f"ray_names must list {n_rays} non-empty strings")
        if len(set(names)) != n_rays:
            raise InputError("ray_names must be distinct")
        ray_names = tuple(names)

    columns = [[rows[i][rho] for i in range(rank)] for rho in range(n_rays)]
    found_rank = rational_rank(columns)
    if found_rank < rank:
        raise InputError(f"charge matrix has rank(A)={found_rank} < {rank}")

    name = document.get("name") or default_name
    if not isinstance(name, str):
        raise InputError("name must be a string")

    return GitPresentation(
        name=name,
        n_rays=n_rays,
        rank=rank,
        charges=IntMatrix.from_rows(rows),
        theta=theta_vec,
        ray_names=ray_names,
    )


def load_presentation(path: Path) -> GitPresentation:
    """Read and validate a JSON model file."""
    try:
        document = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise InputError(f"cannot read model file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"model file {path} is not valid JSON: {exc}") from exc

    presentation = parse_presentation(document, default_name=Path(path).stem)
    logger.info(
        "Loaded model %s: N=%d r=%d theta=%s",
        presentation.name,
        presentation.n_rays,
        presentation.rank,
        presentation.theta,
    )
    return presentation


@lru_cache(maxsize=None)
def theta_in_cone(presentation: GitPresentation, rays: tuple[int, ...]) -> bool:
    """Whether theta lies in Cone(A_rho : rho in rays)."""
    return cone_contains(presentation.ray_charges(rays), presentation.theta).contains


@lru_cache(maxsize=None)
def fixed_point_subsets(presentation: GitPresentation) -> tuple[FixedPointSubset, ...]:
    """All r-subsets sigma with det A_sigma != 0 and theta in Cone(A_sigma), lexicographic."""
    r = presentation.rank
    found: list[FixedPointSubset] = []
    for sigma in combinations(range(presentation.n_rays), r):
        block = presentation.charges.select_columns(sigma)
        determinant = block.determinant()
        if determinant == 0 or not theta_in_cone(presentation, sigma):
            continue
        coeffs = solve_square(block.to_rows(), presentation.theta)
        snf = smith_normal_form(block)
        found.append(
            FixedPointSubset(
                sigma=sigma,
                coeffs=coeffs,
                stab_order=abs(determinant),
                stab_exponent=snf.largest_divisor,
            )
        )
    if not found:
        logger.warning("Model %s has an empty semistable locus", presentation.name)
    return tuple(found)


@lru_cache(maxsize=None)
def check_ss_equals_s(presentation: GitPresentation) -> StabilityReport:
    """Certify W^ss = W^s through linearly independent theta-containing subsets."""
    r = presentation.rank
    fixed = fixed_point_subsets(presentation)
    if not fixed:
        return StabilityReport(
            ss_equals_s=False,
            fixed_subsets=(),
            exponent_e=1,
            witness=None,
            reason="empty semistable locus: theta is not in the cone of all charges",
        )

    for size in range(1, r):
        for subset in combinations(range(presentation.n_rays), size):
            if rational_rank(presentation.ray_charges(subset)) != size:
                continue
            if theta_in_cone(presentation, subset):
                return StabilityReport(
                    ss_equals_s=False,
                    fixed_subsets=fixed,
                    exponent_e=1,
                    witness=subset,
                    reason=(
                        f"theta lies in the cone of {size} independent charges "
                        f"{subset}, rank {size} < {r}"
                    ),
                )

    for subset in fixed:
        if any(c <= 0 for c in subset.coeffs):
            raise StabilityError(f"fixed subset {subset.sigma} has a non-positive coefficient")

    exponent = math.lcm(*(subset.stab_exponent for subset in fixed))
    return StabilityReport(
        ss_equals_s=True,
        fixed_subsets=fixed,
        exponent_e=exponent,
        reason="every theta-containing independent subset has full rank",
    )


def require_stable(presentation: GitPresentation) -> StabilityReport:
    """Return the stability report or raise ``StabilityError`` with its witness."""
    report = check_ss_equals_s(presentation)
    if not report.ss_equals_s:
        raise StabilityError(
            f"model {presentation.name} fails W^ss = W^s: {report.reason}",
            witness=report.witness,
        )
    return report


def exponent_lcm_e(presentation: GitPresentation) -> int:
    """lcm of the stabilizer exponents over the T-fixed points."""
    return require_stable(presentation).exponent_e


@lru_cache(maxsize=None)
def coarse_space_is_proper(presentation: GitPresentation, support: tuple[int, ...]) -> bool:
    """Whether the GIT quotient of C^support is proper, i.e. C[C^support]^G = C.

    Properness fails exactly when some -A_rho lies in the cone of the other
    charges of the support (a nonzero nonnegative relation among the columns).
    """
    for rho in support:
        others = [presentation.ray_charge(j) for j in support if j != rho]
        opposite = [-value for value in presentation.ray_charge(rho)]
        if cone_contains(others, opposite).contains:
            return False
    return True


@lru_cache(maxsize=None)
def sr_generators(presentation: GitPresentation, support: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """Inclusion-minimal B inside ``support`` whose removal kills theta-semistability."""
    support = tuple(sorted(support))
    if not theta_in_cone(presentation, support):
        raise PreconditionError(f"support {support} is not theta-semistable")

    minimal: list[tuple[int, ...]] = []
    for size in range(1, len(support) + 1):
        for subset in combinations(support, size):
            if any(set(found) <= set(subset) for found in minimal):
                continue
            rest = tuple(rho for rho in support if rho not in subset)
            if not theta_in_cone(presentation, rest):
                minimal.append(subset)
    return tuple(minimal)
