"""Public package surface for qtoric: exact quasimap I-functions of toric stacks."""
from .cohomology import (
    RingElement,
    SectorRing,
    ZLaurent,
    betti_dims,
    build_sector_ring,
    divisor_class,
    invert_linear_in_z,
    mul,
)
from .curve_classes import (
    enumerate_effective,
    f_beta_nonempty,
    loop_space_dims,
    semipositivity_report,
    virtual_dim_moduli,
)
from .errors import (
    ConsistencyError,
    ConvexityError,
    InputError,
    PreconditionError,
    QToricError,
    SemipositivityError,
    StabilityError,
)
from .git_model import (
    check_ss_equals_s,
    exponent_lcm_e,
    fixed_point_subsets,
    load_presentation,
    parse_presentation,
    sr_generators,
)
from .iseries import (
    ISeries,
    MirrorData,
    TInsertion,
    TwistData,
    big_i,
    givental_small_i,
    grading_check,
    mirror_map,
    residue_two_path_check,
    small_i,
    twisted_small_i,
)
from .models import CheckDecision, CurveClass, GitPresentation, SectorLabel
from .sectors import age, enumerate_sectors, involution, sector_of_class

__all__ = [
    "CheckDecision",
    "ConsistencyError",
    "ConvexityError",
    "CurveClass",
    "GitPresentation",
    "ISeries",
    "InputError",
    "MirrorData",
    "PreconditionError",
    "QToricError",
    "RingElement",
    "SectorLabel",
    "SectorRing",
    "SemipositivityError",
    "StabilityError",
    "TInsertion",
    "TwistData",
    "ZLaurent",
    "age",
    "betti_dims",
    "big_i",
    "build_sector_ring",
    "check_ss_equals_s",
    "divisor_class",
    "enumerate_effective",
    "enumerate_sectors",
    "exponent_lcm_e",
    "f_beta_nonempty",
    "fixed_point_subsets",
    "givental_small_i",
    "grading_check",
    "invert_linear_in_z",
    "involution",
    "load_presentation",
    "loop_space_dims",
    "mirror_map",
    "mul",
    "parse_presentation",
    "residue_two_path_check",
    "sector_of_class",
    "semipositivity_report",
    "small_i",
    "sr_generators",
    "twisted_small_i",
    "virtual_dim_moduli",
]
