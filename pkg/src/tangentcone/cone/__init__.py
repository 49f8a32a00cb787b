"""Tangent cone engines: sampling, exact curves, plane branches, initial forms."""
from .curves import DEFAULT_GRID, cone_membership_puiseux, sign_certificate
from . import deformation as _deformation
from . import numeric as _numeric
from .deformation import deformation_slice_check
from .exact import exact_cone
from .grid import sphere_grid
from .initial import (
    cone_membership_initial,
    initial_form_cone,
    initial_form_superset,
    initial_form_zero_subspace,
)
from .numeric import DEFAULT_BUDGET, DEFAULT_SCHEDULE, cone_membership_numeric
from .plane import plane_curve_cone
from .scan import ENGINES, ScanEntry, ScanResult, combine_verdicts, cone_scan
from .types import INDETERMINATE, SUPPORTED, UNSUPPORTED, ConeQuery, ConeVerdict, Ray, RaySet


def clear_cache():
    """Forget memoised sampling verdicts."""
    _numeric.clear_cache()
    _deformation.clear_cache()


__all__ = [
    "ConeQuery",
    "ConeVerdict",
    "Ray",
    "RaySet",
    "SUPPORTED",
    "UNSUPPORTED",
    "INDETERMINATE",
    "DEFAULT_GRID",
    "DEFAULT_SCHEDULE",
    "DEFAULT_BUDGET",
    "ENGINES",
    "cone_membership_numeric",
    "cone_membership_puiseux",
    "cone_membership_initial",
    "sign_certificate",
    "plane_curve_cone",
    "initial_form_cone",
    "initial_form_superset",
    "initial_form_zero_subspace",
    "deformation_slice_check",
    "exact_cone",
    "sphere_grid",
    "cone_scan",
    "combine_verdicts",
    "ScanEntry",
    "ScanResult",
    "clear_cache",
]
