"""Geometry of subspaces of C^d: principal angles, the minimal angle, gap metric,
and constructive checks on maps preserving the minimal angle."""

from .errors import MinAngleError
from .grassmann import (
    PrincipalAngles,
    Projection,
    Subspace,
    angle_between_lines,
    direct_sum,
    gap_distance,
    intersection,
    is_adjacent,
    is_one_orthogonal,
    is_orthogonal,
    is_trivial_intersection,
    min_angle,
    principal_angles,
    principal_angles_oracle,
    projection_to_subspace,
    subspace_to_projection,
    trace_product,
)
from .maps import GrassmannMap, IsometryMap, apply_isometry, apply_map, complement
from .numerics import Tolerance, get_tolerance, using_tolerance

__version__ = "0.1.0"
