"""Exact shortest closed billiard trajectories in convex polytopes under polyhedral gauge norms."""

__version__ = "0.1.0"

from .errors import (
    BilliardError,
    DegenerateError,
    DimensionMismatch,
    InternalConsistencyError,
    InvalidBody,
)
from .lp import LPOutcome, LPProblem, solve
from .geometry import (
    Body,
    ClosedPolyline,
    HPolytope,
    VPolytope,
    face_subsets,
    gauge_norm,
    hrep_to_vrep,
    minkowski_sum,
    polar_dual,
    polyline_length,
    vrep_to_hrep,
)
from .billiard import (
    BilliardSolution,
    ContactPattern,
    FittingResult,
    ReflectionCertificate,
    ReflectionFailure,
    dedupe_fake_vertices,
    enumerate_patterns,
    is_two_periodic,
    pattern_min_length,
    shortest_trajectory,
    smallest_fitting_ratio,
    verify_reflection,
)

__all__ = [
    "BilliardError",
    "DegenerateError",
    "DimensionMismatch",
    "InternalConsistencyError",
    "InvalidBody",
    "LPOutcome",
    "LPProblem",
    "solve",
    "Body",
    "ClosedPolyline",
    "HPolytope",
    "VPolytope",
    "face_subsets",
    "gauge_norm",
    "hrep_to_vrep",
    "minkowski_sum",
    "polar_dual",
    "polyline_length",
    "vrep_to_hrep",
    "BilliardSolution",
    "ContactPattern",
    "FittingResult",
    "ReflectionCertificate",
    "ReflectionFailure",
    "dedupe_fake_vertices",
    "enumerate_patterns",
    "is_two_periodic",
    "pattern_min_length",
    "shortest_trajectory",
    "smallest_fitting_ratio",
    "verify_reflection",
]
