"""Intersection bodies of star bodies of revolution.

Forward and inverse spherical Radon transforms of rotation-invariant
profiles, dimension lifting of generating densities with Dirac-atom
bookkeeping, regularity and equator-convexity criteria, and the second
derivative test functional for bodies with a face.
"""

__version__ = "0.1.0"

from .classify import c1_report, full_report, necessary_condition, predicted_gain, regularity_report
from . import corpus
from .errors import (
    AccuracyError,
    DistributionalError,
    DomainError,
    IntBodyError,
    NotStarBodyError,
    SchemaError,
    UnsupportedError,
    VerdictError,
)
from .lifting import generator, is_equator_convex, lift, lift_steps, negative_part, verdict_next_dimension
from .profiles import BodyOfRevolution, PiecewiseProfile, body_from_dict, body_to_dict, from_phi, from_t, load_body
from .radon import GeneratingDensity, density_of, intersection_body, inverse_density, pole_value, transform_body
from .sdt import FaceBody, direct_functional, scaling_fit, sdt_cylinder, sdt_face_body, sdt_grid
from .special_math import DEFAULT_SPEC, QuadratureSpec, ball_volume, sphere_surface_area

__all__ = [
    "AccuracyError",
    "BodyOfRevolution",
    "DEFAULT_SPEC",
    "DistributionalError",
    "DomainError",
    "FaceBody",
    "GeneratingDensity",
    "IntBodyError",
    "NotStarBodyError",
    "PiecewiseProfile",
    "QuadratureSpec",
    "SchemaError",
    "UnsupportedError",
    "VerdictError",
    "ball_volume",
    "body_from_dict",
    "body_to_dict",
    "c1_report",
    "corpus",
    "density_of",
    "direct_functional",
    "from_phi",
    "from_t",
    "full_report",
    "generator",
    "intersection_body",
    "inverse_density",
    "is_equator_convex",
    "lift",
    "lift_steps",
    "load_body",
    "necessary_condition",
    "negative_part",
    "pole_value",
    "predicted_gain",
    "regularity_report",
    "scaling_fit",
    "sdt_cylinder",
    "sdt_face_body",
    "sdt_grid",
    "sphere_surface_area",
    "transform_body",
    "verdict_next_dimension",
]
