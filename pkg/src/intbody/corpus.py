"""Named bodies used throughout the tests, the CLI and the examples.

Every entry is a closed-form t-profile (t = cos of the angle from the
axis). ``a`` below is 1/sqrt(2), the t-coordinate of the 45 degree seam.
"""

from __future__ import annotations

from .errors import SchemaError
from .profiles import BodyOfRevolution, PiecewiseProfile, from_t

A = "1/sqrt(2)"

_PIECES = {
    # unit ball
    "ball": [(0, 1, "1")],
    # B_{n-1} x [-1, 1]: side |y| = 1 near the equator, flat faces near the poles
    "cylinder": [(0, A, "1/sqrt(1 - t^2)"), (A, 1, "1/t")],
    # two unit-base cones glued along the equator, apexes at height 1
    "double_cone": [(0, 1, "1/(t + sqrt(1 - t^2))")],
    # unit cylinder |z| <= 1 with conical caps up to apexes at height 2
    "cylinder_capped": [(0, A, "1/sqrt(1 - t^2)"), (A, 1, "2/(t + sqrt(1 - t^2))")],
    "diabolo_L": [(0, A, "1/sqrt(1 - t^2)"), (A, 1, "(2*t + sqrt(1 - t^2))/(5*t^2 - 1)")],
    "smooth_Ltilde": [(0, 1, "(2 - 6*t^2 + 5*t^4)^(1/3)")],
    # barrel B_n + B_{n-1}
    "barrel_B": [(0, A, "2*sqrt(1 - t^2)"), (A, 1, "1/t")],
    # the body whose intersection body in R^4 is the barrel
    "barrel_gen4": [(0, A, "(3/(4*pi))^(1/3)/sqrt(1 - t^2)"), (A, 1, "(3*t/pi)^(1/3)")],
    # continuous part of the R^8 generating density of the barrel, as printed
    # (defined up to a positive constant; it jumps at t = 1/sqrt(2))
    "barrel_L8": [(0, A, "(1 - t^2)^(-7/2)"), (A, 1, "96*t/15")],
}

_DEFAULT_DIM = {"barrel_L8": 8}
_SIGNED = {"barrel_L8"}

DESCRIPTIONS = {
    "ball": "Euclidean unit ball",
    "cylinder": "cylinder B_{n-1} x [-1, 1]",
    "double_cone": "double cone over the unit equatorial ball",
    "cylinder_capped": "cylinder with two conical caps",
    "diabolo_L": "non-equator-convex generator of the diabolo example",
    "smooth_Ltilde": "smooth non-equator-convex generator",
    "barrel_B": "barrel B_n + B_{n-1}",
    "barrel_gen4": "generator L with I L = barrel in R^4",
    "barrel_L8": "continuous part of the barrel's R^8 density (up to a constant)",
}


def names() -> list[str]:
    return list(_PIECES)


def corpus_profile(name: str) -> PiecewiseProfile:
    try:
        pieces = _PIECES[name]
    except KeyError:
        raise LookupError(f"unknown corpus body {name!r}; known: {', '.join(_PIECES)}") from None
    return from_t(pieces, signed=name in _SIGNED)


def corpus(name: str, n: int | None = None) -> BodyOfRevolution:
    """Return the named body in dimension ``n`` (default 4, or 8 for barrel_L8)."""
    profile = corpus_profile(name)
    return BodyOfRevolution(_DEFAULT_DIM.get(name, 4) if n is None else n, profile, name)


def corpus_dict(name: str, n: int | None = None) -> dict:
    """The body in the JSON body schema (parametrization t)."""
    if name not in _PIECES:
        raise SchemaError(f"unknown corpus body {name!r}")
    return {
        "name": name,
        "dimension": _DEFAULT_DIM.get(name, 4) if n is None else n,
        "parametrization": "t",
        "pieces": [{"from": lo, "to": hi, "expr": e} for lo, hi, e in _PIECES[name]],
    }
