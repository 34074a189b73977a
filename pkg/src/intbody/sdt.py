"""Second Derivative Test functionals for bodies with a face.

With the Gaussian test functions

    h_m(x) = m (2pi)^{-1/2} exp(-m^2 x^2 / 2),
    u(y)   = (2pi)^{-(n-1)/2} exp(-|y|^2 / 2),   y in R^{n-1},

the functional <||(x, y)||^{-1}, u(y) h_m''(x)> is evaluated for the
cylinder (segment + unit ball, norm max(|x|, |y|)) and for bodies of
revolution whose norm is |x| above the face |x| = |y| and
g(x, r) = r gamma(x / r) below it. Every (n-1)-dimensional integral is
radial: int u(y) phi(|y|) dy = P int_0^inf exp(-r^2/2) phi(r) r^{n-2} dr
with P = omega_{n-1} (2pi)^{-(n-1)/2}.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.special import exp1, gammaincc, gamma as gamma_fn

from .errors import DomainError, IntBodyError
from .profiles import PiecewiseProfile, from_t
from .special_math import DEFAULT_SPEC, QuadratureSpec, adaptive_gauss, sphere_surface_area

__all__ = [
    "FaceBody",
    "SdtBreakdown",
    "FitUndefinedError",
    "h",
    "sdt_cylinder",
    "sdt_face_body",
    "direct_functional",
    "scaling_fit",
    "sdt_grid",
    "R_MAX",
]

R_MAX = 12.0  # radial truncation, in standard deviations of u
_SQ2PI = math.sqrt(2.0 * math.pi)


class FitUndefinedError(IntBodyError, ValueError):
    """No negative component to fit."""


def h(x, m: float, order: int = 0):
    """h_m and its first two derivatives."""
    x = np.asarray(x, dtype=float)
    base = m / _SQ2PI * np.exp(-0.5 * (m * x) ** 2)
    if order == 0:
        return base
    if order == 1:
        return -(m**2) * x * base
    if order == 2:
        return m**2 * ((m * x) ** 2 - 1.0) * base
    raise ValueError("order must be 0, 1 or 2")


def _prefactor(n: int) -> float:
    return sphere_surface_area(n - 1) * (2.0 * math.pi) ** (-(n - 1) / 2)


def _tail_int_h_over_x3(r, m: float):
    """int_r^inf h_m(x) / x^3 dx in closed form (via E_1)."""
    r = np.asarray(r, dtype=float)
    a = 0.5 * m * m
    z = a * r * r
    return m / _SQ2PI * 0.5 * (np.exp(-z) / (r * r) - a * exp1(z))


def _radial(phi, n: int, m: float, spec: QuadratureSpec) -> float:
    """P int_0^R exp(-r^2/2) phi(r) r^{n-2} dr with panels at the h_m scale."""

    def integrand(r):
        return np.exp(-0.5 * r * r) * phi(r) * r ** (n - 2)

    breaks = [k / m for k in (0.5, 1, 2, 4, 8, 16, 32) if k / m < R_MAX] + [1.0, 2.0, 4.0, 8.0]
    return _prefactor(n) * adaptive_gauss(integrand, 0.0, R_MAX, breaks, spec)


def _tail_bound(n: int, m: float, bracket_max: float) -> float:
    """Bound on the part of a radial integral beyond R_MAX."""
    k = n - 2
    s = 0.5 * (k + 1)
    upper = 2.0 ** (s - 1.0) * gamma_fn(s) * gammaincc(s, 0.5 * R_MAX**2)
    return _prefactor(n) * bracket_max * upper


def _check(n: int, m: float) -> None:
    if int(n) != n or n < 5:
        raise DomainError(f"the functional needs an integer n >= 5, got {n}")
    if not m > 0:
        raise DomainError(f"m must be positive, got {m}")


@dataclass(frozen=True)
class SdtBreakdown:
    """Components of <||.||^{-1}, u h_m''>.

    ``U_terms`` are the three integrals over |x| > |y|_B after two
    integrations by parts: the h_m' term (>= 0), the signed h_m / r^2 term
    and the tail term (>= 0). ``W_term`` is the part over |x| < |y|_B; for
    face bodies ``W_parts`` splits it further.
    """

    n: int
    m: float
    U_terms: tuple
    W_term: float
    total: float
    W_parts: dict = field(default_factory=dict)
    tail_bound: float = 0.0

    @property
    def components(self) -> dict:
        out = {"U_hprime": self.U_terms[0], "U_h_over_r2": self.U_terms[1], "U_tail": self.U_terms[2]}
        if self.W_parts:
            out.update({f"W_{k}": v for k, v in self.W_parts.items()})
        else:
            out["W"] = self.W_term
        return out

    @property
    def negative(self) -> float:
        """Sum of the components that are negative."""
        return float(sum(v for v in self.components.values() if v < 0))

    def to_row(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "U1": self.U_terms[0],
            "U2": self.U_terms[1],
            "U3": self.U_terms[2],
            "W": self.W_term,
            "negative": self.negative,
            "total": self.total,
            "tail_bound": self.tail_bound,
        }


def _u_terms(n: int, m: float, spec: QuadratureSpec) -> tuple:
    first = _radial(lambda r: -2.0 * h(r, m, 1) / r, n, m, spec)
    second = _radial(lambda r: -2.0 * h(r, m) / (r * r), n, m, spec)
    third = _radial(lambda r: 4.0 * _tail_int_h_over_x3(r, m), n, m, spec)
    return first, second, third


def sdt_cylinder(n: int, m: float, spec: QuadratureSpec = DEFAULT_SPEC) -> SdtBreakdown:
    """The functional for the cylinder (segment + Euclidean unit ball) in R^n.

    W = -2 m^2 int u(y) h_m(|y|) dy, so W cancels the first U term exactly
    and the total is carried by the two remaining U terms.
    """
    _check(n, m)
    U = _u_terms(n, m, spec)
    W = _radial(lambda r: -2.0 * m * m * h(r, m), n, m, spec)
    bound = _tail_bound(n, m, (4.0 * m * m + 4.0 / R_MAX**2) * float(h(R_MAX, m)))
    return SdtBreakdown(n, float(m), tuple(float(x) for x in U), float(W), float(sum(U) + W), {}, bound)


@dataclass(frozen=True)
class FaceBody:
    """Body of revolution with norm |x| for |x| > |y| and r gamma(x / r) below.

    ``gamma`` is a profile on [0, 1] (its variable plays the role of
    x / r): positive, convex, with gamma(1) = 1 and minimum gamma(0).
    """

    n: int
    gamma: PiecewiseProfile
    name: str = "face body"

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 5:
            raise DomainError(f"face bodies need n >= 5, got {self.n}")
        g = self.gamma
        uu = np.linspace(0.0, 1.0, 401)
        vals = g(uu)
        if not np.all(np.isfinite(vals)) or np.any(vals <= 0):
            raise DomainError("gamma must be positive and finite on [0, 1]")
        if abs(g.eval(1.0, "left") - 1.0) > 1e-12:
            raise DomainError(f"gamma(1) must be 1, got {g.eval(1.0, 'left')}")
        if np.any(vals < vals[0] - 1e-12):
            raise DomainError("gamma must attain its minimum at 0")
        d1 = np.array([g.derivs(float(x), 1)[1] for x in uu[1:-1]])
        if abs(g.derivs(0.0, 1, "right")[1]) > 1e-9:
            raise DomainError("gamma must be even: gamma'(0) = 0")
        if np.any(np.diff(d1) < -1e-9):
            raise DomainError("gamma must be convex")

    @classmethod
    def from_expr(cls, n: int, expr: str, name: str = "face body") -> "FaceBody":
        return cls(n, from_t([(0, 1, expr)]), name)


def _gamma_fns(body: FaceBody):
    g0 = body.gamma
    g1 = g0.derivative(1)
    g2 = g0.derivative(2)
    return g0, g1, g2


def sdt_face_body(body: FaceBody, m: float, spec: QuadratureSpec = DEFAULT_SPEC) -> SdtBreakdown:
    """The functional for a face body, split as in the face-body argument.

    W = I + II with I = -2 m^2 int u h_m(|y|) and
    II = 2 gamma'(1) int u h_m / r^2 (``slope``)
         - 2 int u int_0^r h_m g_xx / g^2 dx (``curvature``)
         + 4 int u int_0^r h_m g_x^2 / g^3 dx (``gradient``).
    """
    n = body.n
    _check(n, m)
    g0, g1, g2 = _gamma_fns(body)
    U = _u_terms(n, m, spec)
    I = _radial(lambda r: -2.0 * m * m * h(r, m), n, m, spec)
    slope = float(g1.eval(1.0, "left"))
    II_slope = _radial(lambda r: 2.0 * slope * h(r, m) / (r * r), n, m, spec)

    # x = r w: int_0^r h(x) q(x / r) / r^3 dx = r^{-2} int_0^1 h(r w) q(w) dw
    def inner(q):
        def phi(r):
            out = np.empty_like(r)
            for i, ri in enumerate(np.ravel(r)):
                breaks = [k / (m * ri) for k in (0.5, 1, 2, 4, 8) if k / (m * ri) < 1.0]
                out.flat[i] = adaptive_gauss(lambda w: h(ri * w, m) * q(w), 0.0, 1.0, breaks, spec) / (ri * ri)
            return out

        return phi

    curv = _radial(inner(lambda w: -2.0 * g2(w) / g0(w) ** 2), n, m, spec)
    grad = _radial(inner(lambda w: 4.0 * g1(w) ** 2 / g0(w) ** 3), n, m, spec)
    parts = {"I": float(I), "II_slope": float(II_slope), "II_curvature": float(curv), "II_gradient": float(grad)}
    W = sum(parts.values())
    gmax = float(np.max(np.abs(g2(np.linspace(0, 1, 101))))) + 2.0 * float(np.max(g1(np.linspace(0, 1, 101)) ** 2))
    bound = _tail_bound(n, m, (4.0 * m * m + (4.0 + 2.0 * abs(slope) + 2.0 * gmax / min(g0(np.linspace(0, 1, 101))) ** 2) / R_MAX**2) * float(h(R_MAX, m)))
    return SdtBreakdown(n, float(m), tuple(float(x) for x in U), float(W), float(sum(U) + W), parts, bound)


def direct_functional(n: int, m: float, body: FaceBody | None = None, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """<||.||^{-1}, u h_m''> by direct quadrature of h_m'' (no integration by parts).

    ``body=None`` is the cylinder, norm max(|x|, |y|).
    """
    _check(n, m)
    if body is not None and body.n != n:
        raise DomainError("body dimension does not match n")
    g0 = body.gamma if body is not None else None
    x_far = 40.0 / m

    def bracket(r):
        out = np.empty_like(r)
        for i, ri in enumerate(np.ravel(r)):
            # |x| < r
            if g0 is None:
                near = adaptive_gauss(lambda x: h(x, m, 2), 0.0, ri, [k / m for k in (1, 2, 4, 8) if k / m < ri], spec) / ri
            else:
                near = adaptive_gauss(
                    lambda x: h(x, m, 2) / (ri * g0(np.clip(x / ri, 0.0, 1.0))),
                    0.0,
                    ri,
                    [k / m for k in (1, 2, 4, 8) if k / m < ri],
                    spec,
                )
            # |x| > r
            far = 0.0
            if ri < x_far:
                far = adaptive_gauss(
                    lambda x: h(x, m, 2) / x, ri, x_far, [ri + k / m for k in (1, 2, 4, 8, 16)] + [k / m for k in (1, 2, 4)], spec
                )
            out.flat[i] = 2.0 * (near + far)
        return out

    return float(_radial(bracket, n, m, spec))


def scaling_fit(results: Sequence[SdtBreakdown]) -> float:
    """Least-squares slope of log|negative component| against log m.

    Raises
    ------
    DomainError
        With fewer than 4 distinct m or a span below one decade.
    FitUndefinedError
        If some result has no negative component.
    """
    ms = np.array([r.m for r in results], dtype=float)
    if len(set(ms.tolist())) < 4:
        raise DomainError("scaling_fit needs at least 4 distinct m values")
    if ms.max() / ms.min() < 10.0:
        raise DomainError("the m values must span at least one decade")
    neg = np.array([r.negative for r in results], dtype=float)
    if np.any(neg >= 0):
        raise FitUndefinedError("some result has no negative component; the exponent is undefined")
    slope, _ = np.polyfit(np.log(ms), np.log(-neg), 1)
    return float(slope)


def sdt_grid(
    n: int,
    ms: Sequence[float],
    body: FaceBody | None = None,
    spec: QuadratureSpec = DEFAULT_SPEC,
    workers: int | None = None,
) -> list[SdtBreakdown]:
    """Breakdowns over an m-grid, evaluated concurrently, in grid order.

    ``body=None`` is the cylinder in R^n.
    """
    if body is not None and body.n != n:
        raise DomainError("body dimension does not match n")
    for m in ms:
        _check(n, m)

    def one(m):
        return sdt_cylinder(n, m, spec) if body is None else sdt_face_body(body, m, spec)

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one, ms))
