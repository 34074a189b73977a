"""Dimension constants, breakpoint-aware Gauss-Legendre quadrature and
Chebyshev tools used by the transforms.

All functions are pure; nothing here keeps mutable module state apart
from an ``lru_cache`` of Gauss-Legendre rules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import Chebyshev

from .errors import AccuracyError, DomainError

__all__ = [
    "QuadratureSpec",
    "ChebSeries",
    "DEFAULT_SPEC",
    "sphere_surface_area",
    "ball_volume",
    "adaptive_gauss",
    "integrate_weighted",
    "cheb_fit",
    "cheb_fit_adaptive",
    "inv_t_ddt_power",
    "compose_derivatives",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Node counts and tolerances for every integral in the package."""

    panel_nodes: int = 32
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_panels: int = 256

    def __post_init__(self):
        if int(self.panel_nodes) != self.panel_nodes or self.panel_nodes < 2:
            raise DomainError(f"panel_nodes must be an integer >= 2, got {self.panel_nodes}")
        if self.abs_tol < 0 or self.rel_tol < 0:
            raise DomainError("tolerances must be non-negative")
        if self.abs_tol == 0 and self.rel_tol == 0:
            raise DomainError("at least one of abs_tol, rel_tol must be positive")
        if int(self.max_panels) != self.max_panels or self.max_panels < 1:
            raise DomainError(f"max_panels must be a positive integer, got {self.max_panels}")

    def tolerance(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


DEFAULT_SPEC = QuadratureSpec()


# ---------------------------------------------------------------------------
# constants


def sphere_surface_area(n: int) -> float:
    """Surface area of the unit sphere S^{n-1} in R^n, 2 pi^{n/2} / Gamma(n/2)."""
    if int(n) != n or n < 1:
        raise DomainError(f"dimension must be an integer >= 1, got {n}")
    return 2.0 * math.pi ** (n / 2) / math.gamma(n / 2)


def ball_volume(n: int) -> float:
    """Volume of the unit ball in R^n, pi^{n/2} / Gamma(n/2 + 1)."""
    if int(n) != n or n < 1:
        raise DomainError(f"dimension must be an integer >= 1, got {n}")
    return math.pi ** (n / 2) / math.gamma(n / 2 + 1)


# ---------------------------------------------------------------------------
# quadrature


@lru_cache(maxsize=32)
def _gauss_rule(m: int):
    nodes, weights = np.polynomial.legendre.leggauss(m)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _panel(h, a, b, m):
    nodes, weights = _gauss_rule(m)
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    vals = np.asarray(h(mid + half * nodes), dtype=float)
    if vals.shape != nodes.shape:
        vals = np.broadcast_to(vals, nodes.shape)
    return half * float(np.dot(weights, vals))


def adaptive_gauss(
    h: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    breaks: Sequence[float] = (),
    spec: QuadratureSpec = DEFAULT_SPEC,
) -> float:
    """Integrate a vectorised ``h`` over [a, b] with panel bisection.

    Panels are first split at every point of ``breaks`` strictly inside
    (a, b); ``h`` is never evaluated at a panel endpoint, so one-sided
    singular behaviour at declared breakpoints is harmless.

    Raises
    ------
    AccuracyError
        If the panel budget ``spec.max_panels`` is exhausted.
    """
    if b < a:
        return -adaptive_gauss(h, b, a, breaks, spec)
    if b == a:
        return 0.0
    cuts = [a] + sorted(p for p in set(breaks) if a < p < b) + [b]
    m = spec.panel_nodes
    width = b - a
    stack = []
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        stack.append((lo, hi, _panel(h, lo, hi, m)))
    total = 0.0
    err_total = 0.0
    used = len(stack)
    while stack:
        lo, hi, whole = stack.pop()
        mid = 0.5 * (lo + hi)
        left = _panel(h, lo, mid, m)
        right = _panel(h, mid, hi, m)
        est = abs(left + right - whole)
        share = (hi - lo) / width
        if not np.isfinite(est):
            raise AccuracyError(
                f"non-finite integrand on panel [{lo}, {hi}]", estimate=math.inf, where=(lo, hi)
            )
        if est <= spec.tolerance(left + right) * max(share, 1e-3) or hi - lo < 1e-14 * width:
            total += left + right
            err_total += est
            continue
        used += 1
        if used > spec.max_panels:
            raise AccuracyError(
                f"quadrature did not converge within {spec.max_panels} panels "
                f"(panel [{lo:.6g}, {hi:.6g}], error estimate {est:.3g})",
                estimate=err_total + est,
                where=(lo, hi),
            )
        stack.append((lo, mid, left))
        stack.append((mid, hi, right))
    return total


def integrate_weighted(
    g: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    x: float,
    alpha: float,
    spec: QuadratureSpec = DEFAULT_SPEC,
    breaks: Sequence[float] = (),
) -> float:
    """Compute the integral of g(t) (x^2 - t^2)^alpha over [a, b], b <= x.

    The substitution t = x sin(theta) turns the weight into
    x^{2 alpha + 1} cos^{2 alpha + 1}(theta), which is smooth for every
    alpha >= -1/2; the breakpoints of ``g`` are mapped accordingly.
    """
    if not a < b:
        raise DomainError(f"need a < b, got a={a}, b={b}")
    if b > x * (1 + 1e-15):
        raise DomainError(f"upper limit {b} exceeds x={x}")
    if alpha < -0.5:
        raise DomainError(f"alpha must be >= -1/2, got {alpha}")
    if x <= 0:
        raise DomainError("x must be positive")
    p = 2.0 * alpha + 1.0
    th_a = math.asin(max(-1.0, min(1.0, a / x)))
    th_b = math.asin(min(1.0, b / x))
    th_breaks = [math.asin(t / x) for t in breaks if a < t < b]

    def h(theta):
        c = np.cos(theta)
        w = c**p if p != 0 else np.ones_like(theta)
        return np.asarray(g(x * np.sin(theta)), dtype=float) * w

    return x**p * adaptive_gauss(h, th_a, th_b, th_breaks, spec)


# ---------------------------------------------------------------------------
# Chebyshev series


@dataclass(frozen=True)
class ChebSeries:
    """A truncated Chebyshev expansion on a closed interval.

    ``tol`` is the absolute accuracy the fit was certified to on a check
    grid; downstream operations use it to estimate error growth.
    """

    series: Chebyshev
    tol: float = 0.0

    @property
    def domain(self) -> tuple[float, float]:
        lo, hi = self.series.domain
        return float(lo), float(hi)

    @property
    def coefficients(self) -> np.ndarray:
        return self.series.coef

    @property
    def degree(self) -> int:
        return len(self.series.coef) - 1

    def __call__(self, x):
        return self.series(x)

    def deriv(self, k: int = 1) -> "ChebSeries":
        if k == 0:
            return self
        lo, hi = self.domain
        growth = (self.degree**2 * 2.0 / (hi - lo)) ** k if self.degree else 0.0
        return ChebSeries(self.series.deriv(k), self.tol * max(growth, 1.0))


def _chop(coef: np.ndarray, cutoff: float) -> np.ndarray:
    keep = np.nonzero(np.abs(coef) > cutoff)[0]
    if keep.size == 0:
        return coef[:1] * 0.0
    return coef[: keep[-1] + 1].copy()


def _check_grid(lo, hi, deg):
    k = max(4 * deg + 8, 64)
    u = np.linspace(-1.0, 1.0, k)
    return lo + 0.5 * (hi - lo) * (u + 1.0)


def cheb_fit(
    func: Callable[[np.ndarray], np.ndarray],
    degree: int,
    tol: float,
    domain: tuple[float, float] = (0.0, 1.0),
    chop: float = 0.0,
) -> ChebSeries:
    """Interpolate ``func`` at ``degree + 1`` Chebyshev points on ``domain``.

    Trailing coefficients below a roundoff cutoff (or below ``chop``, if
    larger) are dropped, so a polynomial input comes back with its exact
    degree and noisy tails do not pollute derivatives. The fit is checked
    on a uniform grid that includes both endpoints.

    Raises
    ------
    AccuracyError
        If the checked error exceeds ``tol``.
    """
    if degree < 0:
        raise DomainError("degree must be non-negative")
    lo, hi = map(float, domain)
    ser = Chebyshev.interpolate(lambda x: np.asarray(func(x), dtype=float) * np.ones_like(x), degree, domain=[lo, hi])
    scale = max(float(np.max(np.abs(ser.coef))), 1e-300)
    ser = Chebyshev(_chop(ser.coef, max(64 * np.finfo(float).eps * scale, chop)), domain=[lo, hi])
    grid = _check_grid(lo, hi, degree)
    ref = np.asarray(func(grid), dtype=float) * np.ones_like(grid)
    if not np.all(np.isfinite(ref)):
        raise DomainError("function is not finite on the fitting domain")
    err = float(np.max(np.abs(ser(grid) - ref)))
    if err > tol:
        raise AccuracyError(
            f"degree {degree} Chebyshev fit misses tolerance {tol:.3g} (error {err:.3g})",
            estimate=err,
        )
    return ChebSeries(ser, max(err, np.finfo(float).eps * scale))


def cheb_fit_adaptive(
    func: Callable[[np.ndarray], np.ndarray],
    domain: tuple[float, float],
    tol: float,
    max_degree: int = 256,
    min_degree: int = 16,
) -> ChebSeries:
    """Double the degree until :func:`cheb_fit` meets ``tol``.

    Coefficients below ``tol / 16`` are chopped from the tail.
    """
    deg = min_degree
    last: AccuracyError | None = None
    while deg <= max_degree:
        try:
            return cheb_fit(func, deg, tol, domain, chop=tol / 16)
        except AccuracyError as exc:
            last = exc
        deg *= 2
    raise AccuracyError(
        f"no Chebyshev fit up to degree {max_degree} meets tolerance {tol:.3g}",
        estimate=last.estimate if last else None,
    )


def inv_t_ddt_power(H: ChebSeries, k: int) -> ChebSeries:
    """Apply ((1/t) d/dt)^k to H given as a series in s = t^2.

    Since (1/t) d/dt = 2 d/ds, the result is 2^k H^{(k)}(s).

    Raises
    ------
    AccuracyError
        When the expansion is too poorly resolved for ``k`` derivatives,
        i.e. its tail, amplified by the spectral differentiation growth,
        exceeds the magnitude of the series itself.
    """
    if k < 0:
        raise DomainError("k must be non-negative")
    if k == 0:
        return H
    coef = H.coefficients
    deg = H.degree
    scale = float(np.max(np.abs(coef))) if coef.size else 0.0
    if deg >= 8 and scale > 0:
        tail = float(np.max(np.abs(coef[-3:])))
        if tail * float(deg) ** (2 * k) > scale:
            raise AccuracyError(
                f"series of degree {deg} is unresolved for {k} differentiations "
                f"(tail {tail:.3g}); refit with a higher degree",
                estimate=tail * float(deg) ** (2 * k),
            )
    d = H.deriv(k)
    return ChebSeries(d.series * (2.0**k), d.tol * 2.0**k)


# ---------------------------------------------------------------------------
# Taylor composition (Faa di Bruno through truncated power series)


def compose_derivatives(outer: Sequence[float], inner: Sequence[float]) -> np.ndarray:
    """Derivatives of f(g(w)) at w0 from those of f at g(w0) and of g at w0.

    ``outer[k]`` is f^{(k)}(g(w0)), ``inner[k]`` is g^{(k)}(w0); both lists
    must have the same length K + 1. Returns the first K + 1 derivatives of
    the composition.
    """
    order = len(outer) - 1
    if len(inner) != order + 1:
        raise ValueError("outer and inner derivative lists must have equal length")
    fact = np.array([math.factorial(j) for j in range(order + 1)], dtype=float)
    a = np.asarray(outer, dtype=float) / fact
    c = np.asarray(inner, dtype=float) / fact
    c[0] = 0.0
    result = np.zeros(order + 1)
    power = np.zeros(order + 1)
    power[0] = 1.0
    for i in range(order + 1):
        result += a[i] * power
        power = np.convolve(power, c)[: order + 1]
    return result * fact
