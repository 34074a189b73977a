"""Spherical Radon transform of bodies of revolution and its inversion.

With x = sin(phi) and t = cos(psi) the intersection body of L in R^n is

    rho_K(arcsin x) = 2 w_{n-2} / ((n-1) x^{n-3}) int_0^x f(t)^{n-1} (x^2 - t^2)^{(n-4)/2} dt,

w_k being the area of S^{k-1}. The substitution t = x sin(theta) gives the
form that is evaluated here,

    rho_K = 2 w_{n-2} / (n-1) int_0^{pi/2} F(x sin theta) cos^{n-3}(theta) dtheta,

with F = f^{n-1}; it is regular at x = 0, where it reduces to the pole
value kappa_{n-1} F(0).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.polynomial import Chebyshev

from .errors import AccuracyError, DomainError, SchemaError, UnsupportedError
from .profiles import (
    BodyOfRevolution,
    ChebPiece,
    ExprPiece,
    PiecewiseProfile,
    PowerPiece,
    profile_from_dict,
    profile_to_dict,
)
from .special_math import (
    DEFAULT_SPEC,
    ChebSeries,
    QuadratureSpec,
    adaptive_gauss,
    ball_volume,
    cheb_fit_adaptive,
    sphere_surface_area,
)

__all__ = [
    "GeneratingDensity",
    "TransformResult",
    "density_of",
    "transform_value",
    "intersection_body",
    "pole_value",
    "inverse_density",
    "default_grid",
]

_FIT_TOL = 1e-13


@dataclass(frozen=True)
class GeneratingDensity:
    """F (= f^{n-1} for a star body) plus Dirac atoms ``(t0, weight)``.

    The density lives in dimension ``n``: its Radon transform, scaled as in
    the intersection-body formula, is the radial function rho_K.
    """

    n: int
    F: PiecewiseProfile
    atoms: tuple = field(default=())

    def __post_init__(self):
        atoms = tuple(sorted((float(t0), float(w)) for t0, w in self.atoms))
        locs = [t0 for t0, _ in atoms]
        if any(not 0.0 < t0 < 1.0 for t0 in locs):
            raise DomainError("atom locations must lie strictly inside (0, 1)")
        if len(set(locs)) != len(locs):
            raise DomainError("atom locations must be distinct")
        object.__setattr__(self, "atoms", atoms)

    @property
    def breakpoints(self) -> tuple:
        return tuple(sorted(set(self.F.breakpoints) | {t0 for t0, _ in self.atoms}))

    def to_dict(self) -> dict:
        return {
            "dimension": self.n,
            **profile_to_dict(self.F),
            "atoms": [{"t0": t0, "weight": w} for t0, w in self.atoms],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GeneratingDensity":
        if not isinstance(data, dict) or "dimension" not in data:
            raise SchemaError("density description needs 'dimension'")
        try:
            atoms = [(float(a["t0"]), float(a["weight"])) for a in data.get("atoms", [])]
            n = int(data["dimension"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad density description: {exc}") from exc
        try:
            return cls(n, profile_from_dict(data, signed=True), tuple(atoms))
        except DomainError as exc:
            raise SchemaError(str(exc)) from exc


def density_of(L: BodyOfRevolution) -> GeneratingDensity:
    """The generating density F = f^{n-1} of a star body."""
    n = L.n
    pieces = []
    for (lo, hi), p in zip(L.profile.intervals(), L.profile.pieces):
        if isinstance(p, ExprPiece):
            pieces.append(ExprPiece(p.expr ** (n - 1)))
        elif isinstance(p, PowerPiece) and abs(p.p * (n - 1) - 1.0) < 1e-12:
            pieces.append(p.base)
        elif not isinstance(p, ChebPiece):
            pieces.append(PowerPiece(p, n - 1))
        else:
            pieces.append(_refit(lambda t, p=p: p(t) ** (n - 1), p, lo, hi))
    return GeneratingDensity(n, PiecewiseProfile(L.profile.edges, pieces, signed=True))


def _refit(func, piece: ChebPiece, lo: float, hi: float) -> ChebPiece:
    """Fit ``func`` (a function of t) in the same variable as ``piece``."""
    var = piece.var
    dlo, dhi = piece.cheb.domain
    if var == "t":
        g = func
    elif var == "s":
        g = lambda s: func(np.sqrt(np.clip(s, 0.0, None)))  # noqa: E731
    else:
        g = lambda ph: func(np.cos(ph))  # noqa: E731
    scale = float(np.max(np.abs(g(np.linspace(dlo, dhi, 33))))) or 1.0
    return ChebPiece(cheb_fit_adaptive(g, (dlo, dhi), _FIT_TOL * scale, max_degree=512), var)


def _constant(n: int) -> float:
    return 2.0 * sphere_surface_area(n - 2) / (n - 1)


def transform_value(density: GeneratingDensity, x: float, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """rho_K(arcsin x) for the density, 0 <= x <= 1, atoms included."""
    n = density.n
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x={x} outside [0, 1]")
    F = density.F
    p = n - 3
    if x == 0.0:
        return pole_value_of(density)

    def h(theta):
        c = np.cos(theta)
        return F(x * np.sin(theta)) * (c**p if p else 1.0)

    breaks = [math.asin(b / x) for b in F.breakpoints if b < x]
    value = adaptive_gauss(h, 0.0, math.pi / 2, breaks, spec)
    for t0, w in density.atoms:
        if t0 < x:
            value += w * (x * x - t0 * t0) ** ((n - 4) / 2) / x ** (n - 3)
    return _constant(n) * value


def pole_value_of(density: GeneratingDensity) -> float:
    return ball_volume(density.n - 1) * density.F.eval(0.0, "right")


def pole_value(L: BodyOfRevolution) -> float:
    """rho_K at phi = 0: kappa_{n-1} f(0)^{n-1}."""
    if L.n < 4:
        raise DomainError("the pole formula needs n >= 4")
    return ball_volume(L.n - 1) * L.profile.eval(0.0, "right") ** (L.n - 1)


def default_grid(count: int = 200, breakpoints: Sequence[float] = ()) -> np.ndarray:
    """``count`` uniform x values in (0, 1] plus the breakpoint images."""
    x = np.linspace(1.0 / count, 1.0, count)
    return np.unique(np.concatenate([x, np.asarray(list(breakpoints), dtype=float)]))


@dataclass(frozen=True)
class TransformResult:
    """Samples of rho_K on an x-grid and the fitted body K.

    ``body.profile`` is piecewise Chebyshev in the angle phi with
    breakpoints at the images of the generator's breakpoints.
    """

    x: np.ndarray
    values: np.ndarray
    body: BodyOfRevolution
    density: GeneratingDensity

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.body.profile(np.sqrt(np.clip(1.0 - x * x, 0.0, 1.0)))

    @property
    def phi(self) -> np.ndarray:
        return np.arcsin(self.x)


def transform_body(
    density: GeneratingDensity,
    spec: QuadratureSpec = DEFAULT_SPEC,
    name: str = "K",
    max_degree: int = 256,
) -> BodyOfRevolution:
    """Fit rho_K piecewise in phi; breakpoints where x hits a density breakpoint."""
    n = density.n
    spec = _inner_spec(spec)
    x_breaks = [b for b in density.breakpoints if 0.0 < b < 1.0]
    phi_edges = [0.0] + [math.asin(b) for b in x_breaks] + [math.pi / 2]

    def rho_of_phi(phi):
        phi = np.atleast_1d(phi)
        return np.array([transform_value(density, min(1.0, math.sin(p)), spec) for p in phi])

    t_edges = []
    pieces = []
    for lo, hi in zip(phi_edges[:-1], phi_edges[1:]):
        scale = float(np.max(np.abs(rho_of_phi(np.linspace(lo, hi, 5))))) or 1.0
        try:
            ser = cheb_fit_adaptive(rho_of_phi, (lo, hi), _FIT_TOL * scale, max_degree=max_degree)
        except AccuracyError:
            ser = cheb_fit_adaptive(rho_of_phi, (lo, hi), 1e-9 * scale, max_degree=max_degree)
        pieces.append(ChebPiece(ser, "phi"))
        t_edges.append(math.cos(hi) if hi < math.pi / 2 else 0.0)
    # phi increases while t decreases: reverse into t order
    t_edges = [0.0] + sorted(t_edges[:-1]) + [1.0]
    pieces = pieces[::-1]
    profile = PiecewiseProfile(tuple(t_edges), tuple(pieces))
    return BodyOfRevolution(n, profile, name)


def intersection_body(
    L: BodyOfRevolution | GeneratingDensity,
    spec: QuadratureSpec = DEFAULT_SPEC,
    grid: Sequence[float] | None = None,
) -> TransformResult:
    """Intersection body of ``L`` (or Radon image of a density).

    Returns exact quadrature samples on ``grid`` (default
    :func:`default_grid`) together with a piecewise Chebyshev body.

    Raises
    ------
    AccuracyError
        If a grid point's quadrature fails; ``where`` holds that point.
    """
    density = L if isinstance(L, GeneratingDensity) else density_of(L)
    name = f"I({L.name})" if isinstance(L, BodyOfRevolution) else "K"
    if density.n < 4:
        raise DomainError("intersection bodies of revolution need n >= 4")
    if isinstance(L, BodyOfRevolution):
        vals = L.profile(L.profile.sample_points(16))
        if np.any(vals <= 0):
            raise DomainError("generator profile must be positive")
    x = default_grid(200, density.breakpoints) if grid is None else np.asarray(grid, dtype=float)
    if np.any(x <= 0) or np.any(x > 1) or np.any(np.diff(x) <= 0):
        raise DomainError("grid must be sorted values in (0, 1]")
    values = np.empty_like(x)
    for i, xi in enumerate(x):
        try:
            values[i] = transform_value(density, float(xi), spec)
        except AccuracyError as exc:
            raise AccuracyError(f"forward transform failed at x={xi}: {exc}", exc.estimate, where=float(xi)) from exc
    body = transform_body(density, spec, name)
    return TransformResult(x, values, body, density)


# ---------------------------------------------------------------------------
# inversion


def _inner_spec(spec: QuadratureSpec) -> QuadratureSpec:
    return QuadratureSpec(spec.panel_nodes, min(spec.abs_tol, 1e-15), min(spec.rel_tol, 1e-14), max(spec.max_panels, 1024))


def _fit_piece(func, domain, rel_tol, degree) -> ChebSeries:
    lo, hi = domain
    scale = float(np.max(np.abs(func(np.linspace(lo, hi, 5))))) or 1.0
    try:
        return cheb_fit_adaptive(func, domain, rel_tol * scale, max_degree=degree)
    except AccuracyError as exc:
        raise AccuracyError(
            f"rho_K is not resolved on [{lo:.4g}, {hi:.4g}] at degree {degree}; "
            f"increase the degree or check that rho_K is piecewise smooth",
            exc.estimate,
            where=(lo, hi),
        ) from exc


def _pole_piece(base, lo, n, steps, const, degree, rel_tol=1e-11) -> ChebPiece:
    """Invert on [lo, 1] when the generator has a non-smooth (e.g. conical) pole.

    There f^{n-1} = alpha(s) + sqrt(1 - s) beta(s), so
    base = A(s) + (1 - s)^{(n-1)/2} B(s) with A, B smooth. Both parts are
    fitted jointly by least squares and the operators Q -> a Q + s Q' are
    applied to (A, B) exactly, which avoids dividing by sqrt(1 - s).
    """
    p = (n - 1) / 2
    d = 8
    best = None
    while d <= degree // 2:
        m = 4 * d
        x = np.cos(np.pi * (np.arange(m) + 0.5) / m)
        sv = lo + 0.5 * (1.0 - lo) * (x + 1.0)
        V = np.polynomial.chebyshev.chebvander(x, d)
        W = ((1.0 - sv) ** p)[:, None] * V
        y = base(sv)
        coef, *_ = np.linalg.lstsq(np.hstack([V, W]), y, rcond=None)
        scale = float(np.max(np.abs(y))) or 1.0
        xc = np.linspace(-1.0, 1.0, 8 * d + 1)
        sc = lo + 0.5 * (1.0 - lo) * (xc + 1.0)
        fit = np.polynomial.chebyshev.chebval(xc, coef[: d + 1]) + (1.0 - sc) ** p * np.polynomial.chebyshev.chebval(xc, coef[d + 1 :])
        err = float(np.max(np.abs(fit - base(sc))))
        best = (coef, d, err)
        if err <= rel_tol * scale:
            break
        d *= 2
    coef, d, err = best
    if err > 1e-8 * scale:
        raise AccuracyError(f"rho_K is not resolved near the equator of K (error {err:.3g})", err, where=(lo, 1.0))
    dom = [lo, 1.0]
    A = Chebyshev(coef[: d + 1], domain=dom)
    B = Chebyshev(coef[d + 1 :], domain=dom)
    s_var = Chebyshev.identity(domain=dom)
    for a in steps:
        A, B, p = a * A + s_var * A.deriv(), (1.0 - s_var) * (a * B + s_var * B.deriv()) - p * s_var * B, p - 1
    # p is now 1/2: F = A(s) + u B(s), a polynomial of degree 2d + 1 in u = sqrt(1 - s)
    u_hi = math.sqrt(1.0 - lo)

    def F(u):
        sv = 1.0 - u * u
        return const * (A(sv) + u * B(sv))

    ser = Chebyshev.interpolate(F, 2 * d + 1, domain=[0.0, u_hi])
    growth = float(d) ** (2 * len(steps))
    return ChebPiece(ChebSeries(ser, err * const * growth), "u")


def inverse_density(
    K: BodyOfRevolution,
    degree: int | None = None,
    spec: QuadratureSpec = DEFAULT_SPEC,
    method: str = "direct",
) -> GeneratingDensity:
    """Invert the intersection-body transform for even n.

    The printed inversion is multiplied by (n - 1) so that
    ``intersection_body`` of the output reproduces rho_K. Two routes:

    ``"direct"`` (default)
        With s = t^2 and k = (n-4)/2 the inner integral is
        (1/2) int_0^s rho_K(sqrt sigma) sigma^{(n-3)/2} (s - sigma)^k dsigma,
        so its first k + 1 s-derivatives are exact. What is left is
        n/2 - 1 applications of Q -> (k + 1/2 - i) Q + s Q' to
        Q_0(s) = rho_K(sqrt s) / 2, done spectrally on piecewise Chebyshev
        fits in s.
    ``"integral"``
        Evaluates H(t) = t^{2n-5} J(t^2) by quadrature and applies all
        n - 2 operators (1/t d/dt) as J -> a J + 2 s J', a = 2n-5, ..., 1.
        Much more sensitive to fitting noise; kept as an independent check.

    ``degree`` caps the Chebyshev degree per piece (default 256 for
    n <= 6, 512 above).

    Raises
    ------
    UnsupportedError
        For odd n.
    DomainError
        For n outside 4..10.
    AccuracyError
        If a piece cannot be resolved within ``degree``.
    """
    n = K.n
    if n % 2:
        raise UnsupportedError("inversion is implemented for even dimensions only")
    if not 4 <= n <= 10:
        raise DomainError(f"inversion supports 4 <= n <= 10, got {n}")
    if method not in ("direct", "integral"):
        raise ValueError(f"unknown inversion method {method!r}")
    if degree is None:
        degree = 256 if n <= 6 else 512
    prof = K.profile

    def rho_of_x(x):
        return prof(np.sqrt(np.clip(1.0 - x * x, 0.0, 1.0)))

    x_breaks = sorted(math.sqrt(max(0.0, 1.0 - b * b)) for b in prof.breakpoints)
    x_breaks = [b for b in x_breaks if 0.0 < b < 1.0]
    s_edges = [0.0] + [b * b for b in x_breaks] + [1.0]
    k = (n - 4) // 2
    const = (n - 1) / (math.factorial(n - 3) * sphere_surface_area(n - 1))

    if method == "direct":
        const *= 2.0 ** (n - 2) * math.factorial(k)

        def base(s):
            return 0.5 * rho_of_x(np.sqrt(np.clip(s, 0.0, 1.0)))

        steps = [k + 0.5 - i for i in range(n // 2 - 1)]
        s_factor = 1.0
        fit_tol = 1e-13
    else:
        inner = _inner_spec(spec)
        p_sin, p_cos = n - 2, n - 3

        def base(s):
            out = []
            for si in np.atleast_1d(s):
                t = math.sqrt(max(si, 0.0))

                def h(theta, t=t):
                    return rho_of_x(t * np.sin(theta)) * np.sin(theta) ** p_sin * np.cos(theta) ** p_cos

                breaks = [math.asin(b / t) for b in x_breaks if b < t]
                out.append(adaptive_gauss(h, 0.0, math.pi / 2, breaks, inner))
            return np.array(out)

        steps = list(range(2 * n - 5, 0, -2))
        s_factor = 2.0
        fit_tol = 1e-13

    def s_piece(lo, hi):
        ser = _fit_piece(base, (lo, hi), fit_tol, degree)
        cur = ser.series
        s_var = type(cur).identity(domain=cur.domain)
        for a in steps:
            cur = a * cur + s_factor * s_var * cur.deriv()
        tol = ser.deriv(len(steps)).tol if steps else ser.tol
        return ChebPiece(ChebSeries(const * cur, tol * const), "s")

    def t_piece(hi):
        # an equator edge of L puts odd powers of t into F; in t = sqrt(s)
        # those are smooth and s d/ds = (t/2) d/dt stays regular
        ser = _fit_piece(lambda t: base(t * t), (0.0, math.sqrt(hi)), fit_tol, degree)
        cur = ser.series
        t_var = type(cur).identity(domain=cur.domain)
        for a in steps:
            cur = a * cur + 0.5 * t_var * cur.deriv()
        tol = ser.deriv(len(steps)).tol if steps else ser.tol
        return ChebPiece(ChebSeries(const * cur, tol * const), "t")

    def invert_on(lo, hi):
        try:
            return [s_piece(lo, hi)]
        except AccuracyError:
            if method != "direct":
                raise
        if lo == 0.0 and hi == 1.0:
            return invert_on(0.0, 0.5) + invert_on(0.5, 1.0)
        if lo == 0.0:
            return [t_piece(hi)]
        if hi == 1.0:
            return [_pole_piece(base, lo, n, steps, const, degree)]
        raise AccuracyError(f"rho_K is not resolved on s in [{lo:.4g}, {hi:.4g}]", where=(lo, hi))

    pieces = []
    new_edges = [0.0]
    for lo, hi in zip(s_edges[:-1], s_edges[1:]):
        got = invert_on(lo, hi)
        if len(got) == 2:
            new_edges.append(0.5)
        pieces.extend(got)
        new_edges.append(hi)
    s_edges = new_edges
    t_edges = tuple(math.sqrt(s) for s in s_edges)
    return GeneratingDensity(n, PiecewiseProfile(t_edges, tuple(pieces), signed=True))
