"""Piecewise-analytic radial profiles of bodies of revolution.

A profile is stored in the variable t = cos(angle from the axis), so
f(t) = rho(arccos t) on [0, 1]; t = 1 is the pole (on the axis) and t = 0
the equator. Pieces are either closed-form sympy expressions
(:class:`ExprPiece`) or Chebyshev fits produced by the transforms
(:class:`ChebPiece`); both expose the same small interface, so every
algorithm downstream is agnostic to where a profile came from.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence, Union

import numpy as np
import sympy as sp
from numpy.polynomial import Chebyshev

from . import expr as ex
from .errors import DomainError, SchemaError, UnsupportedError
from .special_math import ChebSeries, cheb_fit_adaptive, compose_derivatives

__all__ = [
    "ExprPiece",
    "ChebPiece",
    "PiecewiseProfile",
    "BodyOfRevolution",
    "from_phi",
    "from_t",
    "eval_profile",
    "derivative",
    "jump",
    "profile_to_dict",
    "profile_from_dict",
    "body_to_dict",
    "body_from_dict",
    "load_body",
]

MAX_ORDER = 8
_EDGE_TOL = 1e-13


def _as_array(values, like):
    out = np.asarray(values, dtype=float)
    if out.shape != np.shape(like):
        out = np.broadcast_to(out, np.shape(like)).copy()
    return out


# ---------------------------------------------------------------------------
# derivatives of the coordinate changes


@lru_cache(maxsize=None)
def _acos_derivs_fn(order: int):
    fns = [sp.lambdify(ex.T, sp.diff(sp.acos(ex.T), ex.T, k), "numpy") for k in range(order + 1)]
    return fns


@lru_cache(maxsize=None)
def _sqrt1m_derivs_fn(order: int):
    u = sp.sqrt(1 - ex.T**2)
    return [sp.lambdify(ex.T, sp.diff(u, ex.T, k), "numpy") for k in range(order + 1)]


def _inner_wrt_t(var: str, t0: float, order: int) -> np.ndarray:
    """Derivatives of the piece variable in t.

    The variable is t, s = t^2, phi = arccos t or u = sqrt(1 - t^2).
    """
    d = np.zeros(order + 1)
    if var == "t":
        d[0] = t0
        if order >= 1:
            d[1] = 1.0
    elif var == "s":
        d[0] = t0 * t0
        if order >= 1:
            d[1] = 2.0 * t0
        if order >= 2:
            d[2] = 2.0
    elif var == "phi":
        d[:] = [float(f(t0)) for f in _acos_derivs_fn(order)]
    elif var == "u":
        with np.errstate(all="ignore"):
            d[:] = [float(f(t0)) for f in _sqrt1m_derivs_fn(order)]
    else:
        raise ValueError(var)
    return d


def _cos_derivs(w0: float, order: int, freq: float = 1.0) -> np.ndarray:
    cyc = [math.cos(freq * w0), -math.sin(freq * w0), -math.cos(freq * w0), math.sin(freq * w0)]
    return np.array([cyc[k % 4] * freq**k for k in range(order + 1)])


def _inner_wrt_phi(var: str, phi0: float, order: int) -> np.ndarray:
    if var == "phi":
        d = np.zeros(order + 1)
        d[0] = phi0
        if order >= 1:
            d[1] = 1.0
        return d
    if var == "t":
        return _cos_derivs(phi0, order)
    if var == "s":
        # cos^2 = (1 + cos 2 phi) / 2
        d = 0.5 * _cos_derivs(phi0, order, 2.0)
        d[0] += 0.5
        return d
    if var == "u":
        return _cos_derivs(phi0 - math.pi / 2, order)
    raise ValueError(var)


_VARS = ("t", "s", "phi", "u")


def _to_var(var: str, t):
    if var == "t":
        return t
    if var == "s":
        return t * t
    if var == "phi":
        return np.arccos(np.clip(t, -1.0, 1.0))
    if var == "u":
        return np.sqrt(np.clip(1.0 - t * t, 0.0, None))
    raise ValueError(var)


# ---------------------------------------------------------------------------
# pieces


@dataclass(frozen=True, eq=False)
class ExprPiece:
    """A closed-form piece f(t) with exact symbolic derivatives."""

    expr: sp.Expr
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def parse(cls, text: str) -> "ExprPiece":
        return cls(ex.parse(text, "t"))

    def _fn(self, k: int):
        key = ("t", k)
        if key not in self._cache:
            self._cache[key] = sp.lambdify(ex.T, sp.diff(self.expr, ex.T, k) if k else self.expr, "numpy")
        return self._cache[key]

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(all="ignore"):
            return _as_array(self._fn(0)(t), t)

    def derivs(self, t0: float, order: int) -> np.ndarray:
        with np.errstate(all="ignore"):
            return np.array([float(self._fn(k)(float(t0))) for k in range(order + 1)])

    def phi_derivs(self, phi0: float, order: int) -> np.ndarray:
        key = ("phi", order)
        if key not in self._cache:
            g = ex.t_to_angle(self.expr)
            self._cache[key] = [sp.lambdify(ex.PHI, sp.diff(g, ex.PHI, k) if k else g, "numpy") for k in range(order + 1)]
        with np.errstate(all="ignore"):
            vals = np.array([float(f(float(phi0))) for f in self._cache[key]])
        if np.all(np.isfinite(vals)):
            return vals
        return compose_derivatives(self.derivs(math.cos(phi0), order), _inner_wrt_phi("t", phi0, order))

    def derivative(self, k: int = 1) -> "ExprPiece":
        return ExprPiece(sp.diff(self.expr, ex.T, k))

    def deriv_error(self, order: int, scale: float) -> float:
        return 1e-9 * max(1.0, scale)

    def text(self) -> str:
        return ex.to_text(self.expr)

    def scaled(self, c) -> "ExprPiece":
        return ExprPiece(sp.sympify(c) * self.expr)

    def map_expr(self, func) -> "ExprPiece":
        return ExprPiece(func(self.expr))

    def to_dict(self, lo, hi) -> dict:
        return {"from": lo, "to": hi, "expr": self.text()}


@dataclass(frozen=True, eq=False)
class ChebPiece:
    """A numerical piece: a Chebyshev series in one of the variables
    t, s = t^2, phi = arccos t or u = sqrt(1 - t^2)."""

    cheb: ChebSeries
    var: str = "t"

    def __post_init__(self):
        if self.var not in _VARS:
            raise SchemaError(f"unknown piece variable {self.var!r}")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return _as_array(self.cheb(_to_var(self.var, t)), t)

    def _own_derivs(self, v0: float, order: int) -> np.ndarray:
        out = [float(self.cheb(v0))]
        ser = self.cheb.series
        for _ in range(order):
            ser = ser.deriv()
            out.append(float(ser(v0)))
        return np.array(out)

    def derivs(self, t0: float, order: int) -> np.ndarray:
        v0 = float(_to_var(self.var, np.float64(t0)))
        own = self._own_derivs(v0, order)
        if self.var == "t":
            return own
        return compose_derivatives(own, _inner_wrt_t(self.var, t0, order))

    def phi_derivs(self, phi0: float, order: int) -> np.ndarray:
        if self.var == "phi":
            return self._own_derivs(phi0, order)
        v0 = {"t": math.cos(phi0), "s": math.cos(phi0) ** 2, "u": math.sin(phi0)}[self.var]
        return compose_derivatives(self._own_derivs(v0, order), _inner_wrt_phi(self.var, phi0, order))

    def deriv_error(self, order: int, scale: float) -> float:
        lo, hi = self.cheb.domain
        deg = max(self.cheb.degree, 1)
        growth = 1.0
        for j in range(order):
            growth *= (deg * deg - j * j) / (2 * j + 1) * 2.0 / (hi - lo)
        if self.var != "t":
            growth *= 4.0**order
        return max(self.cheb.tol, 1e-15 * max(1.0, scale)) * max(growth, 1.0) * 10.0

    def in_t(self, lo: float, hi: float, tol: float = 1e-12) -> "ChebPiece":
        """Refit this piece as a series in t on [lo, hi]."""
        if self.var == "t":
            return self
        scale = float(np.max(np.abs(self(np.linspace(lo, hi, 33))))) or 1.0
        return ChebPiece(cheb_fit_adaptive(self, (lo, hi), tol * scale, max_degree=512), "t")

    def derivative(self, k: int = 1, lo: float = 0.0, hi: float = 1.0) -> "ChebPiece":
        base = self.in_t(lo, hi)
        return ChebPiece(base.cheb.deriv(k), "t")

    def scaled(self, c: float) -> "ChebPiece":
        return ChebPiece(ChebSeries(self.cheb.series * c, self.cheb.tol * abs(c)), self.var)

    def to_dict(self, lo, hi) -> dict:
        dlo, dhi = self.cheb.domain
        return {
            "from": lo,
            "to": hi,
            "cheb": {"var": self.var, "domain": [dlo, dhi], "coef": [float(c) for c in self.cheb.coefficients], "tol": self.cheb.tol},
        }


def _first_derivative(piece, t: np.ndarray) -> np.ndarray:
    """Vectorised f'(t) for any piece type (NaN/inf where it blows up)."""
    if isinstance(piece, ExprPiece):
        with np.errstate(all="ignore"):
            return _as_array(piece._fn(1)(t), t)
    if isinstance(piece, ChebPiece):
        v = _to_var(piece.var, t)
        d = piece.cheb.series.deriv()(v)
        with np.errstate(all="ignore"):
            if piece.var == "s":
                return d * 2.0 * t
            if piece.var == "phi":
                return -d / np.sqrt(1.0 - t * t)
            if piece.var == "u":
                return -d * t / v
        return d
    return np.array([piece.derivs(float(ti), 1)[1] for ti in np.ravel(t)]).reshape(np.shape(t))


@dataclass(frozen=True, eq=False)
class LiftedPiece:
    """factor * (F + t F' / (n - 1)) for a numerical piece F.

    Used when lifting numerically inverted densities, whose t-derivative
    may blow up at the pole (F = alpha(t^2) + sqrt(1 - t^2) beta(t^2) for
    a conical generator), so no polynomial refit is attempted.
    """

    base: object
    n: int
    factor: float = 1.0

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(all="ignore"):
            out = self.factor * (self.base(t) + t * _first_derivative(self.base, t) / (self.n - 1))
        return _as_array(out, t)

    def derivs(self, t0: float, order: int) -> np.ndarray:
        b = self.base.derivs(t0, order + 1)
        k = np.arange(order + 1)
        return self.factor * (b[:-1] + (t0 * b[1:] + k * b[:-1]) / (self.n - 1))

    def phi_derivs(self, phi0: float, order: int) -> np.ndarray:
        return compose_derivatives(self.derivs(math.cos(phi0), order), _inner_wrt_phi("t", phi0, order))

    def deriv_error(self, order: int, scale: float) -> float:
        return abs(self.factor) * 2.0 * self.base.deriv_error(order + 1, scale)

    def derivative(self, k: int = 1, lo: float = 0.0, hi: float = 1.0) -> "DerivativePiece":
        return DerivativePiece(self, k)

    def scaled(self, c: float) -> "LiftedPiece":
        return LiftedPiece(self.base, self.n, self.factor * c)

    def to_dict(self, lo, hi) -> dict:
        inner = self.base.to_dict(lo, hi)
        inner.pop("from", None)
        inner.pop("to", None)
        return {"from": lo, "to": hi, "lift": {"dimension": self.n, "factor": self.factor, "of": inner}}


@dataclass(frozen=True, eq=False)
class DerivativePiece:
    """The k-th t-derivative of another piece."""

    base: object
    k: int = 1

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.array([self.base.derivs(float(ti), self.k)[self.k] for ti in np.ravel(t)])
        return _as_array(out.reshape(t.shape), t)

    def derivs(self, t0: float, order: int) -> np.ndarray:
        return self.base.derivs(t0, order + self.k)[self.k :]

    def phi_derivs(self, phi0: float, order: int) -> np.ndarray:
        return compose_derivatives(self.derivs(math.cos(phi0), order), _inner_wrt_phi("t", phi0, order))

    def deriv_error(self, order: int, scale: float) -> float:
        return self.base.deriv_error(order + self.k, scale)

    def derivative(self, k: int = 1, lo: float = 0.0, hi: float = 1.0) -> "DerivativePiece":
        return DerivativePiece(self.base, self.k + k)

    def scaled(self, c: float):
        raise UnsupportedError("scaling a derivative piece is not supported")

    def to_dict(self, lo, hi) -> dict:
        raise UnsupportedError("derivative pieces are not serialisable")


@dataclass(frozen=True, eq=False)
class PowerPiece:
    """base(t) ** p for a positive numerical piece (generators of densities)."""

    base: object
    p: float

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(all="ignore"):
            return _as_array(np.asarray(self.base(t)) ** self.p, t)

    def derivs(self, t0: float, order: int) -> np.ndarray:
        b = self.base.derivs(t0, order)
        outer = np.empty(order + 1)
        c = 1.0
        for k in range(order + 1):
            outer[k] = c * b[0] ** (self.p - k)
            c *= self.p - k
        return compose_derivatives(outer, b)

    def phi_derivs(self, phi0: float, order: int) -> np.ndarray:
        return compose_derivatives(self.derivs(math.cos(phi0), order), _inner_wrt_phi("t", phi0, order))

    def deriv_error(self, order: int, scale: float) -> float:
        return max(1.0, abs(self.p)) * self.base.deriv_error(order, scale)

    def derivative(self, k: int = 1, lo: float = 0.0, hi: float = 1.0) -> DerivativePiece:
        return DerivativePiece(self, k)

    def scaled(self, c: float):
        raise UnsupportedError("scaling a power piece is not supported")

    def to_dict(self, lo, hi) -> dict:
        inner = self.base.to_dict(lo, hi)
        inner.pop("from", None)
        inner.pop("to", None)
        return {"from": lo, "to": hi, "power": {"exponent": self.p, "of": inner}}


Piece = Union[ExprPiece, ChebPiece, LiftedPiece, DerivativePiece, PowerPiece]
_PIECE_TYPES = (ExprPiece, ChebPiece, LiftedPiece, DerivativePiece, PowerPiece)


# ---------------------------------------------------------------------------
# profiles


@dataclass(frozen=True)
class PiecewiseProfile:
    """Pieces tiling [0, 1] in t, with declared interior breakpoints.

    ``edges`` is 0 = e_0 < e_1 < ... < e_k = 1 and ``pieces[i]`` lives on
    [e_i, e_{i+1}). ``signed`` marks generating densities, which may be
    negative or discontinuous.
    """

    edges: tuple
    pieces: tuple
    signed: bool = False

    def __post_init__(self):
        edges = tuple(float(e) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if len(edges) != len(self.pieces) + 1 or len(self.pieces) == 0:
            raise SchemaError("need exactly one more edge than pieces")
        if abs(edges[0]) > _EDGE_TOL or abs(edges[-1] - 1.0) > _EDGE_TOL:
            raise SchemaError(f"pieces must tile [0, 1], got edges {edges}")
        if any(b <= a for a, b in zip(edges[:-1], edges[1:])):
            raise SchemaError(f"edges must be strictly increasing: {edges}")

    @property
    def breakpoints(self) -> tuple:
        return self.edges[1:-1]

    def intervals(self):
        return list(zip(self.edges[:-1], self.edges[1:]))

    def index(self, t: float, side: str = "right") -> int:
        if t < -_EDGE_TOL or t > 1 + _EDGE_TOL:
            raise DomainError(f"t={t} outside [0, 1]")
        i = int(np.searchsorted(self.edges, t, side="right")) - 1
        i = min(max(i, 0), len(self.pieces) - 1)
        # snap to an edge a few ulps away
        if i + 1 < len(self.pieces) and abs(t - self.edges[i + 1]) <= _EDGE_TOL:
            i += 1
        if side == "left" and i > 0 and abs(t - self.edges[i]) <= _EDGE_TOL:
            i -= 1
        return i

    def is_breakpoint(self, t: float) -> bool:
        return any(abs(t - b) <= _EDGE_TOL for b in self.breakpoints)

    def __call__(self, t):
        """Vectorised, right-continuous evaluation (t = 1 uses the last piece)."""
        t = np.asarray(t, dtype=float)
        if np.any((t < -_EDGE_TOL) | (t > 1 + _EDGE_TOL)):
            raise DomainError("t outside [0, 1]")
        idx = np.clip(np.searchsorted(self.edges, t, side="right") - 1, 0, len(self.pieces) - 1)
        out = np.empty(t.shape, dtype=float)
        for i, piece in enumerate(self.pieces):
            mask = idx == i
            if np.any(mask):
                out[mask] = piece(t[mask])
        return out

    def eval(self, t: float, side: str = "either") -> float:
        if side not in ("left", "right", "either"):
            raise ValueError(f"side must be left/right/either, got {side!r}")
        if t < -_EDGE_TOL or t > 1 + _EDGE_TOL:
            raise DomainError(f"t={t} outside [0, 1]")
        if side == "either" and self.is_breakpoint(t):
            raise DomainError(f"t={t} is a breakpoint; choose side='left' or 'right'")
        i = self.index(t, "left" if side == "left" else "right")
        return float(self.pieces[i](np.float64(t)))

    def derivs(self, t: float, order: int, side: str = "right") -> np.ndarray:
        """One-sided t-derivatives 0..order at t from the active piece."""
        return self.pieces[self.index(t, side)].derivs(t, order)

    def jump(self, t0: float, order: int = 0) -> float:
        if not self.is_breakpoint(t0):
            raise DomainError(f"{t0} is not a declared breakpoint")
        left = self.pieces[self.index(t0, "left")].derivs(t0, order)[order]
        right = self.pieces[self.index(t0, "right")].derivs(t0, order)[order]
        return float(right - left)

    def jump_is_zero(self, t0: float, order: int) -> bool:
        if not self.is_breakpoint(t0):
            raise DomainError(f"{t0} is not a declared breakpoint")
        i = self.index(t0, "right")
        left = self.pieces[i - 1].derivs(t0, order)[order]
        right = self.pieces[i].derivs(t0, order)[order]
        scale = max(abs(left), abs(right), 1.0)
        tol = max(self.pieces[i - 1].deriv_error(order, scale), self.pieces[i].deriv_error(order, scale))
        return abs(right - left) <= tol

    def derivative(self, order: int = 1) -> "PiecewiseProfile":
        pieces = []
        for (lo, hi), piece in zip(self.intervals(), self.pieces):
            if isinstance(piece, ExprPiece):
                pieces.append(piece.derivative(order))
            else:
                pieces.append(piece.derivative(order, lo, hi))
        return PiecewiseProfile(self.edges, pieces, signed=True)

    def scaled(self, factor: float) -> "PiecewiseProfile":
        pieces = []
        for piece in self.pieces:
            pieces.append(piece.scaled(factor))
        return PiecewiseProfile(self.edges, pieces, self.signed)

    def sample_points(self, per_piece: int = 64, inset: float = 0.0) -> np.ndarray:
        """Chebyshev-distributed interior sample points of every piece."""
        out = []
        k = np.arange(per_piece)
        u = np.cos(np.pi * (k + 0.5) / per_piece)
        for lo, hi in self.intervals():
            a, b = lo + inset, hi - inset
            if b > a:
                out.append(0.5 * (a + b) + 0.5 * (b - a) * u)
        return np.sort(np.concatenate(out))

    @property
    def is_symbolic(self) -> bool:
        return all(isinstance(p, ExprPiece) for p in self.pieces)


def from_t(pieces: Sequence[tuple], signed: bool = False) -> PiecewiseProfile:
    """Build a profile from ``(t_from, t_to, expression)`` triples."""
    items = []
    for lo, hi, e in pieces:
        lo, hi = ex.parse_number(lo), ex.parse_number(hi)
        piece = e if isinstance(e, _PIECE_TYPES) else ExprPiece(ex.parse(e, "t") if isinstance(e, str) else sp.sympify(e))
        items.append((lo, hi, piece))
    return _assemble(items, signed)


def _assemble(items, signed):
    items = sorted(items, key=lambda it: it[0])
    edges = [items[0][0]]
    for (lo, hi, _), nxt in zip(items, items[1:] + [None]):
        if hi <= lo:
            raise SchemaError(f"empty piece [{lo}, {hi}]")
        if nxt is not None and abs(nxt[0] - hi) > 1e-12:
            raise SchemaError(f"pieces do not tile: gap or overlap at {hi} / {nxt[0]}")
        edges.append(hi)
    if abs(edges[0]) > 1e-12 or abs(edges[-1] - 1.0) > 1e-12:
        raise SchemaError(f"pieces must cover [0, 1] in t, got [{edges[0]}, {edges[-1]}]")
    edges[0], edges[-1] = 0.0, 1.0
    return PiecewiseProfile(tuple(edges), tuple(p for _, _, p in items), signed)


def from_phi(pieces: Sequence[tuple], signed: bool = False) -> PiecewiseProfile:
    """Build a t-profile from ``(angle_from, angle_to, formula)`` triples.

    The formula is in ``phi`` (or ``psi``), the angle from the axis; the
    pieces must cover [0, pi/2]. An angle interval [a, b] becomes the
    t-interval [cos b, cos a].
    """
    items = []
    for lo, hi, e in pieces:
        a, b = ex.parse_number(lo), ex.parse_number(hi)
        if b <= a:
            raise SchemaError(f"empty angle piece [{lo}, {hi}]")
        g = ex.parse(e, "phi") if isinstance(e, str) else sp.sympify(e)
        t_lo, t_hi = math.cos(b), math.cos(a)
        if abs(t_lo) < 1e-15:
            t_lo = 0.0
        items.append((t_lo, t_hi, ExprPiece(ex.angle_to_t(g))))
    covered = sorted((ex.parse_number(lo), ex.parse_number(hi)) for lo, hi, _ in pieces)
    if abs(covered[0][0]) > 1e-12 or abs(covered[-1][1] - math.pi / 2) > 1e-12:
        raise SchemaError("angle pieces must cover [0, pi/2]")
    return _assemble(items, signed)


def eval_profile(profile: PiecewiseProfile, t: float, side: str = "either") -> float:
    return profile.eval(t, side)


def derivative(profile: PiecewiseProfile, order: int = 1) -> PiecewiseProfile:
    if not 1 <= order <= MAX_ORDER:
        raise DomainError(f"derivative order must be in 1..{MAX_ORDER}")
    return profile.derivative(order)


def jump(profile: PiecewiseProfile, t0: float, order: int = 0) -> float:
    return profile.jump(t0, order)


# ---------------------------------------------------------------------------
# bodies


@dataclass(frozen=True)
class BodyOfRevolution:
    """A star body of revolution in R^n given by its t-profile."""

    n: int
    profile: PiecewiseProfile
    name: str = "body"

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 3:
            raise DomainError(f"dimension must be an integer >= 3, got {self.n}")
        if not self.profile.signed:
            vals = self.profile(self.profile.sample_points(16))
            if np.any(~np.isfinite(vals)) or np.any(vals <= 0):
                raise DomainError(f"profile of {self.name!r} is not strictly positive")

    def with_dimension(self, n: int) -> "BodyOfRevolution":
        return BodyOfRevolution(n, self.profile, self.name)

    def radial(self, phi):
        """rho(phi) for angles in [0, pi/2]."""
        return self.profile(np.cos(np.asarray(phi, dtype=float)))


# ---------------------------------------------------------------------------
# JSON


def profile_to_dict(profile: PiecewiseProfile) -> dict:
    return {
        "parametrization": "t",
        "pieces": [p.to_dict(lo, hi) for (lo, hi), p in zip(profile.intervals(), profile.pieces)],
    }


def _piece_from_dict(item: dict, param: str):
    if "expr" in item:
        return item["expr"]
    if "cheb" in item:
        if param != "t":
            raise SchemaError("numerical pieces must use the t parametrization")
        c = item["cheb"]
        try:
            ser = Chebyshev(np.asarray(c["coef"], dtype=float), domain=list(map(float, c["domain"])))
            return ChebPiece(ChebSeries(ser, float(c.get("tol", 0.0))), c.get("var", "t"))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad numerical piece: {exc}") from exc
    if "lift" in item:
        if param != "t":
            raise SchemaError("numerical pieces must use the t parametrization")
        c = item["lift"]
        try:
            base = _piece_from_dict(c["of"], param)
            if isinstance(base, str):
                base = ExprPiece.parse(base)
            return LiftedPiece(base, int(c["dimension"]), float(c.get("factor", 1.0)))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad lifted piece: {exc}") from exc
    if "power" in item:
        c = item["power"]
        try:
            base = _piece_from_dict(c["of"], param)
            if isinstance(base, str):
                base = ExprPiece.parse(base)
            return PowerPiece(base, float(c["exponent"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError(f"bad power piece: {exc}") from exc
    raise SchemaError("each piece needs an 'expr' (or 'cheb') entry")


def profile_from_dict(data: dict, signed: bool = False) -> PiecewiseProfile:
    if not isinstance(data, dict) or "pieces" not in data:
        raise SchemaError("profile description needs a 'pieces' list")
    param = data.get("parametrization", "t")
    if param not in ("t", "phi"):
        raise SchemaError(f"parametrization must be 't' or 'phi', got {param!r}")
    pieces = data["pieces"]
    if not isinstance(pieces, list) or not pieces:
        raise SchemaError("'pieces' must be a non-empty list")
    triples = []
    for item in pieces:
        if not isinstance(item, dict) or "from" not in item or "to" not in item:
            raise SchemaError("each piece needs 'from' and 'to'")
        triples.append((item["from"], item["to"], _piece_from_dict(item, param)))
    if param == "phi":
        return from_phi(triples, signed)
    return from_t(triples, signed)


def body_to_dict(body: BodyOfRevolution) -> dict:
    return {"name": body.name, "dimension": body.n, **profile_to_dict(body.profile)}


def body_from_dict(data: dict) -> BodyOfRevolution:
    if not isinstance(data, dict):
        raise SchemaError("body description must be a JSON object")
    if "dimension" not in data:
        raise SchemaError("body description needs 'dimension'")
    try:
        n = int(data["dimension"])
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"bad dimension {data['dimension']!r}") from exc
    profile = profile_from_dict(data)
    try:
        return BodyOfRevolution(n, profile, str(data.get("name", "body")))
    except DomainError as exc:
        raise SchemaError(str(exc)) from exc


def load_body(path) -> BodyOfRevolution:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: invalid JSON ({exc})") from exc
    return body_from_dict(data)

