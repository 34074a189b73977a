"""Dimension lifting of generating densities and the equator-convexity test.

If K_n = I L with f(t) = rho_L(arccos t), the generating density of the
same profile in R^{n+2} is (n+1) rho~ with

    rho~(t) = (1/2pi) (F + t F' / (n - 1)),   F = f^{n-1}.

A jump of F at a breakpoint t0 is differentiated into a Dirac atom of
weight (n+1) t0 dF / (2pi (n-1)). Atoms themselves cannot be lifted (that
would need derivatives of delta), so a chain of lifts stops there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import sympy as sp

from . import expr as ex
from .errors import DistributionalError, NotStarBodyError, UnsupportedError
from .profiles import (
    BodyOfRevolution,
    ChebPiece,
    ExprPiece,
    LiftedPiece,
    PiecewiseProfile,
    PowerPiece,
    _first_derivative,
)
from .radon import GeneratingDensity, density_of
from .special_math import ChebSeries

__all__ = [
    "ConvexityVerdict",
    "NextDimensionVerdict",
    "is_equator_convex",
    "lift",
    "lift_steps",
    "generator",
    "negative_part",
    "verdict_next_dimension",
    "INTERSECTION_BODY_OF_STAR_BODY",
    "INTERSECTION_BODY_ONLY",
    "NOT_INTERSECTION_BODY",
]

INTERSECTION_BODY_OF_STAR_BODY = "intersection_body_of_star_body"
INTERSECTION_BODY_ONLY = "intersection_body_only"
NOT_INTERSECTION_BODY = "not_intersection_body"

_SAMPLES = 256


def _interior_samples(lo: float, hi: float, count: int = _SAMPLES) -> np.ndarray:
    k = np.arange(count)
    u = np.cos(np.pi * (k + 0.5) / count)
    return np.sort(0.5 * (lo + hi) + 0.5 * (hi - lo) * u)


def _tolerance(piece, order: int, scale: float) -> float:
    if isinstance(piece, ExprPiece):
        return 1e-12 * max(1.0, scale)
    return piece.deriv_error(order, scale)


@dataclass(frozen=True)
class ConvexityVerdict:
    convex: bool
    witness: float | None = None
    detail: str = ""

    @property
    def verdict(self) -> str:
        return "yes" if self.convex else "no"

    def __bool__(self) -> bool:
        return self.convex


def is_equator_convex(f: PiecewiseProfile, samples: int = _SAMPLES) -> ConvexityVerdict:
    """Is t -> t f(t) nondecreasing on [0, 1]?

    Checked as f + t f' >= 0 on every piece (dense Chebyshev sampling plus
    the one-sided values at both ends of the piece) and t0 * jump(f) >= 0
    at every breakpoint. On failure the witness is a t where t f(t)
    strictly decreases.
    """
    worst = (math.inf, None, "")
    ends = []
    for (lo, hi), piece in zip(f.intervals(), f.pieces):
        t = _interior_samples(lo, hi, samples)
        with np.errstate(all="ignore"):
            g = np.asarray(piece(t)) + t * _first_derivative(piece, t)
        scale = float(np.nanmax(np.abs(piece(t))))
        tol = _tolerance(piece, 1, scale)
        ok = np.isfinite(g)
        if np.any(ok):
            i = int(np.argmin(np.where(ok, g, np.inf)))
            if g[i] < -tol and g[i] < worst[0]:
                worst = (float(g[i]), float(t[i]), f"(t f)' = {g[i]:.6g} < 0")
        ends.append((piece, lo, hi, tol))
    for t0 in f.breakpoints:
        dv = t0 * f.jump(t0, 0)
        if not f.jump_is_zero(t0, 0) and dv < 0 and dv < worst[0]:
            worst = (float(dv), float(t0), f"t f jumps down by {-dv:.6g} at t = {t0:.6g}")
    if worst[1] is None:
        # one-sided values at the ends of each piece, from inside
        for piece, lo, hi, tol in ends:
            for t0 in (lo, hi):
                d = piece.derivs(t0, 1)
                val = d[0] + t0 * d[1] if np.all(np.isfinite(d)) else (-math.inf if np.isneginf(d[1]) else 0.0)
                if val < -tol and val < worst[0]:
                    worst = (float(val), float(t0), f"one-sided (t f)' = {val:.6g} < 0 at t = {t0:.6g}")
    if worst[1] is None:
        return ConvexityVerdict(True)
    return ConvexityVerdict(False, worst[1], worst[2])


def _simplify(e: sp.Expr) -> sp.Expr:
    try:
        out = sp.simplify(e)
    except Exception:  # pragma: no cover - sympy internals
        return e
    return out if sp.count_ops(out) <= sp.count_ops(e) else e


def _lift_piece(piece, n: int, c: float):
    if isinstance(piece, ExprPiece):
        t = ex.T
        e = piece.expr
        return ExprPiece(_simplify((n + 1) / (2 * sp.pi) * (e + t * sp.diff(e, t) / (n - 1))))
    if isinstance(piece, ChebPiece) and piece.var in ("t", "s"):
        ser = piece.cheb.series
        x = type(ser).identity(domain=ser.domain)
        k = 1.0 if piece.var == "t" else 2.0
        out = c * (ser + k * x * ser.deriv() / (n - 1))
        return ChebPiece(ChebSeries(out, piece.cheb.deriv(1).tol * c * 2.0), piece.var)
    return LiftedPiece(piece, n, c)


def lift(density: GeneratingDensity) -> GeneratingDensity:
    """Generating density of the same profile two dimensions up.

    Raises
    ------
    UnsupportedError
        If the input already carries atoms.
    """
    if density.atoms:
        raise UnsupportedError(
            "cannot lift a density with Dirac atoms: dimension too high for the distributional order tracked"
        )
    n = density.n
    c = (n + 1) / (2.0 * math.pi)
    F = density.F
    pieces = [_lift_piece(p, n, c) for p in F.pieces]
    atoms = []
    for t0 in F.breakpoints:
        if not F.jump_is_zero(t0, 0):
            atoms.append((t0, c * t0 * F.jump(t0, 0) / (n - 1)))
    return GeneratingDensity(n + 2, PiecewiseProfile(F.edges, pieces, signed=True), tuple(atoms))


def lift_steps(density: GeneratingDensity, steps: int) -> GeneratingDensity:
    for _ in range(steps):
        density = lift(density)
    return density


@dataclass(frozen=True)
class NegativePart:
    """Where a density is (provably) negative, if anywhere."""

    witness: float | None
    value: float
    atom: bool = False

    def __bool__(self) -> bool:
        return self.witness is not None


def negative_part(density: GeneratingDensity, samples: int = _SAMPLES) -> NegativePart:
    """Most negative sampled value of the continuous part, or a negative atom.

    A sample counts as negative only beyond the piece's error estimate.
    Negative atoms take precedence over the continuous part.
    """
    for t0, w in density.atoms:
        if w < 0:
            return NegativePart(t0, w, atom=True)
    best = NegativePart(None, 0.0)
    F = density.F
    for (lo, hi), piece in zip(F.intervals(), F.pieces):
        t = _interior_samples(lo, hi, samples)
        with np.errstate(all="ignore"):
            v = np.asarray(piece(t), dtype=float)
        ok = np.isfinite(v)
        if not np.any(ok):
            continue
        scale = float(np.max(np.abs(v[ok])))
        tol = _tolerance(piece, 0, scale)
        i = int(np.argmin(np.where(ok, v, np.inf)))
        if v[i] < -tol and v[i] < best.value:
            best = NegativePart(float(t[i]), float(v[i]))
    return best


def generator(density: GeneratingDensity) -> PiecewiseProfile:
    """The profile f = F^{1/(n-1)} of the star body generating ``density``.

    Raises
    ------
    DistributionalError
        If the density has atoms.
    NotStarBodyError
        If F is negative somewhere (witness t) or unbounded at an end.
    """
    if density.atoms:
        t0, w = density.atoms[0]
        raise DistributionalError(f"density has a Dirac atom of weight {w:.6g} at t = {t0:.6g}", witness=t0)
    neg = negative_part(density)
    if neg:
        raise NotStarBodyError(f"density is negative ({neg.value:.6g}) at t = {neg.witness:.6g}", witness=neg.witness)
    n = density.n
    F = density.F
    for t0 in (0.0, 1.0):
        v = F.eval(t0, "right" if t0 == 0.0 else "left")
        if not np.isfinite(v):
            raise NotStarBodyError(f"density is unbounded at t = {t0:g}", witness=t0)
    pieces = []
    for p in F.pieces:
        if isinstance(p, ExprPiece):
            pieces.append(ExprPiece(p.expr ** sp.Rational(1, n - 1)))
        elif isinstance(p, PowerPiece) and abs(p.p * (n - 1) - 1.0) < 1e-12:
            pieces.append(p.base)
        else:
            pieces.append(PowerPiece(p, 1.0 / (n - 1)))
    return PiecewiseProfile(F.edges, pieces)


def _is_c1(f: PiecewiseProfile) -> bool:
    """f in C^1 as a function of t on [0, 1], including a finite slope at t = 1."""
    for t0 in f.breakpoints:
        if not (f.jump_is_zero(t0, 0) and f.jump_is_zero(t0, 1)):
            return False
    d = f.pieces[-1].derivs(1.0, 1)
    return bool(np.all(np.isfinite(d)))


@dataclass(frozen=True)
class NextDimensionVerdict:
    verdict: str
    reason: str
    witness: float | None = None
    density: GeneratingDensity | None = field(default=None, repr=False)


def verdict_next_dimension(L: BodyOfRevolution) -> NextDimensionVerdict:
    """What K_{n+2} is, given K_n = I L (L in R^n)."""
    conv = is_equator_convex(L.profile)
    lifted = lift(density_of(L))
    if not conv:
        return NextDimensionVerdict(
            NOT_INTERSECTION_BODY, f"generator is not equator-convex: {conv.detail}", conv.witness, lifted
        )
    neg = negative_part(lifted)
    if neg:
        kind = "atom" if neg.atom else "density"
        return NextDimensionVerdict(
            NOT_INTERSECTION_BODY, f"lifted {kind} is negative ({neg.value:.6g}) at t = {neg.witness:.6g}", neg.witness, lifted
        )
    if _is_c1(L.profile):
        return NextDimensionVerdict(
            INTERSECTION_BODY_OF_STAR_BODY, "generator is equator-convex and C^1: lifted density is continuous and >= 0", None, lifted
        )
    return NextDimensionVerdict(
        INTERSECTION_BODY_ONLY,
        "generator is equator-convex but not C^1: lifted density is >= 0 but not continuous",
        None,
        lifted,
    )
