"""Smoothness classes of radial functions and intersection-body verdicts.

Smoothness is read off exact (or spectrally accurate) one-sided
derivatives: at interior breakpoints from derivative jumps in t, at the
pole (phi = 0) and the equator (phi = pi/2) from odd phi-derivatives,
which must vanish for the even reflection to be smooth.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import lifting
from .errors import AccuracyError, DomainError, UnsupportedError
from .profiles import MAX_ORDER, BodyOfRevolution, ExprPiece, PiecewiseProfile
from .radon import inverse_density

__all__ = [
    "Check",
    "ClassificationReport",
    "Gain",
    "regularity_report",
    "necessary_condition",
    "predicted_gain",
    "full_report",
    "c1_report",
    "NOT_INTERSECTION_BODY_OF_STAR_BODY",
    "PASS",
    "FAIL",
    "INCONCLUSIVE",
]

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"
NOT_INTERSECTION_BODY_OF_STAR_BODY = "not_intersection_body_of_star_body"
INF = math.inf


@dataclass(frozen=True)
class Check:
    """Outcome of one criterion. ``witness`` says where a failure shows."""

    status: str
    detail: str = ""
    witness: object = None

    def to_dict(self) -> dict:
        return {"status": self.status, "detail": self.detail, "witness": _jsonable(self.witness)}


class Gain(NamedTuple):
    interior: int
    pole: int
    equator: int


@dataclass
class ClassificationReport:
    body: str
    n: int
    interior_class: dict = field(default_factory=dict)
    pole_class: float | None = None
    equator_class: float | None = None
    verdicts: dict = field(default_factory=dict)
    final: str | None = None
    provenance: str = ""
    max_order: int = MAX_ORDER

    @property
    def min_interior_class(self) -> float:
        vals = list(self.interior_class.values())
        return min(vals) if vals else INF

    def to_dict(self) -> dict:
        return {
            "body": self.body,
            "dimension": self.n,
            "max_order": self.max_order,
            "interior_class": [{"t": t, "phi": math.acos(t), "class": _jsonable(c)} for t, c in self.interior_class.items()],
            "pole_class": _jsonable(self.pole_class),
            "equator_class": _jsonable(self.equator_class),
            "verdicts": {k: v.to_dict() for k, v in self.verdicts.items()},
            "final": self.final,
            "provenance": self.provenance,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"body: {self.body} (n = {self.n})"]
        if self.interior_class:
            for t, c in self.interior_class.items():
                lines.append(f"  interior class at t = {t:.12g} (phi = {math.acos(t):.12g}): {_fmt(c)}")
        else:
            lines.append("  no interior breakpoints")
        lines.append(f"  pole class (phi = 0): {_fmt(self.pole_class)}")
        lines.append(f"  equator class (phi = pi/2): {_fmt(self.equator_class)}")
        for name, chk in self.verdicts.items():
            w = "" if chk.witness is None else f" [witness {_fmt_witness(chk.witness)}]"
            lines.append(f"  {name}: {chk.status}{w} {chk.detail}".rstrip())
        if self.final is not None:
            lines.append(f"verdict: {self.final}")
            if self.provenance:
                lines.append(f"  by: {self.provenance}")
        return "\n".join(lines)


def _fmt(c) -> str:
    if c is None:
        return "inconclusive"
    return "inf" if c == INF else str(int(c))


def _fmt_witness(w) -> str:
    if isinstance(w, dict):
        return ", ".join(f"{k}={v:.12g}" if isinstance(v, float) else f"{k}={v}" for k, v in w.items())
    return f"{w:.12g}" if isinstance(w, float) else str(w)


def _jsonable(v):
    if isinstance(v, float) and math.isinf(v):
        return "inf"
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    return v


# ---------------------------------------------------------------------------
# smoothness classes


def _interior_class(profile: PiecewiseProfile, t0: float, max_order: int) -> float:
    for k in range(max_order + 1):
        if not profile.jump_is_zero(t0, k):
            return k - 1
    return INF


def _vanishes(piece, d: np.ndarray, k: int) -> bool:
    scale = max(1.0, float(np.max(np.abs(d[: k + 1]))))
    if isinstance(piece, ExprPiece):
        tol = 1e-9 * scale
    else:
        tol = piece.deriv_error(k, scale)
    return abs(d[k]) <= tol


def _reflection_class(piece, phi0: float, max_order: int) -> float | None:
    """Largest k with all odd phi-derivatives of order <= k zero at phi0."""
    with np.errstate(all="ignore"):
        d = np.asarray(piece.phi_derivs(phi0, max_order), dtype=float)
    for k in range(1, max_order + 1, 2):
        if not np.all(np.isfinite(d[: k + 1])):
            return None
        if not _vanishes(piece, d, k):
            return k - 1
    return INF


def regularity_report(K: BodyOfRevolution, max_order: int = MAX_ORDER) -> ClassificationReport:
    """Smoothness classes of rho_K at the breakpoints, the pole and the equator.

    An interior class is the largest k with all jumps of orders 0..k zero
    (-1 for a jump of the function itself). Classes are capped at
    ``max_order``: anything smooth through that order is reported as inf.
    A location whose derivatives are not finite is reported as None.
    """
    if not 0 <= max_order <= MAX_ORDER:
        raise DomainError(f"max_order must be in 0..{MAX_ORDER}")
    prof = K.profile
    rep = ClassificationReport(K.name, K.n, max_order=max_order)
    rep.interior_class = {float(t0): _interior_class(prof, t0, max_order) for t0 in prof.breakpoints}
    rep.pole_class = _reflection_class(prof.pieces[-1], 0.0, max_order)
    rep.equator_class = _reflection_class(prof.pieces[0], math.pi / 2, max_order)
    return rep


def predicted_gain(m: int, n: int) -> Gain:
    """Smoothness of I L when the generator is of class C^m (n even)."""
    if m < 0 or int(m) != m:
        raise DomainError(f"m must be a non-negative integer, got {m}")
    if n < 4 or n % 2:
        raise DomainError(f"n must be even and >= 4, got {n}")
    return Gain(m + n // 2 - 1, m, m + n - 2)


def _necessary(rep: ClassificationReport, n: int) -> Check:
    need_int, need_eq = n // 2 - 1, n - 2
    for t0, c in rep.interior_class.items():
        if c < need_int:
            return Check(
                FAIL,
                f"interior class C^{_fmt(c)} at t = {t0:.12g} is below C^{need_int}",
                {"t": t0, "order": int(c) + 1},
            )
    if rep.equator_class is not None and rep.equator_class < need_eq:
        return Check(
            FAIL,
            f"equator class C^{_fmt(rep.equator_class)} is below C^{need_eq}",
            {"phi": math.pi / 2, "order": int(rep.equator_class) + 1},
        )
    return Check(INCONCLUSIVE, f"interior >= C^{need_int} and equator >= C^{need_eq} (necessary only)")


def necessary_condition(K: BodyOfRevolution) -> Check:
    """Regularity test that every intersection body of a star body passes.

    Returns ``fail`` (with the offending breakpoint or the equator and the
    derivative order) or ``inconclusive``; never ``pass``.
    """
    if K.n < 4:
        raise DomainError("the regularity criterion needs n >= 4")
    if K.n % 2:
        raise UnsupportedError("the regularity criterion is stated for even n")
    return _necessary(regularity_report(K), K.n)


# ---------------------------------------------------------------------------
# combined report


def _undecided(rep: ClassificationReport, nec: Check, why: str) -> ClassificationReport:
    if nec.status == FAIL:
        rep.final = NOT_INTERSECTION_BODY_OF_STAR_BODY
        rep.provenance = f"regularity test ({why})"
    else:
        rep.final = INCONCLUSIVE
        rep.provenance = why
    return rep


def full_report(K: BodyOfRevolution, max_order: int = MAX_ORDER) -> ClassificationReport:
    """All criteria for K in R^n, n even in 4..10.

    The generating density in R^n is obtained by inverting rho_K in R^4 and
    lifting (n - 4) / 2 times, so that jumps turn into tracked atoms. The
    final verdict is the strongest conclusion the evidence supports:

    * negative atom or negative density in R^n, or in some R^d with
      d < n (by passing to sections): not_intersection_body
    * density >= 0 but with atoms, jumps or an unbounded pole, or a failed
      regularity test: intersection_body_only
    * continuous bounded density >= 0: intersection_body_of_star_body
    * no density available (lifting blocked by atoms, inversion failure):
      not_intersection_body_of_star_body if the regularity test failed,
      otherwise inconclusive
    """
    n = K.n
    if n % 2:
        raise UnsupportedError("full_report needs an even dimension")
    if not 4 <= n <= 10:
        raise DomainError(f"full_report supports 4 <= n <= 10, got {n}")
    rep = regularity_report(K, max_order)
    nec = _necessary(rep, n)
    rep.verdicts["necessary_regularity"] = nec

    try:
        dens = inverse_density(K.with_dimension(4))
    except AccuracyError as exc:
        rep.verdicts["density_sign"] = Check(INCONCLUSIVE, f"inversion failed: {exc}")
        return _undecided(rep, nec, "inversion in R^4 failed")

    # equator-convexity of the R^4 generator predicts the step to R^6
    try:
        L4 = lifting.generator(dens)
        conv = lifting.is_equator_convex(L4)
        rep.verdicts["equator_convex_generator_R4"] = Check(PASS if conv else FAIL, conv.detail, conv.witness)
    except Exception as exc:  # negative or singular R^4 density
        rep.verdicts["equator_convex_generator_R4"] = Check(INCONCLUSIVE, str(exc))

    # A central section of an intersection body is an intersection body, and
    # the section through the axis of K in R^n is the body with the same
    # profile in R^(n-1). So a negative density in any R^d, d <= n, rules K out.
    dim = 4
    while True:
        neg = lifting.negative_part(dens)
        if neg:
            what = "Dirac atom" if neg.atom else "density"
            rep.verdicts["density_sign"] = Check(
                FAIL,
                f"{what} in R^{dim} is negative ({neg.value:.6g})",
                {"t": neg.witness, "value": neg.value, "dimension": dim},
            )
            rep.final = lifting.NOT_INTERSECTION_BODY
            rep.provenance = f"negative {what} of the R^{dim} generating density"
            if dim < n:
                rep.provenance += f" (inherited by R^{n}: sections through the axis of intersection bodies are intersection bodies)"
            return rep
        if dim == n:
            break
        if dens.atoms:
            t0, w = dens.atoms[0]
            rep.verdicts["density_sign"] = Check(
                INCONCLUSIVE,
                f"positive atom at t = {t0:.12g} in R^{dim} cannot be lifted further",
                {"t": t0, "dimension": dim},
            )
            return _undecided(rep, nec, f"lifting blocked by a Dirac atom in R^{dim}")
        dens = lifting.lift(dens)
        dim += 2

    rep.verdicts["density_sign"] = Check(PASS, f"generating density in R^{n} is >= 0")

    problems = []
    if dens.atoms:
        problems.append(f"{len(dens.atoms)} positive atom(s)")
    F = dens.F
    jumps = [t0 for t0 in F.breakpoints if not F.jump_is_zero(t0, 0)]
    if jumps:
        problems.append(f"jumps at t = {', '.join(f'{t:.6g}' for t in jumps)}")
    with np.errstate(all="ignore"):
        ends = [F.eval(0.0, "right"), F.eval(1.0, "left")]
    if not all(np.isfinite(ends)):
        problems.append("unbounded at an end point")
    if nec.status == FAIL:
        problems.append("regularity test failed")
    if problems:
        rep.verdicts["continuity"] = Check(FAIL, "; ".join(problems), {"t": jumps[0]} if jumps else None)
        rep.final = lifting.INTERSECTION_BODY_ONLY
        rep.provenance = "nonnegative density that is not a continuous bounded function"
    else:
        rep.verdicts["continuity"] = Check(PASS, "density is continuous and bounded")
        rep.final = lifting.INTERSECTION_BODY_OF_STAR_BODY
        rep.provenance = "continuous nonnegative generating density"
    return rep


def c1_report(K: BodyOfRevolution, max_order: int = MAX_ORDER) -> ClassificationReport:
    """Regularity classes plus the C^1 test, valid in every dimension n >= 4.

    A body of revolution that is not C^1 is not an intersection body of a
    star body in any dimension n >= 4; for odd n this is the only
    regularity statement available, so a C^1 body is left inconclusive.
    """
    if K.n < 4:
        raise DomainError("the C^1 test needs n >= 4")
    rep = regularity_report(K, max_order)
    check = Check(INCONCLUSIVE, "rho_K is C^1 (necessary only)")
    for t0, c in rep.interior_class.items():
        if c < 1:
            check = Check(FAIL, f"interior class C^{_fmt(c)} at t = {t0:.12g} is below C^1", {"t": t0, "order": int(c) + 1})
            break
    else:
        for where, phi, c in (("pole", 0.0, rep.pole_class), ("equator", math.pi / 2, rep.equator_class)):
            if c is not None and c < 1:
                check = Check(FAIL, f"{where} class C^{_fmt(c)} is below C^1", {"phi": phi, "order": int(c) + 1})
                break
    rep.verdicts["necessary_c1"] = check
    if check.status == FAIL:
        rep.final = NOT_INTERSECTION_BODY_OF_STAR_BODY
        rep.provenance = "radial function is not C^1"
    else:
        rep.final = INCONCLUSIVE
        rep.provenance = "only the C^1 test applies in odd dimensions"
    return rep
