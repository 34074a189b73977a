"""Command-line front end.

    intbody corpus list
    intbody transform --body barrel_gen4 --dim 4 --grid 200 --out rho.csv
    intbody classify --body barrel_B --dim 8 --out report.json
    intbody lift --body barrel_gen4 --dim 4 --steps 2 --out chain.json
    intbody plot --body diabolo_L --out diabolo.svg
    intbody sdt --dim 5 --m-grid 4,8,16,32,64 --out sdt.csv

Exit codes: 0 success, 2 usage or schema error, 3 numerical accuracy
failure, 4 domain verdict (for instance a density that is not a star body).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__, classify, corpus, lifting, radon, sdt
from .errors import AccuracyError, DomainError, SchemaError, UnsupportedError, VerdictError
from .profiles import BodyOfRevolution, body_from_dict, body_to_dict, load_body
from .special_math import DEFAULT_SPEC, QuadratureSpec

EXIT_OK, EXIT_USAGE, EXIT_ACCURACY, EXIT_VERDICT = 0, 2, 3, 4

TRANSFORM_HEADER = ("x", "phi", "rho")
SDT_HEADER = ("n", "m", "U1", "U2", "U3", "W", "negative", "total", "tail_bound")
DEFAULT_M_GRID = (4.0, 8.0, 16.0, 32.0, 64.0)


class UsageError(Exception):
    pass


def fmt(v) -> str:
    """Floats at 17 significant digits, everything else as is."""
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


@dataclass(frozen=True)
class RunConfig:
    command: str
    body: str | None = None
    density: str | None = None
    dim: int | None = None
    grid: int = 200
    out: str | None = None
    svg: str | None = None
    steps: int = 1
    m_grid: tuple = DEFAULT_M_GRID
    gamma: str | None = None
    tol: float | None = None
    what: str = "body"
    csv: str | None = None
    size: int = 480
    samples: int = 721
    fmt: str = "text"
    generator: bool = False

    def __post_init__(self):
        sources = [s for s in (self.body, self.density, self.csv) if s is not None]
        if self.command in ("transform", "classify") and self.body is None:
            raise UsageError(f"{self.command} needs --body")
        if self.command in ("lift", "plot") and len(sources) != 1:
            raise UsageError(f"{self.command} needs exactly one of --body, --density, --csv")
        if self.command in ("transform", "classify", "lift") and self.csv is not None:
            raise UsageError("--csv is only used by plot")
        if self.dim is not None and self.dim < 1:
            raise UsageError("--dim must be positive")
        if self.grid < 2:
            raise UsageError("--grid must be at least 2")
        if self.steps < 1:
            raise UsageError("--steps must be at least 1")
        if self.tol is not None and not self.tol > 0:
            raise UsageError("--tol must be positive")

    @property
    def spec(self) -> QuadratureSpec:
        if self.tol is None:
            return DEFAULT_SPEC
        return QuadratureSpec(DEFAULT_SPEC.panel_nodes, self.tol, self.tol, DEFAULT_SPEC.max_panels)


# ---------------------------------------------------------------------------
# input


def load(source: str, dim: int | None) -> BodyOfRevolution:
    """A corpus name or the path of a body JSON file."""
    if source in corpus.names():
        body = corpus.corpus(source)
    elif os.path.exists(source):
        body = load_body(source)
    else:
        raise SchemaError(f"{source!r} is neither a corpus body ({', '.join(corpus.names())}) nor a file")
    return body if dim is None else body.with_dimension(dim)


def load_density(path: str, dim: int | None) -> radon.GeneratingDensity:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from exc
    dens = radon.GeneratingDensity.from_dict(data)
    if dim is not None and dim != dens.n:
        raise UsageError(f"--dim {dim} does not match the density's dimension {dens.n}")
    return dens


def parse_m_grid(text: str) -> tuple:
    try:
        ms = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise UsageError(f"--m-grid must be comma-separated numbers, got {text!r}") from None
    if len(set(ms)) < 4:
        raise UsageError("--m-grid needs at least 4 distinct values")
    if min(ms) <= 0:
        raise UsageError("--m-grid values must be positive")
    if max(ms) / min(ms) < 10:
        raise UsageError("--m-grid must span at least one decade")
    return ms


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# commands


def cmd_corpus(cfg: RunConfig) -> int:
    lines = []
    for name in corpus.names():
        body_from_dict(corpus.corpus_dict(name))  # schema check
        lines.append(f"{name}\t{corpus.corpus(name).n}\t{corpus.DESCRIPTIONS[name]}")
    _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK


def cmd_transform(cfg: RunConfig) -> int:
    L = load(cfg.body, cfg.dim)
    if L.n < 4:
        raise UsageError("transform needs --dim >= 4")
    dens = radon.density_of(L)
    x = radon.default_grid(cfg.grid, dens.breakpoints)
    res = radon.intersection_body(L, cfg.spec, x)
    _emit(_csv(TRANSFORM_HEADER, zip(res.x, res.phi, res.values)), cfg.out)
    if cfg.svg:
        _write(cfg.svg, svg_body(res.body.profile, cfg.size, cfg.samples, f"I({L.name}), n = {L.n}"))
    return EXIT_OK


def cmd_classify(cfg: RunConfig) -> int:
    K = load(cfg.body, cfg.dim)
    if K.n % 2 and K.n >= 5:
        rep = classify.c1_report(K)
    else:
        rep = classify.full_report(K)
    if cfg.fmt in ("text", "both"):
        sys.stdout.write(rep.to_text() + "\n")
    if cfg.fmt in ("json", "both") and cfg.out is None:
        sys.stdout.write(rep.to_json() + "\n")
    if cfg.out is not None:
        _emit(rep.to_json() + "\n", cfg.out)
    return EXIT_OK


def _step_verdict(dens: radon.GeneratingDensity) -> dict:
    neg = lifting.negative_part(dens)
    if neg:
        kind = "negative_atom" if neg.atom else "sign_changing"
        return {"verdict": lifting.NOT_INTERSECTION_BODY, "flag": kind, "witness": neg.witness, "value": neg.value}
    F = dens.F
    jumps = [t0 for t0 in F.breakpoints if not F.jump_is_zero(t0, 0)]
    with np.errstate(all="ignore"):
        bounded = all(np.isfinite([F.eval(0.0, "right"), F.eval(1.0, "left")]))
    if dens.atoms or jumps or not bounded:
        return {"verdict": lifting.INTERSECTION_BODY_ONLY, "flag": "nonnegative_measure", "witness": None, "value": None}
    return {"verdict": lifting.INTERSECTION_BODY_OF_STAR_BODY, "flag": "nonnegative", "witness": None, "value": None}


def cmd_lift(cfg: RunConfig) -> int:
    if cfg.density is not None:
        dens = load_density(cfg.density, cfg.dim)
        name = os.path.basename(cfg.density)
    else:
        L = load(cfg.body, cfg.dim)
        dens = radon.density_of(L)
        name = L.name
    if dens.atoms:
        raise UsageError("the starting density must be free of atoms")
    chain = [{"dimension": dens.n, **_step_verdict(dens), "density": dens.to_dict()}]
    halted = None
    for _ in range(cfg.steps):
        dens = lifting.lift(dens)
        chain.append({"dimension": dens.n, **_step_verdict(dens), "density": dens.to_dict()})
        if dens.atoms:
            halted = f"Dirac atom in R^{dens.n}; further lifting is not defined"
            break
    out = {"body": name, "steps": chain, "halted": halted}
    if cfg.generator:
        # raises a verdict error when the last density is not f^{n-1} of a star body
        gen = lifting.generator(dens)
        out["generator"] = body_to_dict(BodyOfRevolution(dens.n, gen, f"generator of {name} in R^{dens.n}"))
    _emit(json.dumps(out, indent=2, sort_keys=True) + "\n", cfg.out)
    for step in chain:
        w = "" if step["witness"] is None else f" at t = {fmt(step['witness'])}"
        sys.stderr.write(f"R^{step['dimension']}: {step['flag']}{w} -> {step['verdict']}\n")
    return EXIT_OK


def cmd_sdt(cfg: RunConfig) -> int:
    n = 5 if cfg.dim is None else cfg.dim
    if n < 5:
        raise UsageError("sdt needs --dim >= 5")
    if cfg.body not in (None, "cylinder"):
        raise UsageError("sdt supports --body cylinder or a face body given by --gamma")
    body = None if cfg.gamma is None else sdt.FaceBody.from_expr(n, cfg.gamma)
    results = sdt.sdt_grid(n, cfg.m_grid, body, cfg.spec)
    rows = [[r.to_row()[k] for k in SDT_HEADER] for r in results]
    _emit(_csv(SDT_HEADER, rows), cfg.out)
    exponent = sdt.scaling_fit(results)
    sys.stdout.write(f"exponent,{fmt(exponent)}\n")
    return EXIT_OK


def cmd_plot(cfg: RunConfig) -> int:
    if cfg.out is None:
        raise UsageError("plot needs --out")
    if cfg.csv is not None:
        svg = svg_sdt(cfg.csv, cfg.size)
    elif cfg.density is not None:
        dens = load_density(cfg.density, cfg.dim)
        svg = svg_density(dens, cfg.size, cfg.samples, os.path.basename(cfg.density))
    else:
        L = load(cfg.body, cfg.dim)
        if cfg.what == "density" or L.profile.signed:
            svg = svg_density(radon.density_of(L) if not L.profile.signed else radon.GeneratingDensity(L.n, L.profile), cfg.size, cfg.samples, L.name)
        elif cfg.what == "intersection":
            K = radon.intersection_body(L, cfg.spec).body
            svg = svg_body(K.profile, cfg.size, cfg.samples, f"I({L.name}), n = {L.n}")
        else:
            svg = svg_body(L.profile, cfg.size, cfg.samples, L.name)
    _write(cfg.out, svg)
    return EXIT_OK


# ---------------------------------------------------------------------------
# SVG


def _write(path: str, text: str) -> None:
    with open(path, "w") as fh:
        fh.write(text)


def _svg(size: int, height: int, body: list[str]) -> str:
    head = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<!-- intbody {__version__} -->",
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{height}" '
        f'viewBox="0 0 {size} {height}">',
        f'<rect x="0" y="0" width="{size}" height="{height}" fill="white"/>',
    ]
    return "\n".join(head + body + ["</svg>", ""])


def _points(xs, ys) -> str:
    return " ".join(f"{x:.3f},{y:.3f}" for x, y in zip(xs, ys))


def svg_body(profile, size: int = 480, samples: int = 721, title: str = "") -> str:
    """Axial cross-section, axis of revolution horizontal, completed by symmetry."""
    phi = np.linspace(0.0, math.pi / 2, max(samples // 4, 8))
    with np.errstate(all="ignore"):
        rho = np.asarray(profile(np.clip(np.cos(phi), 0.0, 1.0)), dtype=float)
    ok = np.isfinite(rho)
    phi, rho = phi[ok], rho[ok]
    ax, ay = rho * np.cos(phi), rho * np.sin(phi)
    # four quadrants, counterclockwise from the positive axis
    xs = np.concatenate([ax, -ax[::-1], -ax, ax[::-1]])
    ys = np.concatenate([ay, ay[::-1], -ay, -ay[::-1]])
    ext = float(max(np.max(np.abs(xs)), np.max(np.abs(ys)))) * 1.1 or 1.0
    c = size / 2
    k = (size / 2 - 20) / ext
    body = [
        f'<line x1="10" y1="{c}" x2="{size - 10}" y2="{c}" stroke="#999" stroke-dasharray="4 3"/>',
        f'<polygon points="{_points(c + k * xs, c - k * ys)}" fill="#dde8f4" stroke="black" stroke-width="1.5"/>',
        f'<text x="10" y="18" font-family="sans-serif" font-size="13">{_escape(title)}</text>',
    ]
    return _svg(size, size, body)


def svg_density(dens: radon.GeneratingDensity, size: int = 480, samples: int = 721, title: str = "") -> str:
    """Graph of F on [0, 1] with atoms drawn as labelled spikes."""
    height = int(size * 0.75)
    F = dens.F
    segs = []
    for lo, hi in F.intervals():
        t = np.linspace(lo, hi, max(samples // len(F.pieces), 8))[1:-1]
        with np.errstate(all="ignore"):
            segs.append((t, np.asarray(F(t), dtype=float)))
    finite = np.concatenate([v[np.isfinite(v)] for _, v in segs])
    lo_v = float(np.min(finite, initial=0.0))
    hi_v = float(np.max(finite, initial=0.0))
    # keep the graph readable near poles of F
    hi_v = min(hi_v, float(np.quantile(finite, 0.95)) * 2 if finite.size else 1.0)
    span = (hi_v - lo_v) or 1.0
    m = 40

    def X(t):
        return m + (size - 2 * m) * np.asarray(t)

    def Y(v):
        return height - m - (height - 2 * m) * (np.clip(v, lo_v - 0.2 * span, hi_v + 0.2 * span) - lo_v) / span

    zero = float(Y(0.0))
    body = [
        f'<line x1="{m}" y1="{zero:.3f}" x2="{size - m}" y2="{zero:.3f}" stroke="#999"/>',
        f'<text x="{size - m}" y="{zero + 14:.3f}" font-family="sans-serif" font-size="11">t</text>',
    ]
    for t, v in segs:
        ok = np.isfinite(v)
        body.append(f'<polyline points="{_points(X(t[ok]), Y(v[ok]))}" fill="none" stroke="black" stroke-width="1.5"/>')
    for t0, w in dens.atoms:
        tip = m if w > 0 else height - m
        colour = "#1f5fbf" if w > 0 else "#c0392b"
        body.append(f'<line x1="{X(t0):.3f}" y1="{zero:.3f}" x2="{X(t0):.3f}" y2="{tip}" stroke="{colour}" stroke-width="2"/>')
        body.append(
            f'<text x="{X(t0) + 4:.3f}" y="{tip + (12 if w > 0 else -4)}" font-family="sans-serif" font-size="11" '
            f'fill="{colour}">{_escape(f"atom {w:.6g} at t = {t0:.6g}")}</text>'
        )
    body.append(f'<text x="10" y="18" font-family="sans-serif" font-size="13">{_escape(title)} (n = {dens.n})</text>')
    return _svg(size, height, body)


def svg_sdt(path: str, size: int = 480) -> str:
    """log m against the total functional and its negative part, from an sdt CSV."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"m", "total", "negative"} <= set(reader.fieldnames):
            raise SchemaError(f"{path}: not an sdt CSV (needs m, total, negative columns)")
        rows = [(float(r["m"]), float(r["total"]), float(r["negative"])) for r in reader]
    if len(rows) < 2:
        raise SchemaError(f"{path}: need at least two rows")
    height = int(size * 0.75)
    lm = np.log10([r[0] for r in rows])
    tot = np.array([r[1] for r in rows])
    neg = np.array([r[2] for r in rows])
    lo_v, hi_v = min(0.0, float(neg.min()), float(tot.min())), max(0.0, float(tot.max()))
    span = (hi_v - lo_v) or 1.0
    m = 40
    X = lambda v: m + (size - 2 * m) * (v - lm.min()) / ((lm.max() - lm.min()) or 1.0)  # noqa: E731
    Y = lambda v: height - m - (height - 2 * m) * (v - lo_v) / span  # noqa: E731
    body = [
        f'<line x1="{m}" y1="{Y(0.0):.3f}" x2="{size - m}" y2="{Y(0.0):.3f}" stroke="#999"/>',
        f'<polyline points="{_points(X(lm), Y(tot))}" fill="none" stroke="black" stroke-width="1.5"/>',
        f'<polyline points="{_points(X(lm), Y(neg))}" fill="none" stroke="#c0392b" stroke-dasharray="5 3"/>',
        '<text x="10" y="18" font-family="sans-serif" font-size="13">total (black), negative part (red) against log10 m</text>',
    ]
    return _svg(size, height, body)


def _escape(s: str) -> str:
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="intbody", description="Intersection bodies of star bodies of revolution.")
    p.add_argument("--version", action="version", version=f"intbody {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, body=True):
        if body:
            sp.add_argument("--body", help="corpus name or path of a body JSON file")
        sp.add_argument("--dim", type=int, help="dimension n (overrides the body's own)")
        sp.add_argument("--out", help="output path (default: standard output)")
        sp.add_argument("--tol", type=float, help="absolute and relative quadrature tolerance")

    c = sub.add_parser("corpus", help="list the builtin bodies")
    c.add_argument("action", choices=["list"])
    c.add_argument("--out")

    t = sub.add_parser("transform", help="sample rho of the intersection body as CSV")
    common(t)
    t.add_argument("--grid", type=int, default=200, help="number of uniform x = sin(phi) samples")
    t.add_argument("--svg", help="also draw the intersection body")

    k = sub.add_parser("classify", help="regularity, convexity and positivity verdicts")
    common(k)
    k.add_argument("--format", dest="fmt", choices=["text", "json", "both"], default="text")

    lf = sub.add_parser("lift", help="chain of generating densities in R^n, R^(n+2), ...")
    common(lf)
    lf.add_argument("--density", help="density JSON file instead of --body")
    lf.add_argument("--steps", type=int, default=1)
    lf.add_argument("--generator", action="store_true", help="also emit the star body generating the last density")

    pl = sub.add_parser("plot", help="SVG cross-section, density graph or sdt chart")
    common(pl)
    pl.add_argument("--density", help="density JSON file")
    pl.add_argument("--csv", help="CSV written by the sdt command")
    pl.add_argument("--what", choices=["body", "intersection", "density"], default="body")
    pl.add_argument("--size", type=int, default=480)
    pl.add_argument("--samples", type=int, default=721)

    s = sub.add_parser("sdt", help="second derivative test functional over an m-grid")
    common(s)
    s.add_argument("--m-grid", default=",".join(fmt(m) for m in DEFAULT_M_GRID))
    s.add_argument("--gamma", help="face profile gamma(t) on [0, 1] instead of the cylinder")
    return p


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    d = dict(vars(ns))
    cmd = d.pop("command")
    d.pop("action", None)
    if "m_grid" in d:
        d["m_grid"] = parse_m_grid(d["m_grid"])
    return RunConfig(cmd, **d)


_COMMANDS = {
    "corpus": cmd_corpus,
    "transform": cmd_transform,
    "classify": cmd_classify,
    "lift": cmd_lift,
    "plot": cmd_plot,
    "sdt": cmd_sdt,
}


def main(argv=None) -> int:
    try:
        cfg = config_from_args(build_parser().parse_args(argv))
        return _COMMANDS[cfg.command](cfg)
    except (UsageError, SchemaError, LookupError) as exc:
        code, msg = EXIT_USAGE, f"usage error: {exc}"
    except AccuracyError as exc:
        code, msg = EXIT_ACCURACY, f"accuracy error: {exc}"
    except VerdictError as exc:
        code, msg = EXIT_VERDICT, f"verdict: {exc}"
    except sdt.FitUndefinedError as exc:
        code, msg = EXIT_VERDICT, f"verdict: {exc}"
    except (DomainError, UnsupportedError) as exc:
        code, msg = EXIT_USAGE, f"error: {exc}"
    except OSError as exc:
        code, msg = EXIT_USAGE, f"i/o error: {exc}"
    sys.stderr.write(f"intbody: {msg}\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
