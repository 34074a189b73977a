"""The closed-form expression language used for profile pieces.

Expressions are parsed into sympy trees restricted to a small grammar:
numbers, the variable (``t`` for profiles in t = cos(angle), ``phi`` or
``psi`` for angle formulas), ``pi``, ``+ - * / ^ **``, and the functions
``sqrt sin cos tan sec csc arccos arcsin`` (``acos``/``asin`` accepted as
aliases). Angles are in radians; whitespace is ignored.
"""

from __future__ import annotations

import re

import sympy as sp
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from .errors import SchemaError

T = sp.Symbol("t", real=True)
PHI = sp.Symbol("phi", real=True)

_FUNCS = {
    "sqrt": sp.sqrt,
    "sin": sp.sin,
    "cos": sp.cos,
    "tan": sp.tan,
    "sec": sp.sec,
    "csc": sp.csc,
    "arccos": sp.acos,
    "arcsin": sp.asin,
    "acos": sp.acos,
    "asin": sp.asin,
}
_TOKEN = re.compile(r"\s*(?:(\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)|([A-Za-z_]\w*)|(\*\*|[-+*/^(),]))")
_ALLOWED_FUNCS = (sp.sin, sp.cos, sp.tan, sp.sec, sp.csc, sp.acos, sp.asin)


def _tokens_ok(text: str, names: set[str]) -> None:
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise SchemaError(f"unexpected character in expression {text!r} at {pos}")
        name = m.group(2)
        if name is not None and name not in names:
            raise SchemaError(f"unknown name {name!r} in expression {text!r}")
        pos = m.end()


def parse(text: str, variable: str = "t") -> sp.Expr:
    """Parse ``text`` into a sympy expression in ``T`` (or ``PHI``).

    ``variable`` is ``"t"`` or ``"phi"``; in angle mode ``psi`` is an alias
    of ``phi``. Constant expressions are allowed in either mode.
    """
    if not isinstance(text, str) or not text.strip():
        raise SchemaError("expression must be a non-empty string")
    if variable == "t":
        local = {"t": T}
    elif variable in ("phi", "psi"):
        local = {"phi": PHI, "psi": PHI}
    else:
        raise SchemaError(f"unknown variable {variable!r}")
    local = {**local, **_FUNCS, "pi": sp.pi}
    _tokens_ok(text, set(local))
    try:
        expr = parse_expr(
            text,
            local_dict=local,
            global_dict={"Integer": sp.Integer, "Float": sp.Float, "Rational": sp.Rational, "Symbol": sp.Symbol},
            transformations=standard_transformations + (convert_xor,),
            evaluate=True,
        )
    except Exception as exc:  # sympy raises a zoo of types on bad syntax
        raise SchemaError(f"cannot parse expression {text!r}: {exc}") from exc
    return validate(sp.sympify(expr))


def validate(expr: sp.Expr) -> sp.Expr:
    """Reject anything outside the grammar (e.g. symbols other than t / phi)."""
    for node in sp.preorder_traversal(expr):
        if node.is_Symbol and node not in (T, PHI):
            raise SchemaError(f"unexpected symbol {node}")
        if isinstance(node, sp.Function) and not isinstance(node, _ALLOWED_FUNCS):
            raise SchemaError(f"function {node.func} is outside the expression grammar")
    if expr.has(T) and expr.has(PHI):
        raise SchemaError("expression mixes t and angle variables")
    return expr


def parse_number(value) -> float:
    """Breakpoints may be given as numbers or constant expressions like 'pi/4'."""
    if isinstance(value, (int, float)):
        return float(value)
    expr = parse(str(value), "t")
    if expr.free_symbols:
        raise SchemaError(f"breakpoint {value!r} is not a constant")
    return float(expr)


def angle_to_t(expr: sp.Expr) -> sp.Expr:
    """Rewrite an angle formula rho(psi) as a function of t = cos(psi)."""
    return expr.subs(PHI, sp.acos(T))


def t_to_angle(expr: sp.Expr) -> sp.Expr:
    """Rewrite f(t) as g(phi) = f(cos phi), using sin(phi) for sqrt(1 - t^2).

    Valid for 0 <= phi <= pi/2, where sin(phi) >= 0.
    """
    one_minus = 1 - T**2
    out = expr.replace(
        lambda e: e.is_Pow and sp.expand(e.base - one_minus) == 0,
        lambda e: sp.sin(PHI) ** (2 * e.exp),
    )
    return out.subs(T, sp.cos(PHI))


def to_text(expr: sp.Expr) -> str:
    return sp.sstr(expr)
