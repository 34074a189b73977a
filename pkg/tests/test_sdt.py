import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from intbody.errors import DomainError
from intbody.profiles import from_t
from intbody.sdt import (
    FaceBody,
    FitUndefinedError,
    SdtBreakdown,
    direct_functional,
    h,
    scaling_fit,
    sdt_cylinder,
    sdt_face_body,
    sdt_grid,
)

GRID = (4.0, 8.0, 16.0, 32.0, 64.0)
CAP = "(3 + t^4)/4"  # gamma(0) = 3/4, gamma(1) = gamma'(1) = 1, gamma''(0) = 0


def test_w_term_closed_form():
    b = sdt_cylinder(5, 1)
    assert b.W_term == pytest.approx(-1 / (2 * math.sqrt(2 * math.pi)), rel=1e-12)
    assert b.W_term == pytest.approx(-2 * math.pi**2 * (2 * math.pi) ** -2.5, rel=1e-12)


def test_w_term_vanishes_as_m_grows():
    W = [abs(sdt_cylinder(5, m).W_term) for m in GRID]
    assert all(a > b for a, b in zip(W, W[1:]))
    assert W[-1] < 0.02


@pytest.mark.parametrize("n", [5, 6, 7, 9])
@pytest.mark.parametrize("m", [0.5, 3.0, 40.0])
def test_cylinder_components(n, m):
    b = sdt_cylinder(n, m)
    assert b.U_terms[0] >= 0 and b.U_terms[2] >= 0 and b.U_terms[1] < 0
    assert b.total == pytest.approx(sum(b.U_terms) + b.W_term, abs=1e-15)
    # the W part cancels the h' part exactly
    assert b.U_terms[0] + b.W_term == pytest.approx(0.0, abs=1e-12 * b.U_terms[0])
    assert 0 <= b.tail_bound < 1e-25


@pytest.mark.parametrize("n, m", [(5, 2), (5, 8), (6, 4), (7, 16)])
def test_integration_by_parts_matches_direct_quadrature(n, m):
    assert sdt_cylinder(n, m).total == pytest.approx(direct_functional(n, m), abs=1e-9)


@pytest.mark.parametrize("n, expected", [(5, -1), (6, -2), (7, -3)])
def test_cylinder_scaling(n, expected):
    assert scaling_fit(sdt_grid(n, GRID)) == pytest.approx(expected, abs=0.1)


def test_cylinder_scaling_needs_a_decade():
    # 4..32 spans less than a decade; 4..64 with four points is enough
    with pytest.raises(DomainError):
        scaling_fit(sdt_grid(5, GRID[:4]))
    assert scaling_fit(sdt_grid(5, (4.0, 8.0, 32.0, 64.0))) == pytest.approx(-1, abs=0.1)


@pytest.mark.parametrize("n", [5, 6])
def test_negative_part_decreases(n):
    res = sdt_grid(n, GRID)
    neg = [r.negative for r in res]
    assert all(a < b for a, b in zip(neg, neg[1:]))
    assert min(r.total for r in res) >= -0.05 or res[-1].total >= -0.05


def test_grid_is_ordered_and_deterministic():
    a = sdt_grid(6, GRID)
    b = sdt_grid(6, GRID[::-1])[::-1]
    assert [r.m for r in a] == list(GRID)
    assert [r.total for r in a] == [r.total for r in b]


def test_face_body_with_flat_gamma_is_the_cylinder():
    flat = FaceBody.from_expr(5, "1")
    for m in (2.0, 8.0):
        assert sdt_face_body(flat, m).total == pytest.approx(sdt_cylinder(5, m).total, abs=1e-6)


def test_face_body_matches_direct_quadrature():
    body = FaceBody.from_expr(5, CAP)
    assert sdt_face_body(body, 8).total == pytest.approx(direct_functional(5, 8, body), abs=1e-6)


def test_face_body_negative_part_decays():
    body = FaceBody.from_expr(5, CAP)
    res = sdt_grid(5, (4.0, 16.0, 64.0), body)
    neg = [r.negative for r in res]
    assert all(a < b < 0 for a, b in zip(neg, neg[1:]))
    assert abs(neg[-1]) < 0.25 * abs(neg[0])
    for r in res:
        assert r.U_terms[0] > 0 and r.U_terms[2] > 0
        assert r.W_term == pytest.approx(sum(r.W_parts.values()))


@pytest.mark.parametrize(
    "expr",
    ["2 - t^2",  # not convex, maximum at 0
     "(1 + t^2)/2 + 0.1",  # gamma(1) != 1
     "(1 + t)/2",  # not even
     "t^2"],  # vanishes at 0
)
def test_face_body_invariants(expr):
    with pytest.raises(DomainError):
        FaceBody.from_expr(5, expr)


def test_domain_errors():
    with pytest.raises(DomainError):
        sdt_cylinder(4, 8)
    with pytest.raises(DomainError):
        sdt_cylinder(5, 0)
    with pytest.raises(DomainError):
        FaceBody(4, from_t([(0, 1, "1")]))
    with pytest.raises(DomainError):
        direct_functional(6, 8, FaceBody.from_expr(5, "1"))


def _synthetic(ms, k, c=0.7):
    return [SdtBreakdown(5, m, (1.0, -c * m**k, 0.5), 0.0, 1.5 - c * m**k) for m in ms]


def test_scaling_fit_synthetic():
    assert scaling_fit(_synthetic([2, 5, 11, 30, 90], -3)) == pytest.approx(-3, abs=1e-8)


@settings(max_examples=25, deadline=None)
@given(k=st.floats(-5, 1), c=st.floats(1e-3, 1e3), m0=st.floats(0.5, 4))
def test_scaling_fit_recovers_power(k, c, m0):
    ms = [m0 * 2**j for j in range(5)]
    assert scaling_fit(_synthetic(ms, k, c)) == pytest.approx(k, abs=1e-8)


def test_scaling_fit_errors():
    with pytest.raises(DomainError):
        scaling_fit(_synthetic([1, 2, 4], -1))
    with pytest.raises(DomainError):
        scaling_fit(_synthetic([1, 2, 4, 8], -1))
    with pytest.raises(FitUndefinedError):
        scaling_fit([SdtBreakdown(5, m, (1.0, 0.0, 1.0), 0.0, 2.0) for m in (1, 3, 10, 30)])


def test_h_derivatives():
    x = np.linspace(-1, 1, 9)
    eps = 1e-6
    assert np.allclose(h(x, 3, 1), (h(x + eps, 3) - h(x - eps, 3)) / (2 * eps), atol=1e-7)
    assert np.allclose(h(x, 3, 2), (h(x + eps, 3, 1) - h(x - eps, 3, 1)) / (2 * eps), atol=1e-6)
    with pytest.raises(ValueError):
        h(x, 3, 3)
