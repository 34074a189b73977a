import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from intbody import corpus as C
from intbody.classify import (
    FAIL,
    INCONCLUSIVE,
    NOT_INTERSECTION_BODY_OF_STAR_BODY,
    PASS,
    c1_report,
    full_report,
    necessary_condition,
    predicted_gain,
    regularity_report,
)
from intbody.errors import DomainError, UnsupportedError
from intbody.lifting import INTERSECTION_BODY_OF_STAR_BODY, INTERSECTION_BODY_ONLY, NOT_INTERSECTION_BODY
from intbody.profiles import BodyOfRevolution
from intbody.radon import intersection_body

A = 1 / math.sqrt(2)
INF = math.inf


def test_regularity_examples():
    ((t0, cls),) = regularity_report(C.corpus("cylinder")).interior_class.items()
    assert t0 == pytest.approx(A) and cls == 0
    assert regularity_report(C.corpus("double_cone")).equator_class <= 1
    rep = regularity_report(C.corpus("smooth_Ltilde"), max_order=8)
    assert rep.pole_class == INF and rep.equator_class == INF and rep.interior_class == {}
    with pytest.raises(DomainError):
        regularity_report(C.corpus("ball"), max_order=9)


def test_regularity_of_barrel_and_diabolo():
    assert list(regularity_report(C.corpus("barrel_B")).interior_class.values()) == [1]
    assert list(regularity_report(C.corpus("diabolo_L")).interior_class.values()) == [0]
    assert list(regularity_report(C.corpus("barrel_L8")).interior_class.values()) == [-1]


@pytest.mark.parametrize("m, n, gain", [(0, 4, (1, 0, 2)), (0, 6, (2, 0, 4)), (2, 4, (3, 2, 4))])
def test_predicted_gain(m, n, gain):
    assert tuple(predicted_gain(m, n)) == gain


@given(m=st.integers(0, 20), n=st.integers(2, 20).map(lambda k: 2 * k))
def test_predicted_gain_monotone(m, n):
    g = predicted_gain(m, n)
    assert all(a <= b for a, b in zip(g, predicted_gain(m + 1, n)))
    assert all(a <= b for a, b in zip(g, predicted_gain(m, n + 2)))


@pytest.mark.parametrize("m, n", [(-1, 4), (0, 5), (0, 2), (1.5, 4)])
def test_predicted_gain_errors(m, n):
    with pytest.raises(DomainError):
        predicted_gain(m, n)


def test_measured_gain_matches_prediction():
    for n in (4, 6):
        K = intersection_body(C.corpus("barrel_gen4", n)).body
        (cls,) = regularity_report(K).interior_class.values()
        assert cls == predicted_gain(0, n).interior


@pytest.mark.parametrize("name, n, status", [("cylinder", 4, FAIL), ("barrel_B", 6, FAIL), ("barrel_B", 4, INCONCLUSIVE),
                                             ("double_cone", 4, FAIL), ("ball", 8, INCONCLUSIVE)])
def test_necessary_condition(name, n, status):
    chk = necessary_condition(C.corpus(name, n))
    assert chk.status == status
    if status == FAIL:
        assert chk.witness is not None and "order" in chk.witness


def test_necessary_condition_errors():
    with pytest.raises(UnsupportedError):
        necessary_condition(C.corpus("ball", 5))
    with pytest.raises(DomainError):
        necessary_condition(BodyOfRevolution(3, C.corpus_profile("ball")))


@pytest.mark.parametrize("n", [4, 6, 8, 10])
def test_full_report_ball(n):
    rep = full_report(C.corpus("ball", n))
    assert rep.final == INTERSECTION_BODY_OF_STAR_BODY
    assert all(v.status != FAIL for v in rep.verdicts.values())


def test_full_report_barrel():
    assert full_report(C.corpus("barrel_B", 4)).final == INTERSECTION_BODY_OF_STAR_BODY
    assert full_report(C.corpus("barrel_B", 6)).final == INTERSECTION_BODY_ONLY
    rep = full_report(C.corpus("barrel_B", 8))
    assert rep.final == NOT_INTERSECTION_BODY
    assert rep.verdicts["density_sign"].witness["t"] == pytest.approx(A)
    rep = full_report(C.corpus("barrel_B", 10))
    assert rep.final == NOT_INTERSECTION_BODY
    assert rep.verdicts["density_sign"].witness["dimension"] == 8
    assert full_report(C.corpus("cylinder", 8)).final == NOT_INTERSECTION_BODY


def test_full_report_diabolo():
    K4 = intersection_body(C.corpus("diabolo_L", 4)).body
    assert full_report(K4).final == INTERSECTION_BODY_OF_STAR_BODY
    rep = full_report(K4.with_dimension(6))
    assert rep.final == NOT_INTERSECTION_BODY
    assert rep.verdicts["equator_convex_generator_R4"].status == FAIL


@pytest.mark.parametrize("name", [n for n in C.names() if n != "barrel_L8"])
@pytest.mark.parametrize("n", [4, 6])
def test_necessary_never_contradicts_full_report(name, n):
    K = C.corpus(name, n)
    if necessary_condition(K).status == FAIL:
        assert full_report(K).final != INTERSECTION_BODY_OF_STAR_BODY


def test_full_report_errors():
    with pytest.raises(UnsupportedError):
        full_report(C.corpus("ball", 5))
    with pytest.raises(DomainError):
        full_report(C.corpus("ball", 12))


def test_c1_report_odd_dimension():
    rep = c1_report(C.corpus("cylinder", 5))
    assert rep.final == NOT_INTERSECTION_BODY_OF_STAR_BODY
    assert rep.verdicts["necessary_c1"].witness == {"t": pytest.approx(A), "order": 1}
    assert c1_report(C.corpus("ball", 7)).final == INCONCLUSIVE


def test_report_serialisation():
    rep = full_report(C.corpus("cylinder", 4))
    data = json.loads(rep.to_json())
    assert data["final"] == INTERSECTION_BODY_ONLY
    assert data["verdicts"]["necessary_regularity"]["status"] == FAIL
    assert data["pole_class"] == "inf"
    text = rep.to_text()
    assert "verdict: intersection_body_only" in text and "witness" in text
    assert PASS in full_report(C.corpus("ball")).to_text()
