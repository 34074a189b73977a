import math

import numpy as np
import pytest

from intbody import corpus as C
from intbody.errors import DistributionalError, NotStarBodyError, UnsupportedError
from intbody.lifting import (
    INTERSECTION_BODY_OF_STAR_BODY,
    INTERSECTION_BODY_ONLY,
    NOT_INTERSECTION_BODY,
    generator,
    is_equator_convex,
    lift,
    lift_steps,
    negative_part,
    verdict_next_dimension,
)
from intbody.profiles import BodyOfRevolution, from_t
from intbody.radon import GeneratingDensity, density_of, intersection_body

A = 1 / math.sqrt(2)
BODIES = [n for n in C.names() if n != "barrel_L8"]


def test_equator_convex_examples():
    assert is_equator_convex(C.corpus_profile("ball")).verdict == "yes"
    assert is_equator_convex(C.corpus_profile("barrel_gen4")).verdict == "yes"
    v = is_equator_convex(C.corpus_profile("diabolo_L"))
    assert v.verdict == "no"
    assert A < v.witness < 1


@pytest.mark.parametrize("name, convex", [("cylinder", True), ("double_cone", True), ("cylinder_capped", True),
                                          ("barrel_B", True), ("smooth_Ltilde", False)])
def test_equator_convex_corpus(name, convex):
    v = is_equator_convex(C.corpus_profile(name))
    assert bool(v) is convex
    if not convex:
        t = v.witness
        f = C.corpus_profile(name)
        h = 1e-6
        assert (t + h) * f.eval(t + h) < (t - h) * f.eval(t - h)


def test_downward_jump_is_caught():
    f = from_t([(0, 0.5, "2"), (0.5, 1, "1")])
    v = is_equator_convex(f)
    assert not v and v.witness == pytest.approx(0.5)


def test_ball_lift():
    d = lift(density_of(C.corpus("ball", 4)))
    assert d.n == 6 and d.atoms == ()
    assert np.allclose(d.F(np.linspace(0, 1, 11)), 5 / (2 * math.pi), rtol=1e-14)
    f = generator(d)
    assert np.allclose(f(np.linspace(0, 1, 5)), (5 / (2 * math.pi)) ** 0.2, rtol=1e-13)


def test_barrel_lift_to_six():
    d = lift(density_of(C.corpus("barrel_gen4", 4)))
    assert d.atoms == ()
    lo = np.linspace(0.05, A - 0.05, 9)
    hi = np.linspace(A + 0.05, 0.99, 9)
    assert np.allclose(d.F(lo), 5 * 3 / (8 * math.pi**2) * (1 - lo**2) ** -2.5, rtol=1e-12)
    assert np.allclose(d.F(hi), 10 * hi / math.pi**2, rtol=1e-12)


def test_barrel_lift_to_eight():
    d = lift_steps(density_of(C.corpus("barrel_gen4", 4)), 2)
    assert d.n == 8
    assert len(d.atoms) == 1
    t0, w = d.atoms[0]
    assert t0 == pytest.approx(A) and w < 0
    slope = d.F.derivs(0.9, 1)[1]
    assert w / slope == pytest.approx(-1 / 24, abs=1e-12)
    with pytest.raises(UnsupportedError):
        lift(d)
    neg = negative_part(d)
    assert neg.atom and neg.witness == pytest.approx(A)


@pytest.mark.parametrize("name", ["ball", "smooth_Ltilde", "barrel_gen4", "cylinder_capped"])
def test_smooth_equivalence(name):
    n = 4
    L = C.corpus(name, n)
    lifted = lift(density_of(L))
    f, df = L.profile, L.profile.derivative(1)
    t = np.random.default_rng(1).uniform(0.01, 0.99, 100)
    t = t[np.abs(t - A) > 1e-3]
    expected = (n + 1) / (2 * math.pi) * f(t) ** (n - 2) * (f(t) + t * df(t))
    assert np.allclose(lifted.F(t), expected, rtol=1e-10, atol=1e-12)


@pytest.mark.parametrize("name", BODIES)
def test_sign_preservation(name):
    L = C.corpus(name, 4)
    conv = bool(is_equator_convex(L.profile))
    neg = negative_part(lift(density_of(L)))
    assert conv == (not neg or neg.atom)


@pytest.mark.parametrize("name", ["ball", "barrel_gen4"])
def test_lifting_oracle(name):
    L = C.corpus(name, 4)
    x = np.linspace(0.02, 1, 60)
    rho4 = intersection_body(L, grid=x).values
    L6 = BodyOfRevolution(6, generator(lift(density_of(L))))
    rho6 = intersection_body(L6, grid=x).values
    assert np.max(np.abs(rho6 - rho4)) < 1e-5


def test_generator_errors():
    d = lift(density_of(C.corpus("diabolo_L", 4)))
    with pytest.raises(NotStarBodyError) as err:
        generator(d)
    assert A < err.value.witness <= 1
    atoms = lift_steps(density_of(C.corpus("barrel_gen4", 4)), 2)
    with pytest.raises(DistributionalError):
        generator(atoms)
    assert np.allclose(generator(GeneratingDensity(4, from_t([(0, 1, "1")], signed=True)))(np.array([0.3])), 1.0)


@pytest.mark.parametrize("name, verdict", [("ball", INTERSECTION_BODY_OF_STAR_BODY), ("barrel_gen4", INTERSECTION_BODY_ONLY),
                                           ("diabolo_L", NOT_INTERSECTION_BODY), ("smooth_Ltilde", NOT_INTERSECTION_BODY),
                                           ("double_cone", INTERSECTION_BODY_ONLY)])
def test_verdict_next_dimension(name, verdict):
    assert verdict_next_dimension(C.corpus(name, 4)).verdict == verdict


def test_lift_chains_through_json():
    d = lift(density_of(C.corpus("cylinder_capped", 4)))
    again = GeneratingDensity.from_dict(d.to_dict())
    t = np.array([0.1, 0.5, 0.9])
    assert np.allclose(lift(again).F(t), lift(d).F(t), rtol=1e-12)
