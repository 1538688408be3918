import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hypcompact.actions import (
    ActionKind,
    CompactifiedAction,
    act_chart,
    act_conf,
    act_conf_chart_pc,
    act_proj,
    act_proj_chart,
    act_reparam,
    chordal_error,
    point_error,
)
from hypcompact.lorentz import GroupElement, generator, group_exp, random_group_element
from hypcompact.models import INFINITY, klein_to_poincare
from hypcompact.reparam import flat_f1, monomial
from hypcompact.sampling import random_ball_point, random_chart_point, random_sphere_point

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.integers(min_value=2, max_value=4)


def test_identity_acts_trivially(rng):
    e = GroupElement.identity(3)
    for _ in range(20):
        k = random_ball_point(rng, 3)
        assert np.allclose(act_proj(e, k), k, atol=1e-15)
        assert np.allclose(act_conf(e, k), k, atol=1e-15)


@pytest.mark.parametrize("t", [-2.0, 0.5, 3.0])
def test_boost_fixes_its_endpoints(t):
    g = group_exp(t * generator("H", 3))
    for e in ([0.0, 0.0, 1.0], [0.0, 0.0, -1.0]):
        assert np.abs(act_proj(g, e) - e).max() < 1e-14
        assert np.abs(act_conf(g, e) - e).max() < 1e-14


def test_chords_stay_straight(rng):
    for _ in range(100):
        g = random_group_element(rng, 3)
        a, b = random_ball_point(rng, 3), random_ball_point(rng, 3)
        pts = [act_proj(g, (1 - t) * a + t * b) for t in (0.0, 0.37, 1.0)]
        u, v = pts[1] - pts[0], pts[2] - pts[0]
        cross = np.cross(u, v)
        assert np.linalg.norm(cross) < 1e-9 * max(1.0, np.linalg.norm(u) * np.linalg.norm(v))


def test_conf_and_proj_agree_on_the_sphere(rng):
    for _ in range(100):
        g = random_group_element(rng, 3)
        e = random_sphere_point(rng, 3)
        assert np.abs(act_conf(g, e) - act_proj(g, e)).max() < 1e-12


def test_conf_is_the_klein_poincare_conjugate(rng):
    from hypcompact.models import poincare_to_klein

    for _ in range(200):
        g = random_group_element(rng, 3)
        p = random_ball_point(rng, 3)
        expected = klein_to_poincare(act_proj(g, poincare_to_klein(p)))
        assert np.abs(act_conf(g, p) - expected).max() < 1e-12


def _jacobian(fun, p, h=1e-6):
    cols = []
    for i in range(p.shape[0]):
        e = np.zeros_like(p)
        e[i] = h
        cols.append((fun(p + e) - fun(p - e)) / (2 * h))
    return np.column_stack(cols)


def _angle(u, v):
    return math.acos(max(-1.0, min(1.0, u @ v / (np.linalg.norm(u) * np.linalg.norm(v)))))


def test_conf_preserves_angles(rng):
    for _ in range(100):
        g = random_group_element(rng, 3, scale=0.5)
        p = random_ball_point(rng, 3, radius=0.7)
        jac = _jacobian(lambda q: act_conf(g, q), p)
        u, v = rng.standard_normal(3), rng.standard_normal(3)
        assert abs(_angle(jac @ u, jac @ v) - _angle(u, v)) < 1e-6


def test_proj_does_not_preserve_angles():
    g = group_exp(1.5 * generator("H", 3))
    p = np.array([0.3, 0.1, 0.2])
    jac = _jacobian(lambda q: act_proj(g, q), p)
    u, v = np.array([1.0, 0, 0]), np.array([0, 0, 1.0])
    assert abs(_angle(jac @ u, jac @ v) - _angle(u, v)) > 1e-2


def test_rotations_act_as_euclidean_rotations(rng):
    t = 0.7
    g = group_exp(t * generator("R_1_2", 3))
    rot = np.array([[math.cos(t), -math.sin(t), 0], [math.sin(t), math.cos(t), 0], [0, 0, 1]])
    for _ in range(20):
        p = random_ball_point(rng, 3)
        assert np.abs(act_conf(g, p) - rot @ p).max() < 1e-14


def test_identity_reparam_matches_transported_proj(rng):
    for _ in range(500):
        g = random_group_element(rng, 3)
        q = random_chart_point(rng, 3, boundary=bool(rng.integers(2)))
        assert chordal_error(act_chart(g, q), act_proj_chart(g, q)) < 1e-12


def test_square_reparam_is_conf_in_chart_pc(rng):
    worst = 0.0
    for i in range(300):
        g = random_group_element(rng, 3)
        q = random_chart_point(rng, 3, monomial(2), boundary=i % 10 == 0)
        worst = max(worst, chordal_error(act_reparam(monomial(2), g, q), act_conf_chart_pc(g, q)))
    assert worst < 1e-9


def test_infinity_handling():
    for f in (monomial(1), monomial(3), flat_f1()):
        for tag in ("H", "X_1", "R_1_2"):
            g = group_exp(0.8 * generator(tag, 3))
            assert act_reparam(f, g, INFINITY) is INFINITY
        g = group_exp(0.8 * generator("Y_1", 3))
        img = act_reparam(f, g, INFINITY)
        assert img is not INFINITY and img[-1] == 0.0
        assert point_error(img, act_proj_chart(g, INFINITY)) < 1e-12
        # and back again
        assert act_reparam(f, g.inverse(), img) is INFINITY


def test_points_sent_to_infinity():
    g = group_exp(0.8 * generator("Y_1", 3))
    img = act_chart(g, INFINITY)
    assert act_chart(g.inverse(), img) is INFINITY


@given(dims, seeds)
def test_homomorphism_property(n, seed):
    rng = np.random.default_rng(seed)
    g, h = random_group_element(rng, n), random_group_element(rng, n)
    for f in (monomial(1), monomial(2), monomial(3)):
        for boundary in (False, True):
            q = random_chart_point(rng, n, f, boundary=boundary)
            lhs = act_reparam(f, g, act_reparam(f, h, q))
            rhs = act_reparam(f, g @ h, q)
            assert chordal_error(lhs, rhs) < 1e-9
    k = random_ball_point(rng, n)
    assert point_error(act_proj(g, act_proj(h, k)), act_proj(g @ h, k)) < 1e-9
    assert point_error(act_conf(g, act_conf(h, k)), act_conf(g @ h, k)) < 1e-9


@given(dims, seeds)
def test_boundary_is_invariant(n, seed):
    rng = np.random.default_rng(seed)
    g = random_group_element(rng, n)
    e = random_sphere_point(rng, n)
    assert abs(np.linalg.norm(act_proj(g, e)) - 1.0) < 1e-10
    assert abs(np.linalg.norm(act_conf(g, e)) - 1.0) < 1e-10
    for f in (monomial(2), flat_f1()):
        q = random_chart_point(rng, n, f, boundary=True)
        img = act_reparam(f, g, q)
        assert img is INFINITY or img[-1] == 0.0


@given(dims, seeds)
def test_interior_stays_interior(n, seed):
    rng = np.random.default_rng(seed)
    g = random_group_element(rng, n)
    k = random_ball_point(rng, n, radius=0.9)
    assert np.linalg.norm(act_proj(g, k)) < 1.0
    q = random_chart_point(rng, n, monomial(2))
    img = act_reparam(monomial(2), g, q)
    assert img is INFINITY or img[-1] > 0


def test_orbit_of_the_origin_fills_the_ball():
    rng = np.random.default_rng(5)
    origin = np.zeros(2)
    orbit = np.array([act_proj(random_group_element(rng, 2, scale=1.5), origin) for _ in range(4000)])
    targets = [random_ball_point(rng, 2, radius=0.9) for _ in range(200)]
    gaps = [np.min(np.linalg.norm(orbit - t, axis=1)) for t in targets]
    assert max(gaps) < 0.1


def test_compactified_action_wrapper(rng):
    g = random_group_element(rng, 3)
    proj, conf, rep = CompactifiedAction.proj(), CompactifiedAction.conf(), CompactifiedAction.reparam(monomial(2))
    assert proj.kind is ActionKind.PROJ and proj.model == "klein"
    assert conf.model == "poincare" and rep.model == "chart_kc"
    assert rep.label == "phi[p=2]"
    k = random_ball_point(rng, 3)
    assert np.array_equal(proj(g, k), act_proj(g, k))
    assert rep.on_boundary(np.array([0.1, 0.2, 0.0]))
    assert proj.on_boundary(random_sphere_point(rng, 3))
    with pytest.raises(ValueError):
        CompactifiedAction(ActionKind.REPARAM)
    with pytest.raises(ValueError):
        CompactifiedAction(ActionKind.PROJ, monomial(2))


def test_chordal_error():
    assert chordal_error(INFINITY, INFINITY) == 0.0
    assert chordal_error(INFINITY, np.zeros(2)) == 1.0
    assert chordal_error([3.0, 0.0], [3.0, 0.0]) == 0.0
