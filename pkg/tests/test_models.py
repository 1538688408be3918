import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hypcompact.models import (
    INFINITY,
    Model,
    ModelPoint,
    apply_phi,
    apply_phi_inverse,
    chart_kc_to_klein,
    chart_pc_to_poincare,
    hyperbolic_distance,
    hyperboloid_to_klein,
    klein_to_chart_kc,
    klein_to_hyperboloid,
    klein_to_poincare,
    poincare_to_chart_pc,
    poincare_to_hyperboloid,
    poincare_to_klein,
    snap_ball,
)
from hypcompact.reparam import monomial
from hypcompact.sampling import random_ball_point, random_sphere_point

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.integers(min_value=2, max_value=5)


def test_hyperboloid_to_klein_examples():
    assert np.array_equal(hyperboloid_to_klein([0.0, 0.0, 1.0]), [0.0, 0.0])
    k = hyperboloid_to_klein([1.0, 0.0, math.sqrt(2.0)])
    assert np.allclose(k, [1 / math.sqrt(2.0), 0.0], atol=1e-15)


def test_hyperboloid_points_land_in_the_open_ball(rng):
    for _ in range(1000):
        n = int(rng.integers(2, 6))
        x = rng.standard_normal(n) * rng.uniform(0, 5)
        p = np.append(x, math.sqrt(1.0 + x @ x))
        assert np.linalg.norm(hyperboloid_to_klein(p)) < 1.0


def test_klein_poincare_examples():
    assert np.array_equal(klein_to_poincare([0.0, 0.0]), [0.0, 0.0])
    for _ in range(20):
        e = random_sphere_point(np.random.default_rng(_), 3)
        assert np.array_equal(klein_to_poincare(e), snap_ball(e))


def test_klein_poincare_round_trip(rng):
    worst = 0.0
    for _ in range(1000):
        k = random_ball_point(rng, 3, radius=0.999)
        worst = max(worst, np.abs(poincare_to_klein(klein_to_poincare(k)) - k).max())
    assert worst < 1e-12


def test_chart_kc_examples():
    assert np.array_equal(klein_to_chart_kc([0.0, 0.0, 0.0]), [0.0, 0.0, 1.0])
    assert np.array_equal(klein_to_chart_kc([0.0, 0.0, -1.0]), [0.0, 0.0, 0.0])
    assert np.allclose(klein_to_chart_kc([0.0, 0.6, 0.8]), [0.0, 3.0, 0.0], atol=1e-14)
    assert klein_to_chart_kc([0.0, 0.0, 1.0]) is INFINITY
    assert np.array_equal(chart_kc_to_klein(INFINITY, 3), [0.0, 0.0, 1.0])
    with pytest.raises(ValueError):
        chart_kc_to_klein(INFINITY)


def test_chart_pc_examples():
    assert np.allclose(poincare_to_chart_pc([0.0, 0.0]), [0.0, 1.0])
    assert poincare_to_chart_pc([0.0, 1.0]) is INFINITY
    assert np.array_equal(chart_pc_to_poincare(INFINITY, 2), [0.0, 1.0])


@given(dims, seeds)
def test_chart_round_trips(n, seed):
    rng = np.random.default_rng(seed)
    for boundary in (False, True):
        k = random_sphere_point(rng, n) if boundary else random_ball_point(rng, n)
        q = klein_to_chart_kc(k)
        if q is not INFINITY and np.abs(q).max() < 1e6:
            assert np.abs(chart_kc_to_klein(q) - k).max() < 1e-10
            if boundary:
                assert abs(q[-1]) < 1e-12
        p = klein_to_poincare(k)
        w = poincare_to_chart_pc(p)
        if w is not INFINITY and np.abs(w).max() < 1e6:
            assert np.abs(chart_pc_to_poincare(w) - p).max() < 1e-10
            if boundary:
                assert abs(w[-1]) < 1e-12
            else:
                assert w[-1] > 0


def test_chart_pc_is_a_homeomorphism_on_samples(rng):
    worst = 0.0
    for _ in range(1000):
        p = random_ball_point(rng, 3, radius=0.99)
        worst = max(worst, np.abs(chart_pc_to_poincare(poincare_to_chart_pc(p)) - p).max())
    assert worst < 1e-10


def test_chart_pc_carries_the_half_space_metric(rng):
    """Hyperbolic length of a short chart step is |dq| / height."""
    for _ in range(100):
        q = np.append(rng.uniform(-2, 2, 2), rng.uniform(0.1, 3.0))
        step = rng.standard_normal(3)
        step *= 1e-6 * q[-1] / np.linalg.norm(step)
        a = poincare_to_hyperboloid(chart_pc_to_poincare(q))
        b = poincare_to_hyperboloid(chart_pc_to_poincare(q + step))
        ratio = hyperbolic_distance(a, b) / (np.linalg.norm(step) / q[-1])
        assert abs(ratio - 1.0) < 1e-5


def test_pc_and_kc_differ_by_squaring_the_height(rng):
    for _ in range(200):
        k = random_ball_point(rng, 3)
        kc = klein_to_chart_kc(k)
        pc = poincare_to_chart_pc(klein_to_poincare(k))
        assert np.allclose(pc[:-1], kc[:-1], rtol=1e-12, atol=1e-12)
        assert abs(pc[-1] ** 2 - kc[-1]) < 1e-12 * max(1.0, kc[-1])


def test_hyperboloid_conversions_agree(rng):
    for _ in range(100):
        k = random_ball_point(rng, 3)
        h1 = klein_to_hyperboloid(k)
        h2 = poincare_to_hyperboloid(klein_to_poincare(k))
        assert np.abs(h1 - h2).max() < 1e-10 * np.abs(h1).max()


def test_apply_phi():
    f = monomial(2)
    assert np.array_equal(apply_phi(f, [0.5, -1.0, 3.0]), [0.5, -1.0, 9.0])
    assert np.array_equal(apply_phi(f, [0.5, -1.0, 0.0]), [0.5, -1.0, 0.0])
    assert apply_phi(f, INFINITY) is INFINITY
    assert np.allclose(apply_phi_inverse(f, [0.5, -1.0, 9.0]), [0.5, -1.0, 3.0])
    q = np.array([0.3, 0.7, 1.9])
    assert np.array_equal(apply_phi(monomial(1), q), q)


def test_snap_band():
    assert np.linalg.norm(snap_ball([1.0 + 1e-12, 0.0])) == 1.0
    with pytest.raises(ValueError):
        snap_ball([1.1, 0.0])


def test_model_point_validation():
    with pytest.raises(ValueError):
        ModelPoint(Model.HYPERBOLOID, [1.0, 0.0, 1.0])
    with pytest.raises(ValueError):
        ModelPoint(Model.KLEIN, [1.5, 0.0])
    with pytest.raises(ValueError):
        ModelPoint(Model.CHART_KC, [0.0, -1.0])
    with pytest.raises(ValueError):
        ModelPoint(Model.KLEIN, INFINITY, n=2)
    with pytest.raises(ValueError):
        ModelPoint(Model.CHART_KC, INFINITY)


def test_model_point_conversions(rng):
    for _ in range(50):
        k = ModelPoint(Model.KLEIN, random_ball_point(rng, 3))
        for model in Model:
            back = k.to(model).to(Model.KLEIN)
            assert np.abs(back.coords - k.coords).max() < 1e-10
    top = ModelPoint("klein", [0.0, 0.0, 1.0])
    assert top.to("chart_kc").is_infinity
    assert top.to("chart_pc").to("klein") == top
    assert top.on_boundary


def test_model_point_json_round_trip():
    for p in (ModelPoint("poincare", [0.1, 0.2]), ModelPoint("chart_pc", INFINITY, n=4)):
        q = ModelPoint.from_json(p.to_json())
        assert q == p
    assert ModelPoint("chart_kc", INFINITY, n=3).to_dict() == {"model": "chart_kc", "coords": "inf", "n": 3}
