"""Acceptance criteria, one test each; every test prints a PASS/FAIL line."""

import itertools
import time

import numpy as np
import pytest

from hypcompact.actions import CompactifiedAction, act_conf, act_conf_chart_pc, act_reparam, chordal_error
from hypcompact.diagnostics import (
    DivergesAtOrder,
    Geodesic,
    NonFlatAtOrder,
    SmoothUpTo,
    action_axiom_suite,
    boundary_conjugacy,
    boundary_pairs,
    boundary_tangency_angle,
    classify_smoothness,
    endpoints_under,
    flatness_order,
    holder_exponent,
)
from hypcompact.fields import numeric_field, pullback_field, reparam_numeric_field
from hypcompact.actions import act_chart
from hypcompact.lorentz import generator, random_group_element
from hypcompact.models import chart_pc_to_poincare, poincare_to_chart_pc
from hypcompact.reparam import custom, flat_f1, flat_f2, monomial
from hypcompact.sampling import random_ball_point, random_chart_point, random_sphere_point
from hypcompact.symbolic import (
    evaluate_poly,
    is_analytic,
    is_boundary_tangent,
    monomial_family,
    proj_field_poly,
    pullback_monomial,
)


@pytest.fixture
def verdict(capsys):
    def emit(k: int, ok: bool, detail: str):
        with capsys.disabled():
            print(f"\n[criterion {k}] {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail

    return emit


def test_criterion_1_action_axioms(verdict):
    start = time.perf_counter()
    failures, worst = [], {"composition": 0.0, "identity": 0.0, "boundary": 0.0}
    for n in (2, 3, 4):
        actions = [CompactifiedAction.proj(), CompactifiedAction.conf()]
        actions += [CompactifiedAction.reparam(f) for f in (monomial(1), monomial(2), monomial(3), flat_f1())]
        for i, action in enumerate(actions):
            rep = action_axiom_suite(action, n, np.random.default_rng([1, n, i]), samples=1000)
            worst["composition"] = max(worst["composition"], rep.composition_error)
            worst["identity"] = max(worst["identity"], rep.identity_error)
            worst["boundary"] = max(worst["boundary"], rep.boundary_defect)
            if not rep.passed(1e-9, 1e-9, 1e-10):
                failures.append(f"{rep.label} n={n}")
    elapsed = time.perf_counter() - start
    detail = (
        f"18 suites x 1000 triples, max composition {worst['composition']:.1e}, identity {worst['identity']:.1e}, "
        f"boundary {worst['boundary']:.1e}, {elapsed:.1f} s"
    )
    if failures:
        detail += f"; failed: {', '.join(failures)}"
    verdict(1, not failures and elapsed < 30.0, detail)


def test_criterion_2_square_reparam_is_conf(verdict):
    rng = np.random.default_rng(2)
    m2 = monomial(2)
    ball_err = chart_err = 0.0
    for i in range(1000):
        n = 2 + i % 3
        g = random_group_element(rng, n)
        p = random_sphere_point(rng, n) if i < 100 else random_ball_point(rng, n, radius=0.999)
        q = poincare_to_chart_pc(p)
        img = act_reparam(m2, g, q)
        ball_err = max(ball_err, float(np.max(np.abs(chart_pc_to_poincare(img, n) - act_conf(g, p)))))
        chart_err = max(chart_err, chordal_error(img, act_conf_chart_pc(g, q)))
    ok = ball_err < 1e-9 and chart_err < 1e-9
    verdict(2, ok, f"1000 points (100 on the sphere), ball error {ball_err:.1e}, chordal chart error {chart_err:.1e}")


def _displayed_h(x, slot):
    return np.append(2.0 * x, 4.0 * slot)


def _displayed_y1(x, height, slot):
    v = np.empty(x.shape[0] + 1)
    v[0] = height + x[1:] @ x[1:] - x[0] ** 2
    v[1:-1] = -2.0 * x[0] * x[1:]
    v[-1] = -4.0 * x[0] * slot
    return v


def _bounded_chart_point(rng, n, f=None):
    while True:
        q = random_chart_point(rng, n, f)
        if np.max(np.abs(q[:-1])) <= 3.0 and 0.02 <= q[-1] <= 3.0:
            if f is None or float(f(q[-1] * 1.01)) < f.sup:
                return q


def test_criterion_3_displayed_fields(verdict):
    rng = np.random.default_rng(3)
    proj_worst = pull_worst = 0.0
    maps = [monomial(2), monomial(3), flat_f1()]
    for i in range(500):
        n = 2 + i % 3
        q = _bounded_chart_point(rng, n)
        x, y = q[:-1], q[-1]
        proj_worst = max(
            proj_worst,
            np.max(np.abs(numeric_field(act_chart, generator("H", n), q) - _displayed_h(x, y))),
            np.max(np.abs(numeric_field(act_chart, generator("Y_1", n), q) - _displayed_y1(x, y, y))),
        )
        f = maps[i % 3]
        q = _bounded_chart_point(rng, n, f)
        x, y = q[:-1], q[-1]
        height, slot = float(f(y)), float(f.f_over_fprime(y))
        for tag, shown in (("H", _displayed_h(x, slot)), ("Y_1", _displayed_y1(x, height, slot))):
            closed = pullback_field(f, generator(tag, n), q)
            numeric = reparam_numeric_field(f, generator(tag, n), q)
            pull_worst = max(pull_worst, np.max(np.abs(closed - shown)), np.max(np.abs(numeric - shown)))
    ok = proj_worst < 1e-7 and pull_worst < 1e-7
    verdict(3, ok, f"500 points, proj fields {proj_worst:.1e}, pulled-back fields {pull_worst:.1e}")


def test_criterion_4_condition_two_separation(verdict):
    start = time.perf_counter()
    cases = [(f"y^{p}", monomial(p).f_over_fprime, SmoothUpTo(5)) for p in range(1, 6)]
    cases += [("f1", lambda y: y**3 / 2, SmoothUpTo(5)), ("f2", lambda y: 2 * y**2.5 / 3, DivergesAtOrder(3))]
    bad, evidence = [], []
    for name, g, expected in cases:
        rep = classify_smoothness(g, k_max=5)
        evidence.append(f"{name} {rep.verdict} ({rep.evidence_orders:.1f})")
        if rep.verdict != expected or rep.evidence_orders < 2.0:
            bad.append(name)
    elapsed = time.perf_counter() - start
    detail = ", ".join(evidence) + f"; {elapsed:.2f} s"
    verdict(4, not bad and elapsed < 5.0, detail + (f"; wrong: {bad}" if bad else ""))


def _family():
    for p in range(1, 6):
        yield f"y^{p}", monomial(p), p
        yield f"y^{p}(1+y)", custom(
            lambda y, p=p: y**p * (1 + y), lambda y, p=p: p * y ** (p - 1) + (p + 1) * y**p, name=f"y^{p}(1+y)"
        ), p


def test_criterion_5_non_flat_implies_condition(verdict):
    counter = []
    for name, f, p in _family():
        flat = flatness_order(f, k_max=5).verdict
        smooth = classify_smoothness(f.quotient, k_max=5).verdict
        if flat != NonFlatAtOrder(p) or not isinstance(smooth, SmoothUpTo):
            counter.append(f"{name}: {flat}, {smooth}")
    verdict(5, not counter, f"10 maps, {len(counter)} counterexamples" + (f": {counter}" if counter else ""))


def test_criterion_6_holder_half(verdict):
    results = []
    ok = True
    for n in (2, 3):
        est = holder_exponent(boundary_conjugacy("conf", "proj"), boundary_pairs(np.random.default_rng([6, n]), n))
        results.append(f"n={n} exponent {est.exponent:.3f} residual {est.residual:.3f} over {est.decades:.1f} decades")
        ok &= abs(est.exponent - 0.5) <= 0.05 and est.residual < 0.1
    verdict(6, ok, "; ".join(results))


def _numeric_monomial_pullback(field, p, q):
    # (D phi)^-1 X(phi(q)) for phi(x, y) = (x, y^p), evaluated in floating point
    y = q[-1]
    v = evaluate_poly(field, np.append(q[:-1], y**p))
    v[-1] /= p * y ** (p - 1)
    return v


def test_criterion_7_monomial_pullback_analyticity(verdict):
    rng = np.random.default_rng(7)
    mismatches, law, worst = [], [], 0.0
    family = monomial_family(3, max_degree=2, max_b=2)
    for x, p in itertools.product(family, (2, 3, 4)):
        pulled = pullback_monomial(x, p)
        if is_analytic(pulled) != is_boundary_tangent(x):
            mismatches.append(f"{x} p={p}")
        (t,) = x.terms
        (u,) = pulled.terms
        expected_b = p * t.b + 1 - p if t.component == 3 else p * t.b
        if u.b != expected_b or u.a != t.a:
            law.append(f"{x} p={p}")
        for _ in range(5):
            q = np.append(rng.uniform(-2, 2, 2), rng.uniform(0.1, 2))
            exact = evaluate_poly(pulled, q)
            worst = max(worst, float(np.max(np.abs(exact - _numeric_monomial_pullback(x, p, q)) / np.maximum(1.0, np.abs(exact)))))
    for tag, p in itertools.product(("H", "Y_1", "Y_2", "X_1", "R_1_2"), (2, 3, 4)):
        pulled = pullback_monomial(proj_field_poly(tag, 3), p)
        for _ in range(20):
            q = np.append(rng.uniform(-2, 2, 2), rng.uniform(0.01, 2))
            worst = max(worst, float(np.max(np.abs(evaluate_poly(pulled, q) - pullback_field(monomial(p), generator(tag, 3), q)))))
    ok = not mismatches and not law and worst < 1e-10
    detail = f"{len(family)} fields x p in (2,3,4): {len(mismatches)} equivalence failures, {len(law)} exponent-law failures, numeric cross-check {worst:.1e}"
    verdict(7, ok, detail)


def test_criterion_8_tangency_dichotomy(verdict):
    rng = np.random.default_rng(8)
    conf_max, proj_min = 0.0, np.inf
    for _ in range(50):
        g1, g2 = Geodesic.asymptotic_pair(rng, 3)
        conf_max = max(conf_max, boundary_tangency_angle("conf", g1, g2).angle)
        proj_min = min(proj_min, boundary_tangency_angle("proj", g1, g2).angle)
    verdict(8, conf_max < 1e-3 and proj_min > 1e-2, f"50 pairs, max conf angle {conf_max:.1e}, min proj angle {proj_min:.3f}")


def test_criterion_9_two_endpoints(verdict):
    rng = np.random.default_rng(9)
    maps = [monomial(1), monomial(2), monomial(3), flat_f1()]
    bad = 0
    for _ in range(100):
        geo = Geodesic.random(rng, 3)
        for f in maps:
            rep = endpoints_under(f, geo, tol=1e-6)
            bad += not (all(rep.converged) and rep.distinct)
    verdict(9, bad == 0, f"100 geodesics x 4 maps, {bad} failures")


def test_f2_is_flagged_not_smooth():
    # companion to criterion 4: the pulled-back H has no boundary value for f2
    assert not pullback_field(flat_f2(), generator("H", 3), [0.0, 0.0, 0.0])
