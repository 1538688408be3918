"""Infinitesimal actions in chart KC and their pullbacks under phi_f.

Closed forms are used for the tagged generators and are authoritative;
finite differences of the chart action are used for untagged algebra
elements and as a cross-check.  Conventions: ``proj_X(q) = d/dt
proj_{exp(tX)}(q)`` at ``t = 0``.  For this left action
``[proj_A, proj_B] = -proj_{[A,B]}`` with the vector-field bracket
``[V, W] = DW.V - DV.W``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from .actions import act_chart, act_reparam
from .lorentz import AlgebraElement, _parse_kind, generator, group_exp
from .models import BOUNDARY_HEIGHT, INFINITY
from .reparam import ReparamMap

__all__ = [
    "BoundaryExtensionFailure",
    "FieldEvaluation",
    "calibration_check",
    "f_over_fprime",
    "integrate_field",
    "lie_bracket",
    "numeric_field",
    "proj_field",
    "pullback_field",
    "pullback_table",
]

FD_STEP = 1e-5


@dataclass(frozen=True)
class FieldEvaluation:
    point: np.ndarray
    vector: np.ndarray


@dataclass(frozen=True)
class BoundaryExtensionFailure:
    """Returned instead of a vector when a pulled-back field has no smooth boundary value."""

    map_name: str
    reason: str

    def __bool__(self):
        return False


def numeric_field(action: Callable, x: AlgebraElement, q, h: float = FD_STEP) -> np.ndarray:
    """``d/dt action(exp(tX), q)`` at 0: central differences, one Richardson level."""

    def central(step):
        plus = action(group_exp(step * x), q)
        minus = action(group_exp(-step * x), q)
        return (np.asarray(plus) - np.asarray(minus)) / (2.0 * step)

    coarse = central(h)
    fine = central(h / 2.0)
    return (4.0 * fine - coarse) / 3.0


def _chart_point(q) -> np.ndarray:
    if q is INFINITY:
        raise ValueError("fields are not evaluated at INFINITY")
    q = np.array(q, dtype=float).reshape(-1)
    if q[-1] < -1e-9:
        raise ValueError(f"chart point has negative height {q[-1]}")
    return q


def _rotation_1i(i: int, dim: int) -> np.ndarray:
    # quarter turn sending e_1 to e_i (and e_i to -e_1) in x-space
    r = np.eye(dim)
    if i == 1:
        return r
    a = i - 1
    r[0, 0] = r[a, a] = 0.0
    r[a, 0] = 1.0
    r[0, a] = -1.0
    return r


def _closed_form(name: str, idx: tuple, x: np.ndarray, height: float, slot: float) -> np.ndarray:
    """Tagged field at ``(x, height)`` with ``slot`` in place of ``y`` in the y-component.

    For proj fields ``slot == height``; for pullbacks ``height = f(y)`` and
    ``slot = (f/f')(y)``.
    """
    dim = x.shape[0]
    out = np.zeros(dim + 1)
    if name == "H":
        out[:-1] = 2.0 * x
        out[-1] = 4.0 * slot
    elif name == "X":
        out[idx[0] - 1] = 1.0
    elif name == "R":
        j, k = idx[0] - 1, idx[1] - 1
        out[j] = -x[k]
        out[k] = x[j]
    else:
        (i,) = idx
        rot = _rotation_1i(i, dim)
        xr = rot.T @ x
        v = np.empty(dim)
        v[0] = height + xr[1:] @ xr[1:] - xr[0] ** 2
        v[1:] = -2.0 * xr[0] * xr[1:]
        out[:-1] = rot @ v
        out[-1] = -4.0 * xr[0] * slot
    return out


def proj_field(x: AlgebraElement, q) -> np.ndarray:
    """The vector field of the projective action of ``X`` in chart KC."""
    q = _chart_point(q)
    if x.n != q.shape[0]:
        raise ValueError(f"algebra of dimension {x.n} but chart point of length {q.shape[0]}")
    if x.tag is None:
        return numeric_field(act_chart, x, q)
    name, idx = _parse_kind(x.tag)
    return _closed_form(name, idx, q[:-1], q[-1], q[-1])


def f_over_fprime(f: ReparamMap, y) -> float:
    if y < 0:
        raise ValueError(f"negative height {y}")
    if y == 0:
        return 0.0
    return float(f.f_over_fprime(y))


def pullback_field(f: ReparamMap, x: AlgebraElement, q):
    """``(D phi_f)^-1 proj_X(phi_f(q))``.

    The y-component of every proj field is ``y`` times a function of
    ``x``, so the pullback has ``(f/f')(y)`` in place of ``y`` there.  At
    ``y = 0`` a :class:`BoundaryExtensionFailure` is returned unless
    ``f/f'`` is known to extend smoothly.
    """
    q = _chart_point(q)
    y = q[-1]
    if y < BOUNDARY_HEIGHT:
        if f.quotient_smooth is not True:
            why = "f/f' is not smooth at 0" if f.quotient_smooth is False else "smoothness of f/f' unknown"
            return BoundaryExtensionFailure(f.name, why)
        height, slot = 0.0, 0.0
    else:
        height, slot = float(f(y)), f_over_fprime(f, y)
    xs = q[:-1]
    if x.tag is not None:
        name, idx = _parse_kind(x.tag)
        return _closed_form(name, idx, xs, height, slot)
    at_image = proj_field(x, np.append(xs, height))
    unit = proj_field(x, np.append(xs, 1.0))
    at_image[-1] = unit[-1] * slot
    return at_image


def pullback_table(f: ReparamMap, x: AlgebraElement, points) -> list[FieldEvaluation | BoundaryExtensionFailure]:
    out = []
    for q in points:
        v = pullback_field(f, x, q)
        out.append(v if isinstance(v, BoundaryExtensionFailure) else FieldEvaluation(np.asarray(q, float), v))
    return out


def integrate_field(field: Callable, q0, t: float, rtol: float = 1e-11, atol: float = 1e-13) -> np.ndarray:
    """Flow of an autonomous field for time ``t`` (DOP853)."""
    if t == 0:
        return np.array(q0, dtype=float)
    sol = solve_ivp(lambda _, q: field(q), (0.0, t), np.array(q0, dtype=float), method="DOP853", rtol=rtol, atol=atol)
    if not sol.success:
        raise RuntimeError(f"integration failed: {sol.message}")
    return sol.y[:, -1]


def _jacobian(field: Callable, q: np.ndarray, h: float) -> np.ndarray:
    cols = []
    for i in range(q.shape[0]):
        e = np.zeros_like(q)
        e[i] = h
        cols.append((np.asarray(field(q + e)) - np.asarray(field(q - e))) / (2.0 * h))
    return np.column_stack(cols)


def lie_bracket(v: Callable, w: Callable, q, h: float = 1e-5) -> np.ndarray:
    """Numeric ``[V, W](q) = DW(q) V(q) - DV(q) W(q)``."""
    q = np.array(q, dtype=float)
    return _jacobian(w, q, h) @ np.asarray(v(q)) - _jacobian(v, q, h) @ np.asarray(w(q))


def calibration_check(tol: float = 1e-7) -> None:
    """Assert that the generator matrices produce the closed-form chart fields."""
    probes = [np.array([0.3, -0.7, 0.45]), np.array([-1.1, 0.2, 1.3])]
    for kind in ("H", "X_1", "X_2", "Y_1", "Y_2", "R_1_2"):
        x = generator(kind, 3)
        for q in probes:
            closed = proj_field(x, q)
            numeric = numeric_field(act_chart, x, q)
            err = float(np.max(np.abs(closed - numeric)))
            if not err < tol:
                raise AssertionError(f"generator {kind} is miscalibrated (error {err:.2e})")


def reparam_numeric_field(f: ReparamMap, x: AlgebraElement, q, h: float = FD_STEP) -> np.ndarray:
    """Finite-difference field of the phi_f action (oracle for :func:`pullback_field`)."""
    return numeric_field(lambda g, p: act_reparam(f, g, p), x, q, h)


calibration_check()
