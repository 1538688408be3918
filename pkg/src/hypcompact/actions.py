"""Compactified actions of SO0(n,1): proj, conf and the phi_f conjugates.

The chart action is computed from the homogeneous lift
``(u, (s-1)/2, (s+1)/2)``, ``s = |u|^2 + v``, of a KC chart point
``(u, v)``.  Its Lorentz norm is ``-v`` and its null coordinate
``T - Y`` is 1, so after applying ``g`` the image is ``(W_x/D, v/D^2)``
with ``D = W_T - W_Y``.  Heights never pass through a subtraction, so the
boundary ``v = 0`` is preserved exactly and flat reparametrizations can
be carried in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .lorentz import GroupElement
from .models import (
    BOUNDARY_HEIGHT,
    INFINITY,
    chart_pc_to_poincare,
    klein_to_chart_kc,
    chart_kc_to_klein,
    poincare_to_chart_pc,
    snap_ball,
    _one_minus_sq,
)
from .reparam import ReparamMap, monomial

__all__ = [
    "ActionKind",
    "CompactifiedAction",
    "act_chart",
    "act_conf",
    "act_conf_chart_pc",
    "act_proj",
    "act_proj_chart",
    "act_reparam",
    "chordal_error",
    "point_error",
]

# relative size of the null coordinate below which the image is INFINITY
_NULL_TOL = 1e-14


def act_proj(g: GroupElement, k) -> np.ndarray:
    """Projective action on the closed Klein ball."""
    k = snap_ball(k)
    on_sphere = _one_minus_sq(k) == 0.0
    w = g.matrix @ np.append(k, 1.0)
    if not w[-1] > 0:
        raise AssertionError("closed-ball point sent through the hyperplane at infinity")
    out = w[:-1] / w[-1]
    r = float(np.linalg.norm(out))
    if on_sphere or r > 1.0:
        out = out / r
    return out


def act_conf(g: GroupElement, p) -> np.ndarray:
    """Conformal action on the closed Poincare ball.

    Equal to ``klein_to_poincare . act_proj . poincare_to_klein``; written
    with the preserved factor ``1 - |p|^2`` so it stays accurate up to the
    sphere.
    """
    p = snap_ball(p)
    s = _one_minus_sq(p)
    w = g.matrix @ np.append(2.0 * p, 1.0 + p @ p)
    if not w[-1] > 0:
        raise AssertionError("closed-ball point sent through the hyperplane at infinity")
    out = w[:-1] / (w[-1] + s)
    r = float(np.linalg.norm(out))
    if s == 0.0 or r > 1.0:
        out = out / r
    return out


def _lift(x: np.ndarray, v: float) -> np.ndarray:
    s = x @ x + v
    return np.concatenate([x, [(s - 1.0) / 2.0, (s + 1.0) / 2.0]])


def _null_coordinate(w: np.ndarray) -> float | None:
    d = w[-1] - w[-2]
    if d <= _NULL_TOL * float(np.linalg.norm(w)):
        return None
    return d


def act_reparam(f: ReparamMap, g: GroupElement, q):
    """``phi_f^-1 . proj_g . phi_f`` in chart KC.

    On the boundary ``y = 0`` only the x-part moves (the continuous
    extension).  Raises :class:`~hypcompact.reparam.OutOfRangeError` when
    ``f`` has bounded range and the image of ``phi_f(q)`` leaves it.
    """
    m = g.matrix
    if q is INFINITY:
        w = m[:, -1] + m[:, -2]
        d = _null_coordinate(w)
        if d is None:
            return INFINITY
        return np.append(w[:-2] / d, 0.0)
    q = np.array(q, dtype=float).reshape(-1)
    if q.shape[0] != g.n:
        raise ValueError(f"chart point of length {q.shape[0]} for a group of dimension {g.n}")
    x, y = q[:-1], q[-1]
    if y < -1e-9:
        raise ValueError(f"chart point has negative height {y}")
    boundary = y < BOUNDARY_HEIGHT
    v = 0.0 if boundary else float(f(y))
    w = m @ _lift(x, v)
    d = _null_coordinate(w)
    if d is None:
        return INFINITY
    out = np.empty_like(q)
    out[:-1] = w[:-2] / d
    if boundary:
        out[-1] = 0.0
        return out
    v_new = v / (d * d)
    if v > 1e-290 and 1e-290 < v_new < math.inf:
        out[-1] = f.inverse(v_new)
    else:
        out[-1] = f.inverse_log(float(f.log_f(y)) - 2.0 * math.log(d))
    return out


_IDENTITY_MAP = monomial(1)


def act_chart(g: GroupElement, q):
    """proj written in chart KC."""
    return act_reparam(_IDENTITY_MAP, g, q)


def act_proj_chart(g: GroupElement, q):
    """act_proj transported to KC through the explicit chart maps (oracle for act_chart)."""
    k = chart_kc_to_klein(q, g.n)
    return klein_to_chart_kc(act_proj(g, k))


def act_conf_chart_pc(g: GroupElement, q):
    """act_conf transported to chart PC."""
    p = chart_pc_to_poincare(q, g.n)
    return poincare_to_chart_pc(act_conf(g, p))


class ActionKind(str, Enum):
    PROJ = "proj"
    CONF = "conf"
    REPARAM = "reparam"


@dataclass(frozen=True)
class CompactifiedAction:
    """One of proj (Klein ball), conf (Poincare ball) or phi_f (chart KC)."""

    kind: ActionKind
    f: ReparamMap | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", ActionKind(self.kind))
        if (self.kind is ActionKind.REPARAM) != (self.f is not None):
            raise ValueError("a reparametrization map is required exactly for kind 'reparam'")

    @classmethod
    def proj(cls) -> CompactifiedAction:
        return cls(ActionKind.PROJ)

    @classmethod
    def conf(cls) -> CompactifiedAction:
        return cls(ActionKind.CONF)

    @classmethod
    def reparam(cls, f: ReparamMap) -> CompactifiedAction:
        return cls(ActionKind.REPARAM, f)

    @property
    def model(self) -> str:
        return {"proj": "klein", "conf": "poincare", "reparam": "chart_kc"}[self.kind.value]

    @property
    def label(self) -> str:
        return self.kind.value if self.f is None else f"phi[{self.f.name}]"

    def __call__(self, g: GroupElement, point):
        if self.kind is ActionKind.PROJ:
            return act_proj(g, point)
        if self.kind is ActionKind.CONF:
            return act_conf(g, point)
        return act_reparam(self.f, g, point)

    def on_boundary(self, point, tol: float = 1e-10) -> bool:
        if point is INFINITY:
            return True
        point = np.asarray(point, dtype=float)
        if self.kind is ActionKind.REPARAM:
            return abs(float(point[-1])) <= tol
        return abs(float(np.linalg.norm(point)) - 1.0) <= tol


def point_error(a, b) -> float:
    """Discrepancy between two points, relative to their size once above 1.

    INFINITY matches only itself.
    """
    if a is INFINITY or b is INFINITY:
        return 0.0 if a is b else math.inf
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b)) / max(1.0, float(np.max(np.abs(a)))))


def chordal_error(a, b) -> float:
    """Chordal distance of the one-point compactification of the chart.

    ``|a - b| / (sqrt(1 + |a|^2) sqrt(1 + |b|^2))``; INFINITY is the point
    at distance ``1 / sqrt(1 + |a|^2)`` from ``a``.  This is the metric in
    which the chart action is uniformly well conditioned near INFINITY.
    """
    if a is INFINITY and b is INFINITY:
        return 0.0
    if a is INFINITY or b is INFINITY:
        p = np.asarray(b if a is INFINITY else a, dtype=float)
        return 1.0 / math.sqrt(1.0 + float(p @ p))
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(np.linalg.norm(a - b)) / math.sqrt((1.0 + float(a @ a)) * (1.0 + float(b @ b)))
