"""Points of H^n and of its compactification in several models.

Models
------
``hyperboloid``  vectors ``(x_1..x_n, y)`` with ``Q = -1``, ``y > 0``
``klein``        closed unit ball, geodesics are chords
``poincare``     closed unit ball, conformal
``chart_kc``     closed half-space chart of the Klein ball (misses ``e_n``)
``chart_pc``     closed half-space chart of the Poincare ball (misses ``e_n``)

Ball coordinates are written ``(x_1, ..., x_{n-1}, y)``.  Both charts miss
the boundary point ``(0, ..., 0, 1)``, represented by :data:`INFINITY`.
The functions operate on plain arrays; :class:`ModelPoint` is the tagged
value used at the API and JSON boundary.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .reparam import ReparamMap

__all__ = [
    "BOUNDARY_BAND",
    "INFINITY",
    "Infinity",
    "Model",
    "ModelPoint",
    "apply_phi",
    "apply_phi_inverse",
    "chart_kc_to_klein",
    "chart_pc_to_poincare",
    "hyperbolic_distance",
    "hyperboloid_to_klein",
    "klein_to_chart_kc",
    "klein_to_hyperboloid",
    "klein_to_poincare",
    "poincare_to_chart_pc",
    "poincare_to_hyperboloid",
    "poincare_to_klein",
]

# points with norm in (1, 1 + BOUNDARY_BAND] are snapped onto the sphere
BOUNDARY_BAND = 1e-9
# heights below this are treated as boundary (flat maps underflow)
BOUNDARY_HEIGHT = 1e-300
# norms this close below 1 are rounding residue of unit vectors
_SPHERE_ULPS = 4 * 2.0**-52


class Model(str, Enum):
    HYPERBOLOID = "hyperboloid"
    KLEIN = "klein"
    POINCARE = "poincare"
    CHART_KC = "chart_kc"
    CHART_PC = "chart_pc"


class Infinity:
    """The single boundary point missed by a half-space chart."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (Infinity, ())


INFINITY = Infinity()


def _vec(p) -> np.ndarray:
    return np.array(p, dtype=float).reshape(-1)


def snap_ball(k) -> np.ndarray:
    """Return ``k`` as a float array in the closed unit ball.

    Norms in ``(1, 1 + BOUNDARY_BAND]`` are rescaled to exactly 1; larger
    norms raise ``ValueError``.
    """
    k = _vec(k)
    r = float(np.linalg.norm(k))
    if r > 1.0:
        if r > 1.0 + BOUNDARY_BAND:
            raise ValueError(f"point of norm {r} lies outside the closed ball")
        k = k / r
    return k


def _one_minus_sq(k: np.ndarray) -> float:
    r = float(np.linalg.norm(k))
    if r >= 1.0 - _SPHERE_ULPS:
        return 0.0
    return (1.0 - r) * (1.0 + r)


def hyperboloid_to_klein(p) -> np.ndarray:
    p = _vec(p)
    if p[-1] <= 0:
        raise ValueError("point is not on the upper sheet")
    return p[:-1] / p[-1]


def klein_to_hyperboloid(k) -> np.ndarray:
    k = _vec(k)
    s = _one_minus_sq(k)
    if s <= 0:
        raise ValueError("boundary points have no hyperboloid representative")
    return np.append(k, 1.0) / math.sqrt(s)


def poincare_to_hyperboloid(p) -> np.ndarray:
    p = _vec(p)
    s = _one_minus_sq(p)
    if s <= 0:
        raise ValueError("boundary points have no hyperboloid representative")
    return np.append(2.0 * p, 1.0 + p @ p) / s


def hyperbolic_distance(u, v) -> float:
    """Distance between two hyperboloid points, stable for nearby points."""
    d = _vec(u) - _vec(v)
    chord = d[:-1] @ d[:-1] - d[-1] ** 2
    return 2.0 * math.asinh(math.sqrt(max(chord, 0.0)) / 2.0)


def klein_to_poincare(k) -> np.ndarray:
    """Vertical lift to the hemisphere then stereographic projection; fixes the sphere."""
    k = snap_ball(k)
    return k / (1.0 + math.sqrt(_one_minus_sq(k)))


def poincare_to_klein(p) -> np.ndarray:
    p = snap_ball(p)
    return 2.0 * p / (1.0 + p @ p)


def klein_to_chart_kc(k):
    """Chart KC: ``(x/(1-y), (1-|x|^2-y^2)/(1-y)^2)``; ``e_n`` goes to INFINITY."""
    k = snap_ball(k)
    d = 1.0 - k[-1]
    if d <= 0.0:
        return INFINITY
    return np.append(k[:-1] / d, _one_minus_sq(k) / d**2)


def chart_kc_to_klein(q, n: int | None = None) -> np.ndarray:
    """Inverse of KC: ``t = 2/(1+v+|u|^2)``, ``k = (u t, 1 - t)``.

    INFINITY needs the dimension ``n`` and maps to ``e_n``.
    """
    if q is INFINITY:
        if n is None:
            raise ValueError("chart_kc_to_klein(INFINITY) needs the dimension n")
        return _kc_infinity(n)
    q = _vec(q)
    u, v = q[:-1], q[-1]
    if v < -BOUNDARY_BAND:
        raise ValueError(f"chart point has negative height {v}")
    v = max(v, 0.0)
    t = 2.0 / (1.0 + v + u @ u)
    return np.append(u * t, 1.0 - t)


def poincare_to_chart_pc(p):
    """Chart PC: ``(2 x, 1 - |p|^2) / (|x|^2 + (1 - y)^2)`` (Cayley transform)."""
    p = snap_ball(p)
    x, y = p[:-1], p[-1]
    den = x @ x + (1.0 - y) ** 2
    if den == 0.0:
        return INFINITY
    return np.append(2.0 * x, _one_minus_sq(p)) / den


def chart_pc_to_poincare(q, n: int | None = None) -> np.ndarray:
    if q is INFINITY:
        if n is None:
            raise ValueError("chart_pc_to_poincare(INFINITY) needs the dimension n")
        return _kc_infinity(n)
    q = _vec(q)
    u, w = q[:-1], q[-1]
    if w < -BOUNDARY_BAND:
        raise ValueError(f"chart point has negative height {w}")
    w = max(w, 0.0)
    uu = u @ u
    den = uu + (1.0 + w) ** 2
    return np.append(2.0 * u, uu + w * w - 1.0) / den


def apply_phi(f: ReparamMap, q):
    """``(x, y) -> (x, f(y))``; INFINITY and the boundary are fixed."""
    if q is INFINITY:
        return INFINITY
    q = _vec(q)
    out = q.copy()
    out[-1] = float(f(q[-1])) if q[-1] > 0 else 0.0
    return out


def apply_phi_inverse(f: ReparamMap, q):
    if q is INFINITY:
        return INFINITY
    q = _vec(q)
    out = q.copy()
    out[-1] = float(f.inverse(q[-1])) if q[-1] > 0 else 0.0
    return out


def _kc_infinity(n: int) -> np.ndarray:
    e = np.zeros(n)
    e[-1] = 1.0
    return e


@dataclass(frozen=True, eq=False)
class ModelPoint:
    """A point tagged with its model.  Chart points may be :data:`INFINITY`.

    ``n`` is required for INFINITY (it carries no coordinates).
    """

    model: Model
    coords: object
    n: int | None = None

    def __post_init__(self):
        model = Model(self.model)
        object.__setattr__(self, "model", model)
        if self.coords is INFINITY:
            if model not in (Model.CHART_KC, Model.CHART_PC):
                raise ValueError(f"INFINITY is only a point of the charts, not of {model.value}")
            if self.n is None:
                raise ValueError("INFINITY needs an explicit dimension n")
            return
        c = _vec(self.coords)
        dim = c.shape[0] - 1 if model is Model.HYPERBOLOID else c.shape[0]
        if self.n is not None and self.n != dim:
            raise ValueError(f"coordinates of length {c.shape[0]} do not match n={self.n}")
        if dim < 2:
            raise ValueError("dimension must be >= 2")
        if model is Model.HYPERBOLOID:
            q = c[:-1] @ c[:-1] - c[-1] ** 2
            if abs(q + 1.0) > 1e-9 * max(1.0, c[-1] ** 2) or c[-1] <= 0:
                raise ValueError("point is not on the upper sheet of the hyperboloid")
        elif model in (Model.KLEIN, Model.POINCARE):
            c = snap_ball(c)
        elif c[-1] < -BOUNDARY_BAND:
            raise ValueError("chart point below the boundary")
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)
        object.__setattr__(self, "n", dim)

    @property
    def is_infinity(self) -> bool:
        return self.coords is INFINITY

    @property
    def on_boundary(self) -> bool:
        if self.is_infinity:
            return True
        if self.model is Model.HYPERBOLOID:
            return False
        if self.model in (Model.KLEIN, Model.POINCARE):
            return abs(float(np.linalg.norm(self.coords)) - 1.0) <= 1e-12
        return abs(float(self.coords[-1])) <= 1e-12

    def to(self, model: Model | str) -> ModelPoint:
        """Convert to another model (through the Klein ball)."""
        model = Model(model)
        if model is self.model:
            return self
        k = self._klein()
        if model is Model.KLEIN:
            return ModelPoint(model, k)
        if model is Model.POINCARE:
            return ModelPoint(model, klein_to_poincare(k))
        if model is Model.HYPERBOLOID:
            return ModelPoint(model, klein_to_hyperboloid(k))
        if model is Model.CHART_KC:
            return ModelPoint(model, klein_to_chart_kc(k), n=self.n)
        return ModelPoint(model, poincare_to_chart_pc(klein_to_poincare(k)), n=self.n)

    def _klein(self) -> np.ndarray:
        if self.is_infinity:
            return _kc_infinity(self.n)
        c = self.coords
        if self.model is Model.KLEIN:
            return c
        if self.model is Model.POINCARE:
            return poincare_to_klein(c)
        if self.model is Model.HYPERBOLOID:
            return hyperboloid_to_klein(c)
        if self.model is Model.CHART_KC:
            return chart_kc_to_klein(c)
        return poincare_to_klein(chart_pc_to_poincare(c))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_dict(self) -> dict:
        coords = "inf" if self.is_infinity else [float(c) for c in self.coords]
        out = {"model": self.model.value, "coords": coords}
        if self.is_infinity:
            out["n"] = self.n
        return out

    @classmethod
    def from_dict(cls, data: dict) -> ModelPoint:
        coords = data["coords"]
        if coords == "inf":
            return cls(Model(data["model"]), INFINITY, n=data.get("n"))
        return cls(Model(data["model"]), coords)

    @classmethod
    def from_json(cls, text: str) -> ModelPoint:
        return cls.from_dict(json.loads(text))

    def __eq__(self, other):
        if not isinstance(other, ModelPoint) or other.model is not self.model:
            return NotImplemented
        if self.is_infinity or other.is_infinity:
            return self.is_infinity and other.is_infinity and self.n == other.n
        return bool(np.array_equal(self.coords, other.coords))

    __hash__ = None
