"""Lorentzian linear algebra for SO0(n,1).

Coordinates on R^{n+1} are ``(x_1, ..., x_n, y)`` with the timelike
coordinate last, so the form is ``Q = x_1^2 + ... + x_n^2 - y^2``.  The
half-space chart height corresponds to the spatial index ``n`` (array
index ``n - 1``).

Generator normalization (fixed, checked by ``hypcompact.fields.calibration_check``)::

    H      = 2 (E[n,n+1] + E[n+1,n])          boost along the chart y-axis
    X_i    = E[i,n+1] - E[i,n] + E[n,i] + E[n+1,i]   parabolic fixing infinity
    Y_i    = E[i,n+1] + E[i,n] - E[n,i] + E[n+1,i]   parabolic fixing the chart origin
    R_jk   = E[k,j] - E[j,k]                  rotation taking e_j towards e_k

(1-based indices, ``E[a,b]`` the matrix unit.)  With these, the chart
fields are ``proj_H = (2x, 4y)``, ``proj_X_i = d/dx_i`` and ``proj_Y_1``
the displayed quadratic field, without extra constants.
"""

from __future__ import annotations

import math
import re
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "MEMBERSHIP_TOL",
    "PARABOLIC_WEIGHT",
    "AlgebraElement",
    "GroupElement",
    "LorentzForm",
    "basis",
    "bracket",
    "generator",
    "group_exp",
    "minkowski",
    "random_algebra_element",
    "random_group_element",
    "symmetry_through_geodesic",
]

MEMBERSHIP_TOL = 1e-9

# [H, X_i] = PARABOLIC_WEIGHT * X_i for every i (see tests).
PARABOLIC_WEIGHT = 2.0


@dataclass(frozen=True)
class LorentzForm:
    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"spatial dimension must be >= 2, got {self.n}")

    @property
    def matrix(self) -> np.ndarray:
        return signature(self.n)

    def __call__(self, u, v) -> float:
        return minkowski(u, v)


def signature(n: int) -> np.ndarray:
    j = np.eye(n + 1)
    j[n, n] = -1.0
    return j


def minkowski(u, v) -> float:
    """Return ``u^T J v`` for vectors of equal length ``n + 1``."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if u.ndim != 1 or u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    if u.shape[0] < 2:
        raise ValueError("vectors need at least two coordinates")
    return float(u[:-1] @ v[:-1] - u[-1] * v[-1])


def _frozen(m) -> np.ndarray:
    a = np.array(m, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GroupElement:
    """An element of SO0(n,1), stored as its ``(n+1) x (n+1)`` matrix."""

    matrix: np.ndarray
    tol: float = field(default=MEMBERSHIP_TOL, repr=False)

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 3:
            raise ValueError(f"expected a square matrix of size >= 3, got shape {m.shape}")
        object.__setattr__(self, "matrix", m)
        defect = membership_defect(m)
        scale = max(1.0, float(np.linalg.norm(m)) ** 2)
        if defect > self.tol * scale:
            raise ValueError(f"matrix does not preserve the Lorentz form (defect {defect:.3e})")
        if np.linalg.det(m) <= 0:
            raise ValueError("matrix has non-positive determinant")
        if m[-1, -1] <= 0:
            raise ValueError("matrix exchanges the two sheets of the hyperboloid")

    @property
    def n(self) -> int:
        return self.matrix.shape[0] - 1

    @classmethod
    def identity(cls, n: int) -> GroupElement:
        return cls(np.eye(n + 1))

    def __matmul__(self, other):
        if isinstance(other, GroupElement):
            return GroupElement(self.matrix @ other.matrix, tol=self.tol)
        return self.matrix @ np.asarray(other, dtype=float)

    def inverse(self) -> GroupElement:
        j = signature(self.n)
        return GroupElement(j @ self.matrix.T @ j, tol=self.tol)

    def __repr__(self):
        return f"GroupElement(n={self.n})"


def membership_defect(m: np.ndarray) -> float:
    j = signature(m.shape[0] - 1)
    return float(np.linalg.norm(m.T @ j @ m - j))


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """An element of so(n,1); ``tag`` names one of the basis generators."""

    matrix: np.ndarray
    tag: str | None = None

    def __post_init__(self):
        x = _frozen(self.matrix)
        if x.ndim != 2 or x.shape[0] != x.shape[1] or x.shape[0] < 3:
            raise ValueError(f"expected a square matrix of size >= 3, got shape {x.shape}")
        object.__setattr__(self, "matrix", x)
        j = signature(x.shape[0] - 1)
        defect = float(np.linalg.norm(x.T @ j + j @ x))
        if defect > MEMBERSHIP_TOL * max(1.0, float(np.linalg.norm(x))):
            raise ValueError(f"matrix is not in so(n,1) (defect {defect:.3e})")

    @property
    def n(self) -> int:
        return self.matrix.shape[0] - 1

    def __add__(self, other: AlgebraElement) -> AlgebraElement:
        return AlgebraElement(self.matrix + other.matrix)

    def __sub__(self, other: AlgebraElement) -> AlgebraElement:
        return AlgebraElement(self.matrix - other.matrix)

    def __neg__(self) -> AlgebraElement:
        return AlgebraElement(-self.matrix)

    def __mul__(self, c: float) -> AlgebraElement:
        c = float(c)
        # scaling by one keeps the closed-form field available
        return AlgebraElement(c * self.matrix, tag=self.tag if c == 1.0 else None)

    __rmul__ = __mul__

    def __repr__(self):
        return f"AlgebraElement(n={self.n}, tag={self.tag!r})"


def bracket(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(a.matrix @ b.matrix - b.matrix @ a.matrix)


_TAG_RE = re.compile(r"^(H)$|^([XY])_?(\d+)$|^R_?(\d+)_(\d+)$|^R(\d)(\d)$")


def _parse_kind(kind: str) -> tuple[str, tuple[int, ...]]:
    m = _TAG_RE.match(kind.strip())
    if m is None:
        raise ValueError(f"unknown generator kind {kind!r}")
    if m.group(1):
        return "H", ()
    if m.group(2):
        return m.group(2), (int(m.group(3)),)
    if m.group(4):
        return "R", (int(m.group(4)), int(m.group(5)))
    return "R", (int(m.group(6)), int(m.group(7)))


def generator(kind: str, n: int) -> AlgebraElement:
    """Named generator of so(n,1): ``H``, ``X_i``, ``Y_i`` or ``R_j_k``.

    ``X_i``/``Y_i`` need ``1 <= i <= n-1``; ``R_j_k`` needs
    ``1 <= j < k <= n-1``.  The short forms ``X1`` and ``R12`` are accepted.
    """
    if n < 2:
        raise ValueError(f"spatial dimension must be >= 2, got {n}")
    name, idx = _parse_kind(kind)
    m = np.zeros((n + 1, n + 1))
    yy, tt = n - 1, n
    if name == "H":
        m[yy, tt] = m[tt, yy] = 2.0
        return AlgebraElement(m, tag="H")
    if name in "XY":
        (i,) = idx
        if not 1 <= i <= n - 1:
            raise ValueError(f"{name} index {i} out of range 1..{n - 1}")
        a = i - 1
        if name == "X":
            m[a, tt], m[a, yy], m[yy, a], m[tt, a] = 1.0, -1.0, 1.0, 1.0
        else:
            m[a, tt], m[a, yy], m[yy, a], m[tt, a] = 1.0, 1.0, -1.0, 1.0
        return AlgebraElement(m, tag=f"{name}_{i}")
    j, k = idx
    if not 1 <= j < k <= n - 1:
        raise ValueError(f"rotation indices ({j}, {k}) out of range 1 <= j < k <= {n - 1}")
    m[k - 1, j - 1] = 1.0
    m[j - 1, k - 1] = -1.0
    return AlgebraElement(m, tag=f"R_{j}_{k}")


def basis(n: int) -> list[AlgebraElement]:
    """All tagged generators; they span so(n,1) (dimension n(n+1)/2)."""
    out = [generator("H", n)]
    out += [generator(f"X_{i}", n) for i in range(1, n)]
    out += [generator(f"Y_{i}", n) for i in range(1, n)]
    out += [generator(f"R_{j}_{k}", n) for j in range(1, n) for k in range(j + 1, n)]
    return out


def _norm1(a: np.ndarray) -> float:
    return float(np.abs(a).sum(axis=0).max())


def _expm(a: np.ndarray) -> np.ndarray:
    """Scaling and squaring with a Taylor kernel; scaled norm kept below 0.5."""
    norm = _norm1(a)
    squarings = 0
    if norm >= 0.5:
        squarings = int(math.ceil(math.log2(norm / 0.5))) + 1
    b = a / 2.0**squarings
    bnorm = norm / 2.0**squarings
    eye = np.eye(a.shape[0])
    result = eye.copy()
    term = eye
    k = 0
    while True:
        k += 1
        term = term @ b / k
        result = result + term
        tnorm = _norm1(term)
        # geometric bound on the remaining tail, ratio bnorm/(k+1) < 1
        ratio = bnorm / (k + 1)
        if tnorm * ratio / (1.0 - ratio) <= 1e-18 * _norm1(result) or k > 60:
            break
    for _ in range(squarings):
        result = result @ result
    return result


def group_exp(x: AlgebraElement) -> GroupElement:
    return GroupElement(_expm(x.matrix))


@lru_cache(maxsize=None)
def _basis_stack(n: int) -> np.ndarray:
    return np.stack([g.matrix for g in basis(n)])


def random_algebra_element(rng: np.random.Generator, n: int, scale: float = 1.0) -> AlgebraElement:
    """Combination of the basis with coefficients uniform in [-scale, scale]."""
    stack = _basis_stack(n)
    coeffs = rng.uniform(-scale, scale, size=stack.shape[0])
    return AlgebraElement(np.tensordot(coeffs, stack, axes=1))


def random_group_element(rng: np.random.Generator, n: int, scale: float = 1.0) -> GroupElement:
    return group_exp(random_algebra_element(rng, n, scale))


def symmetry_through_geodesic(endpoints: Sequence, n: int | None = None) -> list[GroupElement]:
    """Involutions of SO0(n,1) whose common fixed set is a given geodesic.

    ``endpoints`` are two distinct points of the unit sphere (Klein
    boundary).  For odd ``n`` one involution is returned, acting as ``+1``
    on the timelike plane of the geodesic and ``-1`` on its orthogonal
    complement.  For even ``n`` two commuting involutions are returned, each
    additionally fixing one complement direction, so both have determinant
    one.  Requires ``n >= 3``.
    """
    a, b = (np.asarray(e, dtype=float) for e in endpoints)
    if n is None:
        n = a.shape[0]
    if a.shape != (n,) or b.shape != (n,):
        raise ValueError(f"endpoints must be vectors of length {n}")
    if n < 3:
        raise ValueError("a geodesic is cut out by symmetries of SO0(n,1) only for n >= 3")
    a = a / np.linalg.norm(a)
    b = b / np.linalg.norm(b)
    if np.linalg.norm(a - b) < 1e-12:
        raise ValueError("endpoints coincide")
    j = signature(n)
    na = np.append(a, 1.0)
    nb = np.append(b, 1.0)
    m = minkowski(na, nb)  # < 0 for distinct null vectors
    proj_plane = (np.outer(na, j @ nb) + np.outer(nb, j @ na)) / m
    eye = np.eye(n + 1)
    if n % 2 == 1:
        return [GroupElement(2.0 * proj_plane - eye)]

    # orthonormal basis of the (spacelike) complement of the plane
    complement = eye - proj_plane
    normals: list[np.ndarray] = []
    for col in complement.T:
        w = col.copy()
        for u in normals:
            w = w - minkowski(w, u) * u
        q = minkowski(w, w)
        if q > 1e-10:
            normals.append(w / math.sqrt(q))
        if len(normals) == 2:
            break
    w1, w2 = normals
    s1 = 2.0 * (proj_plane + np.outer(w1, j @ w1)) - eye
    s2 = 2.0 * (proj_plane + np.outer(w2, j @ w2)) - eye
    return [GroupElement(s1), GroupElement(s2)]
