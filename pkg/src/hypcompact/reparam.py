"""Boundary reparametrizations ``f: R+ -> R+`` used by ``phi_f``.

Every map carries analytic evaluators for ``f``, ``f'`` and ``f/f'``.
The evaluators accept floats and ``mpmath.mpf`` values alike, which lets
the diagnostics difference them at high precision.  Flat maps underflow
long before the boundary, so each map also exposes ``log_f`` and
``inverse_log`` and the actions work in log space when needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import mpmath
import numpy as np
from scipy.optimize import brentq

__all__ = [
    "OutOfRangeError",
    "ReparamMap",
    "custom",
    "flat_f1",
    "flat_f2",
    "monomial",
    "parse_fspec",
]


class OutOfRangeError(ValueError):
    """A value has no preimage under a reparametrization with bounded range."""


def _exp(y):
    return mpmath.exp(y) if isinstance(y, mpmath.mpf) else math.exp(y)


def _log(y):
    return mpmath.log(y) if isinstance(y, mpmath.mpf) else math.log(y)


@dataclass(frozen=True, eq=False)
class ReparamMap:
    """A homeomorphism ``f`` of R+ with its derivative and ``f/f'``.

    ``sup`` is the supremum of the range (``inf`` when ``f`` is onto).
    ``quotient_smooth`` records whether ``f/f'`` extends smoothly to 0;
    ``None`` means unknown (custom maps), to be decided by the diagnostics.
    """

    name: str
    kind: str
    f: Callable
    fprime: Callable
    quotient: Callable
    log_f: Callable
    inverse: Callable
    inverse_log: Callable
    degree: int | None = None
    sup: float = math.inf
    quotient_smooth: bool | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.f(0.0) != 0:
            raise ValueError(f"{self.name}: f(0) must be 0")
        grid = np.geomspace(0.1, 10.0, 41)
        values = [float(self.f(float(y))) for y in grid]
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError(f"{self.name}: f is not strictly increasing on the sample grid")
        if any(float(self.fprime(float(y))) <= 0 for y in grid):
            raise ValueError(f"{self.name}: f' is not positive on the sample grid")

    def __call__(self, y):
        return self.f(y)

    def f_over_fprime(self, y):
        if y == 0:
            return 0 * y
        return self.quotient(y)

    def __repr__(self):
        return f"ReparamMap({self.name})"


def monomial(p: int) -> ReparamMap:
    if isinstance(p, bool) or int(p) != p or p < 1:
        raise ValueError(f"monomial degree must be a positive integer, got {p!r}")
    p = int(p)

    def inverse(v):
        if v < 0:
            raise OutOfRangeError(f"negative value {v} has no preimage")
        return v if p == 1 else v ** (1.0 / p)

    def inverse_log(lv):
        return math.exp(lv / p) if lv > -math.inf else 0.0

    def log_f(y):
        return p * _log(y) if y > 0 else -math.inf

    return ReparamMap(
        name=f"p={p}",
        kind="monomial",
        f=lambda y: y**p,
        fprime=lambda y: p * y ** (p - 1),
        quotient=lambda y: y / p,
        log_f=log_f,
        inverse=inverse,
        inverse_log=inverse_log,
        degree=p,
        quotient_smooth=True,
    )


def _flat(name: str, alpha, smooth: bool) -> ReparamMap:
    # f(y) = exp(-y^-alpha), f'(y) = alpha y^(-alpha-1) f(y), f/f' = y^(alpha+1)/alpha
    def f(y):
        return 0 * y if y <= 0 else _exp(-(y ** (-alpha)))

    def fprime(y):
        return 0 * y if y <= 0 else alpha * y ** (-alpha - 1) * _exp(-(y ** (-alpha)))

    def log_f(y):
        return -math.inf if y <= 0 else -(y ** (-alpha))

    def inverse_log(lv):
        if lv >= 0:
            raise OutOfRangeError(f"{name}: log-value {lv} is outside the range [0, 1)")
        return 0.0 if lv == -math.inf else (-lv) ** (-1.0 / alpha)

    def inverse(v):
        if v < 0 or v >= 1:
            raise OutOfRangeError(f"{name}: value {v} is outside the range [0, 1)")
        return 0.0 if v == 0 else inverse_log(math.log(v))

    return ReparamMap(
        name=name,
        kind="flat",
        f=f,
        fprime=fprime,
        quotient=lambda y: y ** (alpha + 1) / alpha,
        log_f=log_f,
        inverse=inverse,
        inverse_log=inverse_log,
        sup=1.0,
        quotient_smooth=smooth,
    )


def flat_f1() -> ReparamMap:
    """``exp(-y^-2)``; ``f/f' = y^3/2`` is smooth."""
    return _flat("f1", 2, True)


def flat_f2() -> ReparamMap:
    """``exp(-y^(-3/2))``; ``f/f' = (2/3) y^(5/2)`` is not smooth at 0."""
    return _flat("f2", 1.5, False)


def custom(
    f: Callable,
    fprime: Callable,
    *,
    inverse: Callable | None = None,
    quotient: Callable | None = None,
    quotient_smooth: bool | None = None,
    sup: float = math.inf,
    name: str = "custom",
) -> ReparamMap:
    """Wrap a user map.  ``fprime`` is required: nothing is differentiated numerically."""

    if inverse is None:

        def inverse(v):
            if v < 0 or v >= sup:
                raise OutOfRangeError(f"{name}: value {v} is outside the range")
            if v == 0:
                return 0.0
            hi = 1.0
            while float(f(hi)) < v:
                hi *= 2.0
                if hi > 1e300:
                    raise OutOfRangeError(f"{name}: no preimage found for {v}")
            return brentq(lambda y: float(f(y)) - v, 0.0, hi, xtol=1e-300, rtol=1e-15)

    inv = inverse

    def log_f(y):
        if y <= 0:
            return -math.inf
        v = f(y)
        return _log(v) if v > 0 else -math.inf

    def inverse_log(lv):
        return 0.0 if lv == -math.inf else inv(math.exp(lv))

    return ReparamMap(
        name=name,
        kind="custom",
        f=f,
        fprime=fprime,
        quotient=quotient if quotient is not None else (lambda y: f(y) / fprime(y)),
        log_f=log_f,
        inverse=inv,
        inverse_log=inverse_log,
        sup=sup,
        quotient_smooth=quotient_smooth,
    )


def parse_fspec(spec: str) -> ReparamMap:
    """Parse ``"p=<int>"``, ``"f1"`` or ``"f2"``."""
    s = spec.strip().lower()
    if s == "f1":
        return flat_f1()
    if s == "f2":
        return flat_f2()
    if s.startswith("p="):
        try:
            p = int(s[2:])
        except ValueError:
            raise ValueError(f"bad f-spec {spec!r}: degree must be an integer") from None
        return monomial(p)
    raise ValueError(f"bad f-spec {spec!r}: expected 'p=<int>', 'f1' or 'f2'")
