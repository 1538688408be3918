"""Seeded samplers for ball, sphere and chart points."""

from __future__ import annotations

import numpy as np

from .models import klein_to_chart_kc, apply_phi_inverse, INFINITY
from .reparam import OutOfRangeError, ReparamMap

__all__ = [
    "random_ball_point",
    "random_chart_point",
    "random_sphere_point",
]


def random_sphere_point(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.standard_normal(n)
    return v / np.linalg.norm(v)


def random_ball_point(rng: np.random.Generator, n: int, radius: float = 0.95) -> np.ndarray:
    """Uniform in the ball of the given radius."""
    return random_sphere_point(rng, n) * radius * rng.uniform() ** (1.0 / n)


def random_chart_point(
    rng: np.random.Generator,
    n: int,
    f: ReparamMap | None = None,
    boundary: bool = False,
    radius: float = 0.95,
) -> np.ndarray:
    """A chart-KC point pulled back by ``phi_f`` (heights inside the range of ``f``).

    Chart points with a coordinate larger than 1e3 (near the missed point)
    are resampled.
    """
    for _ in range(10_000):
        k = random_sphere_point(rng, n) if boundary else random_ball_point(rng, n, radius)
        q = klein_to_chart_kc(k)
        if q is INFINITY or np.max(np.abs(q)) > 1e3:
            continue
        if boundary:
            q[-1] = 0.0
        if f is None:
            return q
        if q[-1] >= f.sup:
            continue
        try:
            return apply_phi_inverse(f, q)
        except OutOfRangeError:
            continue
    raise RuntimeError("could not sample a chart point in the range of f")
