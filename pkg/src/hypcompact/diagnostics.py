"""Numeric checks of the measurable claims: smoothness, flatness, Hölder
exponents, geodesic endpoints, boundary angles and the action axioms.

Every limit is taken along a geometric grid ``10^-j`` and the raw trail is
kept in the report.  Reports are plain dataclasses with ``to_dict`` for
JSON output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import mpmath
import numpy as np

from .actions import CompactifiedAction, chordal_error, point_error
from .fields import BoundaryExtensionFailure, pullback_field
from .lorentz import GroupElement, basis, random_group_element
from .models import INFINITY, klein_to_poincare, poincare_to_klein, snap_ball
from .reparam import OutOfRangeError, ReparamMap
from .sampling import random_ball_point, random_chart_point, random_sphere_point

__all__ = [
    "CONVERGENCE_RTOL",
    "DIVERGENCE_GROWTH",
    "ActionSuiteReport",
    "BoundaryFieldReport",
    "DivergesAtOrder",
    "EndpointReport",
    "FlatUpTo",
    "FlatnessReport",
    "Geodesic",
    "HolderEstimate",
    "Inconclusive",
    "NonFlatAtOrder",
    "SmoothUpTo",
    "SmoothnessReport",
    "TangencyReport",
    "TransversalityReport",
    "action_axiom_suite",
    "boundary_conjugacy",
    "boundary_field_suite",
    "boundary_pairs",
    "boundary_tangency_angle",
    "classify_smoothness",
    "endpoints_under",
    "flatness_order",
    "holder_exponent",
    "transversality_check",
]

CONVERGENCE_RTOL = 1e-3
DIVERGENCE_GROWTH = 10.0
MP_DPS = 100
# estimates within this factor of the roundoff bound count as zero
NOISE_MARGIN = 1e6
CAUCHY_TOL = 1e-6
ANGLE_TOL = 1e-3
_LN10 = math.log(10.0)


# --- verdicts -----------------------------------------------------------------


@dataclass(frozen=True)
class _Verdict:
    order: int

    def __str__(self):
        return f"{type(self).__name__}({self.order})"


class SmoothUpTo(_Verdict):
    """All derivative estimates up to ``order`` converge (a falsifier, not a proof)."""


class DivergesAtOrder(_Verdict):
    pass


class Inconclusive(_Verdict):
    """Neither converged nor grew by the divergence factor at ``order``."""


class NonFlatAtOrder(_Verdict):
    pass


class FlatUpTo(_Verdict):
    pass


def _finite(x: float, cap: float = 1e300) -> float:
    x = float(x)
    if math.isnan(x):
        return x
    return max(-cap, min(cap, x))


# --- smoothness -----------------------------------------------------------------


@lru_cache(maxsize=None)
def _central_weights(k: int, m: int) -> tuple[Fraction, ...]:
    """Weights ``w_i`` (i = -m..m) with ``sum w_i g(y + i h) / h^k -> g^(k)(y)``."""
    size = 2 * m + 1
    rows = [[Fraction(i) ** j for i in range(-m, m + 1)] + [Fraction(math.factorial(k) if j == k else 0)] for j in range(size)]
    for col in range(size):
        piv = next(r for r in range(col, size) if rows[r][col] != 0)
        rows[col], rows[piv] = rows[piv], rows[col]
        p = rows[col][col]
        rows[col] = [v / p for v in rows[col]]
        for r in range(size):
            if r != col and rows[r][col] != 0:
                c = rows[r][col]
                rows[r] = [a - c * b for a, b in zip(rows[r], rows[col])]
    return tuple(rows[j][-1] for j in range(size))


@dataclass
class SmoothnessReport:
    """Derivative estimates of ``g`` at ``y_j = 10^-j`` (step ``y_j/10``).

    ``relative_spread[k]`` is the spread of the last three order-``k``
    estimates over the largest estimate (floored by the roundoff bound);
    ``growth[k]`` is the ratio of the last to the third-to-last estimate.
    ``evidence_orders`` is how many decades the deciding spread sits from
    the convergence tolerance.
    """

    orders_checked: int
    verdict: _Verdict
    grid: list[float]
    estimates: dict[int, list[float]]
    relative_spread: dict[int, float]
    growth: dict[int, float]
    evidence_orders: float
    precision: str
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "orders_checked": self.orders_checked,
            "verdict": str(self.verdict),
            "grid": self.grid,
            "estimates": {str(k): v for k, v in self.estimates.items()},
            "relative_spread": {str(k): v for k, v in self.relative_spread.items()},
            "growth": {str(k): v for k, v in self.growth.items()},
            "evidence_orders": self.evidence_orders,
            "precision": self.precision,
            "warnings": self.warnings,
        }

    def rows(self) -> list[dict]:
        """One row per grid level, for CSV output."""
        out = []
        for j, y in enumerate(self.grid):
            row = {"y": y}
            for k, est in self.estimates.items():
                row[f"d{k}"] = est[j]
            out.append(row)
        return out


def _evaluate(g: Callable, y, mp: bool):
    if mp:
        try:
            v = g(y)
            if isinstance(v, mpmath.mpf):
                return v, True
        except (TypeError, ValueError, OverflowError):
            pass
    return float(g(float(y))), False


def classify_smoothness(
    g: Callable,
    k_max: int = 5,
    levels: int = 10,
    *,
    rtol: float = CONVERGENCE_RTOL,
    growth_factor: float = DIVERGENCE_GROWTH,
    dps: int = MP_DPS,
) -> SmoothnessReport:
    """Classify the behavior of the derivatives of ``g`` as ``y -> 0+``.

    ``g`` is evaluated in ``mpmath`` at ``dps`` digits when it accepts
    ``mpf`` arguments, otherwise in double precision (recorded in
    ``precision``).  Evaluation underflow truncates the grid and is listed
    in ``warnings``.
    """
    if k_max < 1 or levels < 3:
        raise ValueError("need k_max >= 1 and at least 3 grid levels")
    warnings: list[str] = []
    with mpmath.workdps(dps):
        m_max = k_max // 2 + 2
        offsets = range(-m_max, m_max + 1)
        values: list[dict[int, object]] = []
        grid: list[float] = []
        all_mp = True
        for j in range(1, levels + 1):
            y = mpmath.mpf(10) ** (-j)
            h = y / 10
            row = {}
            bad = None
            for i in offsets:
                v, is_mp = _evaluate(g, y + i * h, True)
                all_mp &= is_mp
                if not mpmath.isfinite(v) or v == 0:
                    bad = f"evaluation underflow or overflow at y = {float(y + i * h):.3e}"
                    break
                row[i] = v
            if bad:
                warnings.append(bad + f"; grid truncated after level {j - 1}")
                break
            values.append(row)
            grid.append(float(y))
        eps = mpmath.eps if all_mp else mpmath.mpf(2.0**-52)

        estimates: dict[int, list] = {}
        spreads: dict[int, float] = {}
        growths: dict[int, float] = {}
        verdict = None
        margins = []
        for k in range(1, k_max + 1):
            m = k // 2 + 2
            w = [mpmath.mpf(c.numerator) / c.denominator for c in _central_weights(k, m)]
            wabs = sum(abs(c) for c in w)
            est, noise = [], mpmath.mpf(0)
            for j, row in enumerate(values, start=1):
                h = mpmath.mpf(10) ** (-j) / 10
                est.append(sum(c * row[i] for c, i in zip(w, range(-m, m + 1))) / h**k)
                noise = max(noise, eps * wabs * max(abs(row[i]) for i in range(-m, m + 1)) / h**k)
            estimates[k] = [_finite(e) for e in est]
            if len(est) < 3:
                spreads[k], growths[k] = math.nan, math.nan
                verdict = verdict or Inconclusive(k)
                continue
            floor = NOISE_MARGIN * noise
            scale = max(max(abs(e) for e in est), floor)
            last = est[-3:]
            rel = (max(last) - min(last)) / scale if scale > 0 else mpmath.mpf(0)
            first, final = abs(last[0]), abs(last[-1])
            if first > floor:
                grow = final / first
            else:
                grow = mpmath.inf if final > floor else mpmath.mpf(1)
            spreads[k] = _finite(rel)
            growths[k] = _finite(grow)
            converged = rel <= rtol
            if verdict is None:
                if converged:
                    margins.append(math.log10(rtol / max(float(rel), 1e-30)))
                elif grow >= growth_factor * (1 - 1e-9):
                    verdict = DivergesAtOrder(k)
                    margins = [math.log10(float(rel) / rtol)]
                else:
                    verdict = Inconclusive(k)
                    margins = [0.0]
        if verdict is None:
            verdict = SmoothUpTo(k_max)
    return SmoothnessReport(
        orders_checked=k_max,
        verdict=verdict,
        grid=grid,
        estimates=estimates,
        relative_spread=spreads,
        growth=growths,
        evidence_orders=min(margins) if margins else 0.0,
        precision=f"mp{dps}" if all_mp else "float64",
        warnings=warnings,
    )


@dataclass
class FlatnessReport:
    verdict: _Verdict
    grid: list[float]
    estimates: dict[int, list[float]]

    def to_dict(self) -> dict:
        return {
            "verdict": str(self.verdict),
            "grid": self.grid,
            "estimates": {str(k): v for k, v in self.estimates.items()},
        }


def flatness_order(
    f: ReparamMap | Callable, k_max: int = 5, levels: int = 12, *, threshold: float = 1e-6, rtol: float = 1e-3
) -> FlatnessReport:
    """Smallest order with a nonzero derivative at 0 (forward differences, ``h = 10^-j``).

    An order counts as nonzero when its last two estimates both exceed
    ``threshold`` in size and agree to ``rtol``.
    """
    with mpmath.workdps(MP_DPS):
        hs = [mpmath.mpf(10) ** (-j) for j in range(1, levels + 1)]
        vals = [[f(i * h) if i else mpmath.mpf(0) for i in range(k_max + 1)] for h in hs]
        estimates: dict[int, list[float]] = {}
        verdict = None
        for k in range(1, k_max + 1):
            est = []
            for h, row in zip(hs, vals):
                d = sum((-1) ** (k - i) * math.comb(k, i) * mpmath.mpf(row[i]) for i in range(k + 1))
                est.append(d / h**k)
            estimates[k] = [_finite(e) for e in est]
            a, b = est[-2], est[-1]
            if verdict is None and abs(a) > threshold and abs(b) > threshold and abs(a - b) <= rtol * abs(b):
                verdict = NonFlatAtOrder(k)
    return FlatnessReport(verdict or FlatUpTo(k_max), [float(h) for h in hs], estimates)


# --- Hölder exponents ---------------------------------------------------------------


@dataclass
class HolderEstimate:
    """Log-log fit ``log10|phi(u)-phi(v)| = slope log10|u-v| + c``.

    ``exponent`` is the slope capped at 1; ``residual`` is the RMS of the
    fit residuals in decades.
    """

    exponent: float
    slope: float
    intercept: float
    residual: float
    pairs: int
    decades: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def holder_exponent(phi: Callable, pairs: Sequence, *, min_pairs: int = 100, min_decades: float = 2.0) -> HolderEstimate:
    """Estimate the Hölder exponent of ``phi`` from sample pairs ``(u, v)``."""
    du, dv = [], []
    for u, v in pairs:
        u = np.atleast_1d(np.asarray(u, dtype=float))
        v = np.atleast_1d(np.asarray(v, dtype=float))
        a = float(np.linalg.norm(u - v))
        b = float(np.linalg.norm(np.atleast_1d(phi(u)) - np.atleast_1d(phi(v))))
        if a > 0 and b > 0:
            du.append(a)
            dv.append(b)
    if len(du) < min_pairs:
        raise ValueError(f"need at least {min_pairs} non-degenerate pairs, got {len(du)}")
    x = np.log10(du)
    y = np.log10(dv)
    decades = float(x.max() - x.min())
    if decades < min_decades:
        raise ValueError(f"pair separations span {decades:.2f} decades, need {min_decades}")
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return HolderEstimate(min(float(slope), 1.0), float(slope), float(intercept), residual, len(du), decades)


def boundary_pairs(rng: np.random.Generator, n: int, count: int = 200, lo: float = -9.0, hi: float = -2.0) -> list:
    """Pairs ``(u, v)`` with ``u`` on the sphere and ``v`` inside at distance ~``10^U(lo, hi)``."""
    out = []
    for _ in range(count):
        u = random_sphere_point(rng, n)
        delta = 10.0 ** rng.uniform(lo, hi)
        w = random_sphere_point(rng, n)
        tilt = u + 0.5 * delta * (w - (w @ u) * u)
        v = (1.0 - delta) * tilt / np.linalg.norm(tilt)
        out.append((u, v))
    return out


def boundary_conjugacy(source: str, target: str) -> Callable:
    """The ball map ``phi`` with ``source_g = phi . target_g . phi^-1``.

    ``("conf", "proj")`` is the Klein-to-Poincare map (Hölder 1/2 at the
    sphere); ``("proj", "conf")`` is its inverse.
    """
    table = {
        ("conf", "proj"): klein_to_poincare,
        ("proj", "conf"): poincare_to_klein,
        ("proj", "proj"): snap_ball,
        ("conf", "conf"): snap_ball,
    }
    try:
        return table[(source, target)]
    except KeyError:
        raise ValueError(f"no boundary conjugacy between {source!r} and {target!r}") from None


# --- geodesics --------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Geodesic:
    """Klein chord ``t -> (1-t) a + t b`` between boundary points ``a != b``."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.array(self.a, dtype=float).reshape(-1)
        b = np.array(self.b, dtype=float).reshape(-1)
        if a.shape != b.shape or a.shape[0] < 2:
            raise ValueError("endpoints must be vectors of the same length >= 2")
        for e in (a, b):
            if abs(np.linalg.norm(e) - 1.0) > 1e-9:
                raise ValueError("geodesic endpoints must lie on the unit sphere")
        a, b = a / np.linalg.norm(a), b / np.linalg.norm(b)
        if np.linalg.norm(a - b) <= 1e-12:
            raise ValueError("geodesic endpoints coincide")
        a.setflags(write=False)
        b.setflags(write=False)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def n(self) -> int:
        return self.a.shape[0]

    def point(self, t: float) -> np.ndarray:
        return (1.0 - t) * self.a + t * self.b

    def one_minus_sq(self, t: float) -> float:
        """``1 - |L(t)|^2 = t (1-t) |b-a|^2`` without cancellation."""
        d = self.b - self.a
        return t * (1.0 - t) * float(d @ d)

    @classmethod
    def random(cls, rng: np.random.Generator, n: int, min_separation: float = 0.2) -> Geodesic:
        while True:
            a, b = random_sphere_point(rng, n), random_sphere_point(rng, n)
            if np.linalg.norm(a - b) >= min_separation:
                return cls(a, b)

    @classmethod
    def asymptotic_pair(cls, rng: np.random.Generator, n: int, min_separation: float = 0.2) -> tuple[Geodesic, Geodesic]:
        """Two geodesics from a common endpoint, all three endpoints pairwise ``min_separation`` apart."""
        while True:
            e, b1, b2 = (random_sphere_point(rng, n) for _ in range(3))
            if min(np.linalg.norm(e - b1), np.linalg.norm(e - b2), np.linalg.norm(b1 - b2)) >= min_separation:
                return cls(e, b1), cls(e, b2)

    def to_dict(self) -> dict:
        return {"a": self.a.tolist(), "b": self.b.tolist()}


def _log_schedule(max_exponent: float = 1e300):
    yield from range(1, 17)
    j = 16.0
    while j * 2 <= max_exponent:
        j *= 2
        yield j


@dataclass(frozen=True)
class _Iterate:
    j: float
    x0: np.ndarray | None  # chart x of the endpoint (None for INFINITY)
    offset: np.ndarray  # x(t) - x0
    log_offset: float
    log_v: float  # log of the chart-KC height


def _chart_iterate(e: np.ndarray, d: np.ndarray, j: float) -> _Iterate:
    """Chart-KC image of ``e + s d`` with ``s = 10^-j``, endpoint-relative and in log space."""
    s_log = -j * _LN10
    s = math.exp(s_log) if j < 300 else 0.0
    ex, ey, dx, dy = e[:-1], e[-1], d[:-1], d[-1]
    dd = float(d @ d)
    # 1 - e_y computed without cancellation for unit e
    one_minus_ey = float(ex @ ex) / (1.0 + ey) if ey > 0 else 1.0 - ey
    if one_minus_ey <= 1e-15:
        # endpoint is the missed point: x tends to -dx/dy, height to infinity
        x = dx / (-dy) if dy != 0 else np.full_like(dx, math.inf)
        log_v = math.log(2.0) + math.log1p(-s) + math.log(dd / 2.0) - s_log - 2.0 * math.log(abs(dy))
        return _Iterate(j, None, x, math.inf, log_v)
    den = one_minus_ey - s * dy
    num = dx * one_minus_ey + ex * dy
    offset = s * num / (den * one_minus_ey)
    nn = float(np.linalg.norm(num))
    log_offset = s_log + math.log(nn) - math.log(den * one_minus_ey) if nn > 0 else -math.inf
    log_v = math.log(2.0) + s_log + math.log1p(-s) + math.log(dd / 2.0) - 2.0 * math.log(den)
    return _Iterate(j, ex / one_minus_ey, offset, log_offset, log_v)


def _pulled_height(f: ReparamMap, log_v: float) -> float | None:
    try:
        return float(f.inverse_log(log_v))
    except (OutOfRangeError, OverflowError):
        return None


@dataclass
class EndpointReport:
    limits: tuple
    converged: tuple[bool, bool]
    trails: tuple[list, list]
    distinct: bool
    map_name: str

    def to_dict(self) -> dict:
        def enc(p):
            return "inf" if p is INFINITY else [float(c) for c in p]

        return {
            "map": self.map_name,
            "limits": [enc(p) for p in self.limits],
            "converged": list(self.converged),
            "distinct": self.distinct,
            "trails": [[{"j": float(j), "point": p if p is None or isinstance(p, str) else [float(c) for c in p]} for j, p in tr] for tr in self.trails],
        }


def _endpoint_limit(f: ReparamMap, e: np.ndarray, d: np.ndarray, tol: float):
    trail: list = []
    recent: list[np.ndarray] = []
    for j in _log_schedule():
        it = _chart_iterate(e, d, j)
        if it.x0 is None:
            trail.append((j, "inf"))
            # the chart point leaves every compact set: converged to INFINITY
            if it.log_v > math.log(1e12) and len(trail) >= 16:
                return INFINITY, True, trail
            continue
        h = _pulled_height(f, it.log_v)
        if h is None:
            trail.append((j, None))
            continue
        q = np.append(it.x0 + it.offset, h)
        trail.append((j, q))
        recent.append(q)
        recent = recent[-5:]
        if len(recent) == 5 and len(trail) >= 16:
            spread = float(np.max(np.max(recent, axis=0) - np.min(recent, axis=0)))
            if spread < tol * max(1.0, float(np.max(np.abs(q)))):
                # the closure point lies on the sphere, whose chart height is 0
                return np.append(it.x0, 0.0), True, trail
    last = recent[-1] if recent else None
    return last, False, trail


def endpoints_under(f: ReparamMap, geodesic: Geodesic, tol: float = CAUCHY_TOL) -> EndpointReport:
    """Limits of ``phi_f^-1(chart(L(t)))`` as ``t -> 0+`` and ``t -> 1-``.

    Iterates are taken at ``t = 10^-j`` for ``j = 1..16`` and then at
    doubling ``j`` (in log space) until the last five agree within ``tol``.
    """
    a, b = geodesic.a, geodesic.b
    start = _endpoint_limit(f, a, b - a, tol)
    end = _endpoint_limit(f, b, a - b, tol)
    la, lb = start[0], end[0]
    if la is None or lb is None:
        distinct = False
    else:
        distinct = point_error(la, lb) > 1e-9
    return EndpointReport((la, lb), (start[1], end[1]), (start[2], end[2]), distinct, f.name)


@dataclass
class TransversalityReport:
    transversal: bool
    angle: float
    converged: bool
    trail: list[tuple[float, float]]

    def to_dict(self) -> dict:
        return {
            "transversal": self.transversal,
            "angle": self.angle,
            "converged": self.converged,
            "trail": [[float(j), a] for j, a in self.trail],
        }


def transversality_check(f: ReparamMap, geodesic: Geodesic, tol: float = ANGLE_TOL) -> TransversalityReport:
    """Angle between ``t -> phi_f^-1(chart(L(t)))`` and the plane ``y = 0`` at a finite endpoint."""
    e, other = geodesic.a, geodesic.b
    if _chart_iterate(e, other - e, 1).x0 is None:
        e, other = other, e
    d = other - e
    trail: list[tuple[float, float]] = []
    for j in _log_schedule():
        it = _chart_iterate(e, d, j)
        h = _pulled_height(f, it.log_v)
        if h is None or h == 0.0:
            continue
        ratio_log = it.log_offset - math.log(h)
        angle = math.pi / 2 if ratio_log < -745 else math.atan2(1.0, math.exp(min(ratio_log, 700.0)))
        trail.append((j, angle))
        last = [a for _, a in trail[-3:]]
        if len(trail) >= 16 and max(last) - min(last) < CAUCHY_TOL:
            return TransversalityReport(angle > tol, angle, True, trail)
    angle = trail[-1][1] if trail else math.nan
    return TransversalityReport(False, angle, False, trail)


@dataclass
class TangencyReport:
    model: str
    angle: float
    converged: bool
    raw: list[float]
    extrapolated: list[float]

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _angle(u: np.ndarray, v: np.ndarray) -> float:
    return 2.0 * math.atan2(float(np.linalg.norm(u - v)), float(np.linalg.norm(u + v)))


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def boundary_tangency_angle(model: str, g1: Geodesic, g2: Geodesic, levels: int = 12) -> TangencyReport:
    """Angle at the common endpoint between two asymptotic geodesics.

    ``model`` is ``"proj"`` (Klein chords) or ``"conf"`` (the arcs after
    ``klein_to_poincare``).  Secant directions at ``s = 10^-j`` from the
    endpoint are Richardson-extrapolated in ``sqrt(s)``.
    """
    if model not in ("proj", "conf"):
        raise ValueError(f"model must be 'proj' or 'conf', got {model!r}")
    ends1, ends2 = (g1.a, g1.b), (g2.a, g2.b)
    shared = [(p, q) for p in ends1 for q in ends2 if np.linalg.norm(p - q) <= 1e-12]
    if not shared:
        raise ValueError("the geodesics share no endpoint")
    if len(shared) == 2:
        return TangencyReport(model, 0.0, True, [0.0] * levels, [0.0] * (levels - 1))
    e = shared[0][0]
    b1 = ends1[1] if np.linalg.norm(ends1[0] - e) <= 1e-12 else ends1[0]
    b2 = ends2[1] if np.linalg.norm(ends2[0] - e) <= 1e-12 else ends2[0]
    dirs = []
    for j in range(1, levels + 1):
        s = 10.0 ** (-j)
        pair = []
        for b in (b1, b2):
            d = b - e
            if model == "proj":
                w = s * d
            else:
                # klein_to_poincare(e + s d) - e, exactly rearranged
                sigma = float(np.linalg.norm(d)) * math.sqrt(s * (1.0 - s))
                w = s * d - sigma * e
            pair.append(_unit(w))
        dirs.append(pair)
    raw = [_angle(u, v) for u, v in dirs]
    q = 10.0**-0.5
    extrapolated = []
    for prev, cur in zip(dirs, dirs[1:]):
        ext = [_unit((c - q * p) / (1.0 - q)) for p, c in zip(prev, cur)]
        extrapolated.append(_angle(*ext))
    est = extrapolated[-1]
    converged = abs(est - extrapolated[-2]) <= 1e-6 + 1e-3 * est
    return TangencyReport(model, est, converged, raw, extrapolated)


# --- action axioms and boundary fields ---------------------------------------------


@dataclass
class ActionSuiteReport:
    label: str
    n: int
    samples: int
    rejected: int
    composition_error: float
    identity_error: float
    boundary_defect: float
    metric: str
    relative_composition_error: float

    def passed(self, composition_tol: float = 1e-9, identity_tol: float = 1e-9, boundary_tol: float = 1e-10) -> bool:
        return (
            self.composition_error < composition_tol
            and self.identity_error < identity_tol
            and self.boundary_defect < boundary_tol
        )

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _sample_point(rng, action: CompactifiedAction, n: int, boundary: bool) -> np.ndarray:
    if action.f is not None:
        return random_chart_point(rng, n, action.f, boundary=boundary)
    if boundary:
        return random_sphere_point(rng, n)
    return random_ball_point(rng, n)


def _boundary_defect(action: CompactifiedAction, p) -> float:
    if p is INFINITY:
        return 0.0
    if action.f is not None:
        return abs(float(p[-1]))
    return abs(float(np.linalg.norm(p)) - 1.0)


def action_axiom_suite(action: CompactifiedAction, n: int, rng: np.random.Generator, samples: int = 1000, scale: float = 1.0) -> ActionSuiteReport:
    """Identity, composition and boundary invariance on seeded triples ``(g, h, x)``.

    Each triple is checked at one interior and one boundary point.  Triples
    leaving the range of a bounded reparametrization are resampled and
    counted in ``rejected``.  Ball actions are compared in the Euclidean
    metric; chart actions in the chordal metric (the relative error is
    also recorded).
    """
    ident = GroupElement.identity(n)
    metric = chordal_error if action.f is not None else point_error
    comp = iden = bdry = rel = 0.0
    rejected = done = 0
    while done < samples:
        g = random_group_element(rng, n, scale)
        h = random_group_element(rng, n, scale)
        x = _sample_point(rng, action, n, False)
        xb = _sample_point(rng, action, n, True)
        gh = g @ h
        try:
            errs = []
            for p in (x, xb):
                hp = action(h, p)
                lhs = action(g, hp)
                rhs = action(gh, p)
                errs.append((metric(lhs, rhs), metric(action(ident, p), p), point_error(lhs, rhs)))
            images = [action(k, xb) for k in (g, h, gh)]
        except OutOfRangeError:
            rejected += 1
            continue
        comp = max(comp, *(e[0] for e in errs))
        iden = max(iden, *(e[1] for e in errs))
        rel = max(rel, *(e[2] for e in errs))
        bdry = max(bdry, *(_boundary_defect(action, p) for p in images))
        done += 1
    name = "chordal" if action.f is not None else "euclidean"
    return ActionSuiteReport(action.label, n, samples, rejected, comp, iden, bdry, name, rel)


@dataclass
class BoundaryFieldReport:
    """Pulled-back generator fields at the boundary and their y-components as ``y -> 0``."""

    map_name: str
    extends: bool
    failures: list[str]
    y_component_trail: dict[str, list[float]]

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def boundary_field_suite(f: ReparamMap, n: int, rng: np.random.Generator, points: int = 5) -> BoundaryFieldReport:
    failures = []
    trails: dict[str, list[float]] = {}
    xs = [rng.uniform(-1.0, 1.0, n - 1) for _ in range(points)]
    for gen in basis(n):
        worst = []
        for k in range(1, 9):
            y = 10.0 ** (-k)
            worst.append(max(abs(float(pullback_field(f, gen, np.append(x, y))[-1])) for x in xs))
        trails[gen.tag] = worst
        for x in xs:
            v = pullback_field(f, gen, np.append(x, 0.0))
            if isinstance(v, BoundaryExtensionFailure):
                failures.append(f"{gen.tag}: {v.reason}")
                break
    return BoundaryFieldReport(f.name, not failures, failures, trails)
