"""Numerical companion: Green function, external rays, periodic points,
superstable parameters, expansion reports, and telescope checks for
f(z) = z^2 + c.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .circle import Angle, sigma_pow


@dataclass(frozen=True)
class Params:
    c: complex
    epsilon: float = 1e-12
    max_iter: int = 2048

    @property
    def escape_radius(self) -> float:
        return max(4.0, 2.0 + abs(self.c))


def iterate(params: Params, z: complex, m: int) -> complex:
    for _ in range(m):
        z = z * z + params.c
    return z


def green(params: Params, z: complex) -> float:
    """Green level G(z) = lim 2^-n ln|f^n(z)|; 0 for non-escaping within cap.

    Once the orbit is far out the tail of the limit is O(1/|z_n|) scaled by
    2^-n, so stopping at a large radius loses nothing at double precision.
    """
    big = 1e18
    w = complex(z)
    for n in range(params.max_iter):
        r = abs(w)
        if r > big:
            return math.log(r) / (1 << n) if n < 60 else math.log(r) * 2.0 ** (-n)
        if r > params.escape_radius and n >= 25:
            return math.log(r) * 2.0 ** (-n)
        w = w * w + params.c
    r = abs(w)
    if r > params.escape_radius:
        return math.log(r) * 2.0 ** (-params.max_iter)
    return 0.0


@dataclass
class RayPath:
    angle: Angle
    points: list[complex] = field(default_factory=list)
    levels: list[float] = field(default_factory=list)
    landing: complex | None = None
    residual: float | None = None
    landed: bool = False
    aborted: bool = False
    abort_reason: str = ""


def _fn_and_derivative(z: complex, n: int, c: complex) -> tuple[complex, complex]:
    w, d = z, 1.0 + 0.0j
    for _ in range(n):
        d = 2.0 * w * d
        w = w * w + c
    return w, d


def trace_ray(
    params: Params,
    t: Angle,
    level_min: float = 1e-12,
    steps_per_halving: int = 6,
    newton_tol: float = 1e-12,
    landing_tol: float = 1e-9,
) -> RayPath:
    """Trace the external ray of angle t by level-doubling Newton descent.

    At level L and depth n (chosen so 2^n L stays in a fixed far-field band)
    the ray point solves f^n(z) = exp(2^n L + 2 pi i sigma^n(t)); each level
    step continues the previous point by Newton.  Divergence near a pinching
    point aborts cleanly with the partial path.
    """
    if level_min <= 0:
        raise ValueError("level_min must be positive")
    c = params.c
    base = max(math.log(1e4), math.log(params.escape_radius) + 1.0)
    path = RayPath(angle=t)
    level = base
    n = 0
    z = cmath.exp(complex(level, 2 * math.pi * float(t.frac)))
    path.points.append(z)
    path.levels.append(level)
    ratio = 2.0 ** (-1.0 / steps_per_halving)
    while level > level_min:
        level *= ratio
        while level * (1 << n) < base:
            n += 1
        theta = float(sigma_pow(t, n).frac)
        w = cmath.exp(complex(level * (1 << n), 2 * math.pi * theta))
        ok = False
        for _ in range(60):
            f, d = _fn_and_derivative(z, n, c)
            err = f - w
            if abs(err) <= newton_tol * (1.0 + abs(w)):
                ok = True
                break
            if d == 0:
                break
            step = err / d
            if not (math.isfinite(step.real) and math.isfinite(step.imag)):
                break
            # roundoff floor: a sub-ulp step means the residual is pure
            # floating noise of evaluating f^n, so the point is converged
            if abs(step) <= 1e-15 * (1.0 + abs(z)):
                ok = True
                break
            z = z - step
        if not ok:
            path.aborted = True
            path.abort_reason = f"newton divergence at level {level:.3e}"
            break
        path.points.append(z)
        path.levels.append(level)
    # landing estimate: spread of the points over the last level decade
    cutoff = path.levels[-1] * 10.0
    tail = [p for p, l in zip(path.points, path.levels) if l <= cutoff]
    spread = max((abs(p - path.points[-1]) for p in tail), default=0.0)
    path.landing = path.points[-1]
    path.residual = spread
    path.landed = spread < landing_tol
    return path


def periodic_points(params: Params, m: int) -> list[tuple[complex, complex]]:
    """All 2^m roots of f^m(z) = z with their multipliers (f^m)'(z).

    Uses Ehrlich-Aberth on the black-box map, so no explicit coefficients of
    the degree-2^m polynomial are ever formed.
    """
    if not 1 <= m <= 12:
        raise ValueError("period must lie in 1..12")
    c = params.c
    n = 1 << m

    def p_and_dp(z):
        w = z.copy()
        d = np.ones_like(z)
        for _ in range(m):
            d = 2.0 * w * d
            w = w * w + c
        return w - z, d - 1.0

    radius = 0.5 + math.sqrt(0.25 + abs(c)) + 0.3
    ks = np.arange(n)
    z = radius * np.exp(2j * math.pi * (ks + 0.37) / n) + 0.01j
    for _ in range(200):
        p, dp = p_and_dp(z)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = np.where(dp != 0, p / dp, 0.0)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        s = np.sum(1.0 / diff, axis=1)
        denom = 1.0 - newton * s
        step = np.where(np.abs(denom) > 1e-14, newton / denom, newton)
        z = z - step
        if np.max(np.abs(step)) < 1e-14 * (1.0 + np.max(np.abs(z))):
            break
    # Newton polish
    for _ in range(10):
        p, dp = p_and_dp(z)
        mask = np.abs(dp) > 1e-14
        z = np.where(mask, z - p / dp, z)
    w = z.copy()
    mult = np.ones_like(z)
    for _ in range(m):
        mult = 2.0 * w * mult
        w = w * w + c
    order = np.lexsort((z.imag.round(9), z.real.round(9)))
    return [(complex(z[i]), complex(mult[i])) for i in order]


@dataclass(frozen=True)
class BetaResult:
    beta: complex
    matched: bool
    candidates: tuple[complex, complex]
    residuals: tuple[float, float]


def beta_point(params: Params, comb, n: int, level_min: float = 1e-14, tol: float = 1e-4) -> BetaResult:
    """Landing point shared by the two level-n pair rays, matched to a root
    of f^p(z) = z."""
    pair = comb.level(n)
    roots = [r for r, _ in periodic_points(params, pair.period)]
    lands = []
    for t in (pair.lo, pair.hi):
        path = trace_ray(params, t, level_min=level_min)
        if path.aborted or path.landing is None:
            raise ValueError(f"ray {t} did not reach level {level_min}: {path.abort_reason}")
        lands.append(path.landing)
    near = []
    res = []
    for z in lands:
        best = min(roots, key=lambda r: abs(r - z))
        near.append(best)
        res.append(abs(best - z))
    matched = abs(near[0] - near[1]) < tol and max(res) < tol
    return BetaResult(near[0], matched, (near[0], near[1]), (res[0], res[1]))


# Feigenbaum period-doubling accumulation point, used only to bracket
# bisections for superstable parameters.
_ACCUMULATION = -1.4011551890920505


def feigenbaum_parameter(depth: int) -> float:
    """Superstable parameter s_depth of the period-doubling cascade.

    Bisection on f_c^(2^depth)(0) = 0; depth 1 gives exactly -1 and the
    sequence converges to about -1.401155189.
    """
    if not 1 <= depth <= 16:
        raise ValueError("depth must lie in 1..16")

    def crit_orbit(c: float, n: int) -> float:
        x = 0.0
        for _ in range(n):
            x = x * x + c
        return x

    s_prev = 0.0
    s = None
    for d in range(1, depth + 1):
        n = 1 << d
        a = _ACCUMULATION - 1e-9
        b = s_prev - 0.5 * (s_prev - a)
        fa, fb = crit_orbit(a, n), crit_orbit(b, n)
        if fa == 0.0:
            s_prev = a
            continue
        if fb == 0.0:
            s_prev = b
            continue
        if (fa > 0) == (fb > 0):
            raise ArithmeticError(f"bisection bracket failed at depth {d}")
        for _ in range(200):
            mid = 0.5 * (a + b)
            fm = crit_orbit(mid, n)
            if fm == 0.0 or b - a < 1e-15:
                a = b = mid
                break
            if (fm > 0) == (fa > 0):
                a, fa = mid, fm
            else:
                b = mid
        s = 0.5 * (a + b)
        s_prev = s
    return s if depth > 1 else -1.0


@dataclass(frozen=True)
class ExpansionReport:
    m: int
    euclidean: dict
    spherical: dict
    excluded: int


def expansion_report(params: Params, sample, m: int) -> ExpansionReport:
    """min/max/geometric mean of |D(f^m)| over a sample, both metrics.

    The spherical derivative product telescopes to the Euclidean one times
    (1+|z|^2)/(1+|f^m(z)|^2), applied exactly.  Escaping points are flagged
    and excluded.  Report only; no uniform-expansion claim is asserted.
    """
    eu, sp = [], []
    excluded = 0
    for z0 in sample:
        z = complex(z0)
        d = 1.0 + 0.0j
        escaped = False
        for _ in range(m):
            d = 2.0 * z * d
            z = z * z + params.c
            if abs(z) > params.escape_radius:
                escaped = True
                break
        if escaped:
            excluded += 1
            continue
        de = abs(d)
        eu.append(de)
        sp.append(de * (1.0 + abs(complex(z0)) ** 2) / (1.0 + abs(z) ** 2))

    def stats(values):
        if not values:
            return {"min": None, "max": None, "geomean": None}
        logs = [math.log(v) for v in values if v > 0]
        gm = math.exp(sum(logs) / len(logs)) if logs else 0.0
        return {"min": min(values), "max": max(values), "geomean": gm}

    return ExpansionReport(m, stats(eu), stats(sp), excluded)


@dataclass(frozen=True)
class TelescopeStage:
    l: int
    n_l: int
    time_density_ok: bool
    branch_ok: bool
    margin: float | None
    margin_ok: bool | None
    univalent_heuristic: bool | None
    note: str = ""


@dataclass(frozen=True)
class TelescopeReport:
    r: float
    kappa: float
    delta: float
    times: tuple[int, ...]
    stages: tuple[TelescopeStage, ...]
    aborted_at: int | None
    univalence_is_heuristic: bool = True

    @property
    def passed(self) -> bool:
        return self.aborted_at is None and all(
            s.time_density_ok and s.branch_ok and (s.margin_ok is not False) for s in self.stages
        )


def _pull_back(orbit, c, points, hi, lo):
    """Pull sample points from time hi back to time lo along the orbit branch.

    Each step inverts z -> z^2 + c choosing the square root nearest the orbit
    point; returns None when the branch runs into the critical value.
    """
    pts = list(points)
    min_clearance = math.inf
    for j in range(hi, lo, -1):
        ref = orbit[j - 1]
        nxt = []
        for u in pts:
            v = u - c
            min_clearance = min(min_clearance, abs(v))
            if v == 0:
                return None, 0.0
            root = cmath.sqrt(v)
            nxt.append(root if abs(root - ref) <= abs(-root - ref) else -root)
        pts = nxt
    return pts, min_clearance


def _polygon_simple(points) -> bool:
    """Cheap non-self-intersection test on a closed polygon."""

    def cross(o, a, b):
        return (a.real - o.real) * (b.imag - o.imag) - (a.imag - o.imag) * (b.real - o.real)

    def seg_intersect(p1, p2, p3, p4):
        d1, d2 = cross(p3, p4, p1), cross(p3, p4, p2)
        d3, d4 = cross(p1, p2, p3), cross(p1, p2, p4)
        return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0))

    n = len(points)
    for i in range(n):
        a1, a2 = points[i], points[(i + 1) % n]
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            if seg_intersect(a1, a2, points[j], points[(j + 1) % n]):
                return False
    return True


def telescope_check(
    params: Params,
    x: complex,
    r: float,
    kappa: float,
    delta: float,
    times,
    boundary_samples: int = 48,
) -> TelescopeReport:
    """Check the stage conditions of an (r, kappa, delta, k)-telescope at x.

    (i) is the arithmetic time-density l/n_l > kappa.  (ii) continues the
    inverse branch along the orbit step by step, maps a boundary sample of
    B(f^(n_l)(x), r) back to time n_(l-1), and verifies the delta margin to
    the boundary of the previous disk.  Univalence is certified only
    heuristically (branch clearance of the critical value plus a simple
    mapped-boundary polygon); the report says so.
    """
    times = tuple(times)
    if times[0] != 0 or any(b <= a for a, b in zip(times, times[1:])):
        raise ValueError("times must be strictly increasing from 0")
    c = params.c
    orbit = [complex(x)]
    for _ in range(times[-1]):
        orbit.append(orbit[-1] * orbit[-1] + c)
    stages = []
    aborted_at = None
    for l in range(1, len(times)):
        n_l, n_prev = times[l], times[l - 1]
        density_ok = l / n_l > kappa
        circle = [
            orbit[n_l] + r * cmath.exp(2j * math.pi * k / boundary_samples)
            for k in range(boundary_samples)
        ]
        # continuation on the doubled disk, per the branch's domain B(., 2r)
        circle2 = [
            orbit[n_l] + 2 * r * cmath.exp(2j * math.pi * k / boundary_samples)
            for k in range(boundary_samples)
        ]
        pulled, clearance = _pull_back(orbit, c, circle, n_l, n_prev)
        pulled2, _ = _pull_back(orbit, c, circle2, n_l, n_prev)
        if pulled is None or pulled2 is None:
            stages.append(
                TelescopeStage(l, n_l, density_ok, False, None, None, None, "branch hit critical value")
            )
            aborted_at = l
            break
        margin = min(r - abs(p - orbit[n_prev]) for p in pulled)
        univalent = clearance > 1e-12 and _polygon_simple(pulled)
        stages.append(
            TelescopeStage(l, n_l, density_ok, True, margin, margin > delta, univalent)
        )
    return TelescopeReport(r, kappa, delta, times, tuple(stages), aborted_at)
