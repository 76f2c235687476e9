"""Renormalization towers of ray pairs and their angle combinatorics.

A tower is a list of periodic ray pairs (p_n, t_n, t~_n) with nested windows.
This module builds towers by Douady tuning, computes the two-arc windows at
every position, the four-arc sub-windows, angle shadows of small Julia sets,
the itinerary semiconjugacy collapsing window dynamics to plain doubling, and
omega-limit probes on binary prefixes.  All of it is exact rational
arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .circle import (
    Angle,
    Arc,
    ArcSet,
    LimitAngle,
    angle_from_words,
    binary_words,
    circular_distance,
    double,
    sigma_pow,
)
from .lamination import linked, orbit_chords

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class RayPair:
    """A pair of angles 0 < lo < hi < 1, each fixed by sigma^period."""

    period: int
    lo: Angle
    hi: Angle

    def check(self) -> list[str]:
        """Invariant violations as human-readable strings (empty when valid)."""
        problems = []
        if self.period < 1:
            problems.append(f"period {self.period} < 1")
            return problems
        if not (Angle(0) < self.lo < self.hi):
            problems.append(f"angles not ordered: 0 < {self.lo} < {self.hi} < 1 fails")
        if sigma_pow(self.lo, self.period) != self.lo:
            problems.append(f"sigma^{self.period}({self.lo}) = {sigma_pow(self.lo, self.period)} != {self.lo}")
        if sigma_pow(self.hi, self.period) != self.hi:
            problems.append(f"sigma^{self.period}({self.hi}) = {sigma_pow(self.hi, self.period)} != {self.hi}")
        return problems

    @property
    def width(self) -> Fraction:
        return self.hi.frac - self.lo.frac

    def require_valid(self):
        problems = self.check()
        if problems or self.width >= HALF:
            raise ValueError("pair is not a valid renormalization pair: " + "; ".join(problems or ["width >= 1/2"]))


@dataclass(frozen=True)
class Tower:
    """Levels of ray pairs with periods p_1 < p_2 < ...

    Construction is permissive so that validate() can report problems of
    hand-built towers; the generators below always emit valid towers.
    """

    levels: tuple[RayPair, ...]

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))

    def level(self, n: int) -> RayPair:
        """1-based level access."""
        if not 1 <= n <= len(self.levels):
            raise ValueError(f"level {n} outside tower of depth {len(self.levels)}")
        return self.levels[n - 1]

    @property
    def depth(self) -> int:
        return len(self.levels)

    def to_json(self) -> list:
        return [
            {"period": p.period, "lo": p.lo.to_json(), "hi": p.hi.to_json()}
            for p in self.levels
        ]


# canonical base pairs for tuning towers
PERIOD_DOUBLING_PAIR = RayPair(2, Angle(1, 3), Angle(2, 3))
RABBIT_PAIR = RayPair(3, Angle(1, 7), Angle(2, 7))


def pair_words(pair: RayPair) -> tuple[str, str]:
    """Length-p binary words of the two pair angles (denominators | 2^p - 1)."""
    mod = (1 << pair.period) - 1
    words = []
    for t in (pair.lo, pair.hi):
        if mod % t.frac.denominator != 0:
            raise ValueError(f"{t} is not periodic with period dividing {pair.period}")
        words.append(format(t.frac.numerator * (mod // t.frac.denominator), f"0{pair.period}b"))
    return words[0], words[1]


def tune(base: RayPair, t: Angle) -> Angle:
    """Douady tuning: substitute the pair words for the binary digits of t."""
    w0, w1 = pair_words(base)
    if w0 == w1:
        raise ValueError("degenerate pair")
    pre, per = binary_words(t)

    def sub(bits: str) -> str:
        return "".join(w0 if b == "0" else w1 for b in bits)

    return angle_from_words(sub(pre), sub(per))


def self_tuned_tower(base: RayPair, depth: int) -> Tower:
    """Tower obtained by repeatedly tuning the base pair by itself."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    base.require_valid()
    levels = [base]
    for _ in range(depth - 1):
        prev = levels[-1]
        levels.append(RayPair(prev.period * base.period, tune(prev, base.lo), tune(prev, base.hi)))
    return Tower(tuple(levels))


def feigenbaum_tower(depth: int) -> Tower:
    """Period-doubling tower: level n has period 2^n, starting from (1/3, 2/3)."""
    return self_tuned_tower(PERIOD_DOUBLING_PAIR, depth)


def rabbit_tower(depth: int) -> Tower:
    """Self-tuned rabbit tower: periods 3^n, starting from (1/7, 2/7)."""
    return self_tuned_tower(RABBIT_PAIR, depth)


@dataclass(frozen=True)
class Window:
    s: ArcSet
    lo1: Angle
    hi1: Angle


def window(pair: RayPair) -> Window:
    """The two-arc window [t, t'] u [t~', t~] with t' = t + (t~ - t)/2^p."""
    pair.require_valid()
    delta = pair.width / (1 << pair.period)
    lo1 = pair.lo + delta
    hi1 = pair.hi - delta
    if sigma_pow(lo1, pair.period) != pair.hi or sigma_pow(hi1, pair.period) != pair.lo:
        raise ValueError("pair is not a valid renormalization pair: window endpoint check failed")
    s = ArcSet([Arc(pair.lo, delta), Arc(hi1, delta)])
    if len(s) != 2:
        raise ValueError("pair is not a valid renormalization pair: window components merge")
    return Window(s, lo1, hi1)


def window_endpoints(pair: RayPair, j: int) -> tuple[Angle, Angle, Angle, Angle]:
    """(t_j, t'_j, t~'_j, t~_j): the sigma^(j-1) images of the window endpoints."""
    if not 1 <= j <= pair.period:
        raise ValueError(f"j must lie in 1..{pair.period}")
    w = window(pair)
    return (
        sigma_pow(pair.lo, j - 1),
        sigma_pow(w.lo1, j - 1),
        sigma_pow(w.hi1, j - 1),
        sigma_pow(pair.hi, j - 1),
    )


def window_length(pair: RayPair, j: int) -> Fraction:
    """Component length Delta_{n,j} = (t~ - t) / 2^(p - j + 1)."""
    return pair.width / (1 << (pair.period - j + 1))


def window_at(pair: RayPair, j: int) -> ArcSet:
    """s_{n,j} = sigma^(j-1)(s_{n,1}): two arcs of length Delta_{n,j} < 1/2."""
    t_j, t1_j, tt1_j, tt_j = window_endpoints(pair, j)
    delta = window_length(pair, j)
    assert delta < HALF
    # sigma^(j-1) is injective on each component, so images are plain arcs
    assert t1_j == t_j + delta and tt_j == tt1_j + delta
    s = ArcSet([Arc(t_j, delta), Arc(tt1_j, delta)])
    if len(s) != 2:
        raise ValueError("window components are not disjoint")
    return s


@dataclass(frozen=True)
class Subwindow:
    """The four endpoint-adjacent 1-windows of s_{n,j}, with labels.

    extras holds intersection components of s_{n,j} with its sigma^(-p) preimage
    that are not adjacent to the endpoints; they exist as soon as the window
    image wraps the circle, are not part of the sub-window, and are enumerated
    only while their count stays tractable (extras_enumerated says whether).
    """

    labeled: dict
    arcs: ArcSet
    extras: ArcSet | None
    extras_enumerated: bool


_EXTRA_ENUM_CAP = 4096


def subwindow(pair: RayPair, j: int) -> Subwindow:
    """s^1_{n,j}: four arcs of length Delta_{n,j}/2^p adjacent to the endpoints.

    sigma^p maps each arc homeomorphically onto one window of s_{n,j}; the
    endpoint images are checked exactly.
    """
    p = pair.period
    t_j, t1_j, tt1_j, tt_j = window_endpoints(pair, j)
    delta = window_length(pair, j)
    delta1 = delta / (1 << p)
    labeled = {
        "lo_outer": Arc(t_j, delta1),
        "lo_inner": Arc(t1_j - delta1, delta1),
        "hi_inner": Arc(tt1_j, delta1),
        "hi_outer": Arc(tt_j - delta1, delta1),
    }
    windows = {"lo": Arc(t_j, delta), "hi": Arc(tt1_j, delta)}
    onto = {"lo_outer": "lo", "lo_inner": "hi", "hi_inner": "lo", "hi_outer": "hi"}
    for label, arc in labeled.items():
        target = windows[onto[label]]
        img_start = sigma_pow(arc.start, p)
        img_end = sigma_pow(arc.start + arc.length, p)
        if img_start != target.start or img_end != target.start + target.length:
            raise ValueError("inconsistent pair: sub-window endpoint check failed")
    for label, arc in labeled.items():
        host = windows["lo"] if windows["lo"].contains(arc.start) else windows["hi"]
        if not (host.contains(arc.start) and host.contains(arc.start + arc.length)):
            raise ValueError("inconsistent pair: sub-window leaves its window")
    arcs = ArcSet(labeled.values())
    if len(arcs) != 4:
        raise ValueError("inconsistent pair: expected four sub-window components")
    extras, enumerated = _subwindow_extras(pair, j, labeled, windows)
    return Subwindow(labeled, arcs, extras, enumerated)


def _subwindow_extras(pair, j, labeled, windows):
    """Exhaustive components of s_{n,j} n sigma^(-p)(s_{n,j}) minus the four."""
    p = pair.period
    delta = window_length(pair, j)
    wraps = delta * (1 << p)
    if wraps > _EXTRA_ENUM_CAP:
        return None, False
    comps = []
    for warc in windows.values():
        a = warc.start.frac
        img_lo = sigma_pow(warc.start, p).frac
        img_hi = img_lo + wraps
        for tarc in windows.values():
            g = tarc.start.frac
            m_min = math.ceil(img_lo - g - delta)
            m_max = math.floor(img_hi - g)
            for m in range(m_min, m_max + 1):
                lo = max(img_lo, g + m)
                hi = min(img_hi, g + m + delta)
                if hi > lo:
                    comps.append(Arc(Angle(a + (lo - img_lo) / (1 << p)), (hi - lo) / (1 << p)))
    allset = ArcSet(comps)
    four = set(labeled.values())
    extras = [c for c in allset.components if c not in four]
    return ArcSet(extras), True


def in_shadow(t: Angle, comb: Tower, n: int, j: int) -> bool:
    """Exact membership of t in the angle shadow of f^j(J_n).

    Checks sigma^(k p_n)(t) in s^1_{n,j} over the whole (finite) sigma^(p_n)
    orbit of t.  For j = 1 the equivalent criterion through s_{n,1} is
    asserted to agree.
    """
    pair = comb.level(n)
    s1 = subwindow(pair, j).arcs
    result = _itinerary_stays(t, pair.period, s1)
    if j == 1:
        alt = _itinerary_stays(t, pair.period, window(pair).s)
        assert alt == result, "s_{n,1} and s^1_{n,1} shadow criteria disagree"
    return result


def _itinerary_stays(t: Angle, p: int, arcset: ArcSet) -> bool:
    seen = set()
    u = t
    while u not in seen:
        if not arcset.contains(u):
            return False
        seen.add(u)
        u = sigma_pow(u, p)
    return True


@dataclass(frozen=True)
class KcShadow:
    s: ArcSet
    tau1: LimitAngle
    tau2: LimitAngle


def shadow_Kc(comb: Tower, depth: int) -> KcShadow:
    """Window s_{depth,1} containing the K_c shadow, plus the two limit angles.

    tau1 = lim t_n and tau2 = lim t~_n are returned as nested-arc limits over
    the left and right window components; the component length at level n is
    (t~_n - t_n)/2^(p_n), which shrinks to zero.
    """
    if not 1 <= depth <= comb.depth:
        raise ValueError("depth exceeds tower size")
    for n in range(1, comb.depth):
        a, b = comb.level(n), comb.level(n + 1)
        assert window_length(b, 1) < window_length(a, 1)

    def left(m: int) -> tuple[Fraction, Fraction]:
        pair = comb.level(m)
        return pair.lo.frac, pair.width / (1 << pair.period)

    def right(m: int) -> tuple[Fraction, Fraction]:
        pair = comb.level(m)
        d = pair.width / (1 << pair.period)
        return (pair.hi - d).frac, d

    tau1 = LimitAngle(left, max_depth=comb.depth, label="tau1")
    tau2 = LimitAngle(right, max_depth=comb.depth, label="tau2")
    return KcShadow(window(comb.level(depth)).s, tau1, tau2)


@dataclass(frozen=True)
class ComponentAddress:
    """Per-level positions j_n (1 <= j_n <= p_n) of a component of J_infinity."""

    js: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "js", tuple(self.js))

    def check_compatible(self, comb: Tower, depth: int):
        if depth > len(self.js) or depth > comb.depth:
            raise ValueError("address or tower shorter than requested depth")
        for n in range(1, depth + 1):
            p = comb.level(n).period
            if not 1 <= self.js[n - 1] <= p:
                raise ValueError(f"address entry j_{n} = {self.js[n - 1]} outside 1..{p}")
            if n > 1:
                prev_p = comb.level(n - 1).period
                if (self.js[n - 1] - self.js[n - 2]) % prev_p != 0:
                    raise ValueError(f"incompatible address at level {n}: j_{n} != j_{n - 1} (mod p_{n - 1})")

    @classmethod
    def critical(cls, comb: Tower, depth: int) -> "ComponentAddress":
        """Address j_n = p_n of the component through the critical point."""
        return cls(tuple(comb.level(n).period for n in range(1, depth + 1)))

    @classmethod
    def constant(cls, j: int, depth: int) -> "ComponentAddress":
        return cls((j,) * depth)


@dataclass(frozen=True)
class ComponentShadow:
    components: ArcSet
    classification: str
    window_intersection: ArcSet | None


def shadow_component(comb: Tower, addr: ComponentAddress, depth: int) -> ComponentShadow:
    """Finite-depth shadow of a J_infinity component from its address.

    Intersects the four-arc sub-windows s^1_{n,j_n} over n <= depth (at most
    four components survive).  When p_n - j_n is a constant N the component
    maps onto the critical one after N steps ("case2(N)"); otherwise the
    two-arc window intersection is returned as well.
    """
    addr.check_compatible(comb, depth)
    inter = None
    offsets = set()
    for n in range(1, depth + 1):
        pair = comb.level(n)
        jn = addr.js[n - 1]
        offsets.add(pair.period - jn)
        s1 = subwindow(pair, jn).arcs
        inter = s1 if inter is None else inter.intersect(s1)
    if len(inter) > 4:
        raise AssertionError("component shadow has more than four components")
    if len(offsets) == 1:
        return ComponentShadow(inter, f"case2({offsets.pop()})", None)
    winter = None
    for n in range(1, depth + 1):
        s = window_at(comb.level(n), addr.js[n - 1])
        winter = s if winter is None else winter.intersect(s)
    return ComponentShadow(inter, "undetermined/case1-so-far", winter)


@dataclass(frozen=True)
class ThetaResult:
    value: Angle
    boundary_collapse: bool


def _half_windows(pair: RayPair) -> tuple[Arc, Arc]:
    """(S_{n,0}, S'_{n,0}): components of sigma^(-1)(S_{n,1}), labelled so that
    S_{n,0} has sigma^(p-1)(t_n) on its boundary."""
    half = pair.width / 2
    c0 = Arc(Angle(pair.lo.frac / 2), half)
    c1 = Arc(Angle(pair.lo.frac / 2 + HALF), half)
    marker = sigma_pow(pair.lo, pair.period - 1)
    if marker in (c0.start, c0.start + c0.length):
        s0, s0p = c0, c1
    elif marker in (c1.start, c1.start + c1.length):
        s0, s0p = c1, c0
    else:
        raise ValueError("pair is not a valid renormalization pair: no half-window marker")
    # the half-windows are exactly the components of s_{n,p_n}
    assert {s0, s0p} == set(window_at(pair, pair.period).components)
    return s0, s0p


def theta(comb: Tower, n: int, t: Angle) -> ThetaResult:
    """Itinerary semiconjugacy collapsing level-n window dynamics to doubling.

    theta(t) = sum_j eps(sigma^(j p)(t)) / 2^(j+1) with eps = 0 on S_{n,0} and
    1 on S'_{n,0}; exact because the itinerary of a rational t is eventually
    periodic.  Orbits meeting the boundary of the two half-windows are flagged
    (eps = 0 is used there as a tie-break).  The exact semiconjugacy identity
    theta(sigma^p(t)) = 2 theta(t) is asserted before returning.
    """
    pair = comb.level(n)
    if not in_shadow(t, comb, n, pair.period):
        raise ValueError(f"{t} is not in the level-{n} shadow of the small Julia set")
    s0, s0p = _half_windows(pair)
    value, flagged = _theta_value(t, pair.period, s0, s0p)
    check, _ = _theta_value(sigma_pow(t, pair.period), pair.period, s0, s0p)
    assert check == double(value), "semiconjugacy identity failed"
    return ThetaResult(value, flagged)


def _theta_value(t: Angle, p: int, s0: Arc, s0p: Arc) -> tuple[Angle, bool]:
    boundary = {s0.start, s0.start + s0.length, s0p.start, s0p.start + s0p.length}
    index: dict[Angle, int] = {}
    bits: list[str] = []
    flagged = False
    u = t
    while u not in index:
        index[u] = len(bits)
        if u in boundary:
            flagged = True
            bits.append("0")
        elif s0.contains(u):
            bits.append("0")
        elif s0p.contains(u):
            bits.append("1")
        else:
            raise ValueError(f"orbit point {u} escapes the half-windows")
        u = sigma_pow(u, p)
    start = index[u]
    pre = "".join(bits[:start])
    per = "".join(bits[start:])
    return angle_from_words(pre, per), flagged


def omega_probe(source, targets, horizon: int, bits: int):
    """First hit times of doubled source prefixes near each target.

    For each target, the smallest k in 1..horizon with
    dist(sigma^k(source), target) < 2^-bits, computed on binary prefixes
    (doubling acts as the shift); None records no hit within the horizon,
    which is a report, not a refutation.  Sources and targets may be exact
    angles or nested-arc limits; the source must be refinable to
    horizon + bits + 4 binary digits.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    if bits < 2:
        raise ValueError("bits must be >= 2")
    slack = 4
    total = horizon + bits + slack
    src = source if isinstance(source, LimitAngle) else LimitAngle.from_angle(source)
    sbits = format(src.prefix_bits(total), f"0{total}b")
    win = bits + slack
    tol = Fraction(1, 1 << bits)
    results = []
    for target in targets:
        tv = target.refine(bits + slack + 2).frac if isinstance(target, LimitAngle) else target.frac
        hit = None
        for k in range(1, horizon + 1):
            w = Fraction(int(sbits[k:k + win], 2), 1 << win)
            if circular_distance(w, tv) < tol:
                hit = k
                break
        results.append((target, hit))
    return results


@dataclass(frozen=True)
class CheckResult:
    check: str
    level: int
    passed: bool
    witness: str = ""

    def to_json(self) -> dict:
        return {"check": self.check, "level": self.level, "pass": self.passed, "witness": self.witness}


@dataclass(frozen=True)
class ValidationReport:
    entries: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def failures(self) -> list[CheckResult]:
        return [e for e in self.entries if not e.passed]

    def to_json(self) -> list:
        return [e.to_json() for e in self.entries]


def validate(comb: Tower) -> ValidationReport:
    """Full invariant scan of a tower; failures become report entries."""
    entries: list[CheckResult] = []

    def add(check, level, passed, witness=""):
        entries.append(CheckResult(check, level, passed, witness))

    pair_ok = []
    for n, pair in enumerate(comb.levels, start=1):
        problems = pair.check()
        ok = not problems
        pair_ok.append(ok)
        add("pair_periodic", n, ok, "; ".join(problems))
        if ok:
            add("pair_width", n, pair.width < HALF, f"width {pair.width}")
    for n in range(1, comb.depth):
        a, b = comb.level(n), comb.level(n + 1)
        ratio_ok = b.period % a.period == 0 and b.period >= 2 * a.period
        add("period_divisibility", n + 1, ratio_ok, f"{b.period} over {a.period}")
        if not (pair_ok[n - 1] and pair_ok[n]):
            continue
        nest_big = a.lo <= b.lo and b.hi <= a.hi and b.lo < b.hi
        add("nesting_S", n + 1, nest_big, f"[{b.lo},{b.hi}] in [{a.lo},{a.hi}]")
        try:
            nest_small = window(b).s.is_subset_of(window(a).s)
        except ValueError as exc:
            nest_small, _ = False, exc
        add("nesting_s", n + 1, nest_small, "s_{n+1,1} in s_{n,1}")
    for n, pair in enumerate(comb.levels, start=1):
        if not pair_ok[n - 1]:
            continue
        interior = Arc(pair.lo, pair.width)
        bad = []
        a, b = pair.lo, pair.hi
        for k in range(1, pair.period + 1):
            a, b = double(a), double(b)
            for point in (a, b):
                if interior.interior_contains(point):
                    bad.append(f"sigma^{k} hits {point}")
        add("orbit_exclusion", n, not bad, "; ".join(bad))
        chords = orbit_chords(pair)
        bad = [
            f"{c} x {d}"
            for i, c in enumerate(chords)
            for d in chords[i + 1:]
            if linked(c, d)
        ]
        add("unlinked_chords", n, not bad, "; ".join(bad))
        s_set = ArcSet([Arc(pair.lo, pair.width)])
        bad = []
        a, b = pair.lo, pair.hi
        for k in range(1, pair.period):
            a, b = double(a), double(b)
            arcs = [Arc(a, (b.frac - a.frac) % 1), Arc(b, (a.frac - b.frac) % 1)]
            disjoint = [arc for arc in arcs if ArcSet([arc]).intersect(s_set).total_length == 0]
            if not disjoint:
                bad.append(f"k={k}: no arc avoids S_n interior")
            elif any(arc.length < pair.width for arc in disjoint):
                bad.append(f"k={k}: avoiding arc shorter than S_n")
        add("min_length_2inf", n, not bad, "; ".join(bad))
    # cross-level unlinking
    all_chords = []
    usable = all(pair_ok)
    if usable:
        for pair in comb.levels:
            all_chords.extend(orbit_chords(pair))
        bad = []
        for i, c in enumerate(all_chords):
            for d in all_chords[i + 1:]:
                if linked(c, d):
                    bad.append(f"{c} x {d}")
        add("unlinked_across_levels", 0, not bad, "; ".join(bad[:5]))
    return ValidationReport(tuple(entries))
