"""Exact arithmetic on the circle R/Z.

Angles are reduced fractions taken mod 1, arcs are closed counterclockwise
intervals, and arc sets are canonical unions of disjoint arcs.  Everything in
this module is exact: no floats cross any interface here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

HALF = Fraction(1, 2)


def _as_fraction(value, den=None) -> Fraction:
    if den is not None:
        return Fraction(value, den)
    if isinstance(value, Angle):
        return value.frac
    return Fraction(value)


class Angle:
    """A point of R/Z stored as a reduced fraction in [0, 1)."""

    __slots__ = ("frac",)

    def __init__(self, value=0, den=None):
        object.__setattr__(self, "frac", _as_fraction(value, den) % 1)

    def __setattr__(self, *a):
        raise AttributeError("Angle is immutable")

    @classmethod
    def parse(cls, text: str) -> "Angle":
        """Parse 'p/q' or 'p' into an angle."""
        if "/" in text:
            num, den = text.split("/", 1)
            return cls(int(num), int(den))
        return cls(int(text))

    @property
    def numerator(self) -> int:
        return self.frac.numerator

    @property
    def denominator(self) -> int:
        return self.frac.denominator

    def __add__(self, other) -> "Angle":
        return Angle(self.frac + _as_fraction(other))

    __radd__ = __add__

    def __sub__(self, other) -> "Angle":
        return Angle(self.frac - _as_fraction(other))

    def __neg__(self) -> "Angle":
        return Angle(-self.frac)

    def __mul__(self, k) -> "Angle":
        return Angle(self.frac * k)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, Angle) and self.frac == other.frac

    def __lt__(self, other: "Angle") -> bool:
        return self.frac < other.frac

    def __le__(self, other: "Angle") -> bool:
        return self.frac <= other.frac

    def __hash__(self):
        return hash(self.frac)

    def __repr__(self):
        return f"Angle({self.frac})"

    def __str__(self):
        return f"{self.frac.numerator}/{self.frac.denominator}" if self.frac.denominator != 1 else str(self.frac.numerator)

    def __float__(self):
        return float(self.frac)

    def to_json(self) -> dict:
        return {"num": str(self.frac.numerator), "den": str(self.frac.denominator)}

    @classmethod
    def from_json(cls, obj: dict) -> "Angle":
        return cls(int(obj["num"]), int(obj["den"]))


def circular_distance(a, b) -> Fraction:
    """Shorter-arc distance between two circle points, as an exact fraction."""
    d = (_as_fraction(a) - _as_fraction(b)) % 1
    return min(d, 1 - d)


def double(t: Angle) -> Angle:
    """The doubling map t -> 2t mod 1."""
    return Angle(2 * t.frac)


def sigma_pow(t: Angle, m: int) -> Angle:
    """m-fold doubling, computed with a modular power (fast for huge m)."""
    if m < 0:
        raise ValueError("m must be >= 0")
    den = t.frac.denominator
    return Angle((t.frac.numerator * pow(2, m, den)) % den, den)


def preimages(t: Angle) -> tuple[Angle, Angle]:
    """The two preimages t/2 and t/2 + 1/2 under doubling, ordered by value."""
    a = Angle(t.frac / 2)
    b = Angle(t.frac / 2 + HALF)
    return (a, b) if a < b else (b, a)


def _mult_order_2(m: int) -> int:
    """Multiplicative order of 2 modulo odd m (order 1 when m == 1)."""
    if m == 1:
        return 1
    r = 2 % m
    k = 1
    while r != 1:
        r = (2 * r) % m
        k += 1
    return k


def orbit_info(t: Angle) -> tuple[int, int]:
    """Exact (preperiod, period) of t under the doubling map.

    The preperiod is the 2-adic valuation of the denominator and the period
    is the multiplicative order of 2 modulo its odd part.
    """
    den = t.frac.denominator
    pre = 0
    while den % 2 == 0:
        den //= 2
        pre += 1
    return pre, _mult_order_2(den)


def binary_words(t: Angle) -> tuple[str, str]:
    """Preperiodic and periodic blocks of the binary expansion of t.

    t = 0.(pre)(per)(per)... in base 2; for t = 0 the blocks are ('', '0').
    """
    pre_len, per_len = orbit_info(t)
    shifted = t.frac * 2**pre_len
    head = int(shifted)  # integer part carries the preperiodic digits
    frac = shifted - head
    per_int = int(frac * (2**per_len - 1))
    pre_bits = format(head, f"0{pre_len}b") if pre_len else ""
    per_bits = format(per_int, f"0{per_len}b")
    return pre_bits, per_bits


def angle_from_words(pre_bits: str, per_bits: str) -> Angle:
    """Angle with binary expansion 0.(pre_bits) followed by repeating per_bits."""
    if not per_bits:
        raise ValueError("periodic block must be non-empty")
    a = len(pre_bits)
    head = int(pre_bits, 2) if pre_bits else 0
    tail = Fraction(int(per_bits, 2), 2 ** len(per_bits) - 1)
    return Angle(Fraction(head + tail, 2**a))


def bits_prefix(t: Fraction, nbits: int) -> int:
    """floor(t * 2^nbits) for t in [0, 1)."""
    return (t.numerator << nbits) // t.denominator


@dataclass(frozen=True)
class Arc:
    """Closed arc traversed counterclockwise from ``start`` over ``length``.

    length == 1 is the full circle; length == 0 is a degenerate point arc
    (used for e.g. single-point enclosing arcs).
    """

    start: Angle
    length: Fraction

    def __post_init__(self):
        length = Fraction(self.length)
        if not 0 <= length <= 1:
            raise ValueError("arc length must lie in [0, 1]")
        object.__setattr__(self, "length", length)
        if not isinstance(self.start, Angle):
            object.__setattr__(self, "start", Angle(self.start))

    @property
    def end(self) -> Angle:
        return self.start + self.length

    @property
    def is_full_circle(self) -> bool:
        return self.length == 1

    def contains(self, t: Angle) -> bool:
        if self.is_full_circle:
            return True
        return (t.frac - self.start.frac) % 1 <= self.length

    def interior_contains(self, t: Angle) -> bool:
        if self.is_full_circle:
            return True
        return 0 < (t.frac - self.start.frac) % 1 < self.length

    def to_json(self) -> dict:
        return {
            "start": self.start.to_json(),
            "len": {"num": str(self.length.numerator), "den": str(self.length.denominator)},
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Arc":
        return cls(Angle.from_json(obj["start"]), Fraction(int(obj["len"]["num"]), int(obj["len"]["den"])))

    def __repr__(self):
        return f"Arc[{self.start}, {self.end}] (len {self.length})"


def _segments(arc: Arc) -> list[tuple[Fraction, Fraction]]:
    """Closed linear segments in [0, 1] covering the arc (split at the wrap)."""
    s = arc.start.frac
    e = s + arc.length
    if e <= 1:
        return [(s, e)]
    return [(s, Fraction(1)), (Fraction(0), e - 1)]


class ArcSet:
    """Canonical finite union of disjoint closed arcs in cyclic order.

    Overlapping or touching arcs are merged during canonicalization; the
    canonical form is order-independent.
    """

    __slots__ = ("arcs",)

    def __init__(self, arcs: Iterable[Arc] = ()):
        object.__setattr__(self, "arcs", self._canonicalize(list(arcs)))

    def __setattr__(self, *a):
        raise AttributeError("ArcSet is immutable")

    @staticmethod
    def _canonicalize(arcs: list[Arc]) -> tuple[Arc, ...]:
        arcs = [a for a in arcs if a.length > 0]
        if not arcs:
            return ()
        if any(a.is_full_circle for a in arcs):
            return (Arc(Angle(0), Fraction(1)),)
        segs: list[tuple[Fraction, Fraction]] = []
        for a in arcs:
            segs.extend(_segments(a))
        segs.sort()
        merged = [list(segs[0])]
        for s, e in segs[1:]:
            if s <= merged[-1][1]:
                merged[-1][1] = max(merged[-1][1], e)
            else:
                merged.append([s, e])
        # merge across the 0/1 wrap point
        wrap = None
        if len(merged) > 1 and merged[0][0] == 0 and merged[-1][1] == 1:
            first = merged.pop(0)
            last = merged.pop()
            wrap = Arc(Angle(last[0]), (1 - last[0]) + first[1])
        elif len(merged) == 1 and merged[0][0] == 0 and merged[0][1] == 1:
            return (Arc(Angle(0), Fraction(1)),)
        out = [Arc(Angle(s), e - s) for s, e in merged]
        if wrap is not None:
            out.append(wrap)
        out = [a for a in out if a.length > 0]
        total = sum((a.length for a in out), Fraction(0))
        if total > 1:
            raise ValueError("arc set total length exceeds 1")
        if total == 1 and len(out) == 1:
            return (Arc(out[0].start, Fraction(1)),)
        return tuple(out)

    @property
    def components(self) -> tuple[Arc, ...]:
        return self.arcs

    @property
    def total_length(self) -> Fraction:
        return sum((a.length for a in self.arcs), Fraction(0))

    def contains(self, t: Angle) -> bool:
        return any(a.contains(t) for a in self.arcs)

    def interior_contains(self, t: Angle) -> bool:
        return any(a.interior_contains(t) for a in self.arcs)

    def intersect(self, other: "ArcSet") -> "ArcSet":
        """Closed intersection; degenerate single-point overlaps are dropped."""
        mine = [seg for a in self.arcs for seg in _segments(a)]
        theirs = [seg for a in other.arcs for seg in _segments(a)]
        out = []
        for s1, e1 in mine:
            for s2, e2 in theirs:
                lo, hi = max(s1, s2), min(e1, e2)
                if hi > lo:
                    out.append(Arc(Angle(lo), hi - lo))
        return ArcSet(out)

    def is_subset_of(self, other: "ArcSet") -> bool:
        return self.intersect(other).total_length == self.total_length

    def sigma_image(self) -> "ArcSet":
        """Componentwise image under doubling; every component must be short."""
        for a in self.arcs:
            if a.length >= HALF:
                raise ValueError("component too long, image not an arc")
        return ArcSet(Arc(double(a.start), 2 * a.length) for a in self.arcs)

    def sigma_preimage_pow(self, m: int, max_components: int = 1 << 20) -> "ArcSet":
        """The full m-fold doubling preimage: 2^m scaled copies per component."""
        if m < 0:
            raise ValueError("m must be >= 0")
        if (1 << m) * len(self.arcs) > max_components:
            raise ValueError("preimage would have too many components")
        out = []
        for a in self.arcs:
            for k in range(1 << m):
                out.append(Arc(Angle((a.start.frac + k) / (1 << m)), a.length / (1 << m)))
        return ArcSet(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, ArcSet) and self.arcs == other.arcs

    def __hash__(self):
        return hash(self.arcs)

    def __iter__(self):
        return iter(self.arcs)

    def __len__(self):
        return len(self.arcs)

    def __repr__(self):
        return "ArcSet(" + " u ".join(f"[{a.start}, {a.end}]" for a in self.arcs) + ")"

    def to_json(self) -> list:
        return [a.to_json() for a in self.arcs]

    @classmethod
    def from_json(cls, obj: list) -> "ArcSet":
        return cls(Arc.from_json(o) for o in obj)


@dataclass(frozen=True)
class LimitAngle:
    """An angle defined by nested shrinking arcs.

    ``refiner(depth)`` returns (start, length) of a closed arc containing the
    limit; arcs are nested and their lengths shrink to 0 within the declared
    depth budget.  Exceeding the budget is an error, never silent truncation.
    """

    refiner: Callable[[int], tuple[Fraction, Fraction]]
    max_depth: int
    label: str = ""

    @classmethod
    def from_angle(cls, t: Angle, label: str = "") -> "LimitAngle":
        return cls(lambda depth: (t.frac, Fraction(0)), max_depth=10**9, label=label or str(t))

    def _arc_for_bits(self, nbits: int) -> tuple[Fraction, Fraction]:
        target = Fraction(1, 1 << (nbits + 2))
        prev_len = None
        for depth in range(1, self.max_depth + 1):
            start, length = self.refiner(depth)
            if prev_len is not None and length > prev_len:
                raise ValueError("refiner arcs are not shrinking")
            prev_len = length
            if length <= target:
                return start, length
        raise ValueError("insufficient depth")

    def prefix_bits(self, nbits: int) -> int:
        """First nbits binary digits of the limit, as an integer."""
        if nbits < 1:
            raise ValueError("need at least one bit")
        start, length = self._arc_for_bits(nbits)
        lo = bits_prefix(start % 1, nbits)
        hi = bits_prefix(start % 1 + length, nbits)
        if lo == hi:
            return lo
        # the arc straddles a dyadic boundary; report the upper cell, which is
        # still within 2^-nbits of the limit
        return hi % (1 << nbits)

    def refine(self, bits: int) -> Angle:
        """Dyadic angle with denominator 2^bits within 2^-bits of the limit."""
        if bits < 1:
            raise ValueError("bit request must be >= 1")
        return Angle(self.prefix_bits(bits), 1 << bits)


def refine(limit: LimitAngle, bits: int) -> Angle:
    return limit.refine(bits)
