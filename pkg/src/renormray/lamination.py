"""Chords in the unit disk: linkage tests, finite invariant families, SVG export."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .circle import Angle, double


@dataclass(frozen=True)
class Chord:
    """Unordered pair of distinct circle points, stored with a < b."""

    a: Angle
    b: Angle

    def __post_init__(self):
        a, b = self.a, self.b
        if a == b:
            raise ValueError("chord endpoints must differ")
        if b < a:
            object.__setattr__(self, "a", b)
            object.__setattr__(self, "b", a)

    def image(self) -> "Chord | None":
        """Chord of the doubled endpoints, or None if it degenerates."""
        a, b = double(self.a), double(self.b)
        return None if a == b else Chord(a, b)

    def __repr__(self):
        return f"Chord({self.a}, {self.b})"


def linked(c1: Chord, c2: Chord) -> bool:
    """True iff the chords cross strictly; shared endpoints count as unlinked."""
    if {c1.a, c1.b} & {c2.a, c2.b}:
        return False

    def inside(t: Angle) -> bool:
        # strictly inside the open arc (c1.a, c1.b) going counterclockwise
        return 0 < (t.frac - c1.a.frac) % 1 < (c1.b.frac - c1.a.frac) % 1

    return inside(c2.a) != inside(c2.b)


def orbit_chords(pair) -> list[Chord]:
    """Distinct chords {sigma^k(lo), sigma^k(hi)}, k = 0..period-1."""
    seen = []
    a, b = pair.lo, pair.hi
    for _ in range(pair.period):
        c = Chord(a, b)
        if c not in seen:
            seen.append(c)
        a, b = double(a), double(b)
    return seen


def build(comb, depth: int, preimage_depth: int = 0) -> tuple[Chord, ...]:
    """Finite chord family of a tower: level orbit chords plus chosen preimages.

    Preimage chords are added one generation at a time; for each chord the
    pairing of its four endpoint preimages is the one unlinked with the
    family built so far.
    """
    if depth > len(comb.levels):
        raise ValueError("depth exceeds tower size")
    family: list[Chord] = []
    for pair in comb.levels[:depth]:
        for c in orbit_chords(pair):
            if c not in family:
                family.append(c)
    frontier = list(family)
    for _ in range(preimage_depth):
        new_frontier = []
        for chord in frontier:
            a0, a1 = chord.a.frac / 2, chord.a.frac / 2 + Fraction(1, 2)
            b0, b1 = chord.b.frac / 2, chord.b.frac / 2 + Fraction(1, 2)
            pairings = (
                (Chord(Angle(a0), Angle(b0)), Chord(Angle(a1), Angle(b1))),
                (Chord(Angle(a0), Angle(b1)), Chord(Angle(a1), Angle(b0))),
            )
            placed = None
            for cand in pairings:
                ok = all(not linked(c, d) for c in cand for d in family) and not linked(*cand)
                if ok:
                    placed = cand
                    break
            if placed is None:
                raise ValueError(f"no unlinked preimage placement for {chord}")
            for c in placed:
                if c not in family:
                    family.append(c)
                    new_frontier.append(c)
        frontier = new_frontier
    return tuple(sorted(family, key=lambda c: (c.a.frac, c.b.frac)))


def verify_unlinked(family) -> dict:
    """All-pairs linkage scan; failures are returned as witness pairs."""
    family = list(family)
    witnesses = []
    for i, c in enumerate(family):
        for d in family[i + 1:]:
            if linked(c, d):
                witnesses.append((c, d))
    return {"pass": not witnesses, "witnesses": witnesses}


def _point(t: Angle) -> tuple[float, float]:
    # SVG y axis points down; negate sin so angles run counterclockwise
    phi = 2 * math.pi * float(t.frac)
    return math.cos(phi), -math.sin(phi)


def export_svg(family, circular_arcs: bool = False, stroke_width: float = 0.004) -> str:
    """Deterministic unit-disk rendering of a chord family (SVG 1.1)."""
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="-1.05 -1.05 2.1 2.1">',
        f'<circle cx="0" cy="0" r="1" fill="none" stroke="black" stroke-width="{stroke_width:.6f}"/>',
    ]
    for chord in sorted(family, key=lambda c: (c.a.frac, c.b.frac)):
        (x1, y1), (x2, y2) = _point(chord.a), _point(chord.b)
        if circular_arcs:
            # hyperbolic geodesic: circular arc orthogonal to the unit circle
            gap = (chord.b.frac - chord.a.frac) % 1
            if gap == Fraction(1, 2):
                lines.append(
                    f'<line x1="{x1:.6f}" y1="{y1:.6f}" x2="{x2:.6f}" y2="{y2:.6f}" '
                    f'stroke="black" stroke-width="{stroke_width:.6f}"/>'
                )
                continue
            half = math.pi * float(gap)
            r = abs(math.tan(half))
            sweep = 1 if gap < Fraction(1, 2) else 0
            lines.append(
                f'<path d="M {x1:.6f} {y1:.6f} A {r:.6f} {r:.6f} 0 0 {sweep} {x2:.6f} {y2:.6f}" '
                f'fill="none" stroke="black" stroke-width="{stroke_width:.6f}"/>'
            )
        else:
            lines.append(
                f'<line x1="{x1:.6f}" y1="{y1:.6f}" x2="{x2:.6f}" y2="{y2:.6f}" '
                f'stroke="black" stroke-width="{stroke_width:.6f}"/>'
            )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
