"""Rotation sets of the angle-doubling map.

For rational rotation number p/q the unique minimal rotation set is a single
period-q orbit of the doubling map; it is built here from a Sturmian binary
word and can be cross-checked against a brute-force enumeration of all
period-q orbits.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .circle import Angle, Arc, angle_from_words, double


@dataclass(frozen=True)
class RotationSet:
    points: tuple[Angle, ...]
    rho: Fraction

    def to_json(self) -> dict:
        arc, fits = minimal_enclosing_arc(self.points)
        return {
            "points": [str(p) for p in self.points],
            "rho": f"{self.rho.numerator}/{self.rho.denominator}",
            "enclosing": arc.to_json(),
            "fits_semicircle": fits,
        }


def _check_nu(nu: Fraction) -> Fraction:
    nu = Fraction(nu)
    if not 0 <= nu < 1:
        raise ValueError("rotation number must lie in [0, 1)")
    return nu


def sturmian_word(p: int, q: int) -> str:
    """Binary word of length q with digit_i = floor((i+1)p/q) - floor(ip/q)."""
    return "".join(str(((i + 1) * p) // q - (i * p) // q) for i in range(q))


def minimal_rotation_set(nu) -> RotationSet:
    """The unique minimal rotation set with rational rotation number nu.

    Constructed from the Sturmian word of nu, then verified to be a genuine
    rotation set (invariant, cyclic-order preserving with the right step).
    """
    nu = _check_nu(nu)
    p, q = nu.numerator, nu.denominator
    if p == 0:
        return RotationSet((Angle(0),), Fraction(0))
    seed = angle_from_words("", sturmian_word(p, q))
    points = [seed]
    for _ in range(q - 1):
        points.append(double(points[-1]))
    points = tuple(sorted(points))
    if len(set(points)) != q:
        raise AssertionError("Sturmian construction produced a degenerate orbit")
    if rotation_number(points) != nu:
        raise AssertionError("Sturmian construction failed the rotation-number check")
    return RotationSet(points, nu)


def minimal_rotation_set_bruteforce(nu) -> RotationSet:
    """Brute-force oracle: search all period-q orbits k/(2^q - 1) of doubling.

    Keeps the orbits on which doubling preserves cyclic order with step p and
    asserts there is exactly one.
    """
    nu = _check_nu(nu)
    p, q = nu.numerator, nu.denominator
    if p == 0:
        return RotationSet((Angle(0),), Fraction(0))
    mod = (1 << q) - 1
    seen = set()
    found = []
    for k in range(1, mod):
        if k in seen:
            continue
        orbit = []
        x = k
        while x not in seen:
            seen.add(x)
            orbit.append(x)
            x = (2 * x) % mod
        if len(orbit) != q:
            continue
        pts = tuple(sorted(Angle(j, mod) for j in orbit))
        if rotation_number(pts) == nu:
            found.append(pts)
    if len(found) != 1:
        raise AssertionError(f"expected a unique minimal rotation set for {nu}, found {len(found)}")
    return RotationSet(found[0], nu)


def rotation_number(points) -> Fraction | None:
    """Combinatorial rotation number of a finite doubling-invariant set.

    Returns k/n when doubling maps the n points onto themselves advancing the
    cyclic position by the constant step k; otherwise None.
    """
    pts = tuple(sorted(set(points)))
    if not pts:
        raise ValueError("empty set")
    index = {t: i for i, t in enumerate(pts)}
    n = len(pts)
    step = None
    for i, t in enumerate(pts):
        image = double(t)
        j = index.get(image)
        if j is None:
            return None
        s = (j - i) % n
        if step is None:
            step = s
        elif s != step:
            return None
    return Fraction(step, n)


def minimal_enclosing_arc(points) -> tuple[Arc, bool]:
    """Complement of the largest gap between consecutive points.

    Ties are broken by the smallest resulting start angle.  The boolean
    reports whether the arc fits in a closed semicircle.
    """
    pts = sorted(set(points))
    if not pts:
        raise ValueError("empty set")
    if len(pts) == 1:
        return Arc(pts[0], Fraction(0)), True
    best = None
    for i, t in enumerate(pts):
        nxt = pts[(i + 1) % len(pts)]
        gap = (nxt.frac - t.frac) % 1
        start = nxt
        key = (-gap, start.frac)
        if best is None or key < best[0]:
            best = (key, Arc(start, 1 - gap))
    arc = best[1]
    return arc, arc.length <= Fraction(1, 2)
