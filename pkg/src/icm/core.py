"""Exact piecewise-linear self-maps of the unit interval.

Every coordinate is a `fractions.Fraction` and every decision below is exact;
floats never appear. Maps are kept in canonical form (strictly increasing
abscissas spanning [0,1], no zero-slope segment, collinear neighbours merged)
so structural equality of two `PLMap`s coincides with pointwise equality.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import DomainError, ResourceError

Rational = Fraction
Point = tuple[Fraction, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)

#: Hard ceiling on breakpoints produced by iterated composition; lap counts
#: grow like e^(k*h), so unbounded iteration would exhaust memory.
DEFAULT_BREAKPOINT_CAP = 10**7


def rat(value) -> Fraction:
    """Coerce an int, a string like ``2/3``, or a Fraction to a Fraction.

    Floats are rejected: the library is exact end to end.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"not an exact rational: {value!r}") from exc
    raise DomainError(f"not an exact rational: {value!r}")


@dataclass(frozen=True, order=True)
class Interval:
    """Closed subinterval of [0, 1]; degenerate (lo == hi) is allowed."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = rat(self.lo), rat(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if not (ZERO <= lo <= hi <= ONE):
            raise DomainError(f"invalid interval [{lo}, {hi}]")

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def strictly_inside(self, x: Fraction) -> bool:
        return self.lo < x < self.hi

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi}]"


FULL = Interval(ZERO, ONE)


def interval(lo, hi) -> Interval:
    return Interval(rat(lo), rat(hi))


@dataclass(frozen=True)
class CriticalSet:
    """Interior local extrema of a map: ordered (point, 'max'|'min') pairs."""

    entries: tuple[tuple[Fraction, str], ...]

    @property
    def xs(self) -> tuple[Fraction, ...]:
        return tuple(x for x, _ in self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[Fraction, str]]:
        return iter(self.entries)

    def __contains__(self, x) -> bool:
        return any(x == p for p, _ in self.entries)


@dataclass(frozen=True)
class FixedSet:
    """Exact solution set of f(x) = x: isolated points plus diagonal segments."""

    isolated: tuple[Fraction, ...]
    segments: tuple[Interval, ...]

    @property
    def empty(self) -> bool:
        return not self.isolated and not self.segments

    def contains(self, x: Fraction) -> bool:
        return x in self.isolated or any(s.contains(x) for s in self.segments)

    def least(self) -> Fraction:
        candidates = list(self.isolated) + [s.lo for s in self.segments]
        if not candidates:
            raise DomainError("empty fixed set has no least element")
        return min(candidates)

    def intersect(self, other: "FixedSet") -> "FixedSet":
        points: set[Fraction] = set()
        segs: list[Interval] = []
        for x in self.isolated:
            if other.contains(x):
                points.add(x)
        for x in other.isolated:
            if self.contains(x):
                points.add(x)
        for a in self.segments:
            for b in other.segments:
                lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
                if lo < hi:
                    segs.append(Interval(lo, hi))
                elif lo == hi:
                    points.add(lo)
        return _build_fixed_set(points, segs)


def _build_fixed_set(points: Iterable[Fraction], segs: Iterable[Interval]) -> FixedSet:
    merged: list[list[Fraction]] = []
    for s in sorted(segs, key=lambda s: (s.lo, s.hi)):
        if merged and s.lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], s.hi)
        else:
            merged.append([s.lo, s.hi])
    seg_ivs = tuple(Interval(a, b) for a, b in merged)
    iso = tuple(sorted(p for p in set(points)
                       if not any(iv.contains(p) for iv in seg_ivs)))
    return FixedSet(iso, seg_ivs)


# A region piece is an x-interval with endpoint-inclusion flags, used to
# represent preimages of (half-)open value bands exactly.
_Piece = tuple[Fraction, Fraction, bool, bool]


@dataclass(frozen=True)
class PLMap:
    """Piecewise-linear map [0,1] -> [0,1] given by its breakpoints.

    Construction validates and canonicalizes: the abscissas must strictly
    increase from 0 to 1, ordinates stay in [0,1], no segment may have zero
    slope (the map is nowhere constant), and collinear consecutive segments
    are merged.
    """

    points: tuple[Point, ...]
    _xs: tuple[Fraction, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pts = [(rat(x), rat(y)) for x, y in self.points]
        if len(pts) < 2:
            raise DomainError("a map needs at least the two endpoint breakpoints")
        if pts[0][0] != ZERO or pts[-1][0] != ONE:
            raise DomainError("breakpoint abscissas must span exactly [0, 1]")
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if x1 <= x0:
                raise DomainError("breakpoint abscissas must strictly increase")
            if y0 == y1:
                raise DomainError(f"constant piece on [{x0}, {x1}] is not allowed")
        for _, y in pts:
            if not (ZERO <= y <= ONE):
                raise DomainError(f"value {y} outside [0, 1]")
        merged: list[Point] = [pts[0], pts[1]]
        for p in pts[2:]:
            (x0, y0), (x1, y1) = merged[-2], merged[-1]
            if (y1 - y0) * (p[0] - x1) == (p[1] - y1) * (x1 - x0):
                merged[-1] = p
            else:
                merged.append(p)
        object.__setattr__(self, "points", tuple(merged))
        object.__setattr__(self, "_xs", tuple(x for x, _ in merged))

    # -- basic queries ------------------------------------------------------

    @property
    def xs(self) -> tuple[Fraction, ...]:
        return self._xs

    def segments(self) -> Iterator[tuple[Point, Point]]:
        return zip(self.points, self.points[1:])

    def _segment_right(self, x: Fraction) -> int:
        """Index of the segment covering [x, x+eps)."""
        i = bisect.bisect_right(self._xs, x) - 1
        return min(max(i, 0), len(self.points) - 2)

    def _segment_left(self, x: Fraction) -> int:
        """Index of the segment covering (x-eps, x]."""
        i = bisect.bisect_left(self._xs, x) - 1
        return min(max(i, 0), len(self.points) - 2)

    def slope(self, i: int) -> Fraction:
        (x0, y0), (x1, y1) = self.points[i], self.points[i + 1]
        return (y1 - y0) / (x1 - x0)

    def __call__(self, x) -> Fraction:
        x = rat(x)
        if not (ZERO <= x <= ONE):
            raise DomainError(f"argument {x} outside [0, 1]")
        i = self._segment_right(x)
        (x0, y0), (x1, y1) = self.points[i], self.points[i + 1]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def critical_points(self) -> CriticalSet:
        entries = []
        for i in range(1, len(self.points) - 1):
            before, after = self.slope(i - 1), self.slope(i)
            if before > 0 > after:
                entries.append((self.points[i][0], "max"))
            elif before < 0 < after:
                entries.append((self.points[i][0], "min"))
        return CriticalSet(tuple(entries))

    def is_onto(self) -> bool:
        return self.image(FULL) == FULL

    # -- images and preimages -----------------------------------------------

    def image(self, J: Interval) -> Interval:
        values = [self(J.lo), self(J.hi)]
        values += [y for x, y in self.points if J.lo < x < J.hi]
        return Interval(min(values), max(values))

    def preimage_point(self, y) -> list[Fraction]:
        y = rat(y)
        if not (ZERO <= y <= ONE):
            raise DomainError(f"value {y} outside [0, 1]")
        found: set[Fraction] = set()
        for (x0, y0), (x1, y1) in self.segments():
            if min(y0, y1) <= y <= max(y0, y1):
                found.add(x0 + (y - y0) * (x1 - x0) / (y1 - y0))
        return sorted(found)

    def _region_pieces(self, lo: Fraction | None, hi: Fraction | None,
                       strict_lo: bool, strict_hi: bool) -> list[_Piece]:
        """Connected components of {x : f(x) in the given value band}.

        ``lo=None`` / ``hi=None`` leave that side unbounded; the strictness
        flags exclude the corresponding boundary value. Components come back
        sorted, as (a, b, a_included, b_included).
        """
        pieces: list[_Piece] = []
        for (x0, y0), (x1, y1) in self.segments():
            ymin, ymax = (y0, y1) if y0 <= y1 else (y1, y0)
            wlo = ymin if lo is None else max(lo, ymin)
            whi = ymax if hi is None else min(hi, ymax)
            if wlo > whi:
                continue
            slope = (y1 - y0) / (x1 - x0)
            xa = x0 + (wlo - y0) / slope
            xb = x0 + (whi - y0) / slope
            if xa > xb:
                xa, xb = xb, xa
            va, vb = (wlo, whi) if slope > 0 else (whi, wlo)
            incl_a = not ((strict_lo and lo is not None and va == lo)
                          or (strict_hi and hi is not None and va == hi))
            incl_b = not ((strict_lo and lo is not None and vb == lo)
                          or (strict_hi and hi is not None and vb == hi))
            if xa == xb and not (incl_a and incl_b):
                continue
            pieces.append((xa, xb, incl_a, incl_b))
        pieces.sort(key=lambda p: (p[0], p[1]))
        merged: list[list] = []
        for a, b, ia, ib in pieces:
            if merged:
                pa, pb, pia, pib = merged[-1]
                if a < pb or (a == pb and (pib or ia)):
                    if b > pb:
                        merged[-1][1], merged[-1][3] = b, ib
                    elif b == pb:
                        merged[-1][3] = pib or ib
                    continue
            merged.append([a, b, ia, ib])
        return [tuple(m) for m in merged]

    def preimage_interval(self, J: Interval) -> list[Interval]:
        pieces = self._region_pieces(J.lo, J.hi, False, False)
        return [Interval(a, b) for a, b, _, _ in pieces]

    def band_components(self, lo, hi) -> list[_Piece]:
        """Components of {x : lo < f(x) < hi} (relatively open in [0,1])."""
        return self._region_pieces(rat(lo), rat(hi), True, True)

    def sublevel_connected(self, v, strict: bool) -> bool:
        """Whether {f < v} (strict) or {f <= v} has at most one component."""
        return len(self._region_pieces(None, rat(v), False, strict)) <= 1

    def superlevel_connected(self, v, strict: bool) -> bool:
        """Whether {f > v} (strict) or {f >= v} has at most one component."""
        return len(self._region_pieces(rat(v), None, strict, False)) <= 1

    # -- shape predicates -----------------------------------------------------

    def is_monotone_on(self, J: Interval) -> bool:
        if J.degenerate:
            raise DomainError("monotonicity is undefined on a degenerate interval")
        return not any(J.lo < c < J.hi for c, _ in self.critical_points())

    def is_open_on(self, J: Interval, K: Interval) -> bool:
        """Decide whether the restriction f|J : J -> K is an open map.

        Exact criterion: interior local maxima of f|J attain max K, interior
        local minima attain min K, and at each endpoint of J the value is
        min K when the adjacent branch rises away from the boundary and max K
        when it falls (mirrored on the right).
        """
        if J.degenerate:
            raise DomainError("openness is undefined on a degenerate interval")
        img = self.image(J)
        if not K.contains_interval(img):
            raise DomainError(f"image {img} not contained in codomain {K}")
        for c, kind in self.critical_points():
            if J.lo < c < J.hi:
                v = self(c)
                if kind == "max" and v != K.hi:
                    return False
                if kind == "min" and v != K.lo:
                    return False
        first_up = self.slope(self._segment_right(J.lo)) > 0
        if self(J.lo) != (K.lo if first_up else K.hi):
            return False
        last_up = self.slope(self._segment_left(J.hi)) > 0
        if self(J.hi) != (K.hi if last_up else K.lo):
            return False
        return True

    # -- fixed points ---------------------------------------------------------

    def fixed_points(self, within: Interval = FULL) -> FixedSet:
        points: set[Fraction] = set()
        segs: list[Interval] = []
        for (x0, y0), (x1, y1) in self.segments():
            a, b = max(x0, within.lo), min(x1, within.hi)
            if a > b:
                continue
            slope = (y1 - y0) / (x1 - x0)
            if slope == 1:
                if y0 == x0:  # the whole piece sits on the diagonal
                    if a < b:
                        segs.append(Interval(a, b))
                    else:
                        points.add(a)
                continue
            star = (y0 - slope * x0) / (1 - slope)
            if a <= star <= b:
                points.add(star)
        return _build_fixed_set(points, segs)

    # -- restriction ----------------------------------------------------------

    def restrict_to_unit(self, J: Interval) -> "PLMap":
        """Affinely rescale f|J to a self-map of [0,1]; requires f(J) within J."""
        if J.degenerate:
            raise DomainError("cannot rescale a degenerate interval")
        if not J.contains_interval(self.image(J)):
            raise DomainError(f"{J} is not invariant, restriction does not self-map")
        w = J.length
        inner = [x for x in self._xs if J.lo < x < J.hi]
        pts = [((x - J.lo) / w, (self(x) - J.lo) / w)
               for x in [J.lo, *inner, J.hi]]
        return PLMap(tuple(pts))

    def __str__(self) -> str:
        return " ".join(f"({x},{y})" for x, y in self.points)


def make_plmap(points: Iterable) -> PLMap:
    """Build a canonical PLMap from (x, y) pairs of ints, strings, or Fractions."""
    return PLMap(tuple((rat(x), rat(y)) for x, y in points))


def identity_map() -> PLMap:
    return PLMap(((ZERO, ZERO), (ONE, ONE)))


def tent(n: int) -> PLMap:
    """Symmetric n-tent map: breakpoints at i/n alternating between 0 and 1."""
    if not isinstance(n, int) or n < 2:
        raise DomainError("tent maps need an integer number of branches >= 2")
    return PLMap(tuple((Fraction(i, n), ZERO if i % 2 == 0 else ONE)
                       for i in range(n + 1)))


def compose(f: PLMap, g: PLMap, cap: int | None = None) -> PLMap:
    """Exact composition f ∘ g.

    The breakpoints of g are refined by the g-preimages of f's interior
    breakpoints, so the result is linear on every piece; canonicalization
    then merges whatever turned out collinear.
    """
    xs = set(g.xs)
    for bx in f.xs[1:-1]:
        xs.update(g.preimage_point(bx))
    if cap is not None and len(xs) > cap:
        raise ResourceError(
            f"composition needs {len(xs)} breakpoints, above the cap {cap}")
    grid = sorted(xs)
    return PLMap(tuple((x, f(g(x))) for x in grid))


def iterate(f: PLMap, k: int, cap: int | None = DEFAULT_BREAKPOINT_CAP) -> PLMap:
    """k-fold composition of f with itself, exact, guarded by the breakpoint cap."""
    if not isinstance(k, int) or k < 1:
        raise DomainError("iteration count must be a positive integer")
    acc = f
    for _ in range(k - 1):
        acc = compose(f, acc, cap=cap)
    return acc


def is_homeomorphism(h: PLMap) -> bool:
    slopes = [h.slope(i) for i in range(len(h.points) - 1)]
    increasing = all(s > 0 for s in slopes)
    decreasing = all(s < 0 for s in slopes)
    if increasing:
        return h(ZERO) == ZERO and h(ONE) == ONE
    if decreasing:
        return h(ZERO) == ONE and h(ONE) == ZERO
    return False


def invert_homeomorphism(h: PLMap) -> PLMap:
    if not is_homeomorphism(h):
        raise DomainError("inverse requires a PL homeomorphism of [0, 1]")
    flipped = sorted((y, x) for x, y in h.points)
    return PLMap(tuple(flipped))


def conjugate(f: PLMap, h: PLMap) -> PLMap:
    """Exact conjugation h⁻¹ ∘ f ∘ h by a PL homeomorphism h."""
    h_inv = invert_homeomorphism(h)
    return compose(h_inv, compose(f, h))
