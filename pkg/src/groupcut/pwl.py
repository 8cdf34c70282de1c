"""Exact periodic piecewise-linear functions on [0, 1].

A :class:`PwlPeriodic` stores, for each breakpoint, the value and both
one-sided limits.  Between breakpoints the function is affine.  Queries
reduce the argument modulo 1 first, so ``eval(pi, x + 1) == eval(pi, x)``.

All numbers are :class:`fractions.Fraction`; floats are rejected.
"""

from __future__ import annotations

import json
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Literal, Sequence

from .errors import (
    InconsistentLimits,
    LengthMismatch,
    NotSorted,
    PeriodicityViolated,
)

Side = Literal["left", "at", "right"]
SIDES: tuple[Side, ...] = ("left", "at", "right")

ZERO = Fraction(0)
ONE = Fraction(1)


def as_rational(x) -> Fraction:
    """Convert ints, Fractions and ``"p/q"`` strings to Fraction.

    Floats are refused: a float has already lost the exact value.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"expected an exact rational, got {type(x).__name__}: {x!r}")


def rational_str(x: Fraction) -> str:
    """Lossless ``"p/q"`` rendering (denominator always written)."""
    return f"{x.numerator}/{x.denominator}"


def frac_part(x: Fraction) -> Fraction:
    """x mod 1, in [0, 1)."""
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True)
class BreakpointDatum:
    point: Fraction
    value: Fraction
    left_limit: Fraction
    right_limit: Fraction

    @classmethod
    def continuous(cls, point, value) -> "BreakpointDatum":
        p, v = as_rational(point), as_rational(value)
        return cls(p, v, v, v)

    def side(self, side: Side) -> Fraction:
        if side == "at":
            return self.value
        if side == "left":
            return self.left_limit
        if side == "right":
            return self.right_limit
        raise ValueError(f"unknown side {side!r}")


class PwlPeriodic:
    """A possibly discontinuous piecewise-linear function, periodic mod 1.

    Instances are immutable.  Build them with :func:`from_breakpoints` or
    :func:`from_pieces` rather than calling the constructor directly.
    """

    __slots__ = ("_points", "_values", "_lefts", "_rights", "_slopes")

    def __init__(self, data: Sequence[BreakpointDatum], slopes: Sequence | None = None):
        if len(data) < 2:
            raise LengthMismatch("need at least the breakpoints 0 and 1")
        pts = tuple(as_rational(d.point) for d in data)
        vals = tuple(as_rational(d.value) for d in data)
        lefts = list(as_rational(d.left_limit) for d in data)
        rights = list(as_rational(d.right_limit) for d in data)
        if pts[0] != 0 or pts[-1] != 1:
            raise NotSorted("breakpoints must start at 0 and end at 1")
        if any(a >= b for a, b in zip(pts, pts[1:])):
            raise NotSorted("breakpoints must be strictly increasing")
        if vals[0] != vals[-1]:
            raise PeriodicityViolated(f"value(0) = {vals[0]} but value(1) = {vals[-1]}")
        # The left limit at 0 is the left limit at 1 and the right limit at 1
        # is the right limit at 0.  A copy that merely repeats the value is
        # taken as "not specified" and filled in from its partner.
        if lefts[0] != lefts[-1]:
            if lefts[0] != vals[0]:
                raise PeriodicityViolated("left limits at 0 and 1 differ")
            lefts[0] = lefts[-1]
        if rights[-1] != rights[0]:
            if rights[-1] != vals[-1]:
                raise PeriodicityViolated("right limits at 0 and 1 differ")
            rights[-1] = rights[0]

        derived = tuple(
            (lefts[i + 1] - rights[i]) / (pts[i + 1] - pts[i]) for i in range(len(pts) - 1)
        )
        if slopes is not None:
            slopes = tuple(as_rational(s) for s in slopes)
            if len(slopes) != len(pts) - 1:
                raise LengthMismatch(f"expected {len(pts) - 1} slopes, got {len(slopes)}")
            for i, (given, want) in enumerate(zip(slopes, derived)):
                if given != want:
                    raise InconsistentLimits(
                        f"piece ({pts[i]}, {pts[i + 1]}): slope {given} does not join "
                        f"right limit {rights[i]} to left limit {lefts[i + 1]}"
                    )
        self._points = pts
        self._values = vals
        self._lefts = tuple(lefts)
        self._rights = tuple(rights)
        self._slopes = derived

    # -- accessors -------------------------------------------------------

    @property
    def points(self) -> tuple[Fraction, ...]:
        return self._points

    @property
    def slopes(self) -> tuple[Fraction, ...]:
        return self._slopes

    @property
    def breakpoints(self) -> list[BreakpointDatum]:
        return [
            BreakpointDatum(p, v, l, r)
            for p, v, l, r in zip(self._points, self._values, self._lefts, self._rights)
        ]

    def datum(self, i: int) -> BreakpointDatum:
        return BreakpointDatum(self._points[i], self._values[i], self._lefts[i], self._rights[i])

    def intercepts(self) -> tuple[Fraction, ...]:
        return tuple(r - s * p for r, s, p in zip(self._rights, self._slopes, self._points))

    def pieces(self) -> list[tuple[Fraction, Fraction, Fraction, Fraction]]:
        """``(start, end, slope, intercept)`` for each open piece."""
        return [
            (self._points[i], self._points[i + 1], s, self._rights[i] - s * self._points[i])
            for i, s in enumerate(self._slopes)
        ]

    def is_continuous(self) -> bool:
        return self._values == self._lefts == self._rights

    def continuous_at(self, i: int, side: Side | None = None) -> bool:
        """Continuity at breakpoint index ``i``; one-sided if ``side`` given."""
        v = self._values[i]
        if side == "left":
            return self._lefts[i] == v
        if side == "right":
            return self._rights[i] == v
        return self._lefts[i] == v == self._rights[i]

    def discontinuities(self) -> list[Fraction]:
        return [p for i, p in enumerate(self._points[:-1]) if not self.continuous_at(i)]

    def index_of(self, x: Fraction) -> int | None:
        """Index of ``x`` among the breakpoints, or None."""
        i = bisect_left(self._points, x)
        if i < len(self._points) and self._points[i] == x:
            return i
        return None

    # -- evaluation ------------------------------------------------------

    def eval(self, x, side: Side = "at") -> Fraction:
        x = as_rational(x)
        r = frac_part(x)
        pts = self._points
        i = bisect_left(pts, r)
        if pts[i] == r:
            if side == "at":
                return self._values[i]
            if side == "left":
                return self._lefts[i]
            if side == "right":
                return self._rights[i]
            raise ValueError(f"unknown side {side!r}")
        if side not in SIDES:
            raise ValueError(f"unknown side {side!r}")
        j = i - 1
        return self._rights[j] + self._slopes[j] * (r - pts[j])

    __call__ = eval

    def piece_extension(self, lo: Fraction, hi: Fraction, x: Fraction) -> Fraction:
        """Affine extension of the piece over the cell (lo, hi) at x in [lo, hi].

        ``lo`` and ``hi`` may lie in [0, 2]; they are reduced mod 1 together.
        """
        shift = lo.numerator // lo.denominator
        lo, hi, x = lo - shift, hi - shift, x - shift
        if x == lo:
            return self.eval(lo, "right")
        if x == hi:
            return self.eval(hi, "left")
        return self.eval(x, "at")

    # -- algebra ---------------------------------------------------------

    def refine(self, extra: Iterable) -> "PwlPeriodic":
        """The same function with additional (non-)breakpoints inserted."""
        pts = sorted(set(self._points) | {frac_part(as_rational(p)) for p in extra})
        return PwlPeriodic(
            [BreakpointDatum(p, self.eval(p), self.eval(p, "left"), self.eval(p, "right")) for p in pts]
        )

    def pruned(self) -> "PwlPeriodic":
        """Drop interior breakpoints where the function is affine through."""
        keep = [0]
        n = len(self._points)
        for i in range(1, n - 1):
            if self.continuous_at(i) and self._slopes[i - 1] == self._slopes[i]:
                continue
            keep.append(i)
        keep.append(n - 1)
        if len(keep) == n:
            return self
        return PwlPeriodic([self.datum(i) for i in keep])

    def __add__(self, other: "PwlPeriodic") -> "PwlPeriodic":
        return linear_combination([(ONE, self), (ONE, other)])

    def __sub__(self, other: "PwlPeriodic") -> "PwlPeriodic":
        return linear_combination([(ONE, self), (-ONE, other)])

    def __mul__(self, c) -> "PwlPeriodic":
        c = as_rational(c)
        return PwlPeriodic(
            [BreakpointDatum(d.point, c * d.value, c * d.left_limit, c * d.right_limit) for d in self.breakpoints]
        ).pruned()

    __rmul__ = __mul__

    def __neg__(self) -> "PwlPeriodic":
        return self * -1

    def __eq__(self, other) -> bool:
        if not isinstance(other, PwlPeriodic):
            return NotImplemented
        return equal(self, other)

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        parts = []
        for d in self.breakpoints:
            if d.left_limit == d.value == d.right_limit:
                parts.append(f"{d.point}:{d.value}")
            else:
                parts.append(f"{d.point}:({d.left_limit}|{d.value}|{d.right_limit})")
        return f"PwlPeriodic[{', '.join(parts)}]"

    # -- serialization ---------------------------------------------------

    def to_records(self) -> list[dict]:
        recs = []
        for i, d in enumerate(self.breakpoints):
            rec = {
                "point": rational_str(d.point),
                "value": rational_str(d.value),
                "left_limit": rational_str(d.left_limit),
                "right_limit": rational_str(d.right_limit),
                "slope_to_next": rational_str(self._slopes[i]) if i < len(self._slopes) else None,
            }
            recs.append(rec)
        return recs

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_records(), **kw)


def from_breakpoints(points: Sequence, values: Sequence) -> PwlPeriodic:
    """Continuous interpolation through ``(points[i], values[i])``."""
    if len(points) != len(values):
        raise LengthMismatch(f"{len(points)} points but {len(values)} values")
    pts = [as_rational(p) for p in points]
    vals = [as_rational(v) for v in values]
    if len(pts) < 2 or pts[0] != 0 or pts[-1] != 1:
        raise NotSorted("points must start at 0 and end at 1")
    if any(a >= b for a, b in zip(pts, pts[1:])):
        raise NotSorted("points must be strictly increasing")
    if vals[0] != vals[-1]:
        raise PeriodicityViolated(f"values at 0 and 1 differ: {vals[0]} != {vals[-1]}")
    return PwlPeriodic([BreakpointDatum(p, v, v, v) for p, v in zip(pts, vals)])


def from_pieces(breakpoints: Sequence[BreakpointDatum], slopes: Sequence) -> PwlPeriodic:
    """General constructor; ``slopes[i]`` is the slope on (x_i, x_{i+1})."""
    return PwlPeriodic(list(breakpoints), slopes=slopes)


def from_records(records: Sequence[dict]) -> PwlPeriodic:
    data = [
        BreakpointDatum(
            as_rational(r["point"]),
            as_rational(r["value"]),
            as_rational(r.get("left_limit", r["value"])),
            as_rational(r.get("right_limit", r["value"])),
        )
        for r in records
    ]
    slopes = [r.get("slope_to_next") for r in records[:-1]]
    return PwlPeriodic(data, slopes=None if any(s is None for s in slopes) else slopes)


def from_json(text: str) -> PwlPeriodic:
    return from_records(json.loads(text))


def merged_points(*funcs: PwlPeriodic) -> list[Fraction]:
    pts: set[Fraction] = set()
    for fn in funcs:
        pts.update(fn.points)
    return sorted(pts)


def linear_combination(terms: Sequence[tuple]) -> PwlPeriodic:
    """sum(c * fn for c, fn in terms), exact, on the merged breakpoints."""
    terms = [(as_rational(c), fn) for c, fn in terms]
    pts = merged_points(*(fn for _, fn in terms))
    data = []
    for p in pts:
        v = sum((c * fn.eval(p, "at") for c, fn in terms), ZERO)
        l = sum((c * fn.eval(p, "left") for c, fn in terms), ZERO)
        r = sum((c * fn.eval(p, "right") for c, fn in terms), ZERO)
        data.append(BreakpointDatum(p, v, l, r))
    return PwlPeriodic(data).pruned()


def combine(pi1: PwlPeriodic, pi2: PwlPeriodic, lam) -> PwlPeriodic:
    """lam * pi1 + (1 - lam) * pi2."""
    lam = as_rational(lam)
    return linear_combination([(lam, pi1), (ONE - lam, pi2)])


def equal(pi1: PwlPeriodic, pi2: PwlPeriodic) -> bool:
    pts = merged_points(pi1, pi2)
    for p in pts:
        for side in SIDES:
            if pi1.eval(p, side) != pi2.eval(p, side):
                return False
    for a, b in zip(pts, pts[1:]):
        m = (a + b) / 2
        if pi1.eval(m) != pi2.eval(m):
            return False
    return True


def zero_function() -> PwlPeriodic:
    return from_breakpoints([0, 1], [0, 0])
