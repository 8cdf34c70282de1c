"""The two-dimensional polyhedral complex Delta-P of a piecewise-linear function.

Faces are the nonempty sets F(I, J, K) = {(x, y) in I x J : x + y in K}
where I, J run over the cells (points and open intervals) of the
breakpoint subdivision of [0, 1] and K over the cells of the subdivision
of [0, 2] by B and B + 1.  On each face, Delta pi(x, y) = pi(x) + pi(y) -
pi(x + y) is affine, so its behaviour is decided by limits at vertices.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import VertexNotInFace
from .pwl import PwlPeriodic, rational_str

Point = tuple[Fraction, Fraction]


@dataclass(frozen=True, order=True)
class Cell1D:
    """A point ``lo == hi`` or an open interval ``(lo, hi)``."""

    lo: Fraction
    hi: Fraction

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def kind(self) -> str:
        return "point" if self.is_point else "open interval"

    @property
    def dim(self) -> int:
        return 0 if self.is_point else 1

    def closure_contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi

    def to_json(self) -> list[str]:
        return [rational_str(self.lo), rational_str(self.hi)]

    def __str__(self) -> str:
        if self.is_point:
            return f"{{{self.lo}}}"
        return f"({self.lo}, {self.hi})"


@dataclass(frozen=True)
class Face:
    I: Cell1D
    J: Cell1D
    K: Cell1D
    dimension: int
    vertices: tuple[Point, ...]

    def key(self):
        return (self.I.lo, self.I.hi, self.J.lo, self.J.hi, self.K.lo, self.K.hi)

    def to_json(self) -> dict:
        return {
            "I": self.I.to_json(),
            "J": self.J.to_json(),
            "K": self.K.to_json(),
            "dimension": self.dimension,
            "vertices": [[rational_str(x), rational_str(y)] for x, y in self.vertices],
        }

    def __str__(self) -> str:
        return f"F({self.I}, {self.J}, {self.K})"


@dataclass(frozen=True)
class DeltaComplex:
    breakpoints: tuple[Fraction, ...]
    diagonal_breakpoints: tuple[Fraction, ...]
    faces: tuple[Face, ...]

    @property
    def vertices(self) -> list[Point]:
        return sorted({v for face in self.faces for v in face.vertices})

    def faces_of_dimension(self, d: int) -> list[Face]:
        return [face for face in self.faces if face.dimension == d]

    def counts(self) -> dict[int, int]:
        out = {0: 0, 1: 0, 2: 0}
        for face in self.faces:
            out[face.dimension] += 1
        return out


def cells(points: Sequence[Fraction]) -> list[Cell1D]:
    """Points and open intervals of a sorted subdivision, in lexicographic order."""
    out = []
    for a, b in zip(points, points[1:]):
        out.append(Cell1D(a, a))
        out.append(Cell1D(a, b))
    out.append(Cell1D(points[-1], points[-1]))
    return out


def diagonal_points(points: Sequence[Fraction]) -> list[Fraction]:
    return sorted(set(points) | {p + 1 for p in points})


def _convex_order(pts: set[Point]) -> tuple[Point, ...]:
    """Counter-clockwise order of the vertices of a convex polygon (monotone chain)."""
    ps = sorted(pts)
    if len(ps) <= 2:
        return tuple(ps)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[Point] = []
    for p in ps:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Point] = []
    for p in reversed(ps):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return tuple(lower[:-1] + upper[:-1])


def _polygon(a1, a2, b1, b2, c1, c2) -> tuple[Point, ...]:
    """Vertices of [a1,a2] x [b1,b2] intersected with c1 <= x + y <= c2."""
    pts: set[Point] = set()
    for x in (a1, a2):
        for y in (b1, b2):
            if c1 <= x + y <= c2:
                pts.add((x, y))
    for c in (c1, c2):
        for x in (a1, a2):
            if b1 <= c - x <= b2:
                pts.add((x, c - x))
        for y in (b1, b2):
            if a1 <= c - y <= a2:
                pts.add((c - y, y))
    return _convex_order(pts)


def _face(I: Cell1D, J: Cell1D, K: Cell1D) -> Face:
    if I.is_point and J.is_point:
        return Face(I, J, K, 0, ((I.lo, J.lo),))
    if I.is_point:
        a = I.lo
        if K.is_point:
            return Face(I, J, K, 0, ((a, K.lo - a),))
        lo, hi = max(J.lo, K.lo - a), min(J.hi, K.hi - a)
        return Face(I, J, K, 1, ((a, lo), (a, hi)))
    if J.is_point:
        b = J.lo
        if K.is_point:
            return Face(I, J, K, 0, ((K.lo - b, b),))
        lo, hi = max(I.lo, K.lo - b), min(I.hi, K.hi - b)
        return Face(I, J, K, 1, ((lo, b), (hi, b)))
    if K.is_point:
        c = K.lo
        lo, hi = max(I.lo, c - J.hi), min(I.hi, c - J.lo)
        return Face(I, J, K, 1, ((lo, c - lo), (hi, c - hi)))
    return Face(I, J, K, 2, _polygon(I.lo, I.hi, J.lo, J.hi, K.lo, K.hi))


def iter_faces(points: Sequence[Fraction]) -> Iterator[Face]:
    """All faces of Delta-P for the breakpoint list ``points``, in canonical order."""
    xcells = cells(points)
    diag = diagonal_points(points)
    dcells = cells(diag)
    for I in xcells:
        for J in xcells:
            lo, hi = I.lo + J.lo, I.hi + J.hi
            j = bisect_right(diag, lo) - 1
            if I.is_point and J.is_point:
                K = dcells[2 * j] if diag[j] == lo else dcells[2 * j + 1]
                yield _face(I, J, K)
                continue
            # the sum ranges over the open interval (lo, hi)
            k = 2 * j + 1
            while k < len(dcells) and dcells[k].lo < hi:
                K = dcells[k]
                if not K.is_point or lo < K.lo:
                    yield _face(I, J, K)
                k += 1


def build_complex(pi: PwlPeriodic | Sequence[Fraction]) -> DeltaComplex:
    points = tuple(pi.points if isinstance(pi, PwlPeriodic) else pi)
    faces = tuple(iter_faces(points))
    return DeltaComplex(points, tuple(diagonal_points(points)), faces)


def complex_vertices(points: Sequence[Fraction]) -> list[Point]:
    """Vertices of Delta-P: pairwise intersections of x = a, y = b, x + y = c in [0,1]^2.

    Cheaper than :func:`build_complex` when only vertices are needed.
    """
    pts = list(points)
    diag = diagonal_points(pts)
    out: set[Point] = set()
    for a in pts:
        for b in pts:
            out.add((a, b))
        for c in diag:
            y = c - a
            if 0 <= y <= 1:
                out.add((a, y))
                out.add((y, a))
    return sorted(out)


# -- evaluation of Delta pi -------------------------------------------------


def delta_pi(pi: PwlPeriodic, x, y) -> Fraction:
    """pi(x) + pi(y) - pi(x + y), with periodic reduction."""
    return pi.eval(x) + pi.eval(y) - pi.eval(x + y)


def cell_value(pi: PwlPeriodic, cell: Cell1D, x: Fraction) -> Fraction:
    """pi at x if the cell is a point, else the piece's affine extension at x."""
    if cell.is_point:
        return pi.eval(cell.lo)
    return pi.piece_extension(cell.lo, cell.hi, x)


def cell_term(cell: Cell1D, x: Fraction) -> tuple[Fraction, str]:
    """Which one-sided value of pi the limit within ``cell`` reads at ``x``."""
    if cell.is_point or cell.lo < x < cell.hi:
        return x, "at"
    return x, ("right" if x == cell.lo else "left")


def delta_pi_limit(pi: PwlPeriodic, face: Face, v: Point) -> Fraction:
    """Limit of Delta pi at vertex ``v`` approached from inside ``face``."""
    if v not in face.vertices:
        raise VertexNotInFace(f"{v} is not a vertex of {face}")
    x, y = v
    return cell_value(pi, face.I, x) + cell_value(pi, face.J, y) - cell_value(pi, face.K, x + y)


def projections(face: Face) -> tuple[Cell1D, Cell1D, Cell1D]:
    """p1(F), p2(F), p3(F) computed from the actual extent of the face."""
    xs = [v[0] for v in face.vertices]
    ys = [v[1] for v in face.vertices]
    ss = [v[0] + v[1] for v in face.vertices]
    return (Cell1D(min(xs), max(xs)), Cell1D(min(ys), max(ys)), Cell1D(min(ss), max(ss)))
