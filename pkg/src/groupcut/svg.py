"""Deterministic SVG diagrams: the Delta-P complex and function graphs.

All geometry is computed in exact rationals and written as fixed
18-digit decimals, so the same input always yields the same bytes.
The drawing lives in unit coordinates: the square [0, 1]^2 of the
complex (or the plotting window of a graph) maps to [0, 1] x [0, 1]
with the y axis flipped, and a viewBox adds the margins.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence
from xml.sax.saxutils import escape, quoteattr

from .complex import diagonal_points, projections
from .extremality import additivity_domain
from .minimality import detect_f
from .pwl import ONE, ZERO, PwlPeriodic, as_rational

DIGITS = 18
PALETTE = ("black", "blue", "red", "magenta", "green", "orange", "purple", "brown")


def decimal(x) -> str:
    """Exact rational rounded half-even to DIGITS decimal places."""
    x = Fraction(x)
    scale = 10**DIGITS
    n = round(x * scale)  # Fraction.__round__ is exact, ties to even
    sign = "-" if n < 0 else ""
    whole, frac = divmod(abs(n), scale)
    return f"{sign}{whole}.{frac:0{DIGITS}d}"


def _attrs(**kw) -> str:
    parts = []
    for k, v in kw.items():
        if v is None:
            continue
        parts.append(f"{k.rstrip('_').replace('_', '-')}={quoteattr(str(v))}")
    return " ".join(parts)


class _Doc:
    def __init__(self, view: tuple[Fraction, Fraction, Fraction, Fraction], title: str):
        self.view = view
        self.lines: list[str] = []
        self.title = title

    def add(self, line: str):
        self.lines.append(line)

    def render(self) -> str:
        x, y, w, h = (decimal(v) for v in self.view)
        head = [
            '<?xml version="1.0" encoding="UTF-8"?>',
            f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x} {y} {w} {h}" width="600" height="600">',
            f"<title>{escape(self.title)}</title>",
            "<style>",
            ".grid{stroke:#999;stroke-width:0.002;fill:none}",
            ".frame{stroke:black;stroke-width:0.004;fill:none}",
            ".additive-face{fill:#e8a33d;fill-opacity:0.6;stroke:none}",
            ".additive-edge{stroke:#c25e00;stroke-width:0.006}",
            ".additive-vertex{fill:#c25e00}",
            ".diagonal-f{stroke:black;stroke-width:0.006}",
            ".shadow{fill:#e8a33d;fill-opacity:0.35;stroke:none}",
            ".graph{stroke-width:0.005;fill:none}",
            ".label{font-family:sans-serif;font-size:0.035px}",
            "</style>",
        ]
        return "\n".join(head + self.lines + ["</svg>", ""])


def _pt(x, y) -> str:
    return f"{decimal(x)},{decimal(y)}"


def _line(x1, y1, x2, y2, cls: str) -> str:
    return f'<line x1="{decimal(x1)}" y1="{decimal(y1)}" x2="{decimal(x2)}" y2="{decimal(y2)}" class="{cls}"/>'


def _rect(x, y, w, h, cls: str) -> str:
    return f'<rect x="{decimal(x)}" y="{decimal(y)}" width="{decimal(w)}" height="{decimal(h)}" class="{cls}"/>'


def _clip_diagonal(c: Fraction):
    """Endpoints of x + y = c inside the unit square, or None."""
    lo, hi = max(ZERO, c - 1), min(ONE, c)
    if lo >= hi:
        return None
    return (lo, c - lo), (hi, c - hi)


# -- the complex ----------------------------------------------------------

BAND = Fraction(1, 5)  # height of the border strips holding graphs
SHADOW = Fraction(1, 40)


def plot_complex(pi: PwlPeriodic, f=None, title: str = "Delta-P complex") -> str:
    """Diagram of Delta-P with additive faces shaded and pi on the borders.

    Unit square coordinates: x to the right, y upward.  The graph of pi
    sits above the top border (p1 axis) and left of the left border
    (p2 axis); projections of additive 2-faces are drawn as shadows
    on the borders, p3 at the bottom and right.
    """
    f = detect_f(pi) if f is None else as_rational(f)
    dom = additivity_domain(pi)
    pts = pi.points
    doc = _Doc((-BAND - SHADOW * 2, -BAND - SHADOW * 2, 1 + 2 * BAND + 4 * SHADOW, 1 + 2 * BAND + 4 * SHADOW), title)

    def Y(y):  # flip to svg orientation
        return 1 - y

    doc.add('<g class="complex">')
    for b in pts:
        doc.add(_line(b, Y(0), b, Y(1), "grid"))
        doc.add(_line(0, Y(b), 1, Y(b), "grid"))
    for c in diagonal_points(pts):
        seg = _clip_diagonal(c)
        if seg:
            (x1, y1), (x2, y2) = seg
            doc.add(_line(x1, Y(y1), x2, Y(y2), "grid"))
    doc.add("</g>")

    doc.add('<g class="additive">')
    for face in dom.of_dimension(2):
        poly = " ".join(_pt(x, Y(y)) for x, y in face.vertices)
        doc.add(f'<polygon points="{poly}" class="additive-face"/>')
    for face in dom.of_dimension(1):
        (x1, y1), (x2, y2) = face.vertices
        doc.add(_line(x1, Y(y1), x2, Y(y2), "additive-edge"))
    for face in dom.of_dimension(0):
        x, y = face.vertices[0]
        doc.add(f'<circle cx="{decimal(x)}" cy="{decimal(Y(y))}" r="0.006" class="additive-vertex"/>')
    doc.add("</g>")

    for c in sorted({f, 1 + f}):
        seg = _clip_diagonal(c)
        if seg:
            (x1, y1), (x2, y2) = seg
            doc.add(_line(x1, Y(y1), x2, Y(y2), "diagonal-f"))

    doc.add('<g class="shadows">')
    for face in dom.of_dimension(2):
        p1, p2, p3 = projections(face)
        doc.add(_rect(p1.lo, -SHADOW, p1.hi - p1.lo, SHADOW, "shadow"))
        doc.add(_rect(-SHADOW, Y(p2.hi), SHADOW, p2.hi - p2.lo, "shadow"))
        for lo, hi in _mod1_pieces(p3.lo, p3.hi):
            doc.add(_rect(lo, 1, hi - lo, SHADOW, "shadow"))
            doc.add(_rect(1, Y(hi), SHADOW, hi - lo, "shadow"))
    doc.add("</g>")

    # graph of pi above the top border and left of the left border
    vmax = max(max(d.value, d.left_limit, d.right_limit) for d in pi.breakpoints)
    scale = (BAND - SHADOW) / (vmax if vmax > 0 else ONE)
    doc.add('<g class="border-graphs">')
    for lo, hi, a, b in _segments(pi):
        doc.add(_line(lo, -SHADOW - a * scale, hi, -SHADOW - b * scale, "graph"))
        doc.add(_line(-SHADOW - a * scale, Y(lo), -SHADOW - b * scale, Y(hi), "graph"))
    doc.add("</g>")
    doc.add(_rect(0, 0, 1, 1, "frame"))
    return doc.render()


def _mod1_pieces(lo: Fraction, hi: Fraction):
    """Split [lo, hi] subset of [0, 2] into pieces of [0, 1] after reduction mod 1."""
    if hi <= 1:
        return [(lo, hi)]
    if lo >= 1:
        return [(lo - 1, hi - 1)]
    return [(lo, ONE), (ZERO, hi - 1)]


def _segments(pi: PwlPeriodic):
    """(lo, hi, pi(lo+), pi(hi-)) for every piece."""
    return [(lo, hi, pi.eval(lo, "right"), pi.eval(hi, "left")) for lo, hi, _, _ in pi.pieces()]


# -- function graphs --------------------------------------------------------


def plot_function(
    funcs: Sequence[PwlPeriodic], labels: Sequence[str] | None = None, title: str = "function plot"
) -> str:
    """Overlaid graphs on [0, 1] with open/closed markers at jumps.

    A continuous function is one polyline through its breakpoints; a
    discontinuous one is one polyline per piece plus a closed marker at
    the value and open markers at differing one-sided limits.
    """
    if labels is None:
        labels = [f"pi{i}" for i in range(len(funcs))]
    values = [v for fn in funcs for d in fn.breakpoints for v in (d.value, d.left_limit, d.right_limit)]
    lo, hi = min(values + [ZERO]), max(values + [ONE])
    span = hi - lo

    def Y(y):
        return (hi - y) / span

    margin = Fraction(1, 10)
    doc = _Doc((-margin, -margin, 1 + 2 * margin, 1 + 3 * margin), title)
    doc.add(_rect(0, 0, 1, 1, "frame"))
    if lo < 0 < hi:
        doc.add(_line(0, Y(0), 1, Y(0), "grid"))
    for i, (fn, label) in enumerate(zip(funcs, labels)):
        color = PALETTE[i % len(PALETTE)]
        doc.add(f'<g {_attrs(class_="curve", data_label=label, stroke=color)}>')
        if fn.is_continuous():
            poly = " ".join(_pt(d.point, Y(d.value)) for d in fn.breakpoints)
            doc.add(f'<polyline points="{poly}" class="graph"/>')
        else:
            for a, b, va, vb in _segments(fn):
                doc.add(f'<polyline points="{_pt(a, Y(va))} {_pt(b, Y(vb))}" class="graph"/>')
            for d in fn.breakpoints:
                if d.left_limit == d.value == d.right_limit:
                    continue
                doc.add(
                    f'<circle cx="{decimal(d.point)}" cy="{decimal(Y(d.value))}" r="0.008" '
                    f'fill="{color}" class="closed"/>'
                )
                for lim in sorted({d.left_limit, d.right_limit} - {d.value}):
                    doc.add(
                        f'<circle cx="{decimal(d.point)}" cy="{decimal(Y(lim))}" r="0.008" '
                        f'fill="white" class="open"/>'
                    )
        ly = 1 + Fraction(1, 20) + Fraction(i, 25)
        doc.add(f'<text x="{decimal(0)}" y="{decimal(ly)}" class="label" fill="{color}">{escape(label)}</text>')
        doc.add("</g>")
    return doc.render()
