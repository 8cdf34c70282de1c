"""Minimality test for periodic piecewise-linear functions.

A function is minimal iff pi(0) = 0, pi >= 0, pi is subadditive and
pi(x) + pi(f - x) = 1 for all x.  For piecewise-linear input each
condition reduces to finitely many exact checks: values and limits at
breakpoints, and limits of Delta pi at the vertices of the faces of
Delta-P.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .complex import Face, cell_value, complex_vertices, iter_faces
from .errors import NoCandidateF
from .pwl import SIDES, PwlPeriodic, as_rational, frac_part, rational_str

CHECKS = ("origin", "nonnegativity", "pi_of_f", "symmetry", "subadditivity")

_OPPOSITE = {"left": "right", "at": "at", "right": "left"}


@dataclass(frozen=True)
class Violation:
    check: str
    witness: object
    value: Fraction

    def witness_json(self):
        w = self.witness
        if w is None:
            return None
        if isinstance(w, dict):
            out = {}
            for k, v in w.items():
                if isinstance(v, Face):
                    out[k] = v.to_json()
                elif isinstance(v, tuple):
                    out[k] = [rational_str(c) if isinstance(c, Fraction) else c for c in v]
                elif isinstance(v, Fraction):
                    out[k] = rational_str(v)
                else:
                    out[k] = v
            return out
        if isinstance(w, tuple):
            return [rational_str(c) if isinstance(c, Fraction) else c for c in w]
        if isinstance(w, Fraction):
            return rational_str(w)
        return w

    def to_json(self) -> dict:
        return {"check": self.check, "witness": self.witness_json(), "value": rational_str(self.value)}

    def sort_key(self):
        return (CHECKS.index(self.check), json.dumps(self.witness_json(), sort_keys=True))


@dataclass
class MinimalityReport:
    is_minimal: bool
    f: Fraction | None
    violations: list[Violation]
    f_candidates: list[Fraction] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def checks_failed(self) -> set[str]:
        return {v.check for v in self.violations}

    def to_json(self) -> dict:
        return {
            "is_minimal": self.is_minimal,
            "f": None if self.f is None else rational_str(self.f),
            "f_candidates": [rational_str(c) for c in self.f_candidates],
            "violations": [v.to_json() for v in self.violations],
            "notes": list(self.notes),
        }


def f_candidates(pi: PwlPeriodic) -> list[Fraction]:
    """Points of (0, 1) where pi takes the value 1."""
    out = set()
    for p, v in zip(pi.points, (pi.eval(p) for p in pi.points)):
        if v == 1 and 0 < p < 1:
            out.add(p)
    for lo, hi, slope, icpt in pi.pieces():
        if slope != 0:
            x = (1 - icpt) / slope
            if lo < x < hi:
                out.add(x)
    return sorted(out)


def detect_f(pi: PwlPeriodic) -> Fraction:
    cands = f_candidates(pi)
    if not cands:
        raise NoCandidateF("the function never takes the value 1 on (0, 1)")
    return cands[0]


def _vertex_checks(pi: PwlPeriodic) -> list[Violation]:
    cache: dict[Fraction, Fraction] = {}

    def ev(x: Fraction) -> Fraction:
        r = cache.get(x)
        if r is None:
            r = cache[x] = pi.eval(x)
        return r

    out = []
    for x, y in complex_vertices(pi.points):
        d = ev(x) + ev(y) - ev(frac_part(x + y))
        if d < 0:
            out.append(Violation("subadditivity", (x, y), d))
    return out


def _face_checks(pi: PwlPeriodic) -> list[Violation]:
    out = []
    for face in iter_faces(pi.points):
        for v in face.vertices:
            x, y = v
            d = cell_value(pi, face.I, x) + cell_value(pi, face.J, y) - cell_value(pi, face.K, x + y)
            if d < 0:
                out.append(Violation("subadditivity", {"face": face, "vertex": v}, d))
    return out


def is_subadditive(pi: PwlPeriodic) -> tuple[bool, list[Violation]]:
    """Exact subadditivity via limits of Delta pi at vertices of every face.

    For continuous pi every face limit equals the plain value of Delta pi,
    so the vertex set alone decides; that path skips face enumeration.
    """
    viol = _vertex_checks(pi) if pi.is_continuous() else _face_checks(pi)
    viol.sort(key=Violation.sort_key)
    return not viol, viol


def is_symmetric(pi: PwlPeriodic, f) -> tuple[bool, list[Violation]]:
    """pi(f) = 1 and pi(x) + pi(f - x) = 1, including one-sided limits.

    Limits pair up as pi(x+) with pi((f-x)-); checking at x in B and f - B
    covers the 0- and 1-dimensional faces on the lines x + y = f, 1 + f.
    """
    f = as_rational(f)
    viol = []
    if pi.eval(f) != 1:
        viol.append(Violation("pi_of_f", f, pi.eval(f)))
    xs = sorted(set(pi.points[:-1]) | {frac_part(f - p) for p in pi.points})
    for x in xs:
        for side in SIDES:
            s = pi.eval(x, side) + pi.eval(f - x, _OPPOSITE[side])
            if s != 1:
                viol.append(Violation("symmetry", (x, side), s - 1))
    viol.sort(key=Violation.sort_key)
    return not viol, viol


def _basic_checks(pi: PwlPeriodic) -> list[Violation]:
    viol = []
    if pi.eval(0) != 0:
        viol.append(Violation("origin", Fraction(0), pi.eval(0)))
    for d in pi.breakpoints:
        for side in SIDES:
            val = d.side(side)
            if val < 0:
                viol.append(Violation("nonnegativity", (d.point, side), val))
    return viol


def minimality_test(pi: PwlPeriodic, f=None) -> MinimalityReport:
    """Run every minimality check; failures are reported, never raised."""
    viol = _basic_checks(pi)
    notes = []
    cands = f_candidates(pi)
    if f is None:
        if not cands:
            viol.append(Violation("pi_of_f", None, Fraction(0)))
        else:
            f = cands[0]
            if len(cands) > 1:
                verdicts = {is_symmetric(pi, c)[0] for c in cands}
                if len(verdicts) > 1:
                    notes.append(
                        "ambiguous f: candidates "
                        + ", ".join(str(c) for c in cands)
                        + f" disagree on symmetry; using the smallest, {f}"
                    )
    else:
        f = as_rational(f)
    if f is not None:
        viol += is_symmetric(pi, f)[1]
    viol += is_subadditive(pi)[1]
    viol.sort(key=Violation.sort_key)
    return MinimalityReport(not viol, f, viol, cands, notes)
