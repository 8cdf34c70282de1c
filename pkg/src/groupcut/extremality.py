"""Automated extremality test for piecewise-linear minimal functions.

The test follows the usual proof pattern:

1. classify every face of Delta-P as additive or not (``additivity_domain``);
2. project the two-dimensional additive faces to get intervals on which any
   decomposition must be affine, and propagate them along additive edges
   (``covered_components``);
3. write down the linear system that a perturbation, piecewise linear on
   the resulting refinement, must satisfy, and compute its kernel
   (``perturbation_space``).

An empty kernel with every interval covered certifies extremality.  A
nonempty kernel yields an explicit decomposition pi = (pi1 + pi2) / 2.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .complex import Cell1D, DeltaComplex, Face, build_complex, cell_term, cell_value, iter_faces, projections
from .errors import InternalInconsistency, NotMinimal, NoValidEpsilon
from .linalg import RREF
from .minimality import MinimalityReport, minimality_test
from .pwl import (
    ONE,
    SIDES,
    ZERO,
    BreakpointDatum,
    PwlPeriodic,
    combine,
    frac_part,
    linear_combination,
    merged_points,
    rational_str,
)

EXTREME = "Extreme"
NOT_EXTREME = "NotExtreme"
INCONCLUSIVE = "Inconclusive"

MAX_HALVINGS = 20

Interval = tuple[Fraction, Fraction]


# -- additivity domain ------------------------------------------------------


@dataclass
class AdditivityDomain:
    complex: DeltaComplex
    limits: list[tuple[Fraction, ...]]  # per face, aligned with face.vertices
    additive: list[Face]
    min_slack: dict[int, Fraction]  # face index -> smallest positive vertex limit

    def of_dimension(self, d: int) -> list[Face]:
        return [face for face in self.additive if face.dimension == d]

    def is_additive(self, face: Face) -> bool:
        return face in self._additive_set

    def __post_init__(self):
        self._additive_set = set(self.additive)


def face_limits(pi: PwlPeriodic, face: Face) -> tuple[Fraction, ...]:
    return tuple(
        cell_value(pi, face.I, x) + cell_value(pi, face.J, y) - cell_value(pi, face.K, x + y)
        for x, y in face.vertices
    )


def _require_minimal(pi: PwlPeriodic, f=None) -> MinimalityReport:
    report = minimality_test(pi, f)
    if not report.is_minimal:
        checks = ", ".join(sorted(report.checks_failed()))
        raise NotMinimal(f"function is not minimal ({checks})")
    return report


def additivity_domain(pi: PwlPeriodic, *, check_minimal: bool = True, points=None) -> AdditivityDomain:
    """Classify the faces of Delta-P; a face is additive iff all vertex limits vanish."""
    if check_minimal:
        _require_minimal(pi)
    cx = build_complex(pi.points if points is None else points)
    limits, additive, slack = [], [], {}
    for k, face in enumerate(cx.faces):
        lim = face_limits(pi, face)
        limits.append(lim)
        if all(v == 0 for v in lim):
            additive.append(face)
        else:
            slack[k] = min(v for v in lim if v > 0)
    return AdditivityDomain(cx, limits, additive, slack)


# -- covered intervals --------------------------------------------------------


def _mod1_interval(cell: Cell1D) -> Interval:
    if cell.lo >= 1:
        return (cell.lo - 1, cell.hi - 1)
    return (cell.lo, cell.hi)


def _insert(union: list[Interval], iv: Interval) -> list[Interval]:
    """Union of sorted disjoint open intervals, merging overlapping or touching ones."""
    lo, hi = iv
    out = []
    for a, b in union:
        if b < lo or a > hi:
            out.append((a, b))
        else:
            lo, hi = min(lo, a), max(hi, b)
    out.append((lo, hi))
    out.sort()
    return out


def _contains(union: list[Interval], iv: Interval) -> bool:
    return any(a <= iv[0] and iv[1] <= b for a, b in union)


def _overlap(u: list[Interval], v: list[Interval]) -> bool:
    return any(max(a, c) < min(b, d) for a, b in u for c, d in v)


@dataclass(frozen=True)
class Move:
    """x -> sign * x + shift, restricted to a source interval."""

    sign: int
    shift: Fraction
    source: Interval
    target: Interval

    def apply(self, iv: Interval) -> Interval:
        a, b = self.sign * iv[0] + self.shift, self.sign * iv[1] + self.shift
        return (min(a, b), max(a, b))

    def inverse(self) -> "Move":
        # inverse of x -> s x + t is x -> s x - s t
        return Move(self.sign, -self.sign * self.shift, self.target, self.source)


def edge_move(face: Face) -> Move | None:
    """The translation or reflection carried by an additive edge."""
    if face.dimension != 1:
        return None
    p1, p2, p3 = projections(face)
    if face.K.is_point:
        c = face.K.lo  # x + y = c, reflection x -> c - x
        return Move(-1, c, (p1.lo, p1.hi), (p2.lo, p2.hi))
    s = _mod1_interval(p3)
    shift = ONE if p3.lo >= 1 else ZERO
    if face.I.is_point:
        return Move(1, face.I.lo - shift, (p2.lo, p2.hi), s)
    return Move(1, face.J.lo - shift, (p1.lo, p1.hi), s)


@dataclass
class CoveredComponents:
    components: list[list[Interval]]  # each: R-intervals sharing one slope
    uncovered: list[Interval]
    refinement: tuple[Fraction, ...]
    slope_variables: list[str] = field(default_factory=list)

    def component_of(self, x: Fraction) -> int | None:
        for k, comp in enumerate(self.components):
            if any(a < x < b for a, b in comp):
                return k
        return None

    @property
    def all_covered(self) -> bool:
        return not self.uncovered

    def to_json(self) -> dict:
        return {
            "components": [
                {"slope_variable": name, "intervals": [[rational_str(a), rational_str(b)] for a, b in comp]}
                for name, comp in zip(self.slope_variables, self.components)
            ],
            "uncovered": [[rational_str(a), rational_str(b)] for a, b in self.uncovered],
            "refinement": [rational_str(p) for p in self.refinement],
        }


def covered_components(
    pi: PwlPeriodic, domain: AdditivityDomain | None = None, f=None, max_rounds: int = 10_000
) -> CoveredComponents:
    """Covered intervals grouped into components of equal slope.

    Directly covered: projections p1, p2, p3 (mod 1) of two-dimensional
    additive faces, all three in one component.  Additive edges then move
    covered pieces by translation or reflection into other intervals.
    """
    if domain is None:
        domain = additivity_domain(pi)
    comps: list[list[Interval]] = []
    for face in domain.of_dimension(2):
        p1, p2, p3 = projections(face)
        union: list[Interval] = []
        for iv in ((p1.lo, p1.hi), (p2.lo, p2.hi), _mod1_interval(p3)):
            union = _insert(union, iv)
        comps.append(union)
    comps = _merge_components(comps)

    moves = [m for m in map(edge_move, domain.of_dimension(1)) if m is not None]
    moves += [m.inverse() for m in moves]
    endpoints: set[Fraction] = set()
    for comp in comps:
        for a, b in comp:
            endpoints.update((a, b))
    for _ in range(max_rounds):
        changed = False
        for m in moves:
            slo, shi = m.source
            for k, comp in enumerate(comps):
                for a, b in list(comp):
                    lo, hi = max(a, slo), min(b, shi)
                    if lo >= hi:
                        continue
                    img = m.apply((lo, hi))
                    endpoints.update((lo, hi, *img))
                    if not _contains(comps[k], img):
                        comps[k] = _insert(comps[k], img)
                        changed = True
        if not changed:
            break
        comps = _merge_components(comps)
    else:
        raise InternalInconsistency("covered-interval propagation did not terminate")

    fpt = [] if f is None else [frac_part(Fraction(f))]
    refinement = sorted(set(pi.points) | {e for e in endpoints if 0 <= e <= 1} | set(fpt) | {ZERO, ONE})
    return _assign(comps, refinement)


def _merge_components(comps: list[list[Interval]]) -> list[list[Interval]]:
    comps = [c for c in comps if c]
    merged = True
    while merged:
        merged = False
        for i in range(len(comps)):
            for j in range(i + 1, len(comps)):
                if _overlap(comps[i], comps[j]):
                    union = comps[i]
                    for iv in comps[j]:
                        union = _insert(union, iv)
                    comps[i] = union
                    del comps[j]
                    merged = True
                    break
            if merged:
                break
    return comps


def _assign(unions: list[list[Interval]], refinement: Sequence[Fraction]) -> CoveredComponents:
    order = sorted(range(len(unions)), key=lambda k: unions[k][0])
    unions = [unions[k] for k in order]
    comps: list[list[Interval]] = [[] for _ in unions]
    uncovered = []
    for a, b in zip(refinement, refinement[1:]):
        for k, union in enumerate(unions):
            if _contains(union, (a, b)):
                comps[k].append((a, b))
                break
        else:
            uncovered.append((a, b))
    comps = [c for c in comps if c]
    names = [f"s{k}" for k in range(len(comps))]
    return CoveredComponents(comps, uncovered, tuple(refinement), names)


# -- the perturbation system ---------------------------------------------------


Term = tuple[Fraction, str]


def canonical_term(x: Fraction, side: str) -> Term:
    """Reduce mod 1; a left limit at 0 is written as a left limit at 1."""
    r = frac_part(x)
    if r == 0 and side == "left":
        return (ONE, "left")
    return (r, side)


@dataclass
class AdditivityConstraint:
    """phi(x) + phi(y) = phi(z) for the given one-sided terms."""

    x: Term
    y: Term
    z: Term

    def key(self):
        a, b = sorted([self.x, self.y])
        return (a, b, self.z)

    def __str__(self) -> str:
        def t(term):
            p, s = term
            return f"phi({p}{ {'left': '-', 'right': '+', 'at': ''}[s] })".replace(" ", "")

        return f"{t(self.x)} + {t(self.y)} = {t(self.z)}"


class PerturbationSystem:
    """Unknowns and equations for phi piecewise linear on a refinement.

    Unknowns are the value and the one-sided limits at each refinement
    point (limits tied to the value where pi is continuous from that side,
    provided pi is continuous from one side at 0), one slope per covered
    component and one slope per uncovered interval.
    """

    def __init__(self, pi: PwlPeriodic, cover: CoveredComponents, f: Fraction):
        self.pi = pi
        self.cover = cover
        self.f = f
        R = list(cover.refinement)
        self.R = R
        m = len(R) - 1  # point 1 is identified with 0
        tie = pi.eval(0, "right") == pi.eval(0) or pi.eval(0, "left") == pi.eval(0)
        self.tied_one_sided = tie
        ncols = 0
        self.val, self.left, self.right = [], [], []
        for i in range(m):
            p = R[i]
            self.val.append(ncols)
            v = ncols
            ncols += 1
            if tie and pi.eval(p, "left") == pi.eval(p):
                self.left.append(v)
            else:
                self.left.append(ncols)
                ncols += 1
            if tie and pi.eval(p, "right") == pi.eval(p):
                self.right.append(v)
            else:
                self.right.append(ncols)
                ncols += 1
        self.slope_of_interval = []
        self.slope_names = []
        comp_col = {}
        for k in range(len(cover.components)):
            comp_col[k] = ncols
            self.slope_names.append(cover.slope_variables[k])
            ncols += 1
        for a, b in zip(R, R[1:]):
            k = cover.component_of((a + b) / 2)
            if k is None:
                self.slope_of_interval.append(ncols)
                self.slope_names.append(f"u[{a},{b}]")
                ncols += 1
            else:
                self.slope_of_interval.append(comp_col[k])
        self.component_columns = [comp_col[k] for k in range(len(cover.components))]
        self.ncols = ncols
        self.m = m
        self.constraints: list[AdditivityConstraint] = []
        self.rows: list[dict[int, Fraction]] = []
        self._build()

    # unknowns ----------------------------------------------------------

    def term(self, x: Fraction, side: str) -> dict[int, Fraction]:
        r = frac_part(x)
        R = self.R
        i = bisect_left(R, r)
        if R[i] == r:
            col = {"at": self.val, "left": self.left, "right": self.right}[side][i]
            return {col: ONE}
        k = i - 1
        return {self.right[k]: ONE, self.slope_of_interval[k]: r - R[k]}

    def _row(self, plus: Sequence[Term], minus: Sequence[Term]) -> dict[int, Fraction]:
        row: dict[int, Fraction] = {}
        for sign, terms in ((ONE, plus), (-ONE, minus)):
            for x, s in terms:
                for c, v in self.term(x, s).items():
                    row[c] = row.get(c, ZERO) + sign * v
        return {c: v for c, v in row.items() if v != 0}

    def _build(self):
        R, m = self.R, self.m
        # piece consistency: right(x_k) + slope * length = left(x_{k+1})
        for k in range(m):
            row = {self.right[k]: ONE, self.slope_of_interval[k]: R[k + 1] - R[k]}
            nxt = self.left[(k + 1) % m]
            row[nxt] = row.get(nxt, ZERO) - ONE
            self.rows.append({c: v for c, v in row.items() if v != 0})
        seen = set()
        pi = self.pi
        for face in iter_faces(R):
            for (x, y), lim in zip(face.vertices, face_limits(pi, face)):
                if lim != 0:
                    continue
                c = AdditivityConstraint(
                    canonical_term(*cell_term(face.I, x)),
                    canonical_term(*cell_term(face.J, y)),
                    canonical_term(*cell_term(face.K, x + y)),
                )
                key = c.key()
                if key in seen:
                    continue
                seen.add(key)
                self.constraints.append(c)
                row = self._row([c.x, c.y], [c.z])
                if row:
                    self.rows.append(row)

    def normalization_rows(self) -> list[tuple[dict[int, Fraction], Fraction]]:
        """phi(0) = 0 and phi(f) = 1 (phi(1) shares the unknown of phi(0))."""
        return [({self.val[0]: ONE}, ZERO), (self.term(self.f, "at"), ONE)]

    def solve(self, homogeneous: bool) -> RREF:
        ech = RREF(self.ncols)
        for row, rhs in self.normalization_rows():
            ech.add(row, ZERO if homogeneous else rhs)
        for row in self.rows:
            ech.add(row)
        return ech

    def function_from_vector(self, vec: Sequence[Fraction]) -> PwlPeriodic:
        data = []
        for i in range(self.m):
            data.append(BreakpointDatum(self.R[i], vec[self.val[i]], vec[self.left[i]], vec[self.right[i]]))
        data.append(BreakpointDatum(ONE, vec[self.val[0]], vec[self.left[0]], vec[self.right[0]]))
        return PwlPeriodic(data)

    def component_slopes(self, vec: Sequence[Fraction]) -> dict[str, Fraction]:
        return {name: vec[col] for name, col in zip(self.cover.slope_variables, self.component_columns)}

    def solved_parameters(self, vec: Sequence[Fraction]) -> dict[str, Fraction]:
        """Component slopes plus every one-sided limit kept as its own unknown."""
        out = self.component_slopes(vec)
        for i in range(self.m):
            p = self.R[i]
            if self.left[i] != self.val[i]:
                out[f"phi({p}-)"] = vec[self.left[i]]
            if self.right[i] != self.val[i]:
                out[f"phi({p}+)"] = vec[self.right[i]]
        return out


def normalize_perturbation(fn: PwlPeriodic) -> PwlPeriodic:
    """Scale so the largest breakpoint value or limit is 1 in absolute value
    and the first nonzero one is positive."""
    entries = [d.side(s) for d in fn.breakpoints for s in SIDES]
    big = max(abs(e) for e in entries)
    first = next(e for e in entries if e != 0)
    scale = big if first > 0 else -big
    return (fn * (ONE / scale)).pruned()


def perturbation_space(pi: PwlPeriodic, f=None) -> list[PwlPeriodic]:
    """A basis of the perturbations that are piecewise linear on the refinement."""
    return _analyse(pi, f).basis


# -- epsilon and the verdict ---------------------------------------------------


def epsilon_for_perturbation(pi: PwlPeriodic, pbar: PwlPeriodic, f=None) -> Fraction:
    """A positive epsilon with pi + eps*pbar and pi - eps*pbar both minimal."""
    report = _require_minimal(pi, f)
    f = report.f
    pts = merged_points(pi, pbar)
    delta, big = None, ZERO
    for face in iter_faces(pts):
        for lim, plim in zip(face_limits(pi, face), face_limits(pbar, face)):
            if lim > 0:
                delta = lim if delta is None else min(delta, lim)
                big = max(big, abs(plim))
    # nonnegativity slack at breakpoints
    for p in pts:
        for s in SIDES:
            v, w = pi.eval(p, s), pbar.eval(p, s)
            if v > 0:
                delta = v if delta is None else min(delta, v)
                big = max(big, abs(w))
    eps = ONE if big == 0 or delta is None else delta / (2 * big)
    for _ in range(MAX_HALVINGS + 1):
        plus = linear_combination([(ONE, pi), (eps, pbar)])
        minus = linear_combination([(ONE, pi), (-eps, pbar)])
        if minimality_test(plus, f).is_minimal and minimality_test(minus, f).is_minimal:
            return eps
        eps /= 2
    raise NoValidEpsilon("no epsilon found after repeated halving")


@dataclass
class Witness:
    perturbation: PwlPeriodic
    epsilon: Fraction
    pi1: PwlPeriodic
    pi2: PwlPeriodic

    def to_json(self) -> dict:
        return {
            "perturbation": self.perturbation.to_records(),
            "epsilon": rational_str(self.epsilon),
            "pi1": self.pi1.to_records(),
            "pi2": self.pi2.to_records(),
        }


@dataclass
class ExtremalityVerdict:
    status: str
    f: Fraction
    witness: Witness | None = None
    uncovered: list[Interval] = field(default_factory=list)
    solved_parameters: dict[str, Fraction] = field(default_factory=dict)
    kernel_dimension: int = 0
    components: CoveredComponents | None = None
    basis: list[PwlPeriodic] = field(default_factory=list)
    solution: PwlPeriodic | None = None
    constraints: list[AdditivityConstraint] = field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return {EXTREME: 0, NOT_EXTREME: 1, INCONCLUSIVE: 2}[self.status]

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "f": rational_str(self.f),
            "kernel_dimension": self.kernel_dimension,
            "covered": None if self.components is None else self.components.to_json(),
            "uncovered": [[rational_str(a), rational_str(b)] for a, b in self.uncovered],
            "solved_parameters": {k: rational_str(v) for k, v in sorted(self.solved_parameters.items())},
            "additivity_constraints": len(self.constraints),
            "witness": None if self.witness is None else self.witness.to_json(),
        }


@dataclass
class _Analysis:
    f: Fraction
    domain: AdditivityDomain
    cover: CoveredComponents
    system: PerturbationSystem
    basis: list[PwlPeriodic]
    solution: PwlPeriodic | None
    slopes: dict[str, Fraction]


def _analyse(pi: PwlPeriodic, f=None) -> _Analysis:
    report = _require_minimal(pi, f)
    f = report.f
    domain = additivity_domain(pi, check_minimal=False)
    cover = covered_components(pi, domain, f=f)
    system = PerturbationSystem(pi, cover, f)
    homo = system.solve(homogeneous=True)
    basis = [normalize_perturbation(system.function_from_vector(v)) for v in homo.kernel_basis()]
    solution, slopes = None, {}
    if not basis:
        inhomo = system.solve(homogeneous=False)
        vec = inhomo.particular_solution()
        solution = system.function_from_vector(vec)
        slopes = system.solved_parameters(vec)
        if solution != pi:
            raise InternalInconsistency("unique solution of the additivity system differs from pi")
    return _Analysis(f, domain, cover, system, basis, solution, slopes)


def extremality_test(pi: PwlPeriodic, f=None) -> ExtremalityVerdict:
    """Extreme / NotExtreme (with a checked decomposition) / Inconclusive."""
    a = _analyse(pi, f)
    common = dict(
        f=a.f,
        components=a.cover,
        kernel_dimension=len(a.basis),
        uncovered=list(a.cover.uncovered),
        basis=a.basis,
        constraints=a.system.constraints,
    )
    if a.basis:
        pbar = a.basis[0]
        eps = epsilon_for_perturbation(pi, pbar, a.f)
        pi1 = linear_combination([(ONE, pi), (eps, pbar)])
        pi2 = linear_combination([(ONE, pi), (-eps, pbar)])
        ok = (
            pi1 != pi2
            and minimality_test(pi1, a.f).is_minimal
            and minimality_test(pi2, a.f).is_minimal
            and combine(pi1, pi2, Fraction(1, 2)) == pi
        )
        if not ok:
            raise InternalInconsistency("perturbation witness failed re-verification")
        return ExtremalityVerdict(NOT_EXTREME, witness=Witness(pbar, eps, pi1, pi2), **common)
    status = EXTREME if a.cover.all_covered else INCONCLUSIVE
    return ExtremalityVerdict(status, solved_parameters=a.slopes, solution=a.solution, **common)
