"""Named constructors for extreme functions of the 1-row infinite group problem.

Only functions with a closed-form definition available here are
constructible; the remaining catalog names are listed as stubs that raise
``NotImplementedError`` with the literature reference.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .errors import ParamOutOfRange, SeriesDiverges
from .pwl import BreakpointDatum, PwlPeriodic, as_rational, from_breakpoints, from_pieces

MAX_DEPTH = 12


def gmic(f=Fraction(4, 5)) -> PwlPeriodic:
    """Gomory mixed-integer cut: x/f on [0, f], (1 - x)/(1 - f) on [f, 1].

    >>> gmic(Fraction(4, 5)).eval(Fraction(9, 10))
    Fraction(1, 2)
    """
    f = as_rational(f)
    if not 0 < f < 1:
        raise ParamOutOfRange(f"gmic needs 0 < f < 1, got f = {f}")
    return from_breakpoints([0, f, 1], [0, 1, 0])


def rlm_dpl1_extreme_3a(f=Fraction(1, 4)) -> PwlPeriodic:
    """Discontinuous 3-slope DPL1-extreme function, valid for 0 < f < 1/3.

    >>> pi = rlm_dpl1_extreme_3a(Fraction(1, 5))
    >>> pi.eval(Fraction(3, 5)), pi.eval(Fraction(3, 5), "left"), pi.eval(Fraction(3, 5), "right")
    (Fraction(1, 2), Fraction(6, 7), Fraction(1, 7))
    """
    f = as_rational(f)
    if not 0 < f < Fraction(1, 3):
        raise ParamOutOfRange(f"rlm_dpl1_extreme_3a needs 0 < f < 1/3, got f = {f}")
    s = 2 / (1 + 2 * f)
    b = (1 + f) / 2
    data = [
        BreakpointDatum(Fraction(0), Fraction(0), s - 1 / (1 + 2 * f), Fraction(0)),
        BreakpointDatum(f, Fraction(1), Fraction(1), s * f),
        BreakpointDatum(b, Fraction(1, 2), s * b, s * b - 1 / (1 + 2 * f)),
        BreakpointDatum(Fraction(1), Fraction(0), s - 1 / (1 + 2 * f), Fraction(0)),
    ]
    return from_pieces(data, [1 / f, s, s])


def drlm_backward_3_slope(f=Fraction(1, 12), b=Fraction(2, 12)) -> PwlPeriodic:
    """Continuous 3-slope function with breakpoints 0, f, b, 1+f-b, 1.

    Valid for 0 < f < b <= (1+f)/4.

    >>> pi = drlm_backward_3_slope(Fraction(1, 12), Fraction(1, 6))
    >>> [str(p) for p in pi.points]
    ['0', '1/12', '1/6', '11/12', '1']
    >>> [str(s) for s in pi.slopes]
    ['12', '-132/13', '12/13', '-132/13']
    """
    f, b = as_rational(f), as_rational(b)
    if not (0 < f < b <= (1 + f) / 4):
        raise ParamOutOfRange(f"drlm_backward_3_slope needs 0 < f < b <= (1+f)/4, got f = {f}, b = {b}")
    c = 1 + f - b
    return from_breakpoints([0, f, b, c, 1], [0, 1, b / (1 + f), c / (1 + f), 0])


# -- psi_n: the approximants of the bccz counterexample ---------------------


@dataclass(frozen=True)
class GeometricEpsParams:
    """Geometric epsilon sequence with ratio 1/q and first term (q-2)f/q.

    For this choice the full series of ``2^(i-1) eps_i`` sums to ``f``,
    so the negative-slope measure reaches exactly 1 in the limit.
    """

    f: Fraction
    q: Fraction
    n: int

    def __post_init__(self):
        object.__setattr__(self, "f", as_rational(self.f))
        object.__setattr__(self, "q", as_rational(self.q))
        f, q, n = self.f, self.q, self.n
        if not 0 < f < 1:
            raise ParamOutOfRange(f"need 0 < f < 1, got {f}")
        if not q > 2:
            raise ParamOutOfRange(f"need q > 2, got {q}")
        if f > Fraction(1, 2) and q > 2 * f / (2 * f - 1):
            raise ParamOutOfRange(f"for f > 1/2 need q <= 2f/(2f-1) = {2 * f / (2 * f - 1)}, got {q}")
        if not isinstance(n, int) or n < 0:
            raise ParamOutOfRange(f"depth must be a nonnegative integer, got {n!r}")
        if n > MAX_DEPTH:
            raise ParamOutOfRange(f"depth {n} exceeds the cap {MAX_DEPTH}")

    @property
    def epsilons(self) -> list[Fraction]:
        first = (self.q - 2) / self.q * self.f
        return [first / self.q ** (i - 1) for i in range(1, self.n + 1)]

    def gamma(self, i: int) -> Fraction:
        return (2 / self.q) ** i * self.f


@dataclass(frozen=True)
class ExplicitEpsParams:
    """An explicit, strictly decreasing epsilon list."""

    f: Fraction
    epsilons: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "f", as_rational(self.f))
        eps = tuple(as_rational(e) for e in self.epsilons)
        object.__setattr__(self, "epsilons", eps)
        f = self.f
        if not 0 < f < 1:
            raise ParamOutOfRange(f"need 0 < f < 1, got {f}")
        if len(eps) > MAX_DEPTH:
            raise ParamOutOfRange(f"depth {len(eps)} exceeds the cap {MAX_DEPTH}")
        if any(e <= 0 for e in eps):
            raise ParamOutOfRange("epsilons must be positive")
        if any(a <= b for a, b in zip(eps, eps[1:])):
            raise ParamOutOfRange("epsilons must be strictly decreasing")
        if eps and eps[0] > 1 - f:
            raise ParamOutOfRange(f"need eps_1 <= 1 - f, got {eps[0]}")
        mu = negative_measure(f, eps)
        if mu > 1:
            raise SeriesDiverges(f"negative-slope measure {mu} exceeds 1")
        if mu == 1:
            raise ParamOutOfRange("a finite epsilon list must leave positive slope room (measure < 1)")

    @property
    def n(self) -> int:
        return len(self.epsilons)

    def gamma(self, i: int) -> Fraction:
        return self.f - sum((2 ** (k - 1) * e for k, e in enumerate(self.epsilons[:i], 1)), Fraction(0))


def negative_measure(f, epsilons) -> Fraction:
    """(1 - f) + sum 2^(i-1) eps_i: total length of the negative-slope pieces."""
    f = as_rational(f)
    return (1 - f) + sum((2 ** (i - 1) * as_rational(e) for i, e in enumerate(epsilons, 1)), Fraction(0))


def positive_slope(f, gamma) -> Fraction:
    return (1 - gamma) / ((1 - f) * gamma)


def psi_n(params: GeometricEpsParams | ExplicitEpsParams) -> PwlPeriodic:
    """The n-th approximant psi_n, built by recursive interval splitting.

    Each positive-slope interval [l, r] of psi_i is replaced by a positive
    piece of length gamma_{i+1}/2^(i+1), a piece of slope -1/(1-f) of
    length eps_{i+1}, and another positive piece; values at l and r are
    unchanged.
    """
    f = params.f
    eps = list(params.epsilons)
    # positive intervals as (left endpoint, value there); pieces alternate
    points = [Fraction(0), f, Fraction(1)]
    values = [Fraction(0), Fraction(1), Fraction(0)]
    positive = [(Fraction(0), Fraction(0))]
    neg = -1 / (1 - f)
    for i, e in enumerate(eps, start=1):
        gamma = params.gamma(i)
        if gamma <= 0:
            raise ParamOutOfRange(f"gamma_{i} = {gamma} is not positive")
        width = gamma / 2**i
        s = positive_slope(f, gamma)
        new_positive = []
        for left, value in positive:
            a = left + width
            va = value + s * width
            bpt = a + e
            vb = va + neg * e
            points += [a, bpt]
            values += [va, vb]
            new_positive += [(left, value), (bpt, vb)]
        positive = new_positive
    order = sorted(range(len(points)), key=points.__getitem__)
    return from_breakpoints([points[k] for k in order], [values[k] for k in order])


def kf_params_of_psi(params: GeometricEpsParams | ExplicitEpsParams) -> list[Fraction]:
    """n-step MIR parameters (f, a_0, ..., a_n) that reproduce psi_n."""
    eps = list(params.epsilons)
    out = [params.f, Fraction(1)]
    if eps:
        out.append((params.f + eps[0]) / 2)
    for i in range(2, len(eps) + 1):
        out.append((out[-1] - eps[i - 2] + eps[i - 1]) / 2)
    return out


def kf_n_step_mir_psi(f=Fraction(2, 5), q=3, n=2) -> PwlPeriodic:
    """psi_n for a geometric epsilon sequence (the kf_n_step_mir special case).

    >>> pi = kf_n_step_mir_psi(Fraction(2, 5), 3, 1)
    >>> [str(p) for p in pi.points]
    ['0', '2/15', '4/15', '2/5', '1']
    >>> str(pi.slopes[0])
    '55/12'
    """
    return psi_n(GeometricEpsParams(as_rational(f), as_rational(q), int(n)))


def bccz_counterexample_approximant(f=Fraction(2, 5), q=3, n=2) -> PwlPeriodic:
    """Finite-depth approximant of the non-piecewise-linear bccz limit.

    >>> len(bccz_counterexample_approximant(Fraction(2, 5), 3, 3).points)
    17
    """
    return kf_n_step_mir_psi(f, q, n)


# -- catalog ----------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    parameters: tuple[tuple[str, str], ...]
    status: str  # "constructible" or "stub"
    citation: str
    constraints: str = ""
    constructor: Callable[..., PwlPeriodic] | None = field(default=None, compare=False, repr=False)

    def construct(self, **params) -> PwlPeriodic:
        if self.constructor is None:
            raise NotImplementedError(
                f"{self.name} is not constructible here (formula not available); see {self.citation}"
            )
        return self.constructor(**params)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "parameters": [{"name": n, "constraint": c} for n, c in self.parameters],
            "constraints": self.constraints,
            "citation": self.citation,
        }


def _stub(name: str, citation: str) -> CatalogEntry:
    return CatalogEntry(name, (), "stub", citation)


_PSI_PARAMS = (("f", "0 < f < 1"), ("q", "q > 2, and q <= 2f/(2f-1) when f > 1/2"), ("n", "0 <= n <= 12"))
_PSI_CONSTRAINTS = "0 < f < 1; q > 2 (q <= 2f/(2f-1) for f > 1/2); 0 <= n <= 12"

_CATALOG: tuple[CatalogEntry, ...] = (
    CatalogEntry(
        "gmic", (("f", "0 < f < 1"),), "constructible",
        "Gomory (1960); Gomory and Johnson (1972)", "0 < f < 1", gmic,
    ),
    _stub("gj_2_slope", "Gomory and Johnson, T-space and cutting planes (2003)"),
    _stub("gj_2_slope_repeat", "Gomory and Johnson, T-space and cutting planes (2003)"),
    _stub("dg_2_step_mir", "Dash and Günlük, valid inequalities based on simple MIR (2006)"),
    CatalogEntry(
        "kf_n_step_mir", _PSI_PARAMS, "constructible",
        "Kianfar and Fathi, n-step MIR (2009); geometric special case psi_n only",
        _PSI_CONSTRAINTS, kf_n_step_mir_psi,
    ),
    CatalogEntry(
        "bccz_counterexample", _PSI_PARAMS, "constructible",
        "Basu, Conforti, Cornuéjols and Zambelli (2010); finite-depth approximants psi_n only",
        _PSI_CONSTRAINTS, bccz_counterexample_approximant,
    ),
    _stub("gj_forward_3_slope", "Gomory and Johnson, T-space and cutting planes (2003)"),
    CatalogEntry(
        "drlm_backward_3_slope", (("f", "0 < f < b"), ("b", "f < b <= (1+f)/4")), "constructible",
        "Dey, Richard, Li and Miller (2010)", "0 < f < b <= (1+f)/4", drlm_backward_3_slope,
    ),
    _stub("dr_projected_sequential_merge_3_slope", "Dey and Richard, sequential-merge (2010)"),
    _stub("bhk_irrational", "Basu et al., equivariant perturbation I (2016)"),
    _stub("chen_4_slope", "Chen, PhD thesis (2011)"),
    _stub("hildebrand_5_slope_22_1", "unpublished computational search (2013)"),
    _stub("ll_strong_fractional", "Letchford and Lodi, strengthening Chvátal-Gomory cuts (2002)"),
    _stub("dg_2_step_mir_limit", "Dash and Günlük (2006)"),
    _stub("drlm_2_slope_limit", "Dey, Richard, Li and Miller (2010)"),
    _stub("drlm_3_slope_limit", "Dey, Richard, Li and Miller (2010)"),
    CatalogEntry(
        "rlm_dpl1_extreme_3a", (("f", "0 < f < 1/3"),), "constructible",
        "Richard, Li and Miller, approximate liftings (2009)", "0 < f < 1/3", rlm_dpl1_extreme_3a,
    ),
    _stub("hildebrand_2_sided_discont_1_slope_1", "unpublished computational search (2013)"),
    _stub("hildebrand_2_sided_discont_2_slope_1", "unpublished computational search (2013)"),
    _stub("hildebrand_discont_3_slope_1", "unpublished computational search (2013)"),
)


def catalog() -> list[CatalogEntry]:
    return list(_CATALOG)


def lookup(name: str) -> CatalogEntry:
    for entry in _CATALOG:
        if entry.name == name:
            return entry
    raise KeyError(f"unknown function {name!r}; try one of {[e.name for e in _CATALOG]}")


def construct(name: str, **params) -> PwlPeriodic:
    """Build a catalog function by name; parameters may be rationals or "p/q" strings."""
    return lookup(name).construct(**params)
