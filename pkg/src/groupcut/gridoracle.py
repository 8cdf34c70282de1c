"""Brute-force extremality oracle via restriction to a finite cyclic group.

For a continuous piecewise-linear minimal function with rational
breakpoints in (1/q)Z, extremality for the infinite group problem is
decided by extremality of its restriction to the group (1/4q)Z/Z.  The
finite problem is plain linear algebra over N unknowns.

Independence from the main engine is deliberate: no Delta-P complex, no
covered intervals, and a different elimination (numpy, modulo a prime,
with an exact rational fallback).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import GridTooCoarse, InternalInconsistency, NotContinuous, NotMinimalFinite
from .linalg import RREF
from .minimality import detect_f
from .pwl import PwlPeriodic, as_rational, rational_str

# Prime below 2**23: products of two residues stay below 2**46, so a dot
# product of up to 2**16 terms cannot overflow int64.
PRIME = 8388593
CHUNK = 512


@dataclass(frozen=True)
class FiniteGroupFunction:
    N: int
    values: tuple[Fraction, ...]
    f_index: int

    @property
    def f(self) -> Fraction:
        return Fraction(self.f_index, self.N)


@dataclass
class FiniteVerdict:
    extreme: bool
    N: int
    kernel_dimension: int
    kernel_vector: tuple[Fraction, ...] | None = None

    @property
    def verdict(self) -> str:
        return "extreme" if self.extreme else "not_extreme"

    def to_json(self) -> dict:
        out = {"N": self.N, "verdict": self.verdict, "kernel_dimension": self.kernel_dimension}
        if self.kernel_vector is not None:
            out["kernel_vector"] = [rational_str(v) for v in self.kernel_vector]
        return out


def grid_denominator(pi: PwlPeriodic, f=None) -> int:
    """Least common denominator of the breakpoints and f."""
    f = detect_f(pi) if f is None else as_rational(f)
    q = f.denominator
    for p in pi.points:
        q = math.lcm(q, p.denominator)
    return q


def restrict(pi: PwlPeriodic, N: int, f=None) -> FiniteGroupFunction:
    if not pi.is_continuous():
        raise NotContinuous("the grid oracle only handles continuous functions")
    f = detect_f(pi) if f is None else as_rational(f)
    if N % grid_denominator(pi, f):
        raise GridTooCoarse(f"N = {N} is not a multiple of the breakpoint denominator {grid_denominator(pi, f)}")
    return FiniteGroupFunction(N, tuple(pi.eval(Fraction(i, N)) for i in range(N)), int(f * N))


def _scaled(values) -> tuple[np.ndarray, int] | None:
    """Integer array L*values, or None if it would not fit comfortably in int64."""
    den = 1
    for v in values:
        den = math.lcm(den, v.denominator)
    ints = [int(v * den) for v in values]
    if max(abs(x) for x in ints) >= 2**60:
        return None
    return np.array(ints, dtype=np.int64), den


def finite_minimality(g: FiniteGroupFunction) -> list[str]:
    """Problems preventing g from being minimal; empty if minimal."""
    N, vals, fi = g.N, g.values, g.f_index
    problems = []
    if vals[0] != 0:
        problems.append("origin")
    if any(v < 0 for v in vals):
        problems.append("nonnegativity")
    if any(vals[i] + vals[(fi - i) % N] != 1 for i in range(N)):
        problems.append("symmetry")
    scaled = _scaled(vals)
    idx = np.arange(N)
    if scaled is not None:
        v, _ = scaled
        delta = v[:, None] + v[None, :] - v[(idx[:, None] + idx[None, :]) % N]
        if (delta < 0).any():
            problems.append("subadditivity")
    elif any(vals[i] + vals[j] < vals[(i + j) % N] for i in range(N) for j in range(N)):
        problems.append("subadditivity")
    return problems


def additive_pairs(g: FiniteGroupFunction) -> list[tuple[int, int]]:
    """Pairs i <= j with g(i) + g(j) = g(i + j)."""
    N, vals = g.N, g.values
    scaled = _scaled(vals)
    if scaled is not None:
        v, _ = scaled
        idx = np.arange(N)
        delta = v[:, None] + v[None, :] - v[(idx[:, None] + idx[None, :]) % N]
        ii, jj = np.nonzero(np.triu(delta == 0))
        return list(zip(ii.tolist(), jj.tolist()))
    return [(i, j) for i in range(N) for j in range(i, N) if vals[i] + vals[j] == vals[(i + j) % N]]


def _equations(g: FiniteGroupFunction) -> list[dict[int, int]]:
    N = g.N
    rows = [{0: 1}, {g.f_index: 1}]
    for i, j in additive_pairs(g):
        k = (i + j) % N
        row: dict[int, int] = {}
        for c, s in ((i, 1), (j, 1), (k, -1)):
            row[c] = row.get(c, 0) + s
        row = {c: s for c, s in row.items() if s}
        if row:
            rows.append(row)
    return rows


def _rank_mod_p(rows: list[dict[int, int]], N: int, chunk: int = CHUNK) -> tuple[int, list[int]]:
    """Rank modulo PRIME and the indices of a maximal independent row subset.

    The basis is kept fully reduced, so a sparse row is reduced by
    subtracting only the basis rows at its own (at most three) columns.
    """
    p = PRIME
    basis = np.zeros((N, N), dtype=np.int64)  # basis[c] is the row with pivot c
    is_pivot = np.zeros(N, dtype=bool)
    chosen: list[int] = []
    for start in range(0, len(rows), chunk):
        block = rows[start : start + chunk]
        M = np.zeros((len(block), N), dtype=np.int64)
        for r, row in enumerate(block):
            for c, s in row.items():
                M[r, c] = s % p
        for r, row in enumerate(block):
            for c, s in row.items():
                if is_pivot[c]:
                    M[r] = (M[r] - (s % p) * basis[c]) % p
        live = np.nonzero(M.any(axis=1))[0]
        for r in live:
            row = M[r]
            nz = np.nonzero(row)[0]
            if nz.size == 0:
                continue
            c = int(nz[0])
            row = (row * pow(int(row[c]), p - 2, p)) % p
            later = M[r + 1 :]
            col = later[:, c].copy()
            if col.any():
                later -= (col[:, None] * row[None, :]) % p
                later %= p
            bcol = basis[:, c].copy()
            if bcol.any():
                basis = (basis - (bcol[:, None] * row[None, :]) % p) % p
            basis[c] = row
            is_pivot[c] = True
            chosen.append(start + int(r))
            if len(chosen) == N:
                return N, chosen
    return len(chosen), chosen


def finite_extremality(g: FiniteGroupFunction) -> FiniteVerdict:
    """Extreme iff phi(0) = phi(f) = 0 plus additivity forces phi = 0."""
    problems = finite_minimality(g)
    if problems:
        raise NotMinimalFinite(f"restriction is not minimal: {', '.join(problems)}")
    N = g.N
    rows = _equations(g)
    r, chosen = _rank_mod_p(rows, N)
    if r == N:
        # full rank mod p implies full rank over Q
        return FiniteVerdict(True, N, 0)
    ech = RREF(N)
    for k in chosen:
        ech.add({c: Fraction(s) for c, s in rows[k].items()})
    basis = ech.kernel_basis()
    if not all(sum(v[c] * s for c, s in row.items()) == 0 for v in basis for row in rows):
        # the modular subset missed a rational relation; do it exactly
        ech = RREF(N)
        for row in rows:
            ech.add({c: Fraction(s) for c, s in row.items()})
        basis = ech.kernel_basis()
    if not basis:
        return FiniteVerdict(True, N, 0)
    return FiniteVerdict(False, N, len(basis), tuple(basis[0]))


@dataclass
class OracleReport:
    verdict: str
    runs: list[FiniteVerdict] = field(default_factory=list)

    @property
    def N(self) -> int:
        return self.runs[0].N

    @property
    def kernel_dimension(self) -> int:
        return self.runs[0].kernel_dimension

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "verdict": self.verdict,
            "kernel_dimension": self.kernel_dimension,
            "runs": [{"N": r.N, "verdict": r.verdict, "kernel_dimension": r.kernel_dimension} for r in self.runs],
        }


def oracle_check(pi: PwlPeriodic, f=None, factors=(4, 8)) -> OracleReport:
    """Finite-group verdict at N = 4q, cross-checked at N = 8q."""
    if not pi.is_continuous():
        raise NotContinuous("the grid oracle only handles continuous functions")
    f = detect_f(pi) if f is None else as_rational(f)
    q = grid_denominator(pi, f)
    runs = [finite_extremality(restrict(pi, k * q, f)) for k in factors]
    verdicts = {r.extreme for r in runs}
    if len(verdicts) != 1:
        raise InternalInconsistency(
            "grid verdicts disagree: " + ", ".join(f"N={r.N}: {r.verdict}" for r in runs)
        )
    return OracleReport(runs[0].verdict, runs)
