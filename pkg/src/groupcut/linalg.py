"""Exact sparse Gaussian elimination over the rationals.

Rows are dicts ``{column: Fraction}``.  The echelon form is kept fully
reduced, and the pivot of a new row is always its lowest column index,
so results do not depend on anything but the order of the input rows.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping

Row = dict[int, Fraction]


class InconsistentSystem(ValueError):
    pass


class RREF:
    """Incrementally maintained reduced row echelon form with right-hand sides."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, tuple[Row, Fraction]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Mapping[int, Fraction], rhs: Fraction = Fraction(0)) -> tuple[Row, Fraction]:
        row = {c: Fraction(v) for c, v in row.items() if v != 0}
        rhs = Fraction(rhs)
        for c in [c for c in row if c in self.pivots]:
            coef = row.get(c)
            if not coef:
                continue
            prow, prhs = self.pivots[c]
            for k, v in prow.items():
                nv = row.get(k, 0) - coef * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
            rhs -= coef * prhs
        return row, rhs

    def add(self, row: Mapping[int, Fraction], rhs: Fraction = Fraction(0)) -> bool:
        """Add an equation; returns True if it increased the rank."""
        row, rhs = self.reduce(row, rhs)
        if not row:
            if rhs != 0:
                raise InconsistentSystem("equation reduces to 0 = nonzero")
            return False
        p = min(row)
        scale = row[p]
        row = {k: v / scale for k, v in row.items()}
        rhs = rhs / scale
        for c, (prow, prhs) in list(self.pivots.items()):
            coef = prow.get(p)
            if coef:
                for k, v in row.items():
                    nv = prow.get(k, 0) - coef * v
                    if nv:
                        prow[k] = nv
                    else:
                        prow.pop(k, None)
                self.pivots[c] = (prow, prhs - coef * rhs)
        self.pivots[p] = (row, rhs)
        return True

    def free_columns(self) -> list[int]:
        return [c for c in range(self.ncols) if c not in self.pivots]

    def particular_solution(self) -> list[Fraction]:
        """Solution with every free variable set to zero."""
        x = [Fraction(0)] * self.ncols
        for c, (_, rhs) in self.pivots.items():
            x[c] = rhs
        return x

    def kernel_basis(self) -> list[list[Fraction]]:
        basis = []
        for j in self.free_columns():
            v = [Fraction(0)] * self.ncols
            v[j] = Fraction(1)
            for c, (prow, _) in self.pivots.items():
                coef = prow.get(j)
                if coef:
                    v[c] = -coef
            basis.append(v)
        return basis


def solve(rows: Iterable[Mapping[int, Fraction]], rhs: Iterable[Fraction], ncols: int):
    """Return ``(particular_solution, kernel_basis)``; raises if inconsistent."""
    ech = RREF(ncols)
    for row, b in zip(rows, rhs):
        ech.add(row, b)
    return ech.particular_solution(), ech.kernel_basis()


def nullspace(rows: Iterable[Mapping[int, Fraction]], ncols: int) -> list[list[Fraction]]:
    ech = RREF(ncols)
    for row in rows:
        ech.add(row)
    return ech.kernel_basis()


def rank(rows: Iterable[Mapping[int, Fraction]], ncols: int) -> int:
    ech = RREF(ncols)
    for row in rows:
        ech.add(row)
    return ech.rank
