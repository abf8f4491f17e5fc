"""Exact rational row reduction, for rank computations and vertex snapping."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence


class RowEchelon:
    """Incrementally maintained reduced basis of a row space over Q."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.rows: list[list[Fraction]] = []
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, row: Iterable) -> list[Fraction]:
        r = [Fraction(v) for v in row]
        for basis, piv in zip(self.rows, self.pivots):
            f = r[piv]
            if f:
                for c in range(piv, self.ncols):
                    if basis[c]:
                        r[c] -= f * basis[c]
        return r

    def add(self, row: Iterable) -> bool:
        """Insert ``row``; return True iff it increased the rank."""
        r = self.reduce(row)
        piv = next((c for c, v in enumerate(r) if v), None)
        if piv is None:
            return False
        inv = 1 / r[piv]
        r = [v * inv for v in r]
        for basis in self.rows:
            f = basis[piv]
            if f:
                for c in range(piv, self.ncols):
                    if r[c]:
                        basis[c] -= f * r[c]
        self.rows.append(r)
        self.pivots.append(piv)
        return True


def rational_rank(rows: Iterable[Sequence]) -> int:
    rows = list(rows)
    if not rows:
        return 0
    ech = RowEchelon(len(rows[0]))
    for r in rows:
        ech.add(r)
    return ech.rank


def solve_square(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """Exact solution of a square system, or None if it is singular."""
    n = len(a)
    aug = [[Fraction(v) for v in row] + [Fraction(rhs)] for row, rhs in zip(a, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col]), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return [row[n] for row in aug]
