"""Reduced moment matrices of the K_i-free variety.

Rows and columns are the free sets of size at most k (in variety order);
entry (X, Y) is the moment variable of ``X | Y`` when that union is free and
a structural zero otherwise.  Moment variables are the free sets of size at
most 2k, so ``M(y) = sum_S y_S A_S`` with 0/1 matrices ``A_S`` of disjoint
support.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ideal import DEFAULT_CEILING, ProblemContext, VarietyTable, enumerate_variety

ZERO = -1


@dataclass(frozen=True)
class MomentMatrixSpec:
    ctx: ProblemContext
    k: int
    row_index: VarietyTable
    var_index: VarietyTable
    entries: np.ndarray   # int, ZERO marks a structural zero
    objective_coords: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.row_index)

    @property
    def nmoments(self) -> int:
        return len(self.var_index)

    def positions(self) -> list[tuple[np.ndarray, np.ndarray]]:
        """For every moment variable, the (rows, cols) where it appears."""
        flat = self.entries.ravel()
        order = np.argsort(flat, kind="stable")
        counts = np.bincount(flat[flat != ZERO], minlength=self.nmoments)
        start = int(np.sum(flat == ZERO))
        out = []
        for s in range(self.nmoments):
            idx = order[start:start + counts[s]]
            out.append(np.divmod(idx, self.dim))
            start += counts[s]
        return out

    def evaluate(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        m = np.where(self.entries == ZERO, 0.0, y[np.maximum(self.entries, 0)])
        return m

    def rank_one_moments(self, s) -> np.ndarray:
        """Moment vector of the vertex chi_S: y_X = 1 iff X is a subset of S."""
        s = set(s)
        return np.array([1 if set(x) <= s else 0 for x in self.var_index.elements], dtype=int)

    def symbolic(self) -> list[list[str]]:
        return [["0" if e == ZERO else f"y_{e}" for e in row] for row in self.entries]

    def symbolic_text(self) -> str:
        cells = self.symbolic()
        width = max(len(c) for row in cells for c in row)
        return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells) + "\n"

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "k": self.k,
            "rows": self.row_index.to_json(),
            "variables": self.var_index.to_json(),
            "entries": [[None if e == ZERO else int(e) for e in row] for row in self.entries],
        }


def build_moment_spec(ctx: ProblemContext, k: int,
                      ceiling: int = DEFAULT_CEILING) -> MomentMatrixSpec:
    if k < 1:
        raise ValueError("theta level k must be at least 1")
    rows = enumerate_variety(ctx, k, ceiling)
    moments = enumerate_variety(ctx, 2 * k, ceiling)
    n = len(rows)
    entries = np.full((n, n), ZERO, dtype=np.int64)
    for a, x in enumerate(rows.elements):
        for b in range(a, n):
            u = tuple(sorted(set(x).union(rows.elements[b])))
            pos = moments.lookup.get(u, ZERO)
            entries[a, b] = entries[b, a] = pos
    singletons = tuple(moments.lookup[(j,)] for j in range(ctx.nvars))
    return MomentMatrixSpec(ctx, k, rows, moments, entries, singletons)


def coefficient_matrices(spec: MomentMatrixSpec) -> list[np.ndarray]:
    """Dense 0/1 matrices A_S with M(y) = sum_S y_S A_S, in variable order."""
    mats = []
    for rows, cols in spec.positions():
        a = np.zeros((spec.dim, spec.dim), dtype=np.int8)
        a[rows, cols] = 1
        mats.append(a)
    return mats
