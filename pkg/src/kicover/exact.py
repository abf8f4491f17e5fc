"""Brute-force ground truth: optimal K_i-free sets and covers, triangle
covers and packings, and exact validity / facet checks for inequalities.

These are exponential-time oracles for desk-scale instances.  Size guards
raise :class:`SearchTooLarge` instead of running for hours.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .graph import Graph, enumerate_cliques
from .ideal import ProblemContext, build_context
from .linalg import RowEchelon

MAX_FREE_VARS = 30
MAX_FACET_VARS = 22
MAX_PACKING_TRIANGLES = 220


class SearchTooLarge(RuntimeError):
    pass


@dataclass
class ExactResult:
    value: Fraction
    witness: tuple
    enumeration_count: int


def _weights(ctx: ProblemContext, weights) -> list[Fraction]:
    if weights is None:
        return [Fraction(1)] * ctx.nvars
    if isinstance(weights, Mapping):
        return [Fraction(weights.get(j, 0)) for j in range(ctx.nvars)]
    w = [Fraction(v) for v in weights]
    if len(w) != ctx.nvars:
        raise ValueError(f"expected {ctx.nvars} weights, got {len(w)}")
    return w


def _guard(nvars: int, limit: int, what: str):
    if nvars > limit:
        raise SearchTooLarge(f"{what}: {nvars} variables exceeds the limit of {limit} "
                             f"(search space up to 2^{nvars} = {2 ** nvars} sets)")


def max_free(ctx: ProblemContext, weights=None) -> ExactResult:
    """Maximum-weight K_i-free set; ties go to the lexicographically least
    sorted index tuple."""
    _guard(ctx.nvars, MAX_FREE_VARS, "max_free")
    w = _weights(ctx, weights)
    m = ctx.nvars
    # blockers are checked when their largest member is added
    closing: list[list[frozenset]] = [[] for _ in range(m)]
    for b in ctx.blockers:
        closing[max(b)].append(b - {max(b)})
    tail = [Fraction(0)] * (m + 1)
    for j in range(m - 1, -1, -1):
        tail[j] = tail[j + 1] + max(w[j], Fraction(0))

    best_val: Fraction | None = None
    best: tuple = ()
    count = 0
    chosen: list[int] = []
    chosen_set: set[int] = set()

    def may_beat(bound: Fraction) -> bool:
        if best_val is None or bound > best_val:
            return True
        if bound < best_val:
            return False
        # a tie only helps if the completion can be lexicographically smaller
        prefix = tuple(chosen)
        head = best[:len(prefix)]
        return prefix < head or (prefix == head and len(best) > len(prefix))

    def dfs(j: int, val: Fraction):
        nonlocal best_val, best, count
        if j == m:
            count += 1
            cand = tuple(chosen)
            if best_val is None or val > best_val or (val == best_val and cand < best):
                best_val, best = val, cand
            return
        if not may_beat(val + tail[j]):
            return
        if not any(rest <= chosen_set for rest in closing[j]):
            chosen.append(j)
            chosen_set.add(j)
            dfs(j + 1, val + w[j])
            chosen.pop()
            chosen_set.discard(j)
        dfs(j + 1, val)

    dfs(0, Fraction(0))
    return ExactResult(best_val, best, count)


def min_cover(ctx: ProblemContext, weights=None) -> ExactResult:
    """Minimum-weight K_i-cover, as the complement of a maximum free set."""
    w = _weights(ctx, weights)
    free = max_free(ctx, w)
    witness = tuple(j for j in range(ctx.nvars) if j not in set(free.witness))
    return ExactResult(sum(w, Fraction(0)) - free.value, witness, free.enumeration_count)


def tau(g: Graph) -> ExactResult:
    """Minimum triangle cover size; the witness lists edges as vertex pairs."""
    ctx = build_context(g, 3)
    res = min_cover(ctx)
    return ExactResult(res.value, tuple(ctx.vars[j] for j in res.witness),
                       res.enumeration_count)


def nu(g: Graph) -> ExactResult:
    """Maximum number of pairwise edge-disjoint triangles."""
    tris = enumerate_cliques(g, 3)
    if len(tris) > MAX_PACKING_TRIANGLES:
        raise SearchTooLarge(f"nu: {len(tris)} triangles exceeds {MAX_PACKING_TRIANGLES}")
    tri_edges = [frozenset(((a, b), (a, c), (b, c))) for a, b, c in tris]
    best: list[int] = []
    count = 0
    used: set = set()
    chosen: list[int] = []

    def rec(t: int):
        nonlocal best, count
        count += 1
        if len(chosen) + (len(tris) - t) <= len(best):
            return
        if t == len(tris):
            best = list(chosen)
            return
        if not (tri_edges[t] & used):
            chosen.append(t)
            used.update(tri_edges[t])
            rec(t + 1)
            used.difference_update(tri_edges[t])
            chosen.pop()
        rec(t + 1)

    rec(0)
    return ExactResult(Fraction(len(best)), tuple(tris[t] for t in best), count)


def check_valid(weights, rhs, ctx: ProblemContext) -> bool:
    """True iff ``weights . chi_S <= rhs`` for every K_i-free set S."""
    return max_free(ctx, weights).value <= Fraction(rhs)


def tight_free_sets(weights, rhs, ctx: ProblemContext) -> list[tuple[int, ...]]:
    """Every free set attaining ``weights . chi_S == rhs``."""
    _guard(ctx.nvars, MAX_FACET_VARS, "tight_free_sets")
    w = _weights(ctx, weights)
    rhs = Fraction(rhs)
    m = ctx.nvars
    closing: list[list[frozenset]] = [[] for _ in range(m)]
    for b in ctx.blockers:
        closing[max(b)].append(b - {max(b)})
    hi = [Fraction(0)] * (m + 1)
    lo = [Fraction(0)] * (m + 1)
    for j in range(m - 1, -1, -1):
        hi[j] = hi[j + 1] + max(w[j], Fraction(0))
        lo[j] = lo[j + 1] + min(w[j], Fraction(0))
    out: list[tuple[int, ...]] = []
    chosen: list[int] = []
    chosen_set: set[int] = set()

    def dfs(j: int, val: Fraction):
        if val + hi[j] < rhs or val + lo[j] > rhs:
            return
        if j == m:
            out.append(tuple(chosen))
            return
        if not any(rest <= chosen_set for rest in closing[j]):
            chosen.append(j)
            chosen_set.add(j)
            dfs(j + 1, val + w[j])
            chosen.pop()
            chosen_set.discard(j)
        dfs(j + 1, val)

    dfs(0, Fraction(0))
    return out


def check_facet(weights, rhs, ctx: ProblemContext) -> bool:
    """True iff the inequality is valid and its tight vertices span an
    affine space of dimension ``nvars - 1`` (exact rational rank).

    The K_i-free polytope is full-dimensional because the empty set and all
    singletons are free, so this is the facet condition.
    """
    _guard(ctx.nvars, MAX_FACET_VARS, "check_facet")
    if not check_valid(weights, rhs, ctx):
        return False
    m = ctx.nvars
    ech = RowEchelon(m + 1)
    for s in tight_free_sets(weights, rhs, ctx):
        row = [0] * m + [1]
        for j in s:
            row[j] = 1
        ech.add(row)
        if ech.rank == m:
            return True
    return ech.rank == m


def unit_inequality(support: Sequence[int], rhs, ctx: ProblemContext) -> tuple[list[int], Fraction]:
    """Weights ``1`` on ``support`` and ``0`` elsewhere, with the given rhs."""
    s = set(support)
    return [1 if j in s else 0 for j in range(ctx.nvars)], Fraction(rhs)
