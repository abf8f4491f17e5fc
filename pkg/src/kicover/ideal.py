"""The variety of K_i-free sets and reduction modulo its vanishing ideal.

Variables are the (i-1)-cliques of the graph, numbered in lexicographic order.
Each K_i of the graph is a *blocker*: the set of indices of its i facets.  A
variable set is free iff it contains no blocker, and the vanishing ideal is
generated by ``x_j^2 - x_j`` together with the blocker monomials, so the
normal form of a polynomial is obtained by multilinearizing and dropping
every monomial whose support contains a blocker.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable

from .graph import Clique, Graph, enumerate_cliques
from .poly import Polynomial

DEFAULT_CEILING = 2_000_000

VarSubset = tuple[int, ...]


class VarietyTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class ProblemContext:
    g: Graph
    i: int
    vars: tuple[Clique, ...]
    blockers: tuple[frozenset[int], ...]
    index: dict = field(repr=False, compare=False)
    _by_min: tuple = field(repr=False, compare=False)

    @property
    def nvars(self) -> int:
        return len(self.vars)

    def var_of(self, clique: Iterable[int]) -> int:
        return self.index[tuple(sorted(clique))]

    def facets(self, clique: Iterable[int]) -> list[int]:
        """Variable indices of the (i-1)-subcliques of an i-clique, ascending."""
        clique = tuple(sorted(clique))
        return sorted(self.var_of(f) for f in combinations(clique, len(clique) - 1))

    def is_free(self, s: Iterable[int]) -> bool:
        s = frozenset(s)
        for j in s:
            for b in self._by_min[j]:
                if b <= s:
                    return False
        return True


def build_context(g: Graph, i: int) -> ProblemContext:
    if i < 2:
        raise ValueError("clique size parameter i must be at least 2")
    cliques = tuple(enumerate_cliques(g, i - 1))
    index = {c: j for j, c in enumerate(cliques)}
    blockers = tuple(
        frozenset(index[f] for f in combinations(K, i - 1))
        for K in enumerate_cliques(g, i)
    )
    by_min = [[] for _ in cliques]
    for b in blockers:
        by_min[min(b)].append(b)
    return ProblemContext(g, i, cliques, blockers, index, tuple(tuple(x) for x in by_min))


def is_free(s: Iterable[int], ctx: ProblemContext) -> bool:
    return ctx.is_free(s)


@dataclass(frozen=True)
class VarietyTable:
    ctx: ProblemContext
    bound: int
    elements: tuple[VarSubset, ...]
    lookup: dict = field(repr=False, compare=False)

    def __len__(self):
        return len(self.elements)

    def position(self, s: Iterable[int]) -> int:
        return self.lookup[tuple(sorted(s))]

    def get(self, s: Iterable[int], default=None):
        return self.lookup.get(tuple(sorted(s)), default)

    def to_json(self) -> list[list[int]]:
        return [list(e) for e in self.elements]


def enumerate_variety(ctx: ProblemContext, bound: int,
                      ceiling: int = DEFAULT_CEILING) -> VarietyTable:
    """All free variable sets of size at most ``bound``, ordered by size and
    then lexicographically.

    A candidate is free iff all of its maximal proper subsets are free and it
    is not itself a blocker, so each level is built from the previous one.
    """
    if bound < 0:
        raise ValueError("bound must be non-negative")
    m = ctx.nvars
    blockers = set(ctx.blockers)
    elements: list[VarSubset] = [()]
    lookup: dict[VarSubset, int] = {(): 0}
    level: list[VarSubset] = [()]
    for size in range(1, min(bound, m) + 1):
        nxt: list[VarSubset] = []
        for t in level:
            start = t[-1] + 1 if t else 0
            for j in range(start, m):
                c = t + (j,)
                if size > 2 and any(c[:k] + c[k + 1:] not in lookup for k in range(size - 1)):
                    continue
                if size >= 2 and frozenset(c) in blockers:
                    continue
                nxt.append(c)
        for c in nxt:
            lookup[c] = len(elements)
            elements.append(c)
            if len(elements) > ceiling:
                upper = sum(comb(m, s) for s in range(min(bound, m) + 1))
                raise VarietyTooLarge(
                    f"variety at bound {bound} exceeds {ceiling} elements "
                    f"(reached {len(elements)} at size {size}; naive bound {upper})")
        level = nxt
        if not level:
            break
    return VarietyTable(ctx, bound, tuple(elements), lookup)


def normal_form(p: Polynomial, ctx: ProblemContext) -> Polynomial:
    """Unique representative of ``p`` in the span of the free monomials."""
    m = ctx.nvars
    for s in p.terms:
        for j in s:
            if not 0 <= j < m:
                raise KeyError(f"unknown variable index {j}")
    return Polynomial._raw({s: c for s, c in p.terms.items() if ctx.is_free(s)})
