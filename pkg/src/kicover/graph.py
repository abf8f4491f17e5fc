"""Simple undirected graphs, the generators used throughout the package, and
clique enumeration.

Vertices are the integers ``0..n-1``.  Cliques are stored as strictly
increasing tuples of vertices, which makes tuple equality the same as clique
equality and tuple ordering the lexicographic order used everywhere else.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

Clique = tuple[int, ...]


class GraphFormatError(ValueError):
    """Malformed graph text.  ``lineno`` is 1-based."""

    def __init__(self, message: str, lineno: int):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[tuple[int, int]]
    _adj: tuple[frozenset[int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        canon = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            a, b = min(u, v), max(u, v)
            if a < 0 or b >= self.n:
                raise ValueError(f"edge ({u}, {v}) out of range for n={self.n}")
            canon.add((a, b))
        object.__setattr__(self, "edges", frozenset(canon))
        adj = [set() for _ in range(self.n)]
        for a, b in canon:
            adj[a].add(b)
            adj[b].add(a)
        object.__setattr__(self, "_adj", tuple(frozenset(s) for s in adj))

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        return cls(n, frozenset(tuple(e) for e in edges))

    def adjacent(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def neighbors(self, u: int) -> frozenset[int]:
        return self._adj[u]

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class HoleLabeling:
    """Cyclic labeling of a K_i-p-hole.

    ``blocks[l]`` is the l-th K_i, ``shared[l]`` the (i-1)-clique common to
    ``blocks[l-1]`` and ``blocks[l]`` (indices mod p), and ``lone[l]`` the
    i-2 remaining (i-1)-subcliques of ``blocks[l]``.
    """

    blocks: tuple[Clique, ...]
    shared: tuple[Clique, ...]
    lone: tuple[tuple[Clique, ...], ...]

    @property
    def p(self) -> int:
        return len(self.blocks)

    @property
    def i(self) -> int:
        return len(self.blocks[0])

    @classmethod
    def from_blocks(cls, blocks) -> "HoleLabeling":
        """Derive shared and lone cliques from an ordered list of blocks."""
        blocks = tuple(tuple(sorted(b)) for b in blocks)
        p = len(blocks)
        if p < 3:
            raise ValueError("a hole needs at least 3 blocks")
        shared = []
        for l in range(p):
            common = set(blocks[l - 1]) & set(blocks[l])
            if len(common) != len(blocks[l]) - 1:
                raise ValueError(f"blocks {(l - 1) % p} and {l} do not share an (i-1)-clique")
            shared.append(tuple(sorted(common)))
        lone = []
        for l in range(p):
            nxt = shared[(l + 1) % p]
            facets = [f for f in combinations(blocks[l], len(blocks[l]) - 1)]
            lone.append(tuple(f for f in facets if f != shared[l] and f != nxt))
        return cls(blocks, tuple(shared), tuple(lone))

    def validate(self, g: Graph) -> None:
        """Raise ValueError unless this labeling is a valid K_i-p-hole of ``g``."""
        p, i = self.p, self.i
        if i < 3:
            raise ValueError("hole blocks must have at least 3 vertices")
        for b in self.blocks:
            if len(b) != i or not is_clique(g, b):
                raise ValueError(f"block {b} is not a K_{i} of the graph")
        for l in range(p):
            for j in range(l + 1, p):
                common = len(set(self.blocks[l]) & set(self.blocks[j]))
                consecutive = (j - l) % p in (1, p - 1)
                if consecutive != (common == i - 1):
                    raise ValueError(f"blocks {l} and {j} violate the cyclic sharing pattern")
        for l in range(p):
            s = set(self.shared[l])
            if not (s <= set(self.blocks[l - 1]) and s <= set(self.blocks[l])):
                raise ValueError(f"shared clique {l} is not in blocks {l - 1} and {l}")
            if len(self.lone[l]) != i - 2:
                raise ValueError(f"block {l} needs {i - 2} lone cliques")
        if len(set(self.shared)) != p:
            raise ValueError("shared cliques must be distinct")


def is_clique(g: Graph, vertices) -> bool:
    return all(g.adjacent(u, v) for u, v in combinations(vertices, 2))


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise ValueError("n must be positive")
    return Graph(n, frozenset(combinations(range(n), 2)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return Graph.from_edges(n, [(v, (v + 1) % n) for v in range(n)])


def wheel_hole(i: int, p: int) -> tuple[Graph, HoleLabeling]:
    """Hub clique K_{i-2} joined with the cycle C_p, plus its hole labeling.

    Vertices ``0..p-1`` form the cycle and ``p..p+i-3`` the hub.  Block ``l``
    is the hub together with the cycle edge ``(l, l+1)``.  For p = 3 the
    graph is K_{i+1}, which contains i-2 further K_i besides the blocks.
    """
    if i < 3 or p < 3:
        raise ValueError("wheel_hole needs i >= 3 and p >= 3")
    hub = tuple(range(p, p + i - 2))
    edges = {(v, (v + 1) % p) for v in range(p)}
    edges |= {(v, h) for v in range(p) for h in hub}
    edges |= set(combinations(hub, 2))
    g = Graph.from_edges(p + i - 2, edges)
    blocks = [tuple(sorted((l, (l + 1) % p) + hub)) for l in range(p)]
    shared = [tuple(sorted((l,) + hub)) for l in range(p)]
    lone = []
    for l in range(p):
        pair = (l, (l + 1) % p)
        lone.append(tuple(
            tuple(sorted(pair + tuple(x for x in hub if x != h))) for h in hub
        ))
    return g, HoleLabeling(tuple(blocks), tuple(shared), tuple(lone))


def enumerate_cliques(g: Graph, j: int) -> list[Clique]:
    """All cliques with exactly ``j`` vertices, in lexicographic order.

    Each clique is grown only by common neighbours with a larger index, so
    every clique is produced once, already sorted.
    """
    if j < 1:
        raise ValueError("clique size must be positive")
    out: list[Clique] = []

    def extend(clique: list[int], candidates: list[int]):
        if len(clique) == j:
            out.append(tuple(clique))
            return
        need = j - len(clique)
        for idx, v in enumerate(candidates):
            if len(candidates) - idx < need:
                break
            nbrs = g.neighbors(v)
            extend(clique + [v], [u for u in candidates[idx + 1:] if u in nbrs])

    extend([], list(range(g.n)))
    return out


def random_graph(n: int, edge_probability, seed: int) -> Graph:
    """Erdős–Rényi G(n, p) sample.

    Uses Python's Mersenne Twister (``random.Random(seed)``).  Pairs are
    visited in lexicographic order and pair ``(u, v)`` is kept iff
    ``randrange(den) < num`` where ``p = num/den`` in lowest terms, so the
    result is reproducible for a fixed (n, p, seed).
    """
    prob = Fraction(edge_probability)
    if not 0 <= prob <= 1:
        raise ValueError("edge probability must lie in [0, 1]")
    rng = random.Random(seed)
    num, den = prob.numerator, prob.denominator
    edges = [e for e in combinations(range(n), 2) if rng.randrange(den) < num]
    return Graph.from_edges(n, edges)


def parse_graph(text: str) -> Graph:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise GraphFormatError("missing header", 1)
    header = lines[0].split(" ")
    if len(header) != 2 or not all(tok.isdigit() for tok in header):
        raise GraphFormatError(f"malformed header {lines[0]!r}, expected 'n m'", 1)
    n, m = int(header[0]), int(header[1])
    if len(lines) - 1 != m:
        where = m + 2 if len(lines) - 1 > m else len(lines) + 1
        raise GraphFormatError(f"header announces {m} edges, found {len(lines) - 1}", where)
    seen: set[tuple[int, int]] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        toks = line.split(" ")
        if len(toks) != 2 or not all(t.isdigit() for t in toks):
            raise GraphFormatError(f"malformed edge line {line!r}", lineno)
        u, v = int(toks[0]), int(toks[1])
        if u >= n or v >= n:
            raise GraphFormatError(f"vertex index out of range in {line!r} (n={n})", lineno)
        if u == v:
            raise GraphFormatError(f"self-loop {line!r}", lineno)
        e = (min(u, v), max(u, v))
        if e in seen:
            raise GraphFormatError(f"duplicate edge {line!r}", lineno)
        seen.add(e)
    return Graph(n, frozenset(seen))


def serialize_graph(g: Graph) -> str:
    rows = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.sorted_edges()]
    return "\n".join(rows) + "\n"
