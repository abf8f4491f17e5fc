"""Constructive sum-of-squares certificates modulo the K_i-free ideal, and an
exact verifier.

A certificate claims ``target == sum(g**2 for g in squares)`` modulo the
ideal, with every ``g`` of degree at most ``degree_bound``.  The builders
below only ever use idempotents (``g**2 == g`` mod the ideal), but the
verifier squares every entry regardless, so a wrong idempotency claim is
caught rather than trusted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Iterable, Sequence

from .graph import HoleLabeling, is_clique
from .ideal import ProblemContext, normal_form
from .poly import Polynomial


class CertificateError(ValueError):
    """Inputs outside a builder's preconditions."""


class EvenHoleError(CertificateError):
    """Hole certificates are only constructed for odd p."""


@dataclass
class Certificate:
    target: Polynomial
    squares: list[Polynomial]
    degree_bound: int
    idempotent: list[bool] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "degree_bound": self.degree_bound,
            "target": self.target.to_json(),
            "squares": [g.to_json() for g in self.squares],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "Certificate":
        try:
            squares = [Polynomial.from_json(g) for g in data["squares"]]
            return cls(Polynomial.from_json(data["target"]), squares, int(data["degree_bound"]),
                       [False] * len(squares))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed certificate JSON: {exc}") from exc


@dataclass
class Verdict:
    accepted: bool
    condition: str | None = None   # "affine", "degree" or "remainder"
    remainder: Polynomial | None = None
    detail: str = ""

    def __bool__(self):
        return self.accepted


def verify_certificate(c: Certificate, ctx: ProblemContext, *, affine: bool = True) -> Verdict:
    """Exact check of ``target == sum g_j^2 (mod I)``.

    Chain certificates have targets of degree ``|B|``; they are building
    blocks rather than linear inequalities, so pass ``affine=False`` for them.
    """
    if affine and c.target.degree > 1:
        return Verdict(False, "affine", detail=f"target has degree {c.target.degree}")
    for j, g in enumerate(c.squares):
        if g.degree > c.degree_bound:
            return Verdict(False, "degree",
                           detail=f"square {j} has degree {g.degree} > {c.degree_bound}")
    total = Polynomial()
    for g in c.squares:
        total = total + g * g
    rem = normal_form(c.target - total, ctx)
    if not rem.is_zero():
        return Verdict(False, "remainder", rem, f"nonzero remainder {rem!r}")
    return Verdict(True)


def is_idempotent(p: Polynomial, ctx: ProblemContext) -> bool:
    return normal_form(p * p - p, ctx).is_zero()


def _mono(support: Iterable[int]) -> Polynomial:
    return Polynomial.monomial(support)


def _chain_pieces(a: Sequence[int], b: Sequence[int]) -> list[Polynomial]:
    """Idempotents ``1 - x_k - x^{A_k} + x^{A_{k+1}}`` along the chain from
    ``a`` to ``b`` that adds the elements of ``b - a`` in ascending order.
    Pieces that vanish identically are dropped."""
    current = sorted(a)
    pieces = []
    for k in sorted(set(b) - set(a)):
        nxt = sorted(current + [k])
        g = 1 - Polynomial.var(k) - _mono(current) + _mono(nxt)
        if not g.is_zero():
            pieces.append(g)
        current = nxt
    return pieces


def _chain_target(a: Sequence[int], b: Sequence[int]) -> Polynomial:
    diff = set(b) - set(a)
    t = Polynomial.constant(len(diff)) - _mono(a) + _mono(b)
    for k in diff:
        t = t - Polynomial.var(k)
    return t


def _common_blocker(ctx: ProblemContext, s: Iterable[int]):
    s = frozenset(s)
    for b in ctx.blockers:
        if s <= b:
            return b
    return None


def chain_certificate(a: Iterable[int], b: Iterable[int], ctx: ProblemContext) -> Certificate:
    """Certificate for ``|B-A| - x^A + x^B - sum_{k in B-A} x_k >= 0`` with
    degree bound ``|B|``, where A and B are facet variables of one K_i."""
    a, b = sorted(set(a)), sorted(set(b))
    if not set(a) <= set(b):
        raise CertificateError("A must be a subset of B")
    if b and _common_blocker(ctx, b) is None:
        raise CertificateError("B is not contained in the facets of a single K_i")
    pieces = _chain_pieces(a, b)
    return Certificate(_chain_target(a, b), pieces, len(b), [True] * len(pieces))


def clique_certificate(h: Iterable[int], ctx: ProblemContext) -> Certificate:
    """Certificate for ``(i-1) - sum of the facet variables of H >= 0`` with
    degree bound ceil(i/2), for a K_i given by its vertices."""
    h = tuple(sorted(h))
    i = ctx.i
    if len(h) != i or not is_clique(ctx.g, h):
        raise CertificateError(f"{h} is not a K_{i} of the graph")
    facets = ctx.facets(h)
    half = ceil(i / 2)
    j, jc = facets[:half], facets[half:]
    pieces = _chain_pieces([], j) + _chain_pieces([], jc)
    pieces.append(1 - _mono(j) - _mono(jc))
    target = Polynomial.linear({k: -1 for k in facets}, i - 1)
    return Certificate(target, pieces, half, [True] * len(pieces))


def hole_rhs(i: int, p: int) -> int:
    """Right-hand side of the K_i-p-hole inequality.

    For odd p this is ((p-1)/2)(2i-3) + i - 2.  For even p the same closed
    form is fractional and cut off by an integer point, so the valid
    right-hand side p(i-1) - p/2 is used instead; both are p(i-1) - ceil(p/2).
    """
    return p * (i - 1) - (p + 1) // 2


def hole_inequality(hl: HoleLabeling, ctx: ProblemContext) -> tuple[dict[int, int], int]:
    """Unit weights on the hole's (i-1)-cliques and the right-hand side."""
    support = {ctx.var_of(c) for c in hl.shared}
    for lone in hl.lone:
        support |= {ctx.var_of(c) for c in lone}
    return {j: 1 for j in sorted(support)}, hole_rhs(hl.i, hl.p)


def hole_certificate(hl: HoleLabeling, ctx: ProblemContext) -> Certificate:
    """Degree ceil(i/2) certificate for an odd K_i-p-hole inequality.

    Each block contributes ``i-2 - sum(y) - x_l x_{l+1}`` split into two
    chains and one idempotent; what is left over, ``k - sum x_l +
    sum x_l x_{l+1}`` with p = 2k+1, is covered by two telescoping families
    of idempotents in the shared variables.
    """
    try:
        hl.validate(ctx.g)
    except ValueError as exc:
        raise CertificateError(f"invalid hole labeling: {exc}") from exc
    i, p = hl.i, hl.p
    if i != ctx.i:
        raise CertificateError(f"labeling has K_{i} blocks but the context is for K_{ctx.i}")
    if p % 2 == 0:
        raise EvenHoleError(f"no certificate construction for even p={p}")
    half = ceil(i / 2)
    xs = [ctx.var_of(c) for c in hl.shared]
    pieces: list[Polynomial] = []
    for l in range(p):
        xl, xn = xs[l], xs[(l + 1) % p]
        ys = sorted(ctx.var_of(c) for c in hl.lone[l])
        j1, j2 = ys[:half - 2], ys[half - 2:]
        base = sorted({xl, xn})
        pieces += _chain_pieces(base, base + j1)
        pieces += _chain_pieces([], j2)
        pieces.append(1 - _mono(base + j1) - _mono(j2))

    k = (p - 1) // 2
    x = lambda t: Polynomial.var(xs[t - 1])  # 1-based, as in the cyclic labeling
    for l in range(1, k + 1):
        a, b, c = x(2 * l - 1), x(2 * l), x(2 * l + 1)
        pieces.append(1 - a - b - c + a * b + a * c + b * c)
    for l in range(2, k + 1):
        a, c = x(2 * l - 1), x(2 * l + 1)
        pieces.append(a - a * x(1) - a * c + c * x(1))

    weights, rhs = hole_inequality(hl, ctx)
    target = Polynomial.linear({j: -1 for j in weights}, rhs)
    return Certificate(target, pieces, half, [True] * len(pieces))
