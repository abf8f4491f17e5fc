"""Multilinear polynomials with exact rational coefficients.

A monomial is identified with its support, a frozenset of variable indices, so
``x_0 * x_0`` is ``x_0``: products of monomials take the union of supports.
This already quotients by the relations ``x_j^2 - x_j``; reduction by the
remaining generators of the ideal lives in :mod:`kicover.ideal`.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

Support = frozenset


class Polynomial:
    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Iterable[int], object] | None = None):
        acc: dict[frozenset, Fraction] = {}
        for support, coeff in (terms or {}).items():
            key = frozenset(support)
            acc[key] = acc.get(key, Fraction(0)) + Fraction(coeff)
        self.terms = {s: c for s, c in acc.items() if c != 0}

    @classmethod
    def _raw(cls, terms: dict) -> "Polynomial":
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls({(): c})

    @classmethod
    def var(cls, j: int) -> "Polynomial":
        return cls({(j,): 1})

    @classmethod
    def monomial(cls, support: Iterable[int], coeff=1) -> "Polynomial":
        return cls({tuple(support): coeff})

    @classmethod
    def linear(cls, coeffs: Mapping[int, object], const=0) -> "Polynomial":
        terms = {(j,): c for j, c in coeffs.items()}
        terms[()] = const
        return cls(terms)

    @property
    def degree(self) -> float:
        if not self.terms:
            return float("-inf")
        return max(len(s) for s in self.terms)

    @property
    def variables(self) -> set[int]:
        out: set[int] = set()
        for s in self.terms:
            out |= s
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, support: Iterable[int]) -> Fraction:
        return self.terms.get(frozenset(support), Fraction(0))

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Rational)):
            return Polynomial.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for s, c in other.terms.items():
            v = out.get(s, 0) + c
            if v:
                out[s] = v
            else:
                out.pop(s, None)
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({s: -c for s, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        out: dict[frozenset, Fraction] = {}
        for s1, c1 in self.terms.items():
            for s2, c2 in other.terms.items():
                s = s1 | s2
                out[s] = out.get(s, 0) + c1 * c2
        return Polynomial._raw({s: c for s, c in out.items() if c})

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c) -> "Polynomial":
        c = Fraction(c)
        if c == 0:
            return Polynomial()
        return Polynomial._raw({s: v * c for s, v in self.terms.items()})

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def evaluate(self, point: Mapping[int, object] | Iterable[int]) -> Fraction:
        """Evaluate at a point given as ``{var: value}`` or as the set of
        variables equal to 1 (all others 0)."""
        if isinstance(point, Mapping):
            total = Fraction(0)
            for s, c in self.terms.items():
                term = c
                for j in s:
                    term *= Fraction(point.get(j, 0))
                    if not term:
                        break
                total += term
            return total
        ones = frozenset(point)
        return sum((c for s, c in self.terms.items() if s <= ones), Fraction(0))

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms ordered by (degree, lexicographic support)."""
        items = [(tuple(sorted(s)), c) for s, c in self.terms.items()]
        items.sort(key=lambda t: (len(t[0]), t[0]))
        return items

    def to_json(self) -> list[list]:
        return [[list(s), c.numerator, c.denominator] for s, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data) -> "Polynomial":
        terms: dict = {}
        for support, num, den in data:
            key = tuple(int(j) for j in support)
            if len(set(key)) != len(key):
                raise ValueError(f"repeated variable in support {support}")
            terms[key] = Fraction(terms.get(key, 0)) + Fraction(int(num), int(den))
        return cls(terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for s, c in self.sorted_terms():
            mono = "*".join(f"x{j}" for j in s)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")
