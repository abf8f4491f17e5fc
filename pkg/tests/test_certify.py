import json
import random
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from kicover.certify import (Certificate, CertificateError, EvenHoleError, chain_certificate,
                             clique_certificate, hole_certificate, hole_inequality, hole_rhs,
                             is_idempotent, verify_certificate)
from kicover.graph import complete_graph, cycle_graph, wheel_hole
from kicover.ideal import build_context, enumerate_variety, normal_form
from kicover.poly import Polynomial

from oracles import brute_max_free

x = Polynomial.var


def ctx_k(n, i=None):
    return build_context(complete_graph(n), n if i is None else i)


def points(ctx, limit=6, samples=1000, seed=0):
    """All free sets for small contexts, otherwise random maximal-ish free sets."""
    if ctx.nvars <= limit:
        return [set(s) for s in enumerate_variety(ctx, ctx.nvars).elements]
    rng = random.Random(seed)
    out = [set()]
    for _ in range(samples):
        order = list(range(ctx.nvars))
        rng.shuffle(order)
        s: set[int] = set()
        stop = rng.randrange(ctx.nvars + 1)
        for j in order[:stop]:
            if ctx.is_free(s | {j}):
                s.add(j)
        out.append(s)
    return out


def assert_semantically_sound(cert, ctx):
    for s in points(ctx):
        lhs = cert.target.evaluate(s)
        vals = [g.evaluate(s) for g in cert.squares]
        assert lhs >= 0
        assert lhs == sum(v * v for v in vals)
        assert all(v in (0, 1) for v in vals)


# polynomial arithmetic

def test_poly_sum_collapses():
    assert (1 - x(0)) + x(0) == Polynomial.constant(1)


def test_poly_product_unions_supports():
    assert x(0) * x(0) == x(0)
    assert (x(0) * x(1)).terms == {frozenset({0, 1}): 1}


def test_poly_square_of_two_factor_product():
    # (1 - a)(1 - b) squared: every cross term lands on a, b or ab
    q = 1 - x(0) - x(1) + x(0) * x(1)
    assert q * q == q


def test_poly_degree_and_zero():
    assert Polynomial().degree == float("-inf")
    assert Polynomial.constant(3).degree == 0
    assert (x(0) * x(2) + 1).degree == 2
    assert (x(0) - x(0)).is_zero()


def test_poly_scale_and_fractions():
    p = Polynomial.linear({0: 1, 1: -2}, Fraction(1, 3))
    assert p.scale(3) == Polynomial.linear({0: 3, 1: -6}, 1)
    assert p.coefficient(()) == Fraction(1, 3)
    assert p.evaluate({0: 1, 1: Fraction(1, 2)}) == Fraction(1, 3)


def test_poly_json_round_trip():
    p = Polynomial({(): 2, (0, 3): Fraction(-1, 4), (1,): 1})
    assert Polynomial.from_json(json.loads(json.dumps(p.to_json()))) == p


def test_poly_json_rejects_repeated_variable():
    with pytest.raises(ValueError):
        Polynomial.from_json([[[1, 1], 1, 1]])


def test_poly_repr():
    assert repr(4 - x(0) - x(1)) == "4 - x0 - x1"


small_polys = st.dictionaries(st.frozensets(st.integers(0, 3), max_size=3),
                              st.integers(-3, 3), max_size=4).map(Polynomial)


@given(small_polys, small_polys, small_polys)
@settings(max_examples=60, deadline=None)
def test_poly_ring_laws(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert (p - q) + q == p


@given(small_polys, st.sets(st.integers(0, 3)))
@settings(max_examples=60, deadline=None)
def test_poly_evaluation_is_a_homomorphism_on_cube(p, s):
    q = p + x(1)
    assert (p * q).evaluate(s) == p.evaluate(s) * q.evaluate(s)


# idempotents

def test_chain_piece_is_idempotent():
    ctx = ctx_k(3)
    g = 1 - x(1) - x(0) + x(0) * x(1)
    assert is_idempotent(g, ctx)


@pytest.mark.parametrize("i", [3, 4, 5])
def test_clique_split_is_idempotent(i):
    ctx = ctx_k(i)
    facets = ctx.facets(tuple(range(i)))
    half = (i + 1) // 2
    h = 1 - Polynomial.monomial(facets[:half]) - Polynomial.monomial(facets[half:])
    assert is_idempotent(h, ctx)


def test_sum_of_free_variables_not_idempotent():
    assert not is_idempotent(x(0) + x(1), ctx_k(3))


# chain certificates

def test_chain_trivial_is_empty():
    c = chain_certificate([], [0], ctx_k(3))
    assert c.target.is_zero() and c.squares == []
    assert verify_certificate(c, ctx_k(3))


def test_chain_k3_pair():
    ctx = ctx_k(3)
    c = chain_certificate([], [0, 1], ctx)
    assert c.target == 1 + x(0) * x(1) - x(0) - x(1)
    assert c.squares == [1 - x(1) - x(0) + x(0) * x(1)]
    assert c.degree_bound == 2
    assert verify_certificate(c, ctx, affine=False)
    assert verify_certificate(c, ctx).condition == "affine"


def test_chain_k4_three_facets():
    ctx = ctx_k(4)
    a, b = ctx.facets((0, 1, 2, 3))[:1], ctx.facets((0, 1, 2, 3))[:3]
    c = chain_certificate(a, b, ctx)
    x1, x2, x3 = (x(j) for j in b)
    assert c.target == 2 - x1 + x1 * x2 * x3 - x2 - x3
    assert c.degree_bound == 3
    assert verify_certificate(c, ctx, affine=False)


def test_chain_errors():
    ctx = ctx_k(4, 3)
    with pytest.raises(CertificateError):
        chain_certificate([0, 1], [0], ctx)
    # edges (0,1) and (2,3) share no triangle
    with pytest.raises(CertificateError):
        chain_certificate([], [ctx.var_of((0, 1)), ctx.var_of((2, 3))], ctx)


@given(st.integers(3, 5).flatmap(
    lambda i: st.tuples(st.just(i), st.sets(st.integers(0, i - 1)), st.sets(st.integers(0, i - 1)))))
@settings(max_examples=40, deadline=None)
def test_chain_telescopes(args):
    i, a, extra = args
    ctx = ctx_k(i)
    facets = ctx.facets(tuple(range(i)))
    a = [facets[j] for j in a]
    b = sorted(set(a) | {facets[j] for j in extra})
    c = chain_certificate(a, b, ctx)
    total = sum(c.squares, Polynomial())
    assert normal_form(total - c.target, ctx).is_zero()
    assert verify_certificate(c, ctx, affine=False)
    assert all(g.degree <= len(b) for g in c.squares)


# clique certificates

@pytest.mark.parametrize("i", [2, 3, 4, 5, 6])
def test_clique_certificate_accepts(i):
    ctx = ctx_k(i)
    c = clique_certificate(range(i), ctx)
    assert c.degree_bound == (i + 1) // 2
    assert c.target == Polynomial.linear({j: -1 for j in range(ctx.nvars)}, i - 1)
    assert verify_certificate(c, ctx)
    assert_semantically_sound(c, ctx)


def test_clique_certificate_in_k4_triangle_context():
    ctx = ctx_k(4, 3)
    for h in combinations(range(4), 3):
        c = clique_certificate(h, ctx)
        assert c.degree_bound == 2 and verify_certificate(c, ctx)
    assert_semantically_sound(clique_certificate((0, 1, 2), ctx), ctx)


def test_clique_certificate_rejects_non_clique():
    with pytest.raises(CertificateError):
        clique_certificate((0, 1, 2), build_context(cycle_graph(5), 3))


# verifier rejections

def test_verifier_rejects_low_degree_bound():
    ctx = ctx_k(4, 3)
    c = clique_certificate((0, 1, 2), ctx)
    v = verify_certificate(Certificate(c.target, c.squares, 1), ctx)
    assert not v and v.condition == "degree"


def test_verifier_rejects_perturbed_coefficient():
    ctx = ctx_k(4, 3)
    c = clique_certificate((0, 1, 2), ctx)
    g0 = c.squares[0] + Fraction(1, 1000)
    v = verify_certificate(Certificate(c.target, [g0] + c.squares[1:], c.degree_bound), ctx)
    assert not v and v.condition == "remainder"
    assert v.remainder is not None and not v.remainder.is_zero()


def test_verifier_rejects_nonaffine_target():
    ctx = ctx_k(3)
    v = verify_certificate(Certificate(x(0) * x(1), [], 2), ctx)
    assert not v and v.condition == "affine"


# hole certificates

@pytest.mark.parametrize("i, p, rhs", [(3, 5, 7), (3, 3, 4), (4, 3, 7), (4, 5, 12),
                                       (5, 5, 17), (6, 7, 31), (3, 9, 13)])
def test_hole_certificate_accepts(i, p, rhs):
    g, hl = wheel_hole(i, p)
    ctx = build_context(g, i)
    c = hole_certificate(hl, ctx)
    weights, r = hole_inequality(hl, ctx)
    assert r == rhs == hole_rhs(i, p) == (p - 1) // 2 * (2 * i - 3) + i - 2
    assert c.target == Polynomial.linear({j: -w for j, w in weights.items()}, rhs)
    assert c.degree_bound == (i + 1) // 2
    assert verify_certificate(c, ctx)
    assert_semantically_sound(c, ctx)


@pytest.mark.parametrize("i, p", [(3, 3), (3, 5), (4, 3)])
def test_hole_tightness(i, p):
    g, hl = wheel_hole(i, p)
    assert brute_max_free(g, i) == hole_rhs(i, p)


@pytest.mark.parametrize("i, p", [(3, 4), (4, 6)])
def test_hole_even_is_rejected_distinctly(i, p):
    g, hl = wheel_hole(i, p)
    with pytest.raises(EvenHoleError):
        hole_certificate(hl, build_context(g, i))


def test_even_hole_rhs_is_valid_and_tight():
    g, hl = wheel_hole(3, 4)
    assert brute_max_free(g, 3) == hole_rhs(3, 4) == 6


def test_hole_rejects_wrong_context():
    g, hl = wheel_hole(4, 5)
    with pytest.raises(CertificateError):
        hole_certificate(hl, build_context(g, 3))


# JSON

@pytest.mark.parametrize("make", [
    lambda: (clique_certificate(range(4), ctx_k(4)), ctx_k(4)),
    lambda: (hole_certificate(wheel_hole(3, 5)[1], build_context(wheel_hole(3, 5)[0], 3)),
             build_context(wheel_hole(3, 5)[0], 3)),
])
def test_certificate_json_round_trip(make):
    c, ctx = make()
    text = c.dumps()
    assert set(json.loads(text)) == {"degree_bound", "target", "squares"}
    back = Certificate.from_json(json.loads(text))
    assert back.target == c.target and back.squares == c.squares
    assert back.dumps() == text
    assert verify_certificate(back, ctx)


def test_certificate_json_supports_are_ascending():
    c = clique_certificate(range(5), ctx_k(5))
    for poly in [c.target.to_json()] + [g.to_json() for g in c.squares]:
        for support, _, den in poly:
            assert support == sorted(support) and den > 0


def test_certificate_from_bad_json():
    with pytest.raises(ValueError):
        Certificate.from_json({"target": []})
