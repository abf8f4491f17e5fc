import random
from fractions import Fraction
from itertools import combinations

import pytest

from kicover.certify import hole_inequality, hole_rhs
from kicover.exact import (SearchTooLarge, check_facet, check_valid, max_free, min_cover, nu,
                           tau, tight_free_sets, unit_inequality)
from kicover.graph import Graph, complete_graph, cycle_graph, random_graph, wheel_hole
from kicover.ideal import build_context

from oracles import brute_cliques, brute_free_sets, brute_max_free


def ctx3(g):
    return build_context(g, 3)


def test_max_free_k3():
    r = max_free(ctx3(complete_graph(3)))
    assert r.value == 2 and r.witness == (0, 1)


@pytest.mark.parametrize("g, value", [(complete_graph(5), 6), (wheel_hole(3, 5)[0], 7),
                                      (complete_graph(4), 4), (cycle_graph(5), 5)])
def test_max_free_examples(g, value):
    r = max_free(ctx3(g))
    assert r.value == value == brute_max_free(g, 3)
    assert ctx3(g).is_free(r.witness) and len(r.witness) == value


@pytest.mark.parametrize("g, value", [(complete_graph(3), 1), (complete_graph(4), 2),
                                      (complete_graph(5), 4)])
def test_min_cover_examples(g, value):
    ctx = ctx3(g)
    r = min_cover(ctx)
    assert r.value == value
    rest = tuple(j for j in range(ctx.nvars) if j not in r.witness)
    assert ctx.is_free(rest)


@pytest.mark.parametrize("seed", range(10))
def test_lexicographically_least_witness(seed):
    g = random_graph(6, "3/5", seed)
    ctx = ctx3(g)
    rng = random.Random(seed)
    w = [Fraction(rng.randrange(0, 4)) for _ in range(ctx.nvars)]
    r = max_free(ctx, w)
    optimal = sorted(tuple(sorted(s)) for s in brute_free_sets(g, 3)
                     if sum((w[j] for j in s), Fraction(0)) == r.value)
    assert r.witness == optimal[0]
    assert r.value == brute_max_free(g, 3, w)


def test_complementarity_random_instances():
    rng = random.Random(2024)
    for trial in range(200):
        n = rng.randrange(3, 8)
        g = random_graph(n, f"{rng.randrange(1, 5)}/5", trial)
        i = rng.choice((2, 3, 4))
        ctx = build_context(g, i)
        if ctx.nvars > 20:
            continue
        w = [Fraction(rng.randrange(-2, 7), rng.randrange(1, 4)) for _ in range(ctx.nvars)]
        top, cov = max_free(ctx, w), min_cover(ctx, w)
        assert top.value + cov.value == sum(w, Fraction(0))
        assert set(top.witness).isdisjoint(cov.witness)
        assert set(top.witness) | set(cov.witness) == set(range(ctx.nvars))


@pytest.mark.parametrize("g, t, n", [(complete_graph(4), 2, 1), (complete_graph(5), 4, 2),
                                     (cycle_graph(6), 0, 0), (complete_graph(6), 6, 4)])
def test_tau_nu_examples(g, t, n):
    rt, rn = tau(g), nu(g)
    assert (rt.value, rn.value) == (t, n)
    edges = set(rt.witness)
    assert all(any(e in edges for e in combinations(tri, 2)) for tri in brute_cliques(g, 3))
    assert all(len(set(combinations(a, 2)) & set(combinations(b, 2))) == 0
               for a, b in combinations(rn.witness, 2))


def _brute_nu(g):
    tris = brute_cliques(g, 3)
    best = 0
    for mask in range(1 << len(tris)):
        pick = [t for j, t in enumerate(tris) if mask >> j & 1]
        used = [e for t in pick for e in combinations(t, 2)]
        if len(used) == len(set(used)):
            best = max(best, len(pick))
    return best


@pytest.mark.parametrize("seed", range(12))
def test_tau_nu_random(seed):
    g = random_graph(7, "1/2", seed)
    t, n = tau(g).value, nu(g).value
    assert n == _brute_nu(g)
    assert t == g.m - brute_max_free(g, 3)
    if n:
        assert n <= t <= 3 * n


def test_check_valid_examples():
    ctx = ctx3(complete_graph(4))
    w, rhs = unit_inequality(ctx.facets((0, 1, 2)), 2, ctx)
    assert check_valid(w, rhs, ctx)
    g, hl = wheel_hole(3, 5)
    hctx = ctx3(g)
    weights, rhs = hole_inequality(hl, hctx)
    vec = [weights.get(j, 0) for j in range(hctx.nvars)]
    assert check_valid(vec, 7, hctx)
    assert not check_valid(vec, 6, hctx)


def test_tight_sets_attain_rhs():
    g, hl = wheel_hole(3, 5)
    ctx = ctx3(g)
    sets = tight_free_sets([1] * ctx.nvars, 7, ctx)
    expect = [tuple(sorted(s)) for s in brute_free_sets(g, 3) if len(s) == 7]
    assert sorted(sets) == sorted(expect)


@pytest.mark.parametrize("i, p, facet", [(3, 5, True), (3, 7, True), (4, 5, True),
                                         (3, 4, False), (4, 4, False)])
def test_hole_facets(i, p, facet):
    g, hl = wheel_hole(i, p)
    ctx = build_context(g, i)
    weights, rhs = hole_inequality(hl, ctx)
    vec = [weights.get(j, 0) for j in range(ctx.nvars)]
    assert check_valid(vec, rhs, ctx)
    assert check_facet(vec, rhs, ctx) is facet


@pytest.mark.parametrize("i", [3, 4])
def test_clique_inequality_is_facet(i):
    ctx = build_context(complete_graph(i), i)
    assert check_facet([1] * ctx.nvars, i - 1, ctx)


def test_box_inequality_facet_on_c5():
    ctx = ctx3(cycle_graph(5))
    w, rhs = unit_inequality([0], 1, ctx)
    assert check_facet(w, rhs, ctx)


def test_invalid_inequality_is_not_facet():
    ctx = ctx3(complete_graph(4))
    w, _ = unit_inequality(ctx.facets((0, 1, 2)), 0, ctx)
    assert not check_facet(w, 1, ctx)


def test_size_guards():
    big = build_context(complete_graph(9), 3)   # 36 edge variables
    with pytest.raises(SearchTooLarge, match="36"):
        max_free(big)
    k8 = build_context(complete_graph(8), 3)   # 28 variables: searchable, too many for facets
    with pytest.raises(SearchTooLarge):
        check_facet([1] * k8.nvars, 16, k8)
    assert max_free(k8).value == 16
    with pytest.raises(SearchTooLarge):
        nu(complete_graph(13))   # 286 triangles


def test_weight_length_checked():
    with pytest.raises(ValueError):
        max_free(ctx3(complete_graph(3)), [1, 2])


def test_empty_graph():
    g = Graph.from_edges(4, [])
    assert tau(g).value == 0 and nu(g).value == 0


def test_three_hole_tight_sets_are_the_four_cycles():
    # wheel(3, 3) is K4; its 4-edge triangle-free subgraphs are the three 4-cycles,
    # whose affine hull has dimension 2, far short of a facet in 6 variables
    g, _ = wheel_hole(3, 3)
    ctx = ctx3(g)
    sets = tight_free_sets([1] * ctx.nvars, hole_rhs(3, 3), ctx)
    assert len(sets) == 3
    for s in sets:
        degrees = [sum(v in ctx.vars[j] for j in s) for v in range(4)]
        assert degrees == [2, 2, 2, 2]
    assert not check_facet([1] * ctx.nvars, hole_rhs(3, 3), ctx)
