"""
The reduced moment matrix of a triangle
=======================================

Edges of K3 are the variables A, B, C.  Every set that avoids the whole
triangle is a point of the variety, and the level-2 moment matrix indexes
its rows by those points.
"""

from kicover import build_context, build_moment_spec, complete_graph, enumerate_variety

ctx = build_context(complete_graph(3), 3)
print("variables:", ctx.vars)
print("blockers:", [sorted(b) for b in ctx.blockers])

###############################################################################
# Points of the variety up to size 2, in (size, lex) order.  Their positions
# are the labels y_0 .. y_6 used in the matrix below.

table = enumerate_variety(ctx, 2)
for label, s in enumerate(table.elements):
    print(f"y_{label} <-> {set(s) or '{}'}")

###############################################################################
# Entry (X, Y) holds y of X|Y, or 0 when X|Y would contain the triangle.

spec = build_moment_spec(ctx, 2)
print(spec.symbolic_text())

###############################################################################
# Every free set S gives a rank-one point of the relaxation.

import numpy as np

s = (0, 1)
m = spec.evaluate(spec.rank_one_moments(s))
print("rank of M(y(S)) for S =", s, "is", np.linalg.matrix_rank(m))
