"""
Exact sum-of-squares certificates
=================================

Certificates are lists of idempotent polynomials.  The verifier squares
each one, subtracts from the target and reduces modulo the ideal; the
certificate is accepted only when the remainder is exactly zero.
"""

from fractions import Fraction

from kicover import (Certificate, build_context, clique_certificate, complete_graph,
                     hole_certificate, verify_certificate, wheel_hole)

###############################################################################
# Clique inequality on K4 with i = 4: the four triangle variables sum to
# at most 3, certified at degree 2.

ctx = build_context(complete_graph(4), 4)
cert = clique_certificate(range(4), ctx)
print("target:", cert.target)
for g in cert.squares:
    print("  square of", g)
print(verify_certificate(cert, ctx))

###############################################################################
# The 5-wheel carries an odd hole of triangles.  Its inequality has
# right-hand side 7, again certified at degree 2.

g, labeling = wheel_hole(3, 5)
hctx = build_context(g, 3)
hole = hole_certificate(labeling, hctx)
print("hole target:", hole.target)
print("squares:", len(hole.squares), "degree bound:", hole.degree_bound)
print(verify_certificate(hole, hctx))

###############################################################################
# Nudging one coefficient breaks exactness; the verifier reports the
# leftover polynomial.

bad = Certificate(hole.target, [hole.squares[0] + Fraction(1, 1000)] + hole.squares[1:],
                  hole.degree_bound)
verdict = verify_certificate(bad, hctx)
print(verdict.accepted, verdict.condition, verdict.remainder)
