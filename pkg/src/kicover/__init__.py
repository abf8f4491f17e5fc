"""Theta-body relaxations of the K_i-free / K_i-cover problem.

Submodules: :mod:`graph` (graphs, hole generators, cliques), :mod:`ideal`
(free-set variety and normal forms), :mod:`poly` and :mod:`certify` (exact
sum-of-squares certificates), :mod:`moment` (reduced moment matrices),
:mod:`solve` (interior-point SDP/LP engine) and :mod:`exact` (brute-force
oracles).
"""

__version__ = "0.1.0"

from .graph import (Graph, HoleLabeling, complete_graph, cycle_graph, enumerate_cliques,
                    parse_graph, random_graph, serialize_graph, wheel_hole)
from .ideal import ProblemContext, VarietyTable, build_context, enumerate_variety, normal_form
from .poly import Polynomial
from .certify import (Certificate, chain_certificate, clique_certificate, hole_certificate,
                      hole_inequality, hole_rhs, is_idempotent, verify_certificate)
from .moment import MomentMatrixSpec, build_moment_spec, coefficient_matrices
from .solve import (LPResult, SDPResult, SolverOptions, frac_optimize, nu_star, tau_dagger,
                    tau_star, theta_optimize)
from .exact import check_facet, check_valid, max_free, min_cover, nu, tau
