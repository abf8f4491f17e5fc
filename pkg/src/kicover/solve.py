"""Optimization over theta bodies and the fractional LP relaxations.

Everything numerical goes through one dense primal-dual interior-point
method for linear matrix inequalities

    maximize  b'y   subject to   Z = C - sum_i y_i A_i  is PSD,

whose primal is ``min <C, X>`` s.t. ``<A_i, X> = b_i``, ``X`` PSD.  Search
directions are HKM with a Mehrotra predictor-corrector.  The method starts
from a strictly feasible ``y`` and keeps ``Z`` equal to ``C - A*(y)``
throughout, so every returned ``y`` is feasible up to eigenvalue rounding
and the reported objective is an honest bound from the feasible side.

LPs are the diagonal special case: ``Z = diag(h - Gx, x, 1 - x)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .graph import Graph, enumerate_cliques
from .ideal import ProblemContext, build_context
from .linalg import RowEchelon, solve_square
from .moment import ZERO, MomentMatrixSpec, build_moment_spec

log = logging.getLogger(__name__)

OPTIMAL = "optimal"
MAX_ITERATIONS = "max_iterations"
INFEASIBLE_NUMERICS = "infeasible_numerics"


class SolverFailure(RuntimeError):
    """Raised by callers that require an optimal status."""


@dataclass
class SolverOptions:
    tol: float = 1e-7        # relative duality gap
    feas_tol: float = 1e-8
    max_iter: int = 500
    verbose: bool = False

    @classmethod
    def from_dict(cls, d: dict | None) -> "SolverOptions":
        d = dict(d or {})
        unknown = set(d) - {"tol", "feas_tol", "max_iter", "verbose"}
        if unknown:
            raise ValueError(f"unknown solver options: {sorted(unknown)}")
        return cls(**d)


@dataclass
class EngineResult:
    status: str
    y: np.ndarray
    X: np.ndarray
    Z: np.ndarray
    primal_objective: float
    dual_objective: float
    gap: float
    iterations: int
    trace: list[dict] = field(default_factory=list)


@dataclass
class SDPResult:
    status: str
    value: float
    y: np.ndarray
    projected_x: np.ndarray
    min_eigenvalue: float
    duality_gap_estimate: float
    iterations: int
    trace: list[dict] = field(default_factory=list, repr=False)

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "value": float(self.value),
            "projected_x": [float(v) for v in self.projected_x],
            "min_eigenvalue": float(self.min_eigenvalue),
            "gap": float(self.duality_gap_estimate),
            "iterations": self.iterations,
        }


@dataclass
class LPResult:
    status: str
    value: float
    x: np.ndarray
    exact_x: list[Fraction] | None = None
    exact_value: Fraction | None = None
    verified: bool = False
    iterations: int = 0

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "value": float(self.value),
            "x": [float(v) for v in self.x],
            "verified": self.verified,
            "exact_value": None if self.exact_value is None else str(self.exact_value),
            "iterations": self.iterations,
        }


class LMI:
    """``C - sum_i y_i A_i`` with sparse symmetric ``A_i``.

    ``terms[i]`` is ``(rows, cols, vals)`` listing every stored entry of
    ``A_i`` (both triangles).
    """

    def __init__(self, C: np.ndarray, terms: Sequence[tuple], b: np.ndarray):
        self.C = np.asarray(C, dtype=float)
        self.n = self.C.shape[0]
        self.b = np.asarray(b, dtype=float)
        self.m = len(terms)
        if self.b.shape != (self.m,):
            raise ValueError(f"objective has {self.b.shape[0]} entries, expected {self.m}")
        self.terms = [(np.asarray(r), np.asarray(c), np.asarray(v, dtype=float))
                      for r, c, v in terms]
        rr = np.concatenate([t[0] for t in self.terms]) if self.terms else np.zeros(0, int)
        cc = np.concatenate([t[1] for t in self.terms]) if self.terms else np.zeros(0, int)
        vv = np.concatenate([t[2] for t in self.terms]) if self.terms else np.zeros(0)
        owner = np.repeat(np.arange(self.m), [len(t[0]) for t in self.terms])
        self.avec = sp.csc_matrix((vv, (rr * self.n + cc, owner)), shape=(self.n * self.n, self.m))
        self.avec_t = self.avec.T.tocsr()

    def op(self, X: np.ndarray) -> np.ndarray:
        return self.avec_t @ X.ravel()

    def adj(self, y: np.ndarray) -> np.ndarray:
        return (self.avec @ y).reshape(self.n, self.n)

    def slack(self, y: np.ndarray) -> np.ndarray:
        return self.C - self.adj(y)

    def schur(self, X: np.ndarray, Zinv: np.ndarray) -> np.ndarray:
        """``M_ij = <A_i, X A_j Zinv>``."""
        n, m = self.n, self.m
        M = np.empty((m, m))
        chunk = max(1, int(4e6 // max(n * n, 1)))
        for start in range(0, m, chunk):
            stop = min(m, start + chunk)
            block = np.empty((n * n, stop - start))
            for col, j in enumerate(range(start, stop)):
                r, c, v = self.terms[j]
                block[:, col] = (X[:, r] @ (v[:, None] * Zinv[c, :])).ravel()
            M[:, start:stop] = self.avec_t @ block
        return 0.5 * (M + M.T)


def _max_step(S: np.ndarray, D: np.ndarray) -> float:
    L = np.linalg.cholesky(S)
    W = sla.solve_triangular(L, D, lower=True)
    W = sla.solve_triangular(L, W.T, lower=True)
    lam = np.linalg.eigvalsh(0.5 * (W + W.T))[0]
    return np.inf if lam >= 0 else -1.0 / lam


def _is_pd(S: np.ndarray) -> bool:
    try:
        np.linalg.cholesky(S)
        return True
    except np.linalg.LinAlgError:
        return False


def solve_lmi(lmi: LMI, y0: np.ndarray, opts: SolverOptions | None = None) -> EngineResult:
    """Maximize ``b'y`` over ``C - A*(y)`` PSD, starting from a strictly
    feasible ``y0``."""
    opts = opts or SolverOptions()
    n, m, b, C = lmi.n, lmi.m, lmi.b, lmi.C
    y = np.array(y0, dtype=float)
    Z = lmi.slack(y)
    if not _is_pd(Z):
        raise ValueError("starting point is not strictly feasible")
    if m == 0:
        return EngineResult(OPTIMAL, y, np.zeros((n, n)), Z, 0.0, 0.0, 0.0, 0)

    norms = np.sqrt(np.asarray(lmi.avec.multiply(lmi.avec).sum(axis=0)).ravel())
    xi = max(10.0, np.sqrt(n), n * float(np.max((1 + np.abs(b)) / (1 + norms))))
    X = xi * np.eye(n)
    nb = 1 + np.linalg.norm(b)
    trace: list[dict] = []
    status = MAX_ITERATIONS
    it = 0
    pobj = dobj = gap = np.nan

    for it in range(opts.max_iter + 1):
        rp = b - lmi.op(X)
        pobj = float(np.vdot(C, X))
        dobj = float(b @ y)
        gap = float(np.vdot(X, Z))
        relgap = gap / (1 + abs(pobj) + abs(dobj))
        pinf = np.linalg.norm(rp) / nb
        trace.append({"iter": it, "pobj": pobj, "dobj": dobj, "gap": gap,
                      "relgap": relgap, "pinf": pinf})
        if opts.verbose:
            log.info("iter %3d  pobj %+.10e  dobj %+.10e  relgap %.2e  pinf %.2e",
                     it, pobj, dobj, relgap, pinf)
        if relgap < opts.tol and pinf < opts.feas_tol:
            status = OPTIMAL
            break
        if it == opts.max_iter:
            break

        try:
            Zinv = sla.cho_solve(sla.cho_factor(Z, lower=True), np.eye(n))
        except (np.linalg.LinAlgError, sla.LinAlgError):
            status = INFEASIBLE_NUMERICS
            break
        Zinv = 0.5 * (Zinv + Zinv.T)
        M = lmi.schur(X, Zinv)
        try:
            Mf = sla.cho_factor(M, lower=True)
        except (np.linalg.LinAlgError, sla.LinAlgError):
            ridge = 1e-13 * max(1.0, float(np.max(np.abs(np.diag(M)))))
            try:
                Mf = sla.cho_factor(M + ridge * np.eye(m), lower=True)
            except (np.linalg.LinAlgError, sla.LinAlgError):
                status = INFEASIBLE_NUMERICS
                break

        def solveM(r):
            return sla.cho_solve(Mf, r)

        mu = gap / n
        XZ = X @ Z

        def direction(rc):
            # rc = sigma*mu*I - XZ - correction; Rd = 0 since Z tracks y exactly
            rhs = rp - lmi.op(rc @ Zinv)
            dy = solveM(rhs)
            dZ = -lmi.adj(dy)
            dX = (rc - X @ dZ) @ Zinv
            return dy, 0.5 * (dX + dX.T), dZ

        I = np.eye(n)
        dy_a, dX_a, dZ_a = direction(-XZ)
        try:
            ap = min(1.0, _max_step(X, dX_a))
            ad = min(1.0, _max_step(Z, dZ_a))
        except np.linalg.LinAlgError:
            status = INFEASIBLE_NUMERICS
            break
        mu_aff = float(np.vdot(X + ap * dX_a, Z + ad * dZ_a)) / n
        sigma = min(1.0, max(0.0, mu_aff / mu)) ** 3

        dy, dX, dZ = direction(sigma * mu * I - XZ - dX_a @ dZ_a)
        try:
            ap = _max_step(X, dX)
            ad = _max_step(Z, dZ)
        except np.linalg.LinAlgError:
            status = INFEASIBLE_NUMERICS
            break
        gamma = 0.9 + 0.09 * min(1.0, ap, ad)
        ap = min(1.0, gamma * ap)
        ad = min(1.0, gamma * ad)

        X_new = X + ap * dX
        y_new = y + ad * dy
        Z_new = lmi.slack(y_new)
        while not _is_pd(Z_new) and ad > 1e-12:
            ad *= 0.5
            y_new = y + ad * dy
            Z_new = lmi.slack(y_new)
        if not _is_pd(Z_new) or not _is_pd(X_new):
            status = INFEASIBLE_NUMERICS
            break
        X, y, Z = X_new, y_new, Z_new

    return EngineResult(status, y, X, Z, pobj, dobj, gap, it, trace)


# ---------------------------------------------------------------- theta bodies

def _interior_moments(spec: MomentMatrixSpec) -> np.ndarray:
    """``y_X = rho^|X|`` with rho picked by bisection so that M(y) is PD."""
    sizes = np.array([len(x) for x in spec.var_index.elements], dtype=float)

    def lam_min(rho):
        return np.linalg.eigvalsh(spec.evaluate(rho ** sizes))[0]

    lo, hi = 0.0, 1.0
    if lam_min(hi) > 0:
        lo = hi
    else:
        for _ in range(40):
            mid = 0.5 * (lo + hi)
            if lam_min(mid) > 0:
                lo = mid
            else:
                hi = mid
    rho = 0.5 * lo
    while rho > 1e-12 and lam_min(rho) <= 0:
        rho *= 0.5
    return rho ** sizes


def theta_lmi(spec: MomentMatrixSpec, objective: np.ndarray) -> LMI:
    """Moment variable 0 (the empty set) is fixed to 1 and lives in ``C``."""
    pos = spec.positions()
    C = np.zeros((spec.dim, spec.dim))
    C[pos[0]] = 1.0
    terms = [(r, c, -np.ones(len(r))) for r, c in pos[1:]]
    return LMI(C, terms, objective[1:])


def theta_optimize(spec: MomentMatrixSpec, weights=None, sense: str = "max",
                   opts: SolverOptions | None = None) -> SDPResult:
    """Optimize ``sum_j w_j x_j`` over the k-th theta body of the context.

    ``weights`` default to 1 on every variable.  The returned value is the
    objective at a feasible moment vector, within ``opts.tol`` (relative) of
    the optimum when the status is ``optimal``.
    """
    opts = opts or SolverOptions()
    nv = spec.ctx.nvars
    w = np.ones(nv) if weights is None else np.array([float(Fraction(v)) for v in weights])
    if w.shape != (nv,):
        raise ValueError(f"expected {nv} weights, got {w.shape[0]}")
    if sense not in ("max", "min"):
        raise ValueError("sense must be 'max' or 'min'")
    sign = 1.0 if sense == "max" else -1.0
    obj = np.zeros(spec.nmoments)
    obj[list(spec.objective_coords)] = sign * w
    lmi = theta_lmi(spec, obj)
    y0 = _interior_moments(spec)
    res = solve_lmi(lmi, y0[1:], opts)
    y = np.concatenate([[1.0], res.y])
    mineig = float(np.linalg.eigvalsh(spec.evaluate(y))[0]) if spec.dim else 0.0
    value = sign * float(obj @ y)
    gap = abs(res.primal_objective - res.dual_objective)
    return SDPResult(res.status, value, y, y[list(spec.objective_coords)], mineig, gap,
                     res.iterations, res.trace)


# ---------------------------------------------------------------- linear programs

def _rationalize(x: np.ndarray, G, h) -> list[Fraction] | None:
    """Exact rational point near ``x`` satisfying ``Gx <= h, 0 <= x <= 1``.

    First snaps to the vertex cut out by the numerically tight constraints.
    When the optimum is a whole face the tight rows have lower rank; then
    the remaining coordinates are pinned to rounded values and the tight
    rows are kept as equalities, which stays on the optimal face.  Plain
    small-denominator rounding is the last resort.  Returns None if no
    candidate is exactly feasible.
    """
    nvar = len(x)
    rows = [list(r) for r in G] + [[-int(k == j) for k in range(nvar)] for j in range(nvar)] \
        + [[int(k == j) for k in range(nvar)] for j in range(nvar)]
    rhs = list(h) + [0] * nvar + [1] * nvar
    candidates = []
    tight = []
    for r, v in zip(rows, rhs):
        slack = float(Fraction(v)) - float(np.dot(np.array(r, dtype=float), x))
        if abs(slack) <= 1e-6 * (1 + abs(float(Fraction(v)))):
            tight.append((r, v))
    ech = RowEchelon(nvar)
    basis = []
    for r, v in tight:
        if ech.add(r):
            basis.append((r, v))
        if ech.rank == nvar:
            break
    rounded = [Fraction(float(v)).limit_denominator(10 ** 4) for v in x]
    for j in range(nvar):
        if ech.rank == nvar:
            break
        unit = [int(k == j) for k in range(nvar)]
        if ech.add(unit):
            basis.append((unit, rounded[j]))
    sol = solve_square([r for r, _ in basis], [v for _, v in basis])
    if sol is not None:
        candidates.append(sol)
    candidates.append(rounded)
    for cand in candidates:
        if all(sum((Fraction(a) * c for a, c in zip(r, cand)), Fraction(0)) <= Fraction(v)
               for r, v in zip(rows, rhs)):
            return cand
    return None


def lp_optimize(c, G, h, x0, sense: str = "max", opts: SolverOptions | None = None) -> LPResult:
    """Optimize ``c'x`` subject to ``Gx <= h`` and ``0 <= x <= 1``.

    ``x0`` must be strictly feasible.  ``G`` and ``h`` are rational (ints or
    Fractions) so that the returned point can be re-verified exactly.
    """
    opts = opts or SolverOptions()
    c = [Fraction(v) for v in c]
    nvar = len(c)
    G = [list(r) for r in G]
    h = list(h)
    if nvar == 0:
        return LPResult(OPTIMAL, 0.0, np.zeros(0), [], Fraction(0), True, 0)
    sign = 1 if sense == "max" else -1
    ncon = len(G)
    dim = ncon + 2 * nvar
    Gf = np.array(G, dtype=float).reshape(ncon, nvar)
    C = np.diag(np.concatenate([np.array([float(Fraction(v)) for v in h]), np.zeros(nvar),
                                np.ones(nvar)]))
    terms = []
    for j in range(nvar):
        nz = np.nonzero(Gf[:, j])[0]
        idx = np.concatenate([nz, [ncon + j, ncon + nvar + j]])
        vals = np.concatenate([Gf[nz, j], [-1.0, 1.0]])
        terms.append((idx, idx, vals))
    b = sign * np.array([float(v) for v in c])
    res = solve_lmi(LMI(C, terms, b), np.asarray(x0, dtype=float), opts)
    x = res.y
    value = float(np.dot([float(v) for v in c], x))
    exact = _rationalize(x, G, h)
    exact_value = None
    verified = False
    if exact is not None:
        exact_value = sum((a * v for a, v in zip(c, exact)), Fraction(0))
        verified = abs(float(exact_value) - value) <= 1e-6 * (1 + abs(value))
    return LPResult(res.status, value, x, exact, exact_value, verified, res.iterations)


def frac_optimize(ctx: ProblemContext, weights=None, sense: str = "max",
                  opts: SolverOptions | None = None) -> LPResult:
    """Box plus one clique inequality ``sum <= i-1`` per K_i."""
    nv = ctx.nvars
    w = [1] * nv if weights is None else [Fraction(v) for v in weights]
    G = []
    for blk in ctx.blockers:
        G.append([1 if j in blk else 0 for j in range(nv)])
    h = [ctx.i - 1] * len(G)
    return lp_optimize(w, G, h, np.full(nv, 1 / 3), sense, opts)


def tau_star(g: Graph, opts: SolverOptions | None = None) -> LPResult:
    """Fractional triangle cover: min sum x_e with every triangle summing to >= 1."""
    edges = g.sorted_edges()
    eidx = {e: j for j, e in enumerate(edges)}
    G = []
    for a, b, c in enumerate_cliques(g, 3):
        row = [0] * len(edges)
        for e in ((a, b), (a, c), (b, c)):
            row[eidx[e]] = -1
        G.append(row)
    return lp_optimize([1] * len(edges), G, [-1] * len(G), np.full(len(edges), 2 / 3),
                       "min", opts)


def nu_star(g: Graph, opts: SolverOptions | None = None) -> LPResult:
    """Fractional triangle packing: max sum y_T with every edge loaded <= 1."""
    edges = g.sorted_edges()
    tris = enumerate_cliques(g, 3)
    G = []
    for u, v in edges:
        G.append([1 if u in t and v in t else 0 for t in tris])
    load = max((sum(r) for r in G), default=1) or 1
    return lp_optimize([1] * len(tris), G, [1] * len(G), np.full(len(tris), 0.5 / load),
                       "max", opts)


@dataclass
class TauDagger:
    value: float
    theta: SDPResult | None

    @property
    def status(self) -> str:
        return OPTIMAL if self.theta is None else self.theta.status


def tau_dagger(g: Graph, opts: SolverOptions | None = None) -> TauDagger:
    """Second-theta-body triangle cover bound, ``|E| - max sum x`` over the
    second theta body of the triangle-free problem (covers are complements
    of free sets, so the cover body is the image under ``x -> 1 - x``)."""
    if g.m == 0:
        return TauDagger(0.0, None)
    spec = build_moment_spec(build_context(g, 3), 2)
    res = theta_optimize(spec, None, "max", opts)
    return TauDagger(g.m - res.value, res)


def is_moment_feasible(spec: MomentMatrixSpec, y) -> bool:
    """Exact PSD test of ``M(y)`` for a rational moment vector with y_0 = 1.

    Symmetric elimination over Q: the matrix is PSD iff every pivot is
    non-negative and each zero pivot has an all-zero remaining row.
    """
    y = [Fraction(v) for v in y]
    if y[0] != 1:
        return False
    n = spec.dim
    a = [[Fraction(0) if e == ZERO else y[e] for e in row] for row in spec.entries]
    active = list(range(n))
    while active:
        k = active[0]
        piv = a[k][k]
        if piv < 0:
            return False
        if piv == 0:
            if any(a[k][j] != 0 for j in active):
                return False
            active.pop(0)
            continue
        rest = active[1:]
        for r in rest:
            f = a[r][k] / piv
            if f:
                for c in rest:
                    a[r][c] -= f * a[k][c]
        active = rest
    return True
