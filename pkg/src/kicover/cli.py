"""Command-line entry point: ``kicover {theta,certify,gap,matrix,variety}``.

Exit codes: 0 success, 2 bad input, 3 solver did not reach optimality,
4 certificate rejected.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import __version__
from .certify import (Certificate, CertificateError, chain_certificate, clique_certificate,
                      hole_certificate, verify_certificate)
from .exact import SearchTooLarge, nu, tau
from .graph import (Graph, GraphFormatError, HoleLabeling, complete_graph, cycle_graph,
                    enumerate_cliques, parse_graph, random_graph, wheel_hole)
from .ideal import VarietyTooLarge, build_context, enumerate_variety
from .moment import build_moment_spec
from .solve import OPTIMAL, SolverOptions, nu_star, tau_dagger, tau_star, theta_optimize

EXIT_OK, EXIT_INPUT, EXIT_SOLVER, EXIT_REJECT = 0, 2, 3, 4

_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


class InputError(Exception):
    pass


def parse_rational(tok: str) -> Fraction:
    if not _RATIONAL.match(tok):
        raise InputError(f"not an integer or NUM/DEN rational: {tok!r}")
    try:
        return Fraction(tok)
    except ZeroDivisionError:
        raise InputError(f"zero denominator in {tok!r}") from None


def parse_family(spec: str) -> tuple[Graph, HoleLabeling | None]:
    kind, _, arg = spec.partition(":")
    try:
        if kind == "kn":
            return complete_graph(int(arg)), None
        if kind == "cn":
            return cycle_graph(int(arg)), None
        if kind == "wheel":
            i, p = (int(t) for t in arg.split(","))
            return wheel_hole(i, p)
        if kind == "random":
            n, prob, seed = arg.split(",")
            return random_graph(int(n), parse_rational(prob), int(seed)), None
    except (ValueError, TypeError) as exc:
        raise InputError(f"bad family {spec!r}: {exc}") from exc
    raise InputError(f"unknown family {spec!r} (kn:N, cn:N, wheel:I,P, random:N,P/Q,SEED)")


def load_instance(args) -> tuple[Graph, HoleLabeling | None, str]:
    if args.graph:
        try:
            text = Path(args.graph).read_text()
        except OSError as exc:
            raise InputError(str(exc)) from exc
        return parse_graph(text), None, f"file:{args.graph}"
    if args.family:
        g, hl = parse_family(args.family)
        return g, hl, f"family:{args.family}"
    raise InputError("one of --graph or --family is required")


def solver_options(args) -> SolverOptions:
    d = {}
    if getattr(args, "options", None):
        try:
            d = json.loads(Path(args.options).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InputError(f"cannot read options: {exc}") from exc
    for key in ("tol", "feas_tol", "max_iter"):
        val = getattr(args, key, None)
        if val is not None:
            d[key] = val
    if getattr(args, "verbose", False):
        d["verbose"] = True
    try:
        return SolverOptions.from_dict(d)
    except (TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc


def _emit(obj, args, extra: dict | None = None):
    if getattr(args, "seed_report", False):
        obj = {"result": obj, "provenance": {
            "tool": "kicover", "version": __version__, "command": args.command,
            **(extra or {}),
        }}
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _instance(g: Graph, source: str, **kw) -> dict:
    return {"source": source, "n": g.n, "m": g.m, **kw}


def cmd_theta(args) -> int:
    g, _, source = load_instance(args)
    opts = solver_options(args)
    ctx = build_context(g, args.i)
    if args.weights in (None, "unit"):
        weights = None
    else:
        try:
            toks = Path(args.weights).read_text().split()
        except OSError as exc:
            raise InputError(str(exc)) from exc
        weights = [parse_rational(t) for t in toks]
        if len(weights) != ctx.nvars:
            raise InputError(f"weights file has {len(weights)} entries, need {ctx.nvars}")
    spec = build_moment_spec(ctx, args.k)
    res = theta_optimize(spec, weights, args.sense, opts)
    out = res.to_json()
    out["instance"] = _instance(g, source, i=args.i, k=args.k, sense=args.sense)
    if args.json:
        _emit(out, args, {"options": vars(opts)})
    else:
        print(f"value {res.value:.6f}")
        print(f"status {res.status}  iterations {res.iterations}  "
              f"min_eigenvalue {res.min_eigenvalue:.3e}  gap {res.duality_gap_estimate:.3e}")
    return EXIT_OK if res.status == OPTIMAL else EXIT_SOLVER


def _parse_params(text: str | None) -> dict[str, list[int]]:
    out = {}
    for part in filter(None, (text or "").split(";")):
        key, eq, val = part.partition("=")
        if not eq:
            raise InputError(f"bad parameter {part!r}, expected key=v1,v2,...")
        try:
            out[key.strip()] = [int(t) for t in val.split(",") if t.strip()]
        except ValueError as exc:
            raise InputError(f"bad parameter {part!r}: {exc}") from exc
    return out


def _build_certificate(args, g, hl, ctx) -> Certificate:
    params = _parse_params(args.params)
    if args.kind == "hole":
        if args.labeling:
            try:
                blocks = json.loads(Path(args.labeling).read_text())["blocks"]
                hl = HoleLabeling.from_blocks(blocks)
            except (OSError, KeyError, json.JSONDecodeError, ValueError) as exc:
                raise InputError(f"bad labeling file: {exc}") from exc
        if hl is None:
            raise InputError("hole certificates need --family wheel:I,P or --labeling FILE")
        return hole_certificate(hl, ctx)
    cliques = enumerate_cliques(g, ctx.i)
    if "clique" in params:
        h = tuple(sorted(params["clique"]))
    elif cliques:
        h = cliques[0]
    else:
        raise InputError(f"graph has no K_{ctx.i}")
    if args.kind == "clique":
        return clique_certificate(h, ctx)
    if h not in cliques:
        raise InputError(f"{h} is not a K_{ctx.i} of the graph")
    facets = ctx.facets(h)
    try:
        a = [facets[t] for t in params.get("A", [])]
        b = [facets[t] for t in params.get("B", range(len(facets)))]
    except IndexError:
        raise InputError(f"A and B index the {len(facets)} facets of {h}") from None
    return chain_certificate(a, b, ctx)


def cmd_certify(args) -> int:
    g, hl, source = load_instance(args)
    ctx = build_context(g, args.i)
    if args.verify:
        try:
            cert = Certificate.from_json(json.loads(Path(args.verify).read_text()))
        except (OSError, json.JSONDecodeError, ValueError) as exc:
            raise InputError(f"cannot read certificate: {exc}") from exc
    else:
        cert = _build_certificate(args, g, hl, ctx)
    bad = [j for g_ in [cert.target, *cert.squares] for s in g_.terms for j in s
           if not 0 <= j < ctx.nvars]
    if bad:
        raise InputError(f"certificate mentions unknown variable {bad[0]}")
    verdict = verify_certificate(cert, ctx, affine=args.kind != "chain")
    if args.emit:
        Path(args.emit).write_text(cert.dumps() + "\n")
    out = {
        "instance": _instance(g, source, i=args.i),
        "accepted": verdict.accepted,
        "condition": verdict.condition,
        "degree_bound": cert.degree_bound,
        "squares": len(cert.squares),
        "target": repr(cert.target),
    }
    if verdict.remainder is not None:
        out["remainder"] = verdict.remainder.to_json()
        out["remainder_text"] = repr(verdict.remainder)
    if args.json or args.seed_report:
        _emit(out, args)
    else:
        print("accept" if verdict.accepted else f"reject ({verdict.condition}): {verdict.detail}")
        print(f"degree bound {cert.degree_bound}, {len(cert.squares)} squares, target {cert.target!r}")
    return EXIT_OK if verdict.accepted else EXIT_REJECT


def gap_report(g: Graph, source: str, opts: SolverOptions) -> dict:
    t, v = tau(g), nu(g)
    ts, vs = tau_star(g, opts), nu_star(g, opts)
    td = tau_dagger(g, opts)
    T, N = int(t.value), int(v.value)
    report = {
        "instance": _instance(g, source, triangles=len(enumerate_cliques(g, 3))),
        "tau": T, "nu": N,
        "tau_star": ts.value, "nu_star": vs.value, "tau_dagger": td.value,
        "tau_star_exact": None if ts.exact_value is None else str(ts.exact_value),
        "nu_star_exact": None if vs.exact_value is None else str(vs.exact_value),
        "statuses": {"tau_star": ts.status, "nu_star": vs.status, "tau_dagger": td.status},
    }
    report["checks"] = {
        "lp_duality": abs(ts.value - vs.value) <= 1e-6,
        "krivelevich": T <= 2 * ts.value + 1e-6,
        "tau_dagger_ge_half_tau": td.value >= T / 2 - 1e-5,
        "tau_dagger_ge_tau_star": td.value >= ts.value - 1e-5,
        "nu_le_tau_le_3nu": N <= T <= 3 * N,
    }
    report["findings"] = {
        "tuza": T <= 2 * N,
        "semidefinite_tuza": td.value <= 2 * N + 1e-5,
    }
    return report


def _gap_job(job):
    family, graph_text, source, opts = job
    g = parse_family(family)[0] if family else parse_graph(graph_text)
    return gap_report(g, source, opts)


def cmd_gap(args) -> int:
    opts = solver_options(args)
    jobs = []
    for fam in args.family or []:
        parse_family(fam)
        jobs.append((fam, None, f"family:{fam}", opts))
    for path in args.graph or []:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise InputError(str(exc)) from exc
        parse_graph(text)
        jobs.append((None, text, f"file:{path}", opts))
    if not jobs:
        raise InputError("gap needs at least one --family or --graph")
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(_gap_job, jobs))
    else:
        reports = [_gap_job(j) for j in jobs]
    ok = all(s == OPTIMAL for r in reports for s in r["statuses"].values())
    if args.json or args.seed_report:
        _emit(reports if len(reports) > 1 else reports[0], args, {"options": vars(opts)})
    else:
        for r in reports:
            print(f"{r['instance']['source']}: tau={r['tau']} nu={r['nu']} "
                  f"tau*={r['tau_star']:.6f} nu*={r['nu_star']:.6f} "
                  f"tau_dagger={r['tau_dagger']:.6f}")
            for name, val in {**r["checks"], **r["findings"]}.items():
                print(f"  {name}: {val}")
    return EXIT_OK if ok else EXIT_SOLVER


def cmd_matrix(args) -> int:
    g, _, source = load_instance(args)
    spec = build_moment_spec(build_context(g, args.i), args.k)
    if args.json or args.seed_report:
        out = spec.to_json()
        out["instance"] = _instance(g, source, i=args.i, k=args.k)
        _emit(out, args)
    else:
        sys.stdout.write(spec.symbolic_text())
    return EXIT_OK


def cmd_variety(args) -> int:
    g, _, source = load_instance(args)
    table = enumerate_variety(build_context(g, args.i), args.bound)
    if args.seed_report:
        _emit(table.to_json(), args, {"instance": _instance(g, source, i=args.i,
                                                          bound=args.bound)})
    else:
        sys.stdout.write(json.dumps(table.to_json()) + "\n")
    return EXIT_OK


def _add_instance_args(p, multi=False):
    action = "append" if multi else "store"
    p.add_argument("--graph", action=action, help="graph file ('n m' header, then 'u v' lines)")
    p.add_argument("--family", action=action,
                   help="kn:N | cn:N | wheel:I,P | random:N,NUM/DEN,SEED")
    p.add_argument("--seed-report", action="store_true",
                   help="wrap JSON output with provenance (tool, version, options)")


def _add_solver_args(p):
    p.add_argument("--tol", type=float, help="relative duality gap tolerance")
    p.add_argument("--feas-tol", dest="feas_tol", type=float)
    p.add_argument("--max-iter", dest="max_iter", type=int)
    p.add_argument("--options", help="JSON file with solver options")
    p.add_argument("--verbose", action="store_true", help="log every iteration to stderr")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kicover", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"kicover {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("theta", help="optimize over a theta body")
    _add_instance_args(p)
    p.add_argument("--i", type=int, default=3)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--sense", choices=("max", "min"), default="max")
    p.add_argument("--weights", default="unit", help="'unit' or a file of NUM/DEN tokens")
    p.add_argument("--json", action="store_true")
    _add_solver_args(p)
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("certify", help="build or verify a sum-of-squares certificate")
    _add_instance_args(p)
    p.add_argument("--i", type=int, default=3)
    p.add_argument("--kind", choices=("clique", "hole", "chain"), default="clique")
    p.add_argument("--params", help="e.g. 'clique=0,1,2,3;A=0;B=0,1,2' (A, B index facets)")
    p.add_argument("--labeling", help="JSON file {\"blocks\": [[v, ...], ...]} for --kind hole")
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--emit", help="write the constructed certificate as JSON")
    grp.add_argument("--verify", help="verify a certificate JSON file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("gap", help="triangle cover / packing relaxation report")
    _add_instance_args(p, multi=True)
    p.add_argument("--json", action="store_true")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for several instances")
    _add_solver_args(p)
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("matrix", help="dump the reduced moment matrix")
    _add_instance_args(p)
    p.add_argument("--i", type=int, default=3)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("variety", help="dump the free sets up to a size bound")
    _add_instance_args(p)
    p.add_argument("--i", type=int, default=3)
    p.add_argument("--bound", type=int, default=2)
    p.set_defaults(func=cmd_variety)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "verbose", False):
        logging.basicConfig(level=logging.INFO, stream=sys.stderr, format="%(message)s")
    try:
        return args.func(args)
    except (InputError, GraphFormatError, CertificateError, VarietyTooLarge,
            SearchTooLarge, ValueError) as exc:
        print(f"kicover {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
