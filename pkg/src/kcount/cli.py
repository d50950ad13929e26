"""Command-line interface.

Every command prints deterministic output: JSON with sorted keys (or CSV for
`verify`), including the seed, the package version and any constant overrides.
Exit codes: 0 success, 2 precondition violation, 3 certification failure,
4 randomized budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

from . import __version__, cluster, counting, exact, interpolation, lcltlab, sampling
from .errors import BudgetExhaustedError, CertificationError, PreconditionError
from .graphcore import GENERATORS, Graph, GraphError, generate, load_graph, serialize

EXIT_OK, EXIT_PRECONDITION, EXIT_CERTIFICATION, EXIT_BUDGET = 0, 2, 3, 4


def parse_complex(text: str) -> complex:
    if "," in text:
        re_, im = text.split(",", 1)
        return complex(float(re_), float(im))
    return complex(text.replace(" ", ""))


def _graph_options(p: argparse.ArgumentParser):
    p.add_argument("--graph", help="graph file (edge list 'n m' + edges, or JSON {n, edges})")
    p.add_argument("--family", choices=GENERATORS, help="generate the graph instead of reading a file")
    p.add_argument("--n", type=int)
    p.add_argument("--rows", type=int)
    p.add_argument("--cols", type=int)
    p.add_argument("--degree", type=int)
    p.add_argument("--graph-seed", type=int, default=0, help="seed for random_regular")


def _common(p: argparse.ArgumentParser, eps: float | None = 0.05):
    _graph_options(p)
    p.add_argument("--delta", type=float, default=counting.DEFAULT_DELTA)
    p.add_argument("--seed", type=int, default=0)
    if eps is not None:
        p.add_argument("--eps", type=float, default=eps)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kcount", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exact", help="exact coefficient vector of the independence or matching polynomial")
    _common(p, eps=None)
    p.add_argument("--matchings", action="store_true")
    p.add_argument("--guard", type=int, default=exact.DEFAULT_GUARD)

    p = sub.add_parser("cluster", help="truncated cluster expansion of log Z")
    _common(p, eps=None)
    p.add_argument("--lam", type=float, required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("evaluate", help="approximate Z(λ) for real or complex λ")
    _common(p)
    p.add_argument("--lam", type=parse_complex, required=True, help="real, 're,im' or Python complex syntax")
    p.add_argument("--kind", choices=interpolation.KINDS)

    p = sub.add_parser("cumulants", help="approximate κ_1..κ_kmax of |I|")
    _common(p, eps=0.01)
    p.add_argument("--lam", type=float, required=True)
    p.add_argument("--kmax", type=int, default=interpolation.MAX_CUMULANT)

    p = sub.add_parser("count", help="deterministic approximation of i_k or m_k")
    _common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--method", choices=("fptas", "eptas"), default="fptas")
    p.add_argument("--matchings", action="store_true")
    p.add_argument("--grid-constant", type=int, default=counting.GRID_CONSTANT)
    p.add_argument("--gamma-constant", type=float, default=counting.GAMMA_CONSTANT)

    p = sub.add_parser("sample", help="approximately uniform independent sets (or matchings) of size k")
    _common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--method", choices=("auto", "downup", "rejection", "fast"), default="auto")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--matchings", action="store_true")
    p.add_argument("--sampler-c", type=float, default=sampling.FastSamplerConfig.c)
    p.add_argument("--sampler-c-prime", type=float, default=None)
    p.add_argument("--c-rep", type=float, default=sampling.FastSamplerConfig.c_rep)
    p.add_argument("--max-tries", type=int, default=1000, help="rounds of fresh chains for the rejection method")

    p = sub.add_parser("fpras", help="randomized approximation of i_k")
    _common(p, eps=0.1)
    p.add_argument("--k", type=int, required=True)

    p = sub.add_parser("verify", help="LCLT / CLT / Fourier sweep over a path or cycle family (CSV)")
    p.add_argument("--family", choices=("path", "cycle"), default="cycle")
    p.add_argument("--ns", default="100,200,400,800", help="comma-separated sizes")
    p.add_argument("--lam", type=float, default=1.0)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("generate", help="write a generated graph in edge-list format")
    p.add_argument("family", choices=GENERATORS)
    p.add_argument("--n", type=int)
    p.add_argument("--rows", type=int)
    p.add_argument("--cols", type=int)
    p.add_argument("--degree", type=int)
    p.add_argument("--graph-seed", type=int, default=0)
    return ap


def _load(args) -> Graph:
    if args.graph and args.family:
        raise PreconditionError("give either --graph or --family, not both")
    if args.graph:
        return load_graph(args.graph)
    if args.family:
        return generate(args.family, n=args.n, rows=args.rows, cols=args.cols, degree=args.degree,
                        seed=args.graph_seed)
    raise PreconditionError("a graph is required: --graph FILE or --family NAME")


def _num(x):
    if isinstance(x, complex):
        return x.real if x.imag == 0 else [x.real, x.imag]
    if isinstance(x, Fraction):
        return str(x)
    return x


def _header(args, g: Graph | None, **params) -> dict:
    out = {"command": args.command, "version": __version__}
    if g is not None:
        out["graph"] = {"n": g.n, "edges": g.edge_count, "max_degree": g.max_degree}
    for name in ("seed", "delta", "eps"):
        if hasattr(args, name):
            out[name] = getattr(args, name)
    out.update(params)
    return out


def _cmd_exact(args) -> str:
    g = _load(args)
    coeffs = exact.matching_counts(g, args.guard) if args.matchings else exact.independence_polynomial(g, args.guard)
    return _dump(_header(args, g, matchings=args.matchings, coefficients=list(coeffs.coeffs)))


def _cmd_cluster(args) -> str:
    g = _load(args)
    res = cluster.truncated_log_Z(g, args.lam, args.t, delta=args.delta)
    if args.format == "csv":
        lines = ["order,contribution,cumulative,kp_bound"]
        for j, (term, cum) in enumerate(zip(res.order_terms, res.cumulative()), start=1):
            bound = cluster.kp_tail_bound(g.n, args.lam, g.max_degree, j)
            lines.append(f"{j},{term!r},{cum!r},{bound!r}")
        return "\n".join(lines)
    return _dump(_header(args, g, **{"lambda": args.lam, "t": args.t, "log_Z": res.value,
                                     "order_terms": list(res.order_terms), "kp_tail_bound": res.kp_tail_bound,
                                     "kp_ratio": res.ratio, "certified": res.certified}))


def _cmd_evaluate(args) -> str:
    g = _load(args)
    res = interpolation.region_evaluate_Z(g, args.lam, args.eps, delta=args.delta, kind=args.kind)
    return _dump(_header(args, g, **{"lambda": _num(args.lam), "result": res.to_json()}))


def _cmd_cumulants(args) -> str:
    g = _load(args)
    rows = []
    for k in range(1, args.kmax + 1):
        est = interpolation.cumulant_estimate(g, args.lam, k, args.eps, delta=args.delta)
        rows.append({"k": k, "value": est.value, "error_bound": est.error_bound, "method": est.method,
                     "order": est.order, "certified": est.certified})
    lo, hi = interpolation.variance_bracket(g.n, args.lam, g.max_degree)
    return _dump(_header(args, g, **{"lambda": args.lam, "cumulants": rows, "variance_bracket": [lo, hi]}))


def _cmd_count(args) -> str:
    g = _load(args)
    overrides = {"grid_constant": args.grid_constant, "gamma_constant": args.gamma_constant}
    if args.method == "eptas":
        if args.matchings:
            raise PreconditionError("eptas is available for independent sets only")
        res = counting.eptas_count(g, args.k, args.eps, delta=args.delta)
    elif args.matchings:
        res = counting.count_matchings(g, args.k, args.eps, delta=args.delta, **overrides)
    else:
        res = counting.fptas_count(g, args.k, args.eps, delta=args.delta, **overrides)
    return _dump(_header(args, g, matchings=args.matchings, overrides=overrides, result=res.to_json()))


def _cmd_sample(args) -> str:
    g = _load(args)
    config = sampling.FastSamplerConfig(c=args.sampler_c, c_prime=args.sampler_c_prime, c_rep=args.c_rep)
    rng = sampling.make_rng(args.seed)
    if args.matchings:
        batch = sampling.sample_matchings_batch(g, args.k, args.eps, args.count, rng, method=args.method,
                                                config=config, delta=args.delta, max_rounds=args.max_tries)
        lines = [" ".join(f"{u}-{v}" for u, v in s) for s in batch.samples]
    else:
        batch = sampling.sample_k_batch(g, args.k, args.eps, args.count, rng, method=args.method, config=config,
                                        delta=args.delta, max_rounds=args.max_tries)
        lines = [" ".join(map(str, s)) for s in batch.samples]
    footer = _header(args, g, k=args.k, method=batch.method, matchings=args.matchings,
                     overrides={"c": config.c, "c_prime": config.c_prime, "c_rep": config.c_rep},
                     diagnostics=batch.diagnostics)
    return "\n".join(lines + [_dump(footer)])


def _cmd_fpras(args) -> str:
    g = _load(args)
    res = sampling.fpras_count(g, args.k, args.eps, sampling.make_rng(args.seed), delta=args.delta)
    return _dump(_header(args, g, **{"k": args.k, "case": res.case, "log_estimate": res.log_estimate,
                                     "estimate": res.estimate, "samples": res.samples, "successes": res.successes,
                                     "lambda": res.lam}))


def _cmd_verify(args) -> str:
    try:
        ns = [int(x) for x in args.ns.split(",") if x.strip()]
    except ValueError:
        raise PreconditionError(f"--ns must be comma-separated integers, got {args.ns!r}") from None
    rows = lcltlab.sweep(args.family, ns, args.lam)
    if args.format == "csv":
        return lcltlab.to_csv(rows).rstrip("\n")
    return _dump({"command": "verify", "version": __version__, "family": args.family, "lambda": args.lam,
                  "rows": [dict(zip(lcltlab.CSV_HEADER, r.csv_row(c))) for r, c in rows]})


def _cmd_generate(args) -> str:
    g = generate(args.family, n=args.n, rows=args.rows, cols=args.cols, degree=args.degree, seed=args.graph_seed)
    return serialize(g).rstrip("\n")


COMMANDS = {
    "exact": _cmd_exact, "cluster": _cmd_cluster, "evaluate": _cmd_evaluate, "cumulants": _cmd_cumulants,
    "count": _cmd_count, "sample": _cmd_sample, "fpras": _cmd_fpras, "verify": _cmd_verify,
    "generate": _cmd_generate,
}


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        return _clean(obj.item())  # numpy scalars
    return _num(obj)


def _dump(obj) -> str:
    return json.dumps(_clean(obj), sort_keys=True)


def dispatch(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    try:
        text = COMMANDS[args.command](args)
    except (PreconditionError, GraphError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_PRECONDITION
    except CertificationError as exc:
        print(f"certification failed: {exc}", file=err)
        return EXIT_CERTIFICATION
    except BudgetExhaustedError as exc:
        print(f"budget exhausted: {exc}", file=err)
        return EXIT_BUDGET
    print(text, file=out)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    return dispatch(argv)


if __name__ == "__main__":
    sys.exit(main())
