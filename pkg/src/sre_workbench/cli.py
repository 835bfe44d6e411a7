"""Command-line entry points.

Exit codes: 0 success, 1 domain failure (parse errors, failed checks,
unexpected verdicts), 2 usage error, 3 resource guard tripped.

The render_* helpers produce the exact byte strings shown to the user;
the HTTP service reuses them so both frontends agree verbatim.
"""

from __future__ import annotations

import argparse
import sys

from .bounds import (INF, derand_translate, det_bound, sequence_length,
                     theorem34_bounds)
from .errors import ExplosionGuard, GenerationFailed, Indeterminate
from .families import (arbdef_family, matching_family,
                       maximal_matching_problem, ruling_family)
from .graphs import (BipartiteGraph, Hypergraph, SupportInstance,
                     complete_bipartite, cycle_graph, format_graph,
                     gen_biregular, gen_regular_girth, girth,
                     parse_graph_file)
from .lifting import LiftedProblem, format_lifted, lift
from .problems import (ParseError, compute_diagram, format_problem,
                       parse_problem)
from .roundelim import (apply_RE, check_relaxation, find_relaxation,
                        merge_labels, parse_relaxation, re as re_step)
from .solvers import (SolveOptions, check_solution, find_bipartite_solution,
                      find_nonbipartite_solution, find_S_solution,
                      format_solution, format_verdict, parse_solution,
                      run_zero_round, search_fingerprint,
                      zero_round_supported_solvable)


class DomainFailure(Exception):
    """Carries a message destined for stderr and exit code 1."""


# ---------------------------------------------------------------------------
# renderers shared with the HTTP service

def render_problem(p) -> str:
    if isinstance(p, LiftedProblem):
        return format_lifted(p)
    return format_problem(p)


def render_diagram(p, side: str, full: bool = False) -> str:
    d = compute_diagram(p, side)
    edges = d.edges if full else d.transitive_reduction()
    return "\n".join(f"{y} -> {x}" for y, x in sorted(edges))


def render_growth(p) -> str:
    return "labels: %d\nwhite_configs: %d\nblack_configs: %d" % (
        len(p.alphabet), len(p.white.configs), len(p.black.configs))


def render_bound_det(kind: str, k: int, g) -> str:
    return str(det_bound(kind, k, g))


def render_bound_thm34(n, delta, rank, k, eps, c, kind) -> str:
    rep = theorem34_bounds(n, delta, rank, k, eps=eps, c=c, kind=kind)
    return "deterministic: %d\nrandomized: %d" % (
        rep.deterministic_bound, rep.randomized_bound)


def render_bound_derand(kind: str, table: dict, default, n) -> str:
    def at(m):
        if m in table:
            return table[m]
        if default is None:
            raise DomainFailure(f"no table entry for m={m}")
        return default
    return str(derand_translate(kind, at, n))


def render_bound_seqlen(kind: str, params: dict) -> str:
    return str(sequence_length(kind, **params))


def build_family(kind: str, params: dict):
    if kind == "mm":
        return maximal_matching_problem(params["delta"])
    if kind == "matching":
        return matching_family(params["delta"], params["x"], params["y"])
    if kind == "arbdef":
        return arbdef_family(params["delta"], params["colors"])
    if kind == "ruling":
        return ruling_family(params["delta"], params["colors"],
                             params["beta"])
    raise DomainFailure(f"unknown family kind {kind!r}")


def solve_instance(p, parsed_graph, scope=None, budget_ms=None,
                   boundary=None, expect=None):
    """Shared solve path; returns (verdict text, solution or None)."""
    opts = SolveOptions()
    if budget_ms is not None:
        opts.budget_ms = budget_ms
    inst = None
    if isinstance(parsed_graph, SupportInstance):
        inst = parsed_graph
        g = inst.support
    else:
        g = _as_solvable(parsed_graph)
    if scope is not None:
        base_inst = inst or default_instance(g)
        inst = SupportInstance(base_inst.support, base_inst.input_edges,
                               S=tuple(scope))
    if inst is not None and inst.S is not None:
        sol = find_S_solution(p, inst, boundary_filter=boundary, opts=opts)
    elif isinstance(g, BipartiteGraph):
        sol = find_bipartite_solution(p, g, opts)
    else:
        sol = find_nonbipartite_solution(p, g, opts)
    verdict = "SAT" if sol is not None else "UNSAT"
    fp = search_fingerprint(p, g, opts)
    text = format_verdict(verdict, opts.last_stats, fp)
    if sol is not None:
        body = format_solution(sol)
        if body:
            text += "\nsolution:\n" + body
    if expect and expect.upper() != verdict:
        raise DomainFailure(f"expected {expect.upper()}, got {verdict}\n"
                            + text)
    return text, sol


def _as_solvable(g):
    """Plain graphs solve as rank-2 hypergraphs."""
    if isinstance(g, (BipartiteGraph, Hypergraph)):
        return g
    from .graphs import make_hypergraph
    return make_hypergraph(g.nodes, sorted(tuple(sorted(e))
                                           for e in g.edges))


def default_instance(g) -> SupportInstance:
    g = _as_solvable(g)
    if isinstance(g, BipartiteGraph):
        return SupportInstance(g, tuple(g.edges))
    return SupportInstance(g, tuple(range(len(g.hyperedges))))


def render_oracle(p, g) -> str:
    alg = zero_round_supported_solvable(p, g)
    if alg is None:
        return "NO-ZERO-ROUND-ALGORITHM"
    lines = ["ZERO-ROUND-ALGORITHM",
             f"delta_in: {alg.delta_in}", f"rank_in: {alg.rank_in}",
             f"table_entries: {len(alg.tables)}"]
    return "\n".join(lines)


def gen_graph(kind: str, params: dict):
    if kind == "biregular":
        return gen_biregular(params["white"], params["black"],
                             params["delta"], params["rank"], params["seed"])
    if kind == "regular-girth":
        return gen_regular_girth(params["n"], params["delta"],
                                 params["girth"], params["seed"])
    if kind == "cycle":
        return cycle_graph(params["n"])
    if kind == "complete-bipartite":
        return complete_bipartite(params["a"], params["b"])
    raise DomainFailure(f"unknown graph kind {kind!r}")


# ---------------------------------------------------------------------------
# command implementations

def _read(path) -> str:
    if path in (None, "-"):
        return sys.stdin.read()
    with open(path) as f:
        return f.read()


def _load_problem(path):
    return parse_problem(_read(path))


def cmd_parse(args):
    print(render_problem(_load_problem(args.file)))
    return 0


def cmd_diagram(args):
    out = render_diagram(_load_problem(args.file), args.side, full=args.full)
    if out:
        print(out)
    return 0


def cmd_re(args):
    p = _load_problem(args.file)
    for _ in range(args.steps):
        p = apply_RE(p) if not args.half else re_step(p)
    print(render_problem(p))
    if args.stats:
        print(render_growth(p), file=sys.stderr)
    return 0


def cmd_lift(args):
    lp = lift(_load_problem(args.file), args.delta, args.rank)
    print(render_problem(lp))
    return 0


def cmd_relax(args):
    source = _load_problem(args.file)
    target = parse_problem(_read(args.target))
    if args.map:
        f = parse_relaxation(_read(args.map))
        rep = check_relaxation(source, target, f)
        if not rep.ok:
            raise DomainFailure(f"not a relaxation: {rep.reason} "
                                f"{rep.counterexample}")
        print("RELAXATION-OK")
        return 0
    f = find_relaxation(source, target)
    if f is None:
        raise DomainFailure("no relaxation found")
    print(f.serialize())
    return 0


def cmd_family(args):
    params = {k: getattr(args, k) for k in
              ("delta", "x", "y", "colors", "beta") if hasattr(args, k)}
    print(render_problem(build_family(args.kind, params)))
    return 0


def cmd_graph(args):
    if args.action == "gen":
        keys = ("white", "black", "delta", "rank", "seed", "n", "girth",
                "a", "b")
        params = {k: getattr(args, k) for k in keys
                  if getattr(args, k, None) is not None}
        print(format_graph(gen_graph(args.kind, params)))
        return 0
    g = parse_graph_file(_read(args.file))
    if args.action == "parse":
        print(format_graph(g))
        return 0
    # info
    sup = g.support if isinstance(g, SupportInstance) else g
    print(f"kind: {type(sup).__name__}")
    print(f"girth: {girth(sup)}")
    return 0


def cmd_solve(args):
    p = _load_problem(args.problem)
    if args.lift:
        d, r = (int(t) for t in args.lift.split(","))
        p = lift(p, d, r)
    parsed = parse_graph_file(_read(args.graph))
    scope = None
    if args.scope:
        scope = [int(t) if t.isdigit() else t for t in args.scope.split(",")]
    text, sol = solve_instance(p, parsed, scope=scope,
                               budget_ms=args.budget_ms, expect=args.expect)
    print(text)
    if args.check and sol is not None:
        inst = parsed if isinstance(parsed, SupportInstance) else \
            default_instance(parsed)
        rep = check_solution(p, inst, sol)
        if not rep.ok:
            raise DomainFailure(f"solution fails check: {rep.violations[:3]}")
    return 0


def cmd_oracle(args):
    p = _load_problem(args.problem)
    g = parse_graph_file(_read(args.graph))
    inst = None
    if isinstance(g, SupportInstance):
        inst, g = g, g.support
    if not isinstance(g, BipartiteGraph):
        raise DomainFailure("the zero-round oracle needs a bipartite "
                            "support")
    out = render_oracle(p, g)
    print(out)
    if out.startswith("NO-") and args.expect == "sat":
        raise DomainFailure("expected a zero-round algorithm")
    if args.run and inst is not None and not out.startswith("NO-"):
        alg = zero_round_supported_solvable(p, g)
        print(format_solution(run_zero_round(alg, inst)))
    return 0


def _parse_girth(text: str):
    if text in ("inf", "infinity"):
        return INF
    return int(text)


def cmd_bound(args):
    if args.which == "det":
        print(render_bound_det(args.kind, args.k, _parse_girth(args.girth)))
    elif args.which == "thm34":
        print(render_bound_thm34(args.n, args.delta, args.rank, args.k,
                                 args.eps, args.c, args.kind))
    elif args.which == "derand":
        table = {}
        for entry in (args.table or "").split(","):
            if entry:
                m, v = entry.split("=")
                table[int(m)] = int(v)
        if args.identity:
            print(str(derand_translate(args.kind, lambda m: m, args.n)))
        else:
            print(render_bound_derand(args.kind, table, args.default,
                                      args.n))
    elif args.which == "seqlen":
        params = {}
        for entry in (args.params or "").split(","):
            if entry:
                k, v = entry.split("=")
                params[k] = float(v) if "." in v else int(v)
        print(render_bound_seqlen(args.kind, params))
    return 0


def cmd_merge(args):
    p = _load_problem(args.file)
    groups = [g.split(",") for g in args.groups]
    merged, _mapping = merge_labels(p, groups)
    print(render_problem(merged))
    return 0


def cmd_check(args):
    p = _load_problem(args.problem)
    if args.lift:
        d, r = (int(t) for t in args.lift.split(","))
        p = lift(p, d, r)
    parsed = parse_graph_file(_read(args.graph))
    inst = parsed if isinstance(parsed, SupportInstance) else \
        default_instance(parsed)
    labels = parse_solution(_read(args.solution))
    from .solvers import SolutionAssignment
    scope = inst.S if inst.S is not None else "full"
    rep = check_solution(p, inst, SolutionAssignment(labels, p, scope=scope))
    if not rep.ok:
        raise DomainFailure("INVALID\n" + "\n".join(
            str(v) for v in rep.violations[:10]))
    print("VALID")
    return 0


def cmd_serve(args):
    import uvicorn
    from .service import app
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


# ---------------------------------------------------------------------------
# argument parsing

def _build_parser():
    ap = argparse.ArgumentParser(
        prog="sre",
        description="round-elimination workbench for the supported model")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def infile(p):
        p.add_argument("file", nargs="?", default="-",
                       help="problem file (default stdin)")

    p = sub.add_parser("parse", help="canonicalize a problem description")
    infile(p)
    p.set_defaults(fn=cmd_parse)

    p = sub.add_parser("diagram", help="print strength diagram edges")
    p.add_argument("--side", choices=("white", "black"), required=True)
    p.add_argument("--full", action="store_true",
                   help="all edges, not the transitive reduction")
    infile(p)
    p.set_defaults(fn=cmd_diagram)

    p = sub.add_parser("re", help="apply round elimination")
    p.add_argument("--steps", type=int, default=1)
    p.add_argument("--half", action="store_true",
                   help="single-sided step instead of the full double step")
    p.add_argument("--stats", action="store_true")
    infile(p)
    p.set_defaults(fn=cmd_re)

    p = sub.add_parser("lift", help="lift a problem to higher degree/rank")
    p.add_argument("--delta", type=int, required=True)
    p.add_argument("--rank", type=int, required=True)
    infile(p)
    p.set_defaults(fn=cmd_lift)

    p = sub.add_parser("relax", help="find or check a relaxation witness")
    p.add_argument("--target", required=True, help="target problem file")
    p.add_argument("--map", help="witness map file; check instead of search")
    infile(p)
    p.set_defaults(fn=cmd_relax)

    p = sub.add_parser("family", help="generate a named problem family")
    fsub = p.add_subparsers(dest="kind", required=True)
    f = fsub.add_parser("mm")
    f.add_argument("--delta", type=int, required=True)
    f.set_defaults(fn=cmd_family)
    f = fsub.add_parser("matching")
    f.add_argument("--delta", type=int, required=True)
    f.add_argument("--x", type=int, required=True)
    f.add_argument("--y", type=int, required=True)
    f.set_defaults(fn=cmd_family)
    f = fsub.add_parser("arbdef")
    f.add_argument("--delta", type=int, required=True)
    f.add_argument("--colors", type=int, required=True)
    f.set_defaults(fn=cmd_family)
    f = fsub.add_parser("ruling")
    f.add_argument("--delta", type=int, required=True)
    f.add_argument("--colors", type=int, required=True)
    f.add_argument("--beta", type=int, required=True)
    f.set_defaults(fn=cmd_family)

    p = sub.add_parser("graph", help="generate or inspect graphs")
    gsub = p.add_subparsers(dest="action", required=True)
    g = gsub.add_parser("gen")
    g.add_argument("--kind", required=True,
                   choices=("biregular", "regular-girth", "cycle",
                            "complete-bipartite"))
    g.add_argument("--white", type=int)
    g.add_argument("--black", type=int)
    g.add_argument("--delta", type=int)
    g.add_argument("--rank", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--girth", type=int)
    g.add_argument("--a", type=int)
    g.add_argument("--b", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.set_defaults(fn=cmd_graph)
    for name in ("parse", "info"):
        g = gsub.add_parser(name)
        g.add_argument("file", nargs="?", default="-")
        g.set_defaults(fn=cmd_graph)

    p = sub.add_parser("solve", help="search for a solution on an instance")
    p.add_argument("--problem", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--lift", help="D,R: lift the problem first")
    p.add_argument("--scope", help="comma-separated S nodes")
    p.add_argument("--budget-ms", type=int)
    p.add_argument("--expect", choices=("sat", "unsat"))
    p.add_argument("--check", action="store_true",
                   help="re-verify any found solution")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("check", help="verify a solution file")
    p.add_argument("--problem", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--solution", required=True)
    p.add_argument("--lift")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("oracle", help="zero-round supported solvability")
    p.add_argument("--problem", required=True)
    p.add_argument("--graph", required=True)
    p.add_argument("--expect", choices=("sat",))
    p.add_argument("--run", action="store_true",
                   help="run the algorithm on the instance's input edges")
    p.set_defaults(fn=cmd_oracle)

    p = sub.add_parser("merge", help="merge label groups")
    p.add_argument("groups", nargs="+",
                   help="comma-separated labels per group")
    p.add_argument("--file", default="-")
    p.set_defaults(fn=cmd_merge)

    p = sub.add_parser("bound", help="lower-bound arithmetic")
    bsub = p.add_subparsers(dest="which", required=True)
    b = bsub.add_parser("det")
    b.add_argument("--kind", choices=("bipartite", "hypergraph"),
                   required=True)
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--girth", required=True)
    b.set_defaults(fn=cmd_bound)
    b = bsub.add_parser("thm34")
    b.add_argument("--n", type=float, required=True)
    b.add_argument("--delta", type=int, required=True)
    b.add_argument("--rank", type=int, required=True)
    b.add_argument("--k", type=int, required=True)
    b.add_argument("--eps", type=float, default=1.0)
    b.add_argument("--c", type=float, default=0.0)
    b.add_argument("--kind", choices=("bipartite", "hypergraph"),
                   default="bipartite")
    b.set_defaults(fn=cmd_bound)
    b = bsub.add_parser("derand")
    b.add_argument("--kind", choices=("graph", "hypergraph"), required=True)
    b.add_argument("--n", type=float, required=True)
    b.add_argument("--table", help="m=v,m=v,... deterministic complexities")
    b.add_argument("--default", type=int)
    b.add_argument("--identity", action="store_true", help="D(m) = m")
    b.set_defaults(fn=cmd_bound)
    b = bsub.add_parser("seqlen")
    b.add_argument("--kind", choices=("matching", "ruling"), required=True)
    b.add_argument("--params", required=True,
                   help="k=v,... e.g. delta_p=10,x=0,y=1")
    b.set_defaults(fn=cmd_bound)

    p = sub.add_parser("serve", help="run the JSON API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(fn=cmd_serve)
    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except DomainFailure as e:
        print(str(e), file=sys.stderr)
        return 1
    except (ParseError, ValueError, GenerationFailed) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (ExplosionGuard, Indeterminate) as e:
        print(f"resource guard: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
