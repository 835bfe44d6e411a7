"""Backtracking search for bipartite / non-bipartite / S-solutions and the
zero-round Supported LOCAL oracle.

Edge labels are the variables; node constraints are checked through
partial-extendability predicates so dead branches are cut early. The
oracle searches per-node output tables and quantifies black checks over
jointly realizable input selections.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from .errors import Indeterminate, budget_ms
from .graphs import BipartiteGraph, Hypergraph, SupportInstance, \
    incidence_graph
from .lifting import LiftedProblem
from .problems import Problem, config_of
from .problems import set_label_members


@dataclass
class SolveOptions:
    max_nodes: int = 20_000_000
    budget_ms: int | None = None
    last_stats: object = None  # set by the solver, for UNSAT reporting


@dataclass
class SolveStats:
    nodes_expanded: int = 0
    started: float = field(default_factory=time.monotonic)
    verdict: str = ""

    def elapsed_ms(self) -> int:
        return int((time.monotonic() - self.started) * 1000)


@dataclass
class SolutionAssignment:
    labels: dict  # edge -> label; edges are (w, b) or (node, hyperedge idx)
    problem: object
    scope: object = "full"  # "full" or a tuple S
    stats: SolveStats | None = None


@dataclass
class CheckReport:
    ok: bool
    violations: list

    def __bool__(self):
        return self.ok


class _View:
    """Uniform membership/extendability interface over Problem and
    LiftedProblem."""

    def __init__(self, p):
        self.p = p
        self.lifted = isinstance(p, LiftedProblem) or \
            getattr(p, "lift_like", False)
        if self.lifted:
            self.alphabet = list(p.alphabet)
            self.white_arity = p.delta
            self.black_arity = p.rank
            # the full label-set is right-closed, and white validity is
            # monotone in enlarging members, so extendability is exact
            self.full_set = max(p.members, key=lambda n: len(p.members[n]))
        else:
            self.alphabet = sorted(p.alphabet)
            self.white_arity = p.white.arity
            self.black_arity = p.black.arity
            self._wsubs = _subs(p.white.configs)
            self._bsubs = _subs(p.black.configs)

    def white_full(self, labels) -> bool:
        if self.lifted:
            return self.p.white_holds(tuple(labels))
        return config_of(labels) in self.p.white

    def black_full(self, labels) -> bool:
        if self.lifted:
            return self.p.black_holds(tuple(labels))
        return config_of(labels) in self.p.black

    def white_partial(self, labels) -> bool:
        """Some completion to full arity passes the white constraint."""
        k = self.white_arity - len(labels)
        if k < 0:
            return False
        if self.lifted:
            return self.p.white_holds(tuple(labels) + (self.full_set,) * k)
        return config_of(labels) in self._wsubs

    def black_partial(self, labels) -> bool:
        if len(labels) > self.black_arity:
            return False
        if self.lifted:
            # validity is antitone in adding labels: check decided subsets
            r = self.p.base.black_arity
            if len(labels) < r:
                return True
            return all(
                all(config_of(ch) in self.p.base.black
                    for ch in itertools.product(
                        *(self.p.members[l] for l in sub)))
                for sub in itertools.combinations(labels, r))
        return config_of(labels) in self._bsubs


def _subs(configs):
    out = set()
    for cfg in configs:
        n = len(cfg)
        for r in range(n + 1):
            for idx in itertools.combinations(range(n), r):
                out.add(tuple(cfg[i] for i in idx))
    return out


# ---------------------------------------------------------------------------
# Checking


def _instance_edges(inst: SupportInstance):
    """Half-edge keys and node incidence of the input subgraph."""
    if isinstance(inst.support, BipartiteGraph):
        edges = list(inst.input_edges)
        white_of = {}
        black_of = {}
        for w, b in edges:
            white_of.setdefault(w, []).append((w, b))
            black_of.setdefault(b, []).append((w, b))
        return edges, white_of, black_of
    keys = []
    white_of = {}
    black_of = {}
    for i in inst.input_edges:
        he = inst.support.hyperedges[i]
        for v in sorted(he):
            keys.append((v, i))
            white_of.setdefault(v, []).append((v, i))
            black_of.setdefault(i, []).append((v, i))
    return keys, white_of, black_of


def check_solution(p, inst: SupportInstance,
                   a: SolutionAssignment) -> CheckReport:
    """Verify an assignment; scope restricts node checks to S and black
    checks to S-internal (hyper)edges. Nodes whose degree differs from
    the constraint arity are unconstrained."""
    view = _View(p)
    keys, white_of, black_of = _instance_edges(inst)
    scope = a.scope
    s_set = None if scope == "full" else set(scope)
    violations = []
    for k in keys:
        if s_set is not None and k[0] not in s_set and \
                not isinstance(inst.support, BipartiteGraph):
            continue
        if k not in a.labels:
            violations.append(("missing", k))
        elif a.labels[k] not in view.alphabet:
            violations.append(("bad-label", k))
    if violations:
        return CheckReport(False, violations)
    for w, inc in white_of.items():
        if s_set is not None and w not in s_set:
            continue
        if len(inc) != view.white_arity:
            continue
        if not view.white_full([a.labels[k] for k in inc]):
            violations.append(("white", w))
    for b, inc in black_of.items():
        if s_set is not None:
            if isinstance(inst.support, BipartiteGraph):
                if b not in s_set:
                    continue
            else:
                members = inst.support.hyperedges[b]
                if not members <= s_set:
                    continue
        if len(inc) != view.black_arity:
            continue
        if not view.black_full([a.labels[k] for k in inc]):
            violations.append(("black", b))
    return CheckReport(not violations, violations)


# ---------------------------------------------------------------------------
# Backtracking search


def _solve_csp(view, keys, white_of, black_of, constrained_white,
               constrained_black, domains, opts: SolveOptions):
    """Generic half-edge CSP: minimum-remaining-values order, canonical
    value order, forward checking via partial-extendability."""
    stats = SolveStats()
    deadline = None
    limit = opts.budget_ms if opts.budget_ms is not None else budget_ms()
    deadline = stats.started + limit / 1000
    assignment = {}
    node_of_key = {}
    for n, inc in white_of.items():
        for k in inc:
            node_of_key.setdefault(k, []).append(("w", n))
    for n, inc in black_of.items():
        for k in inc:
            node_of_key.setdefault(k, []).append(("b", n))

    def node_ok(side, n, extra_key, extra_label):
        inc = white_of[n] if side == "w" else black_of[n]
        labels = []
        full = True
        for k in inc:
            if k == extra_key:
                labels.append(extra_label)
            elif k in assignment:
                labels.append(assignment[k])
            else:
                full = False
        if side == "w":
            return view.white_full(labels) if full \
                else view.white_partial(labels)
        return view.black_full(labels) if full \
            else view.black_partial(labels)

    def consistent(key, label):
        for side, n in node_of_key[key]:
            if side == "w" and n not in constrained_white:
                continue
            if side == "b" and n not in constrained_black:
                continue
            if not node_ok(side, n, key, label):
                return False
        return True

    def prune(changed_key):
        """Recompute domains of unassigned keys sharing a node."""
        out = []
        for side, n in node_of_key[changed_key]:
            inc = white_of[n] if side == "w" else black_of[n]
            for k in inc:
                if k in assignment or k == changed_key:
                    continue
                dom = domains[k]
                kept = [l for l in dom if consistent(k, l)]
                if len(kept) != len(dom):
                    out.append((k, dom))
                    domains[k] = kept
                    if not kept:
                        return out, False
        return out, True

    order_pool = [k for k in keys]

    def search():
        stats.nodes_expanded += 1
        if stats.nodes_expanded > opts.max_nodes:
            raise Indeterminate("backtracking search",
                                {"nodes_expanded": stats.nodes_expanded})
        if stats.nodes_expanded % 256 == 0 and \
                time.monotonic() > deadline:
            raise Indeterminate("backtracking search",
                                {"nodes_expanded": stats.nodes_expanded,
                                 "elapsed_ms": stats.elapsed_ms()})
        todo = [k for k in order_pool if k not in assignment]
        if not todo:
            return True
        key = min(todo, key=lambda k: (len(domains[k]), keys.index(k)))
        for label in domains[key]:
            if not consistent(key, label):
                continue
            assignment[key] = label
            undo, alive = prune(key)
            if alive and search():
                return True
            for k, dom in undo:
                domains[k] = dom
            del assignment[key]
        return False

    found = search()
    stats.verdict = "SAT" if found else "UNSAT"
    return (dict(assignment) if found else None), stats


def find_bipartite_solution(p, g: BipartiteGraph,
                            opts: SolveOptions | None = None):
    """Exhaustive search for a bipartite solution on the whole graph;
    None is a definitive absence, budget exhaustion raises
    Indeterminate."""
    opts = opts or SolveOptions()
    view = _View(p)
    inst = SupportInstance(g, tuple(g.edges))
    keys, white_of, black_of = _instance_edges(inst)
    cw = {w for w, inc in white_of.items() if len(inc) == view.white_arity}
    cb = {b for b, inc in black_of.items() if len(inc) == view.black_arity}
    domains = {k: list(view.alphabet) for k in keys}
    labels, stats = _solve_csp(view, keys, white_of, black_of, cw, cb,
                               domains, opts)
    opts.last_stats = stats
    if labels is None:
        return None
    return SolutionAssignment(labels, p, "full", stats)


def find_nonbipartite_solution(p, h: Hypergraph,
                               opts: SolveOptions | None = None):
    """Solve on the incidence structure: labels live on (node, hyperedge)
    pairs."""
    return find_S_solution(p, SupportInstance(
        h, tuple(range(len(h.hyperedges))), S=tuple(h.nodes)), None, opts)


def find_S_solution(p, inst: SupportInstance, boundary_filter=None,
                    opts: SolveOptions | None = None):
    """S-scoped search on a hypergraph instance: node constraints on S,
    edge constraints on S-internal hyperedges. boundary_filter(label) may
    restrict labels on half-edges of S-leaving hyperedges."""
    if not isinstance(inst.support, Hypergraph):
        raise ValueError("S-solutions are defined on hypergraph instances")
    opts = opts or SolveOptions()
    view = _View(p)
    s = set(inst.S if inst.S is not None else inst.support.nodes)
    keys = []
    white_of = {}
    black_of = {}
    boundary_keys = set()
    for i in inst.input_edges:
        he = inst.support.hyperedges[i]
        internal = he <= s
        for v in sorted(he):
            if v not in s:
                continue
            k = (v, i)
            keys.append(k)
            white_of.setdefault(v, []).append(k)
            if internal:
                black_of.setdefault(i, []).append(k)
            else:
                boundary_keys.add(k)
    cw = {v for v, inc in white_of.items() if len(inc) == view.white_arity}
    cb = {i for i, inc in black_of.items()
          if len(inst.support.hyperedges[i]) == view.black_arity}
    domains = {}
    for k in keys:
        dom = list(view.alphabet)
        if k in boundary_keys and boundary_filter is not None:
            dom = [l for l in dom if boundary_filter(l)]
        domains[k] = dom
    labels, stats = _solve_csp(view, keys, white_of, black_of, cw, cb,
                               domains, opts)
    opts.last_stats = stats
    if labels is None:
        return None
    return SolutionAssignment(labels, p, tuple(sorted(s)), stats)


# ---------------------------------------------------------------------------
# Zero-round oracle


@dataclass
class ZeroRoundAlgorithm:
    """White algorithm: per white node, a table from each admissible
    input-edge selection to an ordered label tuple (edges in sorted
    order)."""

    problem: Problem
    support: BipartiteGraph
    delta_in: int
    rank_in: int
    tables: dict  # (white node, frozenset of edges) -> tuple of labels
    stats: SolveStats | None = None


def _selections(edges, delta_in):
    out = []
    for k in range(delta_in + 1):
        out.extend(frozenset(c) for c in itertools.combinations(edges, k))
    return out


def zero_round_supported_solvable(p: Problem, support: BipartiteGraph,
                                  delta_in: int | None = None,
                                  rank_in: int | None = None,
                                  opts: SolveOptions | None = None):
    """Search for a 0-round white algorithm correct on every realizable
    input subgraph (white degrees <= delta_in, black degrees <= rank_in);
    None is definitive absence."""
    opts = opts or SolveOptions()
    delta_in = delta_in if delta_in is not None else p.white_arity
    rank_in = rank_in if rank_in is not None else p.black_arity
    if delta_in != p.white_arity or rank_in != p.black_arity:
        raise ValueError("input degree bounds must match the base arities")
    alphabet = sorted(p.alphabet)
    wadj = support.white_adj()
    badj = support.black_adj()

    variables = []  # (white node, selection)
    for w in sorted(wadj):
        edges = sorted((w, b) for b in wadj[w])
        for sel in sorted(_selections(edges, delta_in),
                          key=lambda s: (len(s), sorted(s))):
            variables.append((w, sel))

    def values_for(sel):
        size = len(sel)
        if size == delta_in:
            return [t for t in itertools.product(alphabet, repeat=size)
                    if config_of(t) in p.white]
        return list(itertools.product(alphabet, repeat=size))

    domains = {var: values_for(var[1]) for var in variables}
    if any(not d for d in domains.values()):
        return None

    assignment = {}
    stats = SolveStats()
    limit = opts.budget_ms if opts.budget_ms is not None else budget_ms()
    deadline = stats.started + limit / 1000

    def label_on(w, sel, edge):
        ordered = sorted(sel)
        return assignment[(w, sel)][ordered.index(edge)]

    def black_ok_with(var, value):
        """All realizable selection combinations at black nodes touched by
        var's selection stay valid, quantified over already-assigned
        neighbor tables plus this candidate value."""
        w0, sel0 = var
        touched = {b for (_, b) in sel0}
        for u in touched:
            nbrs = sorted(badj[u])
            # per neighbor: assigned selections containing the edge to u,
            # with this candidate standing in for var
            per = []
            for w in nbrs:
                opts_w = []
                for sel in _selections(sorted((w, b) for b in wadj[w]),
                                       delta_in):
                    if (w, u) not in sel:
                        continue
                    if (w, sel) == var:
                        opts_w.append((sel, value))
                    elif (w, sel) in assignment:
                        opts_w.append((sel, assignment[(w, sel)]))
                per.append((w, opts_w))
            active = [(w, o) for w, o in per if o]
            if len(active) < rank_in:
                continue
            for group in itertools.combinations(active, rank_in):
                if not any(w == w0 for w, _ in group):
                    continue
                for picks in itertools.product(*(o for _, o in group)):
                    # cross-degree cap: the union of the picked selections
                    # must keep every black degree within rank_in
                    degree = {}
                    ok = True
                    for (w, _), (sel, _v) in zip(group, picks):
                        for (_, b) in sel:
                            degree[b] = degree.get(b, 0) + 1
                            if degree[b] > rank_in:
                                ok = False
                                break
                        if not ok:
                            break
                    if not ok:
                        continue
                    labels = []
                    for (w, _), (sel, val) in zip(group, picks):
                        labels.append(val[sorted(sel).index((w, u))])
                    if config_of(labels) not in p.black:
                        return False
        return True

    # variables interacting through a shared black node, for forward checks
    related = {var: [] for var in variables}
    for var1, var2 in itertools.combinations(variables, 2):
        if var1[0] == var2[0]:
            continue
        if {b for (_, b) in var1[1]} & {b for (_, b) in var2[1]}:
            related[var1].append(var2)
            related[var2].append(var1)

    var_pos = {var: i for i, var in enumerate(variables)}

    def search():
        stats.nodes_expanded += 1
        if stats.nodes_expanded > opts.max_nodes:
            raise Indeterminate("zero-round oracle",
                                {"nodes_expanded": stats.nodes_expanded})
        if stats.nodes_expanded % 64 == 0 and time.monotonic() > deadline:
            raise Indeterminate("zero-round oracle",
                                {"nodes_expanded": stats.nodes_expanded,
                                 "elapsed_ms": stats.elapsed_ms()})
        todo = [v for v in variables if v not in assignment]
        if not todo:
            return True
        var = min(todo, key=lambda v: (len(domains[v]), var_pos[v]))
        for value in domains[var]:
            if not black_ok_with(var, value):
                continue
            assignment[var] = value
            undo = []
            alive = True
            for other in related[var]:
                if other in assignment:
                    continue
                dom = domains[other]
                kept = [x for x in dom if black_ok_with(other, x)]
                if len(kept) != len(dom):
                    undo.append((other, dom))
                    domains[other] = kept
                    if not kept:
                        alive = False
                        break
            if alive and search():
                return True
            for other, dom in undo:
                domains[other] = dom
            del assignment[var]
        return False

    found = search()
    stats.verdict = "SAT" if found else "UNSAT"
    opts.last_stats = stats
    if not found:
        return None
    return ZeroRoundAlgorithm(p, support, delta_in, rank_in,
                              dict(assignment), stats)


def run_zero_round(alg: ZeroRoundAlgorithm,
                   inst: SupportInstance) -> SolutionAssignment:
    """Execute the table algorithm on a concrete input subgraph."""
    if not isinstance(inst.support, BipartiteGraph):
        raise ValueError("zero-round algorithms run on bipartite supports")
    if inst.support != alg.support:
        raise ValueError("instance support differs from algorithm support")
    by_white = {}
    for (w, b) in inst.input_edges:
        by_white.setdefault(w, []).append((w, b))
    labels = {}
    for w, edges in by_white.items():
        sel = frozenset(edges)
        if (w, sel) not in alg.tables:
            raise KeyError(f"no table entry for node {w} with "
                           f"{len(edges)} selected edges")
        out = alg.tables[(w, sel)]
        for edge, lab in zip(sorted(sel), out):
            labels[edge] = lab
    return SolutionAssignment(labels, alg.problem, "full")


def format_solution(a: SolutionAssignment) -> str:
    """One line per half-edge: `u v : LABEL`."""
    lines = []
    for edge in sorted(a.labels):
        u, v = edge
        lines.append(f"{u} {v} : {a.labels[edge]}")
    return "\n".join(lines)


def parse_solution(text: str) -> dict:
    from .problems import _scan_label
    labels = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        lhs, _, rhs = line.partition(":")
        u, v = lhs.split()
        lab, _i = _scan_label(rhs.strip(), 0, lineno)
        u = int(u) if u.isdigit() else u
        v = int(v) if v.isdigit() else v
        labels[(u, v)] = lab
    return labels


def search_fingerprint(p, g, opts: SolveOptions) -> str:
    """Stable digest of the explored search space: problem, graph and
    search parameters; UNSAT verdicts carry it for reproducibility."""
    import hashlib
    from .graphs import format_graph
    from .problems import format_problem
    if isinstance(p, LiftedProblem):
        ptxt = "lift(%d,%d)\n%s" % (p.delta, p.rank,
                                    format_problem(p.base))
    elif hasattr(p, "base"):
        ptxt = "%s\n%s" % (getattr(p, "tag", "lift-like"),
                           format_problem(p.base))
    else:
        ptxt = format_problem(p)
    blob = "\n--\n".join([ptxt, format_graph(g), str(opts.max_nodes)])
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def format_verdict(verdict: str, stats: SolveStats | None = None,
                   fingerprint: str | None = None) -> str:
    # deliberately no wall-clock line: verdict text is deterministic so
    # frontends can compare it byte for byte
    lines = [verdict]
    if stats is not None:
        lines.append(f"nodes_expanded: {stats.nodes_expanded}")
    if verdict == "UNSAT" and fingerprint:
        lines.append(f"fingerprint: {fingerprint}")
    return "\n".join(lines)


def audit_labelset_counts(a: SolutionAssignment, member: str):
    """Count edges whose assigned label-set contains the given base label,
    with per-node histograms."""
    total = 0
    per_white = {}
    per_black = {}
    for edge, lab in a.labels.items():
        try:
            members = set_label_members(lab)
        except ValueError:
            members = (lab,)
        if member in members:
            total += 1
            per_white[edge[0]] = per_white.get(edge[0], 0) + 1
            per_black[edge[1]] = per_black.get(edge[1], 0) + 1
    return {"total": total, "per_white": per_white, "per_black": per_black}
