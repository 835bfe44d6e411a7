"""Tests for the backtracking solvers and the zero-round oracle."""

import itertools
import random

import pytest

from battery import random_instance, random_problem, subdivided_k4, \
    support_pool
from sre_workbench.errors import Indeterminate
from sre_workbench.families import arbdef_family, matching_family, \
    maximal_matching_problem
from sre_workbench.graphs import (
    SupportInstance, complete_bipartite, cycle_graph, double_cover,
    make_bipartite, make_graph, make_hypergraph,
)
from sre_workbench.lifting import lift
from sre_workbench.problems import config_of, make_problem
from sre_workbench.solvers import (
    SolutionAssignment, SolveOptions, audit_labelset_counts, check_solution,
    find_bipartite_solution, find_nonbipartite_solution, find_S_solution,
    format_solution, format_verdict, parse_solution, run_zero_round,
    search_fingerprint, zero_round_supported_solvable,
)


def c6():
    return double_cover(cycle_graph(3))


def cycle_hypergraph(n):
    return make_hypergraph(range(1, n + 1),
                           [(i, i % n + 1) for i in range(1, n + 1)])


def test_check_matching_on_c6():
    # matched pair on edge (1,1); every node sees exactly one M or points
    p = maximal_matching_problem(2)
    g = c6()
    inst = SupportInstance(g, tuple(g.edges))
    sol = find_bipartite_solution(p, g)
    assert sol is not None
    assert check_solution(p, inst, sol).ok
    # corrupting one label breaks it
    bad = dict(sol.labels)
    edge = sorted(bad)[0]
    bad[edge] = "M" if bad[edge] != "M" else "P"
    rep = check_solution(p, inst, SolutionAssignment(bad, p))
    assert not rep.ok and rep.violations


def test_check_all_X_arbdef():
    p = arbdef_family(2, 2)
    h = cycle_hypergraph(5)
    inst = SupportInstance(h, tuple(range(5)))
    labels = {(v, i): "X" for i in range(5)
              for v in h.hyperedges[i]}
    rep = check_solution(p, inst, SolutionAssignment(labels, p))
    assert not rep.ok
    sides = {v[0] for v in rep.violations}
    assert sides == {"white"}  # black passes: X pairs with everything


def test_check_empty_scope_vacuous():
    p = arbdef_family(2, 2)
    h = cycle_hypergraph(5)
    inst = SupportInstance(h, tuple(range(5)), S=())
    rep = check_solution(p, inst, SolutionAssignment({}, p, scope=()))
    assert rep.ok


def test_check_missing_entries():
    p = maximal_matching_problem(2)
    g = c6()
    inst = SupportInstance(g, tuple(g.edges))
    rep = check_solution(p, inst, SolutionAssignment({}, p))
    assert not rep.ok
    assert all(kind == "missing" for kind, _ in rep.violations)


def test_empty_white_constraint_absence():
    p = make_problem([], [("A", "A")], white_arity=2, black_arity=2,
                     alphabet={"A"})
    assert find_bipartite_solution(p, c6()) is None


def test_unconstrained_degrees_are_skipped():
    # white arity 3 on a 2-regular graph: every node unconstrained, any
    # labeling works
    p = make_problem([("A", "A", "A")], [("B", "B", "B")], alphabet={"A", "B"})
    sol = find_bipartite_solution(p, c6())
    assert sol is not None


def brute_force_solvable(view_p, g):
    from sre_workbench.solvers import _View
    view = _View(view_p)
    edges = sorted(g.edges)
    wdeg = g.white_degrees()
    bdeg = g.black_degrees()
    for combo in itertools.product(view.alphabet, repeat=len(edges)):
        lab = dict(zip(edges, combo))
        ok = True
        for w, d in wdeg.items():
            if d != view.white_arity:
                continue
            if not view.white_full([lab[e] for e in edges if e[0] == w]):
                ok = False
                break
        if ok:
            for b, d in bdeg.items():
                if d != view.black_arity:
                    continue
                if not view.black_full([lab[e] for e in edges
                                        if e[1] == b]):
                    ok = False
                    break
        if ok:
            return True
    return False


def test_solver_completeness_vs_enumeration():
    rng = random.Random(7)
    graphs = [c6(), complete_bipartite(2, 2), complete_bipartite(3, 2),
              subdivided_k4()]
    for trial in range(25):
        p = random_problem(rng, labels=("A", "B"))
        g = graphs[rng.randrange(len(graphs))]
        got = find_bipartite_solution(p, g)
        want = brute_force_solvable(p, g)
        assert (got is not None) == want, (trial, p, len(g.edges))
        if got is not None:
            inst = SupportInstance(g, tuple(g.edges))
            assert check_solution(p, inst, got).ok


def test_nonbipartite_coloring_family_sat():
    # the unlifted coloring family admits X-padded solutions; hardness
    # only appears after lifting (see the odd-cycle absence test)
    for n, c in [(6, 2), (5, 2), (5, 3)]:
        h = cycle_hypergraph(n)
        p = arbdef_family(2, c)
        sol = find_nonbipartite_solution(p, h)
        assert sol is not None, (n, c)
        inst = SupportInstance(h, tuple(range(n)))
        assert check_solution(p, inst, sol).ok


def test_lift_on_odd_cycle_absence():
    # 2 colors < 3 = chi(C_5)
    lp = lift(arbdef_family(2, 1), 2, 2)
    assert find_nonbipartite_solution(lp, cycle_hypergraph(5)) is None


def test_empty_hypergraph_trivial():
    h = make_hypergraph([1, 2], [])
    sol = find_nonbipartite_solution(arbdef_family(2, 2), h)
    assert sol is not None and sol.labels == {}


def test_s_solution_full_scope_equals_full_search():
    h = cycle_hypergraph(5)
    p = arbdef_family(2, 3)
    inst = SupportInstance(h, tuple(range(5)), S=tuple(h.nodes))
    full = find_nonbipartite_solution(p, h)
    scoped = find_S_solution(p, inst)
    assert (full is None) == (scoped is None)
    assert check_solution(p, inst, scoped).ok


def test_s_solution_independent_set():
    h = cycle_hypergraph(6)
    p = arbdef_family(2, 1)
    s = (1, 3, 5)
    inst = SupportInstance(h, tuple(range(6)), S=s)
    sol = find_S_solution(p, inst)
    assert sol is not None
    assert check_solution(p, inst, sol).ok
    # no S-internal edges, so even the 1-coloring passes
    assert all(k[0] in s for k in sol.labels)


def test_s_solution_boundary_filter():
    lp = lift(arbdef_family(2, 2), 2, 2)
    h = cycle_hypergraph(6)
    s = (1, 2, 3, 4)
    inst = SupportInstance(h, tuple(range(6)), S=s)
    x_only = [l for l in lp.alphabet if lp.members[l] == ("X",)]
    allowed = set(lp.alphabet) - set(x_only)
    sol = find_S_solution(lp, inst, boundary_filter=lambda l: l in allowed)
    assert sol is not None
    boundary = {(1, 5), (4, 3)}  # half-edges of S-leaving hyperedges
    for k in boundary & set(sol.labels):
        assert sol.labels[k] in allowed


def test_zero_round_trivial_full_constraints():
    labs = ["A", "B"]
    full2 = [c for c in itertools.combinations_with_replacement(labs, 2)]
    p = make_problem(full2, full2, alphabet=labs)
    alg = zero_round_supported_solvable(p, c6())
    assert alg is not None


def test_zero_round_unsat_case():
    p = make_problem([], [("A", "A")], white_arity=2, black_arity=2,
                     alphabet={"A"})
    assert zero_round_supported_solvable(p, c6()) is None


def test_zero_round_agreement_sample():
    rng = random.Random(11)
    for _ in range(20):
        p, g = random_instance(rng)
        d = max(g.white_degrees().values())
        r = max(g.black_degrees().values())
        alg = zero_round_supported_solvable(p, g)
        sol = find_bipartite_solution(lift(p, d, r), g)
        assert (alg is None) == (sol is None), (p, d, r)


def test_run_zero_round_on_random_subgraphs():
    rng = random.Random(3)
    found = 0
    while found < 5:
        p, g = random_instance(rng)
        alg = zero_round_supported_solvable(p, g)
        if alg is None:
            continue
        found += 1
        edges = sorted(g.edges)
        for _ in range(20):
            # random input subgraph within the degree bounds
            chosen = [e for e in edges if rng.random() < 0.6]
            wdeg, bdeg = {}, {}
            pruned = []
            for w, b in chosen:
                if wdeg.get(w, 0) < alg.delta_in and \
                        bdeg.get(b, 0) < alg.rank_in:
                    wdeg[w] = wdeg.get(w, 0) + 1
                    bdeg[b] = bdeg.get(b, 0) + 1
                    pruned.append((w, b))
            inst = SupportInstance(g, tuple(pruned))
            out = run_zero_round(alg, inst)
            assert check_solution(p, inst, out).ok


def test_run_zero_round_empty_input():
    p = maximal_matching_problem(2)
    g = c6()
    alg = zero_round_supported_solvable(p, g)
    assert alg is not None
    out = run_zero_round(alg, SupportInstance(g, ()))
    assert out.labels == {}


def test_run_zero_round_support_mismatch():
    p = maximal_matching_problem(2)
    g = c6()
    alg = zero_round_supported_solvable(p, g)
    other = complete_bipartite(2, 2)
    with pytest.raises(ValueError):
        run_zero_round(alg, SupportInstance(other, ()))


def test_indeterminate_on_tiny_budget():
    base = matching_family(2, 0, 1)
    lp = lift(base, 8, 8)
    with pytest.raises(Indeterminate):
        find_bipartite_solution(lp, complete_bipartite(8, 8),
                                SolveOptions(max_nodes=3))


def test_determinism():
    base = matching_family(3, 1, 1)
    lp = lift(base, 3, 3)
    g = subdivided_k4()
    a = find_bipartite_solution(lp, g)
    b = find_bipartite_solution(lp, g)
    assert (a is None) == (b is None)
    if a is not None:
        assert a.labels == b.labels


def test_audit_counts():
    labels = {(1, 1): "(M O X)", (1, 2): "(O X)", (2, 1): "(M X)"}
    a = SolutionAssignment(labels, None)
    res = audit_labelset_counts(a, "M")
    assert res["total"] == 2
    assert res["per_white"] == {1: 1, 2: 1}
    assert res["per_black"] == {1: 2}
    assert audit_labelset_counts(a, "Z")["total"] == 0


def test_matching_lift_counting_bounds():
    # Counting audits on every found solution for small lift instances
    found = 0
    for d, x, y, nw in [(4, 1, 1, 3), (4, 2, 1, 3), (3, 1, 1, 4)]:
        base = matching_family(2, 0, 1)
        g = complete_bipartite(nw, nw) if nw * nw <= 12 else None
        if g is None:
            continue
        lp = lift(base, nw, nw)
        sol = find_bipartite_solution(lp, g)
        if sol is None:
            continue
        found += 1
        n = len(g.white_nodes)
        assert audit_labelset_counts(sol, "M")["total"] <= n * 1
        assert audit_labelset_counts(sol, "P")["total"] <= n * (2 - 1)
    assert found >= 1


def test_solution_file_round_trip():
    p = maximal_matching_problem(2)
    g = c6()
    sol = find_bipartite_solution(p, g)
    text = format_solution(sol)
    assert parse_solution(text) == sol.labels


def test_verdict_format():
    opts = SolveOptions()
    p = make_problem([], [("A", "A")], white_arity=2, black_arity=2,
                     alphabet={"A"})
    g = c6()
    assert find_bipartite_solution(p, g, opts) is None
    fp = search_fingerprint(p, g, opts)
    text = format_verdict("UNSAT", opts.last_stats, fp)
    assert text.splitlines()[0] == "UNSAT"
    assert any(l.startswith("fingerprint: ") for l in text.splitlines())
    assert any(l.startswith("nodes_expanded: ") for l in text.splitlines())
