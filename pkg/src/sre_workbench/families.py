"""Problem family generators: matching variants, arbdefective colorings,
colored ruling sets, and the constructive solution transformations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .problems import (
    BLACK, WHITE, Configuration, Constraint, Problem, config_of, make_problem,
)

M, O, P, X, Z = "M", "O", "P", "X", "Z"


def _expand_lines(lines):
    """Expand [(group, exponent), ...] condensed lines into configurations."""
    out = set()
    for line in lines:
        slots = []
        for group, exp in line:
            slots.extend([sorted(group)] * exp)
        for choice in itertools.product(*slots):
            out.add(config_of(choice))
    return out


def maximal_matching_problem(delta: int) -> Problem:
    """Maximal matching on 2-colored graphs: M = matched, O = other,
    P = pointer of an unmatched white node."""
    if delta < 2:
        raise ValueError("delta must be at least 2")
    white = _expand_lines([
        [({M}, 1), ({O}, delta - 1)],
        [({P}, delta)],
    ])
    black = _expand_lines([
        [({M}, 1), ({O, P}, delta - 1)],
        [({O}, delta)],
    ])
    return make_problem(white, black)


def matching_family(delta: int, x: int, y: int) -> Problem:
    """The x-maximal y-matching problem family, arities delta on both sides."""
    if not (1 <= y <= delta - 1):
        raise ValueError("need 1 <= y <= delta - 1")
    if not (0 <= x <= delta - y):
        raise ValueError("need 0 <= x <= delta - y")
    any_ = {M, Z, P, O, X}

    def line(groups):
        return [(g, e) for g, e in groups if e > 0]

    white = _expand_lines([
        line([({X}, y - 1), ({M}, 1), ({O}, delta - y)]),
        line([({X}, y), ({O}, x), ({P}, delta - y - x)]),
        line([({X}, y), ({Z}, 1), ({O}, delta - y - 1)]),
    ])
    black = _expand_lines([
        line([(any_, y - 1), ({M, X}, 1), ({P, O, X}, delta - y)]),
        line([(any_, y), ({P, O, X}, x), ({O, X}, delta - y - x)]),
        line([(any_, y), ({X}, 1), ({P, O, X}, delta - y - 1)]),
    ])
    return make_problem(white, black, alphabet={M, O, P, X, Z})


def color_label(colors) -> str:
    """Label name for the color-set label of an arbdefective coloring."""
    cs = sorted(colors)
    sep = "_" if cs and cs[-1] > 9 else ""
    return "L" + sep.join(str(c) for c in cs)


def color_set(label: str, universe=None):
    """Inverse of color_label."""
    if not label.startswith("L"):
        raise ValueError(f"not a color label: {label!r}")
    body = label[1:]
    if "_" in body:
        return frozenset(int(t) for t in body.split("_"))
    return frozenset(int(ch) for ch in body)


def _color_subsets(c):
    subsets = []
    for r in range(1, c + 1):
        subsets.extend(itertools.combinations(range(1, c + 1), r))
    return [frozenset(s) for s in subsets]


def arbdef_family(delta: int, c: int) -> Problem:
    """Problem capturing arbdefective c-coloring: white arity delta,
    black (edge) arity 2."""
    if c < 1:
        raise ValueError("c must be at least 1")
    subsets = _color_subsets(c)
    alphabet = {X} | {color_label(s) for s in subsets}
    white = set()
    for s in subsets:
        slack = len(s) - 1
        if delta - slack < 0:
            continue
        # slack = delta degenerates to the all-X configuration
        white.add(config_of([color_label(s)] * (delta - slack) + [X] * slack))
    black = set()
    for s1, s2 in itertools.combinations_with_replacement(subsets, 2):
        if not (s1 & s2):
            black.add(config_of([color_label(s1), color_label(s2)]))
    for lab in alphabet:
        black.add(config_of([X, lab]))
    return make_problem(white, black, white_arity=delta, black_arity=2,
                        alphabet=alphabet)


def ruling_family(delta: int, c: int, beta: int) -> Problem:
    """Arbdefective-colored beta-ruling-set family; beta = 0 falls back to
    the plain coloring family."""
    if beta < 0:
        raise ValueError("beta must be non-negative")
    if beta == 0:
        return arbdef_family(delta, c)
    base = arbdef_family(delta, c)
    pointer = {i: f"P{i}" for i in range(1, beta + 1)}
    undecided = {i: f"U{i}" for i in range(1, beta + 1)}
    alphabet = set(base.alphabet) | set(pointer.values()) | set(undecided.values())
    white = set(base.white.configs)
    for i in range(1, beta + 1):
        white.add(config_of([pointer[i]] + [undecided[i]] * (delta - 1)))
    black = set()
    for cfg in base.black.configs:
        if X not in cfg:
            black.add(cfg)
    color_labels = [l for l in base.alphabet if l != X]
    for i in range(1, beta + 1):
        for j in range(1, i):
            black.add(config_of([pointer[i], undecided[j]]))
        for lab in color_labels:
            black.add(config_of([pointer[i], lab]))
    for i in range(1, beta + 1):
        for j in range(1, beta + 1):
            black.add(config_of([undecided[i], undecided[j]]))
    for lab in alphabet:
        black.add(config_of([X, lab]))
    return make_problem(white, black, white_arity=delta, black_arity=2,
                        alphabet=alphabet)


class RulingBarProblem:
    """Lift-like problem whose edge constraint is that of
    lift_{delta,2}(ruling(delta_p, k, beta)) and whose node constraint is
    the disjunction, over y in {0..x}, of the node constraints of
    lift_{delta,2}(ruling(delta_p - y, k, beta))."""

    lift_like = True

    def __init__(self, delta, delta_p, x, k, beta):
        from .lifting import lift
        if not (0 <= x < delta_p):
            raise ValueError("need 0 <= x < delta_p")
        self.delta = delta
        self.delta_p = delta_p
        self.x = x
        self.k = k
        self.beta = beta
        self.rank = 2
        self.lifts = [lift(ruling_family(delta_p - y, k, beta), delta, 2)
                      for y in range(x + 1)]
        # the edge constraint of the base family does not depend on its
        # arity, so every lift shares one label-set alphabet
        self.base = self.lifts[0].base
        self.alphabet = self.lifts[0].alphabet
        self.members = self.lifts[0].members
        for lp in self.lifts[1:]:
            assert lp.members == self.members
        self.tag = "ruling-bar(%d,%d,%d,%d,%d)" % (delta, delta_p, x, k, beta)

    def white_holds(self, config) -> bool:
        return any(lp.white_holds(config) for lp in self.lifts)

    def black_holds(self, config) -> bool:
        return self.lifts[0].black_holds(config)

    def black_pair_ok(self, a, b) -> bool:
        return self.lifts[0].black_pair_ok(a, b)


def ruling_bar_family(delta: int, delta_p: int, x: int, k: int,
                      beta: int) -> RulingBarProblem:
    return RulingBarProblem(delta, delta_p, x, k, beta)


# ---------------------------------------------------------------------------
# Constructive solution transformations


def _half_edges_by_node(labels):
    per = {}
    for key in labels:
        per.setdefault(key[0], []).append(key)
    for keys in per.values():
        keys.sort(key=lambda t: t[1:])
    return per


def _scope_nodes(sol, inst):
    if sol.scope != "full":
        return set(sol.scope)
    if inst.S is not None:
        return set(inst.S)
    return {key[0] for key in sol.labels}


def _max_matching(left, right_of):
    """Augmenting-path maximum matching; left nodes matched greedily, then
    improved. Returns (match_of_left, match_of_right)."""
    ml, mr = {}, {}

    def augment(u, seen):
        for v in right_of[u]:
            if v in seen:
                continue
            seen.add(v)
            if v not in mr or augment(mr[v], seen):
                ml[u] = v
                mr[v] = u
                return True
        return False

    for u in left:
        augment(u, set())
    return ml, mr


def _hall_violator(colors, missing):
    """Deficient color set: C with |N(C)| <= |C| - 1 in the bipartite graph
    linking color c to the half-edges whose color sets miss c. Read off the
    alternating-reachability structure of a maximum matching; None if the
    matching saturates all colors."""
    right_of = {c: [e for e in missing if c in missing[e]] for c in colors}
    ml, mr = _max_matching(colors, right_of)
    free = [c for c in colors if c not in ml]
    if not free:
        return None
    reach_c = set(free)
    reach_e = set()
    frontier = list(free)
    while frontier:
        c = frontier.pop()
        for e in right_of[c]:
            if e in reach_e:
                continue
            reach_e.add(e)
            c2 = mr.get(e)
            if c2 is not None and c2 not in reach_c:
                reach_c.add(c2)
                frontier.append(c2)
    return frozenset(reach_c), reach_e


def _base_color_universe(base) -> int:
    """Largest color index mentioned by a coloring-family alphabet."""
    top = 0
    for lab in base.alphabet:
        if lab.startswith("L"):
            top = max(top, max(color_set(lab)))
    return top


def lift_solution_to_base(sol, inst):
    """Turn an S-solution of a lifted coloring problem into an S-solution
    of the degree-delta coloring family itself, via the per-node deficient
    color set."""
    from .errors import HallViolatorMissing
    lp = sol.problem
    if isinstance(lp, RulingBarProblem):
        if lp.beta != 0:
            raise ValueError("peel down to beta = 0 first")
        sol = ruling_bar_to_lift(sol)
        lp = sol.problem
    c = _base_color_universe(lp.base)
    colors = list(range(1, c + 1))
    target = arbdef_family(lp.delta, c)
    per = _half_edges_by_node(sol.labels)
    scope = _scope_nodes(sol, inst)
    out = {}
    for v in sorted(scope):
        keys = per.get(v, [])
        missing = {}
        for key in keys:
            covered = set()
            for lab in lp.members[sol.labels[key]]:
                if lab.startswith("L"):
                    covered |= color_set(lab)
            missing[key] = [col for col in colors if col not in covered]
        hit = _hall_violator(colors, missing)
        if hit is None:
            raise HallViolatorMissing(f"node {v}: every color set is "
                                      "matchable; input is not a valid "
                                      "lifted solution")
        cset, bad = hit
        name = color_label(cset)
        slack = len(cset) - 1
        pad = [key for key in keys if key not in bad][:slack - len(bad)]
        xs = set(bad) | set(pad)
        for key in keys:
            out[key] = X if key in xs else name
    return type(sol)(out, target, scope=tuple(sorted(scope)))


def ruling_bar_to_lift(sol):
    """Reinterpret a solution of the beta = 0 variant family as a solution
    of the plain lift of the coloring family at the reduced arity."""
    from .lifting import lift
    bp = sol.problem
    lp = lift(arbdef_family(bp.delta_p - bp.x, bp.k), bp.delta, 2)
    for name in set(sol.labels.values()):
        if name not in lp.members:
            raise ValueError(f"label-set {name!r} missing at reduced arity")
    return type(sol)(dict(sol.labels), lp, scope=sol.scope)


def arbdef_to_coloring(sol, inst):
    """Proper coloring of the S-induced subgraph from an S-solution of the
    coloring family, using at most twice its color budget. Colors are the
    pairs (c, 0) and (c, 1) for base colors c."""
    from .errors import OrderingStuck
    p = sol.problem
    per = _half_edges_by_node(sol.labels)
    scope = _scope_nodes(sol, inst)
    cset = {}
    for v in scope:
        names = {sol.labels[key] for key in per.get(v, [])} - {X}
        if len(names) != 1:
            raise OrderingStuck(f"node {v} carries color labels "
                                f"{sorted(names)}; expected exactly one")
        cset[v] = sorted(color_set(names.pop()))
    # X-graph: S-internal edges with an X on at least one side
    adj = {v: set() for v in scope}
    for i in inst.input_edges:
        he = sorted(inst.support.hyperedges[i])
        if len(he) != 2 or not set(he) <= scope:
            continue
        u, v = he
        if sol.labels[(u, i)] == X or sol.labels[(v, i)] == X:
            adj[u].add(v)
            adj[v].add(u)
    deg = {v: len(adj[v]) for v in scope}
    order = []
    alive = set(scope)
    while alive:
        pick = next((v for v in sorted(alive)
                     if deg[v] <= 2 * len(cset[v]) - 1), None)
        if pick is None:
            raise OrderingStuck("no node of X-degree below twice its color "
                                "budget; input is not a valid solution")
        order.append(pick)
        alive.discard(pick)
        for u in adj[pick]:
            if u in alive:
                deg[u] -= 1
    coloring = {}
    for v in reversed(order):
        used = {coloring[u] for u in adj[v] if u in coloring}
        options = [(c, i) for c in cset[v] for i in (0, 1)]
        free = [o for o in options if o not in used]
        if not free:
            raise OrderingStuck(f"node {v} has no free doubled color")
        coloring[v] = free[0]
    return coloring


def peel_ruling_level(sol, inst):
    """One level of the pointer-peeling recursion: eliminate the outermost
    pointer labels from an S-solution of the variant family, shrinking S by
    at most a factor 4 and doubling the color budget."""
    from .errors import TypeClassificationImpossible
    bp = sol.problem
    if not isinstance(bp, RulingBarProblem):
        raise ValueError("expected a solution of the variant family")
    if bp.beta < 1:
        raise ValueError("beta must be at least 1")
    if bp.delta < 3 * bp.delta_p:
        raise ValueError("need delta >= 3 * delta_p")
    scope = _scope_nodes(sol, inst)
    per = _half_edges_by_node(sol.labels)
    pb, ub = f"P{bp.beta}", f"U{bp.beta}"
    all_pointers = {f"P{i}" for i in range(1, bp.beta + 1)}
    # boundary condition on the input
    for i in inst.input_edges:
        he = inst.support.hyperedges[i]
        for v in he:
            if v in scope and not he <= scope:
                mem = set(bp.members[sol.labels[(v, i)]])
                if mem & all_pointers:
                    raise ValueError(f"boundary half-edge ({v},{i}) carries "
                                     "a pointer label")
    type1, type2, type3 = set(), set(), set()
    for v in scope:
        sets = [set(bp.members[sol.labels[key]]) for key in per.get(v, [])]
        if not any(pb in s or ub in s for s in sets):
            continue
        if all(ub in s for s in sets):
            pcount = sum(1 for s in sets if pb in s)
            (type1 if pcount > bp.delta - bp.delta_p else type2).add(v)
        else:
            type3.add(v)
    new_scope = scope - type1
    if 4 * len(new_scope) < len(scope):
        raise TypeClassificationImpossible(
            f"{len(type1)} removable nodes out of {len(scope)}")
    target = ruling_bar_family(bp.delta, bp.delta_p, bp.x + 1, 2 * bp.k,
                               bp.beta - 1)
    inv = {frozenset(m): name for name, m in target.members.items()}

    def lookup(members, where):
        name = inv.get(frozenset(members))
        if name is None:
            raise TypeClassificationImpossible(
                f"rewritten label-set {sorted(members)} at {where} is not "
                "right-closed for the target family")
        return name

    def shifted(members):
        new = {X}
        for lab in members:
            if lab.startswith("L"):
                new.add(color_label({c + bp.k for c in color_set(lab)}))
        return new

    out = {}
    for v in sorted(new_scope):
        keys = per.get(v, [])
        if v in type2:
            u_keys = [key for key in keys
                      if pb not in bp.members[sol.labels[key]]]
            new_sets = {key: shifted(bp.members[sol.labels[key]])
                        for key in u_keys}
            pooled = set().union(*new_sets.values()) if new_sets else {X}
            for key in keys:
                out[key] = lookup(new_sets.get(key, pooled), key)
        else:
            # type 3 and untouched nodes: drop the outermost pointer level
            for key in keys:
                members = set(bp.members[sol.labels[key]]) - {pb, ub}
                out[key] = lookup(members, key)
    scope_t = tuple(sorted(new_scope))
    return scope_t, type(sol)(out, target, scope=scope_t)
