"""The lift construction: turns a base problem into one over right-closed
label-sets whose solvability on a support graph characterizes 0-round
solvability in the Supported LOCAL model.

Constraints are predicate-backed; the quantifier blocks of the definition
are only unfolded on membership queries, with materialization as an
optional convenience under a size guard.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import ExplosionGuard
from .problems import (
    BLACK, Problem, compute_diagram, config_of, right_closed_sets,
    set_label_members, set_label_name,
)

_MATERIALIZE_CAP = 10 ** 6


@dataclass
class LiftedProblem:
    base: Problem
    delta: int
    rank: int
    alphabet: tuple  # sorted label-set names
    members: dict  # name -> tuple of base labels

    def __post_init__(self):
        self._black_pair = {}
        self._black_full = {}
        self._white_full = {}
        # sub-multisets of base constraints, for incremental choice pruning
        self._white_subs = _sub_multisets(self.base.white.configs)

    def white_holds(self, config) -> bool:
        return lift_white_holds(self, config)

    def black_holds(self, config) -> bool:
        return lift_black_holds(self, config)

    def black_pair_ok(self, a: str, b: str) -> bool:
        """All choices from the pair {a, b} are allowed base black pairs.
        Only meaningful when the base black arity is 2; solver hot path."""
        key = (a, b) if a <= b else (b, a)
        hit = self._black_pair.get(key)
        if hit is None:
            hit = all(config_of(ch) in self.base.black
                      for ch in itertools.product(self.members[a],
                                                  self.members[b]))
            self._black_pair[key] = hit
        return hit

    def materialize(self):
        """Explicit constraint sets; guarded, for small alphabets only."""
        for arity in (self.delta, self.rank):
            if len(self.alphabet) ** arity > _MATERIALIZE_CAP:
                raise ExplosionGuard("lift materialization",
                                     len(self.alphabet) ** arity,
                                     _MATERIALIZE_CAP)
        white = {config_of(c) for c in itertools.combinations_with_replacement(
            self.alphabet, self.delta) if self.white_holds(c)}
        black = {config_of(c) for c in itertools.combinations_with_replacement(
            self.alphabet, self.rank) if self.black_holds(c)}
        return white, black


def _sub_multisets(configs):
    subs = set()
    for cfg in configs:
        n = len(cfg)
        for r in range(n + 1):
            for idx in itertools.combinations(range(n), r):
                subs.add(tuple(cfg[i] for i in idx))
    return subs


def lift(base: Problem, delta: int, rank: int) -> LiftedProblem:
    """Build lift_{delta,rank}(base); alphabet = non-empty right-closed
    label-sets w.r.t. the base's black diagram."""
    if delta < base.white_arity:
        raise ValueError("delta below base white arity")
    if rank < base.black_arity:
        raise ValueError("rank below base black arity")
    diagram = compute_diagram(base, BLACK)
    sets = right_closed_sets(diagram)
    members = {set_label_name(sorted(s)): tuple(sorted(s)) for s in sets}
    return LiftedProblem(base, delta, rank, tuple(sorted(members)), members)


def lift_black_holds(lp: LiftedProblem, config) -> bool:
    """Every index subset of size r' has all its choices in base.black."""
    config = tuple(config)
    if len(config) != lp.rank:
        raise ValueError(f"expected arity {lp.rank}, got {len(config)}")
    for lab in config:
        if lab not in lp.members:
            raise ValueError(f"unknown label-set {lab!r}")
    key = config_of(config)
    hit = lp._black_full.get(key)
    if hit is not None:
        return hit
    r = lp.base.black_arity
    out = True
    if r == 2:
        for a, b in itertools.combinations_with_replacement(sorted(set(key)), 2):
            if a == b and key.count(a) < 2:
                continue
            if not lp.black_pair_ok(a, b):
                out = False
                break
    else:
        for idx in itertools.combinations(range(lp.rank), r):
            pools = [lp.members[config[i]] for i in idx]
            if any(config_of(ch) not in lp.base.black
                   for ch in itertools.product(*pools)):
                out = False
                break
    lp._black_full[key] = out
    return out


def lift_white_holds(lp: LiftedProblem, config) -> bool:
    """Every index subset of size Δ' admits some choice in base.white."""
    config = tuple(config)
    if len(config) != lp.delta:
        raise ValueError(f"expected arity {lp.delta}, got {len(config)}")
    for lab in config:
        if lab not in lp.members:
            raise ValueError(f"unknown label-set {lab!r}")
    key = config_of(config)
    hit = lp._white_full.get(key)
    if hit is not None:
        return hit
    d = lp.base.white_arity
    full = lp.base.white.configs
    subs = lp._white_subs
    out = True
    # distinct sub-multisets only; repeats of the same multiset give the
    # same quantifier instance
    for sub in {config_of(key[i] for i in idx)
                for idx in itertools.combinations(range(lp.delta), d)}:
        choices = {()}
        for lab in sub:
            tgt = full if len(next(iter(choices))) + 1 == d else subs
            choices = {m for m in
                       {tuple(sorted(c + (l,))) for c in choices
                        for l in lp.members[lab]} if m in tgt}
            if not choices:
                break
        if not choices:
            out = False
            break
    lp._white_full[key] = out
    return out


def format_lifted(lp: LiftedProblem) -> str:
    """Serialize to the core DSL with a legend mapping set-labels to their
    base members. Materializes, so guarded."""
    from .problems import Constraint, WHITE, format_problem, make_problem
    white, black = lp.materialize()
    p = make_problem(white, black, white_arity=lp.delta, black_arity=lp.rank,
                     alphabet=set(lp.alphabet))
    legend = "\n".join(f"# legend: {name} = {' '.join(lp.members[name])}"
                       for name in lp.alphabet)
    return legend + "\n" + format_problem(p)
