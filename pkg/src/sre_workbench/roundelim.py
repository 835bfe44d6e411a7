"""Round elimination, relaxation checking and label merging.

re() keeps the maximal set-configurations of the black constraint; its
components are intersections of extension sets, which keeps the search far
below the naive (2^|alphabet|)^arity enumeration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import ExplosionGuard, guard_labels
from .problems import (
    BLACK, WHITE, Constraint, Problem, _scan_label, config_of, make_problem,
    set_label_members, set_label_name,
)

_DFS_NODE_CAP = 2_000_000


def _sub_multisets(configs):
    """All sub-multisets (as sorted tuples) of the given configurations,
    including the empty one."""
    subs = set()
    for cfg in configs:
        n = len(cfg)
        for r in range(n + 1):
            for idx in itertools.combinations(range(n), r):
                subs.add(tuple(cfg[i] for i in idx))
    return subs


def _maximal_set_configs(configs, arity, alphabet):
    """Maximal good set-tuples for one constraint, up to permutation.

    A tuple (L_1 .. L_d) of non-empty label sets is good when every choice
    is a configuration; maximal means no componentwise-larger good tuple
    exists under any permutation. Components of maximal tuples are always
    intersections of extension sets ext(m) = {l : m + l is a config}, so
    we search multisets over the intersection closure of those sets.
    """
    labels = sorted(alphabet)
    if not configs:
        return []
    subs = _sub_multisets(configs)
    full = set(configs)

    # extension sets of all (arity-1)-sub-multisets that occur
    exts = set()
    for m in subs:
        if len(m) != arity - 1:
            continue
        e = frozenset(l for l in labels if tuple(sorted(m + (l,))) in full)
        if e:
            exts.add(e)
    # closure under intersection
    closure = set(exts)
    frontier = set(exts)
    while frontier:
        new = set()
        for a in frontier:
            for b in closure:
                c = a & b
                if c and c not in closure and c not in new:
                    new.add(c)
        closure |= new
        frontier = new
    cands = sorted(closure, key=lambda s: (len(s), tuple(sorted(s))))

    budget = [_DFS_NODE_CAP]
    results = []

    def forced(choices_rest):
        """Largest set completing the given choice multisets of the other
        components."""
        out = []
        for l in labels:
            if all(tuple(sorted(m + (l,))) in full for m in choices_rest):
                out.append(l)
        return frozenset(out)

    def dfs(start, prefix, choices):
        budget[0] -= 1
        if budget[0] < 0:
            raise ExplosionGuard("maximal configuration search",
                                 _DFS_NODE_CAP, _DFS_NODE_CAP)
        if len(prefix) == arity:
            # stability: each component must equal its forced completion
            for i in range(arity):
                rest = [()]
                for j, s in enumerate(prefix):
                    if j == i:
                        continue
                    rest = [m + (l,) for m in rest for l in s]
                rest = {tuple(sorted(m)) for m in rest}
                if prefix[i] != forced(rest):
                    return
            results.append(tuple(prefix))
            return
        ok_set = full if len(prefix) == arity - 1 else subs
        for k in range(start, len(cands)):
            s = cands[k]
            nxt = {tuple(sorted(m + (l,))) for m in choices for l in s}
            if all(m in ok_set for m in nxt):
                dfs(k, prefix + [s], nxt)

    dfs(0, [], {()})

    # dominance filter across permutations
    def dominates(a, b):
        for perm in itertools.permutations(range(arity)):
            if all(b[i] <= a[perm[i]] for i in range(arity)):
                return True
        return False

    keep = []
    for t in results:
        if any(t is not u and dominates(u, t) and
               sorted(u) != sorted(t) for u in results):
            continue
        keep.append(tuple(sorted(t, key=lambda s: (len(s), tuple(sorted(s))))))
    return sorted(set(keep),
                  key=lambda t: tuple(tuple(sorted(s)) for s in t))


def _existential_configs(set_labels, arity, base_configs):
    """Multisets of set-labels admitting at least one choice in the base
    constraint."""
    subs = _sub_multisets(base_configs)
    full = set(base_configs)
    names = sorted(set_labels)
    members = {n: set_label_members(n) for n in names}
    out = set()
    for combo in itertools.combinations_with_replacement(names, arity):
        choices = {()}
        good = True
        for depth, n in enumerate(combo):
            tgt = full if depth + 1 == arity else subs
            choices = {m for m in
                       {tuple(sorted(c + (l,))) for c in choices
                        for l in members[n]} if m in tgt}
            if not choices:
                good = False
                break
        if good:
            out.add(config_of(combo))
    return out


def _re_core(p: Problem):
    """One re() step: returns (set-label alphabet, maximal black
    set-configs, existential white multisets) as configurations."""
    cap = guard_labels()
    if len(p.alphabet) > cap:
        raise ExplosionGuard("alphabet before re()", len(p.alphabet), cap)
    maximal = _maximal_set_configs(p.black.configs, p.black_arity, p.alphabet)
    sets = sorted({s for t in maximal for s in t},
                  key=lambda s: tuple(sorted(s)))
    names = {s: set_label_name(sorted(s)) for s in sets}
    black = {config_of(names[s] for s in t) for t in maximal}
    white = _existential_configs(set(names.values()), p.white_arity,
                                 p.white.configs)
    return frozenset(names.values()), white, black


def re(p: Problem) -> Problem:
    """Round elimination step: the new black constraint is the maximal
    set-configurations of the old black one, the new white constraint is
    existential over the old white one."""
    alphabet, white, black = _re_core(p)
    return make_problem(white, black, white_arity=p.white_arity,
                        black_arity=p.black_arity, alphabet=alphabet)


def _swap(p: Problem) -> Problem:
    return Problem(p.alphabet,
                   Constraint(WHITE, p.black_arity, p.black.configs),
                   Constraint(BLACK, p.white_arity, p.white.configs))


def rere(p: Problem) -> Problem:
    """Mirror step: maximal set-configurations taken on the white side."""
    return _swap(re(_swap(p)))


def apply_RE(p: Problem) -> Problem:
    """Full round elimination RE = rere after re."""
    return rere(re(p))


# ---------------------------------------------------------------------------
# Relaxations


@dataclass
class RelaxationReport:
    ok: bool
    reason: str = ""
    counterexample: tuple | None = None

    def __bool__(self):
        return self.ok


@dataclass
class RelaxationMap:
    """Map from ordered source white tuples to ordered target white
    tuples; totality over all orderings of all source configurations is
    required for a valid relaxation."""

    assignment: dict = field(default_factory=dict)

    def label_relation(self):
        """r(l) = set of labels some occurrence of l is mapped to."""
        r = {}
        for src, dst in self.assignment.items():
            for a, b in zip(src, dst):
                r.setdefault(a, set()).add(b)
        return r

    def serialize(self) -> str:
        lines = []
        for src in sorted(self.assignment):
            dst = self.assignment[src]
            lines.append(" ".join(src) + " -> " + " ".join(dst))
        return "\n".join(lines)


def _scan_tuple(text: str, lineno: int):
    """Tokenize space-separated labels; set-label names contain spaces so a
    plain split will not do."""
    out = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        lab, i = _scan_label(text, i, lineno)
        out.append(lab)
    return tuple(out)


def parse_relaxation(text: str) -> RelaxationMap:
    m = RelaxationMap()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" not in line:
            raise ValueError(f"missing '->' in {line!r}")
        lhs, rhs = line.split("->", 1)
        m.assignment[_scan_tuple(lhs, lineno)] = _scan_tuple(rhs, lineno)
    return m


def equivariant_map(per_config: dict) -> RelaxationMap:
    """Extend a choice of one image tuple per source configuration to all
    orderings by permuting both sides in lockstep."""
    m = RelaxationMap()
    for src, dst in per_config.items():
        for perm in itertools.permutations(range(len(src))):
            key = tuple(src[i] for i in perm)
            m.assignment.setdefault(key, tuple(dst[i] for i in perm))
    return m


def check_relaxation(source: Problem, target: Problem,
                     f: RelaxationMap) -> RelaxationReport:
    """Verify that f witnesses target being a relaxation of source."""
    if source.white_arity != target.white_arity or \
            source.black_arity != target.black_arity:
        return RelaxationReport(False, "arity mismatch")
    needed = {perm for cfg in source.white.configs
              for perm in itertools.permutations(cfg)}
    for key in needed:
        if key not in f.assignment:
            return RelaxationReport(False, "map not total",
                                    ("missing", key))
    for src, dst in f.assignment.items():
        if config_of(src) not in source.white:
            return RelaxationReport(False, "key not a source configuration",
                                    ("bad-key", src))
        if config_of(dst) not in target.white:
            return RelaxationReport(
                False, "image not a target configuration", (src, dst))
    r = f.label_relation()
    checked = set()
    for cfg in source.black.configs:
        sig = tuple(sorted(frozenset(r.get(l, ())) for l in cfg))
        if sig in checked:
            continue
        checked.add(sig)
        for choice in itertools.product(*(sorted(r.get(l, ())) for l in cfg)):
            if config_of(choice) not in target.black:
                return RelaxationReport(
                    False, "black configuration breaks", (cfg, choice))
    return RelaxationReport(True)


def _black_images_ok(source, target, r):
    """Partial-map pruning: a bad choice over already-decided labels can
    never be repaired, since r only grows."""
    checked = set()
    for cfg in source.black.configs:
        rs = [r.get(l) for l in cfg]
        if any(not s for s in rs):
            continue
        sig = tuple(sorted(frozenset(s) for s in rs))
        if sig in checked:
            continue
        checked.add(sig)
        for choice in itertools.product(*(sorted(s) for s in rs)):
            if config_of(choice) not in target.black:
                return False
    return True


def _hamming(a, b):
    return sum(1 for x, y in zip(a, b) if x != y)


def find_relaxation(source: Problem, target: Problem):
    """Search for a relaxation witness, or return None when none exists.

    Only equivariant maps are searched; if any relaxation exists, the
    equivariant map induced by permuting one of its values has a relation
    no larger, so it is also a relaxation. The search is therefore
    complete.
    """
    if source.white_arity != target.white_arity or \
            source.black_arity != target.black_arity:
        return None
    srcs = sorted(source.white.configs)
    images = sorted({perm for cfg in target.white.configs
                     for perm in itertools.permutations(cfg)})
    if not srcs:
        return equivariant_map({})
    if not images:
        return None
    cap = 5_000_000
    if len(srcs) * len(images) > cap:
        raise ExplosionGuard("relaxation search space",
                             len(srcs) * len(images), cap)

    order = sorted(range(len(srcs)),
                   key=lambda i: min(_hamming(srcs[i], im) for im in images))
    per_src_images = [sorted(images, key=lambda im: _hamming(srcs[i], im))
                      for i in range(len(srcs))]

    assignment = {}

    def merge(r, src, dst):
        out = {k: set(v) for k, v in r.items()}
        for a, b in zip(src, dst):
            out.setdefault(a, set()).add(b)
        return out

    def search(pos, r):
        if pos == len(order):
            return True
        i = order[pos]
        for im in per_src_images[i]:
            r2 = merge(r, srcs[i], im)
            if _black_images_ok(source, target, r2):
                assignment[srcs[i]] = im
                if search(pos + 1, r2):
                    return True
                del assignment[srcs[i]]
        return False

    if search(0, {}):
        return equivariant_map(assignment)
    return None


# ---------------------------------------------------------------------------
# Label merging


def merge_labels(p: Problem, groups) -> tuple:
    """Quotient the alphabet by a partition (iterable of label groups;
    singletons may be omitted). Returns (merged problem, label map).

    White configurations are mapped through; a merged black configuration
    is kept only when all its preimage choices were allowed, so the merged
    problem is at least as hard on the black side.
    """
    mapping = {l: l for l in p.alphabet}
    for g in groups:
        g = sorted(g)
        rep = g[0]
        for l in g:
            if l not in p.alphabet:
                raise ValueError(f"unknown label {l!r}")
            mapping[l] = rep
    classes = {}
    for l, rep in mapping.items():
        classes.setdefault(rep, set()).add(l)
    white = {config_of(mapping[l] for l in c) for c in p.white.configs}
    black = set()
    for cfg in {config_of(mapping[l] for l in c) for c in p.black.configs}:
        if all(config_of(choice) in p.black
               for choice in itertools.product(*(sorted(classes[l])
                                                 for l in cfg))):
            black.add(cfg)
    merged = make_problem(white, black, white_arity=p.white_arity,
                          black_arity=p.black_arity,
                          alphabet=set(mapping.values()))
    return merged, mapping
