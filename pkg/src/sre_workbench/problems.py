"""Core black-white formalism: problems, the DSL, diagrams, isomorphism.

A problem is a finite label alphabet plus a white and a black constraint,
each a set of equal-size multisets over the alphabet.  Multisets are
represented as sorted tuples of label names.  Set-labels produced by
problem transformations are atomic strings of the form ``(A B)``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional

from .errors import ExplosionGuard

Configuration = tuple  # sorted tuple of label names

_PLAIN_LABEL = re.compile(r"[A-Za-z0-9_]+")

WHITE = "white"
BLACK = "black"

# condensation is skipped above this many configurations per constraint
_CONDENSE_CAP = 20000


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int = 0):
        super().__init__(f"line {line}, col {col}: {msg}")
        self.line = line
        self.col = col


def config_of(labels: Iterable[str]) -> Configuration:
    return tuple(sorted(labels))


@dataclass(frozen=True)
class Constraint:
    side: str
    arity: int
    configs: frozenset

    def __post_init__(self):
        if self.side not in (WHITE, BLACK):
            raise ValueError(f"bad side {self.side!r}")
        if self.arity < 1:
            raise ValueError("arity must be positive")
        for c in self.configs:
            if len(c) != self.arity:
                raise ValueError(f"configuration {c} does not have arity {self.arity}")

    def __contains__(self, config) -> bool:
        return tuple(sorted(config)) in self.configs

    def labels(self) -> frozenset:
        return frozenset(l for c in self.configs for l in c)


@dataclass(frozen=True)
class Problem:
    alphabet: frozenset
    white: Constraint
    black: Constraint

    def __post_init__(self):
        if self.white.side != WHITE or self.black.side != BLACK:
            raise ValueError("constraint sides are swapped")
        stray = (self.white.labels() | self.black.labels()) - self.alphabet
        if stray:
            raise ValueError(f"labels {sorted(stray)} not in alphabet")

    def constraint(self, side: str) -> Constraint:
        return self.white if side == WHITE else self.black

    @property
    def white_arity(self) -> int:
        return self.white.arity

    @property
    def black_arity(self) -> int:
        return self.black.arity


def make_problem(white_configs, black_configs, white_arity=None, black_arity=None,
                 alphabet=None) -> Problem:
    """Build a problem from iterables of label iterables."""
    wc = frozenset(config_of(c) for c in white_configs)
    bc = frozenset(config_of(c) for c in black_configs)
    wa = white_arity if white_arity is not None else len(next(iter(wc)))
    ba = black_arity if black_arity is not None else len(next(iter(bc)))
    labels = frozenset(l for c in wc | bc for l in c)
    if alphabet is not None:
        labels = labels | frozenset(alphabet)
    return Problem(labels, Constraint(WHITE, wa, wc), Constraint(BLACK, ba, bc))


# ---------------------------------------------------------------------------
# DSL parsing


def _scan_label(line: str, i: int, lineno: int) -> tuple[str, int]:
    """Scan one label starting at position i: a plain word or a balanced
    parenthesized set-label."""
    if line[i] == "(":
        depth = 0
        j = i
        while j < len(line):
            if line[j] == "(":
                depth += 1
            elif line[j] == ")":
                depth -= 1
                if depth == 0:
                    return line[i : j + 1], j + 1
            j += 1
        raise ParseError("unbalanced '(' in set-label", lineno, i)
    m = _PLAIN_LABEL.match(line, i)
    if not m:
        raise ParseError(f"expected a label at {line[i:]!r}", lineno, i)
    return m.group(0), m.end()


def _parse_config_line(line: str, lineno: int):
    """Parse one configuration line into a list of (label-group, exponent)."""
    groups = []
    i = 0
    n = len(line)
    while i < n:
        if line[i] == " ":
            i += 1
            continue
        if line[i] == "[":
            members = []
            i += 1
            while i < n and line[i] != "]":
                if line[i] == " ":
                    i += 1
                    continue
                lab, i = _scan_label(line, i, lineno)
                members.append(lab)
            if i >= n:
                raise ParseError("unterminated '[' group", lineno, i)
            i += 1  # skip ']'
            if len(members) < 1:
                raise ParseError("empty '[' group", lineno, i)
            group = frozenset(members)
        else:
            lab, i = _scan_label(line, i, lineno)
            group = frozenset([lab])
        exp = 1
        if i < n and line[i] == "^":
            m = re.match(r"\^(\d+)", line[i:])
            if not m or int(m.group(1)) < 1:
                raise ParseError("exponent must be a positive integer", lineno, i)
            exp = int(m.group(1))
            i += len(m.group(0))
        groups.append((group, exp))
    if not groups:
        raise ParseError("empty configuration line", lineno, 0)
    return groups


def expand_condensed(groups) -> set:
    """Expand a condensed configuration (list of (label-set, exponent))
    into the set of plain configurations it denotes."""
    slots = []
    for group, exp in groups:
        slots.extend([sorted(group)] * exp)
    return {config_of(choice) for choice in itertools.product(*slots)}


def parse_problem(text: str) -> Problem:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            lines.append((lineno, line.strip()))
    if not lines or lines[0][1] != "white:":
        raise ParseError("input must start with 'white:'", lines[0][0] if lines else 1)
    try:
        black_at = next(i for i, (_, l) in enumerate(lines) if l == "black:")
    except StopIteration:
        raise ParseError("missing 'black:' section", lines[-1][0]) from None

    def parse_section(section_lines, side):
        if len(section_lines) == 1 and section_lines[0][1] == "empty":
            return None, set()
        if not section_lines:
            raise ParseError(f"{side} section has no configuration lines "
                             "(use the 'empty' keyword for an empty constraint)",
                             lines[black_at][0])
        arity = None
        configs = set()
        for lineno, line in section_lines:
            groups = _parse_config_line(line, lineno)
            expanded = expand_condensed(groups)
            line_arity = len(next(iter(expanded)))
            if arity is None:
                arity = line_arity
            elif arity != line_arity:
                raise ParseError(
                    f"arity mismatch in {side} section: {line_arity} vs {arity}",
                    lineno)
            configs |= expanded
        return arity, configs

    wa, white_configs = parse_section(lines[1:black_at], WHITE)
    ba, black_configs = parse_section(lines[black_at + 1 :], BLACK)
    # an empty section has no intrinsic arity; borrow from the other side
    if wa is None:
        wa = ba if ba is not None else 1
    if ba is None:
        ba = wa
    labels = frozenset(l for c in white_configs | black_configs for l in c)
    return Problem(labels,
                   Constraint(WHITE, wa, frozenset(white_configs)),
                   Constraint(BLACK, ba, frozenset(black_configs)))


# ---------------------------------------------------------------------------
# Canonical formatting


def _grow(cfg, allowed, alphabet):
    """Greedily enlarge the groups of a configuration while the expansion
    stays inside `allowed`.  Deterministic: slots and labels in sorted order."""
    groups = [frozenset([l]) for l in cfg]
    changed = True
    while changed:
        changed = False
        for i in range(len(groups)):
            for lab in sorted(alphabet - groups[i]):
                others = [sorted(g) for j, g in enumerate(groups) if j != i]
                new_exp = {config_of(choice + (lab,))
                           for choice in itertools.product(*others)}
                if new_exp <= allowed:
                    groups[i] = groups[i] | {lab}
                    changed = True
    return tuple(sorted(groups, key=lambda g: tuple(sorted(g))))


def _cond_expansion(groups) -> set:
    return expand_condensed([(g, 1) for g in groups])


def _cond_key(groups):
    return tuple(tuple(sorted(g)) for g in groups)


def condense_constraint(configs, alphabet):
    """Canonical condensation: a deterministic greedy disjoint cover of the
    configuration set by condensed lines with maximal groups."""
    if len(configs) > _CONDENSE_CAP:
        return [tuple(frozenset([l]) for l in c) for c in sorted(configs)]
    remaining = set(configs)
    lines = []
    while remaining:
        best = None
        best_exp = None
        for cfg in sorted(remaining):
            cond = _grow(cfg, remaining, alphabet)
            exp = _cond_expansion(cond)
            if best is None or len(exp) > len(best_exp) or (
                    len(exp) == len(best_exp) and _cond_key(cond) < _cond_key(best)):
                best, best_exp = cond, exp
        lines.append(best)
        remaining -= best_exp
    return sorted(lines, key=_cond_key)


def _format_group(group) -> str:
    members = sorted(group)
    if len(members) == 1:
        return members[0]
    return "[" + " ".join(members) + "]"


def format_condensed_line(groups) -> str:
    parts = []
    for group, run in itertools.groupby(groups):
        n = len(list(run))
        text = _format_group(group)
        parts.append(text if n == 1 else f"{text}^{n}")
    return " ".join(parts)


def format_constraint(constraint: Constraint, alphabet) -> list:
    if not constraint.configs:
        return ["empty"]
    lines = condense_constraint(constraint.configs, frozenset(alphabet))
    return [format_condensed_line(g) for g in lines]


def format_problem(p: Problem) -> str:
    out = ["white:"]
    out += format_constraint(p.white, p.alphabet)
    out.append("black:")
    out += format_constraint(p.black, p.alphabet)
    return "\n".join(out)


def set_label_name(members: Iterable[str]) -> str:
    """Atomic name for a set-label, e.g. (M O X)."""
    return "(" + " ".join(sorted(members)) + ")"


def set_label_members(name: str) -> tuple:
    """Inverse of set_label_name, respecting nested parentheses."""
    if not (name.startswith("(") and name.endswith(")")):
        raise ValueError(f"not a set-label: {name!r}")
    inner = name[1:-1].strip()
    members = []
    i = 0
    while i < len(inner):
        if inner[i] == " ":
            i += 1
            continue
        lab, i = _scan_label(inner, i, 0)
        members.append(lab)
    return tuple(members)


# ---------------------------------------------------------------------------
# Strength, diagrams, right-closed sets


def is_at_least_as_strong(p: Problem, side: str, x: str, y: str) -> bool:
    """True iff replacing any positive number of y's by x's maps every
    configuration of the side's constraint into the constraint."""
    if x not in p.alphabet or y not in p.alphabet:
        raise ValueError("labels must be in the alphabet")
    if x == y:
        return True
    constraint = p.constraint(side)
    for cfg in constraint.configs:
        m = cfg.count(y)
        for k in range(1, m + 1):
            replaced = [l for l in cfg if l != y] + [y] * (m - k) + [x] * k
            if config_of(replaced) not in constraint.configs:
                return False
    return True


@dataclass(frozen=True)
class Diagram:
    side: str
    nodes: tuple
    edges: frozenset  # (y, x) pairs: x at least as strong as y
    _reach: dict = field(compare=False, hash=False, default=None)

    def reachable(self, label: str) -> frozenset:
        return self._reach[label]

    def transitive_reduction(self) -> frozenset:
        """Edge set with edges implied by transitivity removed (render only)."""
        kept = set()
        for (y, x) in self.edges:
            implied = any(
                (y, z) in self.edges and (z, x) in self.edges
                for z in self.nodes if z not in (x, y)
                # mutual-reachability cliques keep their edges
                and not ((z, y) in self.edges and (x, z) in self.edges)
            )
            if not implied:
                kept.add((y, x))
        return frozenset(kept)


def compute_diagram(p: Problem, side: str) -> Diagram:
    nodes = tuple(sorted(p.alphabet))
    edges = frozenset(
        (y, x)
        for y in nodes
        for x in nodes
        if x != y and is_at_least_as_strong(p, side, x, y)
    )
    reach = {}
    for l in nodes:
        seen = {l}
        frontier = [l]
        while frontier:
            cur = frontier.pop()
            for (y, x) in edges:
                if y == cur and x not in seen:
                    seen.add(x)
                    frontier.append(x)
        reach[l] = frozenset(seen)
    return Diagram(side, nodes, edges, reach)


def right_closed_sets(d: Diagram) -> frozenset:
    """All non-empty label subsets closed under diagram reachability."""
    n = len(d.nodes)
    if n > 22:
        raise ExplosionGuard("right_closed_sets", 2 ** n, 2 ** 22)
    idx = {l: i for i, l in enumerate(d.nodes)}
    reach_mask = []
    for l in d.nodes:
        m = 0
        for t in d.reachable(l):
            m |= 1 << idx[t]
        reach_mask.append(m)
    out = set()
    for mask in range(1, 2 ** n):
        closed = True
        for i in range(n):
            if mask >> i & 1 and (mask & reach_mask[i]) != reach_mask[i]:
                closed = False
                break
        if closed:
            out.add(frozenset(d.nodes[i] for i in range(n) if mask >> i & 1))
    return frozenset(out)


# ---------------------------------------------------------------------------
# Isomorphism up to label renaming


def _label_profile(p: Problem, label: str):
    wh = tuple(sorted(c.count(label) for c in p.white.configs))
    bl = tuple(sorted(c.count(label) for c in p.black.configs))
    return (wh, bl)


def _rename(configs, mapping):
    return frozenset(config_of(mapping[l] for l in c) for c in configs)


def problems_equivalent(p1: Problem, p2: Problem) -> Optional[dict]:
    """Search for a label bijection mapping p1 exactly onto p2.

    Returns the bijection as a dict, or None.  Exhaustive with pruning on
    per-label occurrence profiles.
    """
    if (p1.white_arity != p2.white_arity or p1.black_arity != p2.black_arity
            or len(p1.alphabet) != len(p2.alphabet)
            or len(p1.white.configs) != len(p2.white.configs)
            or len(p1.black.configs) != len(p2.black.configs)):
        return None
    prof1 = {l: _label_profile(p1, l) for l in p1.alphabet}
    prof2 = {l: _label_profile(p2, l) for l in p2.alphabet}
    if sorted(prof1.values()) != sorted(prof2.values()):
        return None
    labels1 = sorted(p1.alphabet, key=lambda l: (prof1[l], l))
    candidates = {
        l: sorted(m for m in p2.alphabet if prof2[m] == prof1[l]) for l in labels1
    }
    mapping: dict = {}
    used: set = set()

    def ok_so_far() -> bool:
        # mapped white configs must appear in p2 once fully translated
        for c in p1.white.configs:
            if all(l in mapping for l in c):
                if config_of(mapping[l] for l in c) not in p2.white.configs:
                    return False
        for c in p1.black.configs:
            if all(l in mapping for l in c):
                if config_of(mapping[l] for l in c) not in p2.black.configs:
                    return False
        return True

    def search(i: int) -> bool:
        if i == len(labels1):
            return (_rename(p1.white.configs, mapping) == p2.white.configs
                    and _rename(p1.black.configs, mapping) == p2.black.configs)
        l = labels1[i]
        for m in candidates[l]:
            if m in used:
                continue
            mapping[l] = m
            used.add(m)
            if ok_so_far() and search(i + 1):
                return True
            del mapping[l]
            used.remove(m)
        return False

    if search(0):
        return dict(mapping)
    return None
