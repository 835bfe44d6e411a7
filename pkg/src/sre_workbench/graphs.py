"""Concrete graph machinery: 2-colored bipartite graphs, hypergraphs,
incidence graphs, double covers, randomized generators and exact
small-scale invariants.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field

from .errors import ExplosionGuard, GenerationFailed, guard_nodes

INF = math.inf


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph; nodes are 1..n after canonicalization."""

    nodes: tuple
    edges: frozenset  # of frozenset pairs

    def __post_init__(self):
        ns = set(self.nodes)
        for e in self.edges:
            if len(e) != 2 or not e <= ns:
                raise ValueError(f"bad edge {sorted(e)}")

    def adjacency(self):
        adj = {v: set() for v in self.nodes}
        for e in self.edges:
            u, v = sorted(e)
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def degrees(self):
        return {v: len(nb) for v, nb in self.adjacency().items()}


def make_graph(nodes, edges) -> Graph:
    return Graph(tuple(nodes), frozenset(frozenset(e) for e in edges))


@dataclass(frozen=True)
class BipartiteGraph:
    """2-colored graph; white and black identifier spaces are separate."""

    white_nodes: tuple
    black_nodes: tuple
    edges: tuple  # (white id, black id), in file/listing order

    def __post_init__(self):
        ws, bs = set(self.white_nodes), set(self.black_nodes)
        seen = set()
        for w, b in self.edges:
            if w not in ws or b not in bs:
                raise ValueError(f"edge ({w}, {b}) has unknown endpoint")
            if (w, b) in seen:
                raise ValueError(f"parallel edge ({w}, {b})")
            seen.add((w, b))

    def white_adj(self):
        adj = {w: [] for w in self.white_nodes}
        for w, b in self.edges:
            adj[w].append(b)
        return adj

    def black_adj(self):
        adj = {b: [] for b in self.black_nodes}
        for w, b in self.edges:
            adj[b].append(w)
        return adj

    def white_degrees(self):
        return {w: len(v) for w, v in self.white_adj().items()}

    def black_degrees(self):
        return {b: len(v) for b, v in self.black_adj().items()}

    def is_biregular(self, delta, rank) -> bool:
        return all(d == delta for d in self.white_degrees().values()) and \
            all(d == rank for d in self.black_degrees().values())

    def as_graph(self) -> Graph:
        """Untyped view with disjoint id spaces, for invariant routines."""
        n_w = len(self.white_nodes)
        widx = {w: i + 1 for i, w in enumerate(self.white_nodes)}
        bidx = {b: n_w + i + 1 for i, b in enumerate(self.black_nodes)}
        return make_graph(range(1, n_w + len(self.black_nodes) + 1),
                          [(widx[w], bidx[b]) for w, b in self.edges])


def make_bipartite(white_nodes, black_nodes, edges) -> BipartiteGraph:
    return BipartiteGraph(tuple(white_nodes), tuple(black_nodes),
                          tuple((w, b) for w, b in edges))


@dataclass(frozen=True)
class Hypergraph:
    nodes: tuple
    hyperedges: tuple  # of frozensets

    def __post_init__(self):
        ns = set(self.nodes)
        for h in self.hyperedges:
            if not h or not h <= ns:
                raise ValueError(f"bad hyperedge {sorted(h)}")

    def rank(self) -> int:
        return max((len(h) for h in self.hyperedges), default=0)

    def node_degrees(self):
        deg = {v: 0 for v in self.nodes}
        for h in self.hyperedges:
            for v in h:
                deg[v] += 1
        return deg

    def is_linear(self) -> bool:
        m = len(self.hyperedges)
        for i in range(m):
            for j in range(i + 1, m):
                if len(self.hyperedges[i] & self.hyperedges[j]) > 1:
                    return False
        return True


def make_hypergraph(nodes, hyperedges) -> Hypergraph:
    return Hypergraph(tuple(nodes), tuple(frozenset(h) for h in hyperedges))


@dataclass
class SupportInstance:
    """A support graph with a designated input subgraph and optional node
    subset S."""

    support: object  # BipartiteGraph or Hypergraph
    input_edges: tuple  # edge tuples (bipartite) or hyperedge indices
    S: tuple | None = None

    def __post_init__(self):
        if isinstance(self.support, BipartiteGraph):
            if not set(self.input_edges) <= set(self.support.edges):
                raise ValueError("input edges not in support")
        else:
            m = len(self.support.hyperedges)
            if not all(0 <= i < m for i in self.input_edges):
                raise ValueError("input hyperedge index out of range")
        if self.S is not None:
            if isinstance(self.support, BipartiteGraph):
                known = set(self.support.white_nodes) | \
                    set(self.support.black_nodes)
                ok = all(v in known for v in self.S)
            else:
                ok = set(self.S) <= set(self.support.nodes)
            if not ok:
                raise ValueError("S contains unknown nodes")

    def input_white_degree(self) -> int:
        deg = {}
        for w, _ in self.input_edges:
            deg[w] = deg.get(w, 0) + 1
        return max(deg.values(), default=0)

    def input_black_degree(self) -> int:
        deg = {}
        if isinstance(self.support, BipartiteGraph):
            for _, b in self.input_edges:
                deg[b] = deg.get(b, 0) + 1
        return max(deg.values(), default=0)


# ---------------------------------------------------------------------------
# Constructions


def incidence_graph(h: Hypergraph) -> BipartiteGraph:
    """White nodes = hypergraph nodes, black nodes = hyperedges (by 1-based
    index), edge iff membership."""
    edges = []
    for i, he in enumerate(h.hyperedges, 1):
        for v in sorted(he):
            edges.append((v, i))
    return make_bipartite(h.nodes, range(1, len(h.hyperedges) + 1), edges)


def double_cover(g: Graph) -> BipartiteGraph:
    """Bipartite double cover: each node splits into a white and a black
    copy; each edge {u, v} becomes (u_W, v_B) and (v_W, u_B)."""
    edges = []
    for e in sorted(g.edges, key=sorted):
        u, v = sorted(e)
        edges.append((u, v))
        edges.append((v, u))
    return make_bipartite(g.nodes, g.nodes, edges)


# ---------------------------------------------------------------------------
# Invariants


def _girth_simple(adj) -> float:
    best = INF
    for src in adj:
        dist = {src: 0}
        parent = {src: None}
        q = deque([src])
        while q:
            u = q.popleft()
            if dist[u] * 2 >= best:
                continue
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    parent[v] = u
                    q.append(v)
                elif parent[u] != v and parent[v] != u:
                    best = min(best, dist[u] + dist[v] + 1)
    return best


def girth(g) -> float:
    """Shortest cycle length; infinity for forests. Hypergraph girth is
    half the girth of the incidence graph."""
    if isinstance(g, Hypergraph):
        gi = girth(incidence_graph(g))
        return gi if gi == INF else gi // 2
    if isinstance(g, BipartiteGraph):
        g = g.as_graph()
    return _girth_simple(g.adjacency())


def _check_guard(g: Graph, what: str):
    cap = guard_nodes()
    if len(g.nodes) > cap:
        raise ExplosionGuard(what, len(g.nodes), cap)


def independence_number(g) -> int:
    """Exact maximum independent set size, branch and bound."""
    if isinstance(g, BipartiteGraph):
        g = g.as_graph()
    _check_guard(g, "independence number")
    idx = {v: i for i, v in enumerate(g.nodes)}
    n = len(g.nodes)
    nbr = [0] * n
    for e in g.edges:
        u, v = (idx[x] for x in sorted(e))
        nbr[u] |= 1 << v
        nbr[v] |= 1 << u

    best = [0]

    def mis(mask, size):
        if size + bin(mask).count("1") <= best[0]:
            return
        if mask == 0:
            best[0] = max(best[0], size)
            return
        # peel vertices of degree <= 1 greedily, they are always safe
        m = mask
        while m:
            v = (m & -m).bit_length() - 1
            m &= m - 1
            if bin(nbr[v] & mask).count("1") <= 1:
                mis(mask & ~((1 << v) | nbr[v]), size + 1)
                return
        # branch on a maximum-degree vertex
        v = max(_bits(mask), key=lambda u: bin(nbr[u] & mask).count("1"))
        mis(mask & ~((1 << v) | nbr[v]), size + 1)
        mis(mask & ~(1 << v), size)

    mis((1 << n) - 1, 0)
    return best[0]


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def chromatic_number(g) -> int:
    """Exact chromatic number via iterative k-colorability."""
    if isinstance(g, BipartiteGraph):
        g = g.as_graph()
    _check_guard(g, "chromatic number")
    if not g.nodes:
        return 0
    if not g.edges:
        return 1
    adj = g.adjacency()
    order = sorted(g.nodes, key=lambda v: -len(adj[v]))

    def colorable(k):
        color = {}

        def go(i):
            if i == len(order):
                return True
            v = order[i]
            used = {color[u] for u in adj[v] if u in color}
            # first-fail symmetry break: only allow one fresh color
            fresh_seen = False
            for c in range(k):
                if c in used:
                    continue
                if c not in color.values():
                    if fresh_seen:
                        break
                    fresh_seen = True
                color[v] = c
                if go(i + 1):
                    return True
                del color[v]
            return False

        return go(0)

    for k in range(2, len(g.nodes) + 1):
        if colorable(k):
            return k
    return len(g.nodes)


# ---------------------------------------------------------------------------
# Generators


def gen_biregular(n_white: int, n_black: int, delta: int, rank: int,
                  seed: int, max_tries: int = 500) -> BipartiteGraph:
    """Configuration model with rejection of parallel edges; deterministic
    per seed."""
    if n_white * delta != n_black * rank:
        raise ValueError("degree sum mismatch: nW*delta must equal nB*r")
    if delta > n_black or rank > n_white:
        raise ValueError("simple biregular graph impossible: degree exceeds "
                         "opposite side size")
    rng = random.Random(seed)
    for _ in range(max_tries):
        counts = {b: rank for b in range(1, n_black + 1)}
        edges = []
        ok = True
        for w in range(1, n_white + 1):
            # draw delta distinct black stubs, weighted by remaining counts
            stubs = [b for b, c in counts.items() for _ in range(c)]
            rng.shuffle(stubs)
            picked = []
            for b in stubs:
                if b not in picked:
                    picked.append(b)
                    if len(picked) == delta:
                        break
            if len(picked) < delta:
                ok = False
                break
            for b in picked:
                counts[b] -= 1
                edges.append((w, b))
        if ok:
            return make_bipartite(range(1, n_white + 1),
                                  range(1, n_black + 1), sorted(edges))
    raise GenerationFailed(
        f"no simple ({delta},{rank})-biregular pairing after {max_tries} tries")


def gen_regular_girth(n: int, delta: int, g_min: int, seed: int,
                      max_tries: int = 50000) -> Graph:
    """Generate-and-verify: pairing-model regular graphs rejected until the
    measured girth reaches g_min. The certificate records what was
    verified rather than relying on existence constants."""
    if n * delta % 2 != 0:
        raise ValueError("n*delta must be even")
    rng = random.Random(seed)
    for t in range(1, max_tries + 1):
        stubs = [v for v in range(1, n + 1) for _ in range(delta)]
        rng.shuffle(stubs)
        edges = set()
        ok = True
        for i in range(0, len(stubs), 2):
            u, v = stubs[i], stubs[i + 1]
            if u == v or frozenset((u, v)) in edges:
                ok = False
                break
            edges.add(frozenset((u, v)))
        if not ok:
            continue
        g = Graph(tuple(range(1, n + 1)), frozenset(edges))
        gi = girth(g)
        if gi >= g_min:
            cert = {"girth": gi, "tries": t, "seed": seed}
            if n <= guard_nodes():
                cert["independence_number"] = independence_number(g)
            object.__setattr__(g, "certificate", cert)
            return g
    raise GenerationFailed(
        f"no {delta}-regular graph on {n} nodes with girth >= {g_min} "
        f"after {max_tries} tries")


# ---------------------------------------------------------------------------
# File format


def _canon_ids(ids):
    """Canonicalize identifiers to 1..n, numerically when possible."""
    try:
        key = {i: int(i) for i in ids}
    except ValueError:
        key = {i: i for i in ids}
    ordered = sorted(ids, key=lambda i: key[i])
    return {orig: k + 1 for k, orig in enumerate(ordered)}


def parse_graph_file(text: str):
    """Parse the graph file format; returns a Graph, BipartiteGraph,
    Hypergraph, or SupportInstance when an input:/S: section appears."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty graph file")
    kind = lines[0]
    if kind not in ("bipartite", "graph", "hypergraph"):
        raise ValueError(f"unknown graph kind {kind!r}")
    section = None
    white, black, nodes = [], [], []
    edge_lines, input_idx, s_nodes = [], [], []
    for ln in lines[1:]:
        head, _, rest = ln.partition(":")
        if head in ("white", "black", "nodes", "edges", "input", "S") and \
                (ln.endswith(":") or _ == ":"):
            section = head
            rest = rest.strip()
            if not rest:
                continue
            ln = rest
        if section == "white":
            white.extend(ln.split())
        elif section == "black":
            black.extend(ln.split())
        elif section == "nodes":
            nodes.extend(ln.split())
        elif section == "edges":
            edge_lines.append(ln.split())
        elif section == "input":
            input_idx.extend(int(t) for t in ln.split())
        elif section == "S":
            s_nodes.extend(ln.split())
        else:
            raise ValueError(f"line outside any section: {ln!r}")

    if kind == "bipartite":
        wmap, bmap = _canon_ids(white), _canon_ids(black)
        edges = []
        for parts in edge_lines:
            if len(parts) != 2:
                raise ValueError(f"bipartite edge needs 2 endpoints: {parts}")
            edges.append((wmap[parts[0]], bmap[parts[1]]))
        g = make_bipartite(sorted(wmap.values()), sorted(bmap.values()), edges)
        s = tuple(sorted(wmap.get(v, bmap.get(v)) for v in s_nodes)) \
            if s_nodes else None
        if input_idx or s_nodes:
            inp = tuple(edges[i - 1] for i in input_idx)
            return SupportInstance(g, inp, S=s)
        return g
    if len(nodes) == 1 and nodes[0].isdigit():
        # `nodes: n` shorthand for ids 1..n
        ids = [str(i) for i in range(1, int(nodes[0]) + 1)]
    else:
        ids = nodes
    nmap = _canon_ids(ids)
    if kind == "graph":
        edges = []
        for parts in edge_lines:
            if len(parts) != 2:
                raise ValueError(f"graph edge needs 2 endpoints: {parts}")
            edges.append((nmap[parts[0]], nmap[parts[1]]))
        return make_graph(sorted(nmap.values()), edges)
    hyper = [frozenset(nmap[t] for t in parts) for parts in edge_lines]
    h = make_hypergraph(sorted(nmap.values()), hyper)
    if input_idx or s_nodes:
        s = tuple(sorted(nmap[v] for v in s_nodes)) if s_nodes else None
        return SupportInstance(h, tuple(i - 1 for i in input_idx), S=s)
    return h


def format_graph(g) -> str:
    lines = []
    if isinstance(g, SupportInstance):
        sup = g.support
        body = format_graph(sup)
        lines = body.splitlines()
        lines.append("input:")
        if isinstance(sup, BipartiteGraph):
            pos = {e: i + 1 for i, e in enumerate(sup.edges)}
            lines.append(" ".join(str(pos[e]) for e in g.input_edges))
        else:
            lines.append(" ".join(str(i + 1) for i in g.input_edges))
        if g.S is not None:
            lines.append("S:")
            lines.append(" ".join(str(v) for v in g.S))
        return "\n".join(lines)
    if isinstance(g, BipartiteGraph):
        lines.append("bipartite")
        lines.append("white: " + " ".join(str(w) for w in g.white_nodes))
        lines.append("black: " + " ".join(str(b) for b in g.black_nodes))
        lines.append("edges:")
        lines.extend(f"{w} {b}" for w, b in g.edges)
    elif isinstance(g, Hypergraph):
        lines.append("hypergraph")
        lines.append("nodes: " + " ".join(str(v) for v in g.nodes))
        lines.append("edges:")
        lines.extend(" ".join(str(v) for v in sorted(h))
                     for h in g.hyperedges)
    else:
        lines.append("graph")
        lines.append("nodes: " + " ".join(str(v) for v in g.nodes))
        lines.append("edges:")
        lines.extend(f"{u} {v}" for u, v in
                     sorted(tuple(sorted(e)) for e in g.edges))
    return "\n".join(lines)


def cycle_graph(n: int) -> Graph:
    return make_graph(range(1, n + 1),
                      [(i, i % n + 1) for i in range(1, n + 1)])


def complete_bipartite(a: int, b: int) -> BipartiteGraph:
    return make_bipartite(range(1, a + 1), range(1, b + 1),
                          [(w, u) for w in range(1, a + 1)
                       for u in range(1, b + 1)])
