"""Lower-bound arithmetic: fixed-point round counts, the girth-capped
bound formulas, derandomization translations, and sequence lengths."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

INF = math.inf

# guard against 3.9999999 artifacts of float powers before flooring
_EPS = 1e-9


@dataclass
class BoundReport:
    inputs: dict
    deterministic_bound: int
    randomized_bound: int | None
    formula_tag: str


def det_bound(kind: str, k: int, g) -> int:
    """Rounds needed against a length-k fixed-point sequence on girth-g
    instances: min(2k, (g-4)/2) bipartite, min(k, (g-4)/2) on hypergraphs;
    infinite girth drops the girth cap."""
    if kind not in ("bipartite", "hypergraph"):
        raise ValueError(f"unknown kind {kind!r}")
    if k < 0:
        raise ValueError("k must be non-negative")
    if g != INF and g < 4:
        raise ValueError("girth must be at least 4 (or infinity)")
    cap = 2 * k if kind == "bipartite" else k
    if g == INF:
        return cap
    return min(cap, (g - 4) // 2)


def _det_at(kind: str, k: int, n: float, delta: int, r: int, eps: float,
            c: float) -> int:
    if n <= 1:
        return 0
    girth_term = (eps * (math.log(n, delta * r) - c) - 4) / 2
    cap = 2 * k if kind == "bipartite" else k
    val = min(cap, girth_term) - 1
    return max(0, math.floor(val + _EPS))


def theorem34_bounds(n, delta: int, r: int, k: int, eps: float = 1.0,
                     c: float = 0.0, kind: str = "bipartite") -> BoundReport:
    """Deterministic bound min{2k, (eps(log_{delta r} n - c) - 4)/2} - 1
    (floored, clamped at 0) and its randomized counterpart obtained by the
    n -> sqrt(log2(n)/3) substitution (cube root of log2(n)/4 on
    hypergraphs)."""
    if n < 2 or delta < 2 or r < 2:
        raise ValueError("need n, delta, r >= 2")
    if kind not in ("bipartite", "hypergraph"):
        raise ValueError(f"unknown kind {kind!r}")
    det = _det_at(kind, k, n, delta, r, eps, c)
    if kind == "bipartite":
        n_rand = math.sqrt(math.log2(n) / 3)
    else:
        n_rand = (math.log2(n) / 4) ** (1.0 / 3.0)
    rand = _det_at(kind, k, n_rand, delta, r, eps, c)
    return BoundReport(
        inputs={"n": n, "delta": delta, "r": r, "k": k, "eps": eps, "c": c,
                "kind": kind},
        deterministic_bound=det,
        randomized_bound=rand,
        formula_tag="girth-capped-sequence",
    )


def derand_translate(kind: str, det_complexity_at, n) -> int:
    """Randomized lower bound implied by a deterministic complexity
    function: evaluate it at floor(sqrt(log2(n)/3)) for graphs and
    floor(cbrt(log2(n)/4)) for hypergraphs."""
    if kind not in ("graph", "hypergraph"):
        raise ValueError(f"unknown kind {kind!r}")
    if n < 1:
        raise ValueError("n must be at least 1")
    logn = math.log2(n)
    if kind == "graph":
        m = math.floor(math.sqrt(logn / 3) + _EPS)
    else:
        m = math.floor((logn / 4) ** (1.0 / 3.0) + _EPS)
    return det_complexity_at(m)


def sequence_length(kind: str, **params) -> int:
    """Length of the known relaxation sequences.

    matching: floor((delta_p - x) / y) - 2.
    ruling: floor(eps * beta * (k / ((alpha + 1) * c)) ** (1 / beta)),
    with eps defaulting to 1/4.
    """
    if kind == "matching":
        delta_p, x, y = params["delta_p"], params["x"], params["y"]
        if y <= 0:
            raise ValueError("y must be positive")
        return (delta_p - x) // y - 2
    if kind == "ruling":
        k = params["k"]
        beta = params["beta"]
        alpha = params.get("alpha", 0)
        c = params.get("c", 1)
        eps = params.get("eps", 0.25)
        denom = (alpha + 1) * c
        if denom <= 0 or beta <= 0:
            raise ValueError("need positive beta and (alpha+1)c")
        return math.floor(eps * beta * (k / denom) ** (1.0 / beta) + _EPS)
    raise ValueError(f"unknown kind {kind!r}")
