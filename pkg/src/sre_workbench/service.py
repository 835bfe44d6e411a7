"""JSON HTTP API backing the web workbench.

Every text field is produced by the same render_* helpers the CLI prints,
so workbench verdicts match CLI output byte for byte. Sessions live in
memory; each holds the current problem plus an undo history of snapshots.
"""

from __future__ import annotations

import threading
import uuid

from fastapi import Body, FastAPI, HTTPException

from .cli import (DomainFailure, build_family, default_instance, gen_graph,
                  render_bound_derand, render_bound_det, render_bound_seqlen,
                  render_bound_thm34, render_diagram, render_growth,
                  render_oracle, render_problem, solve_instance)
from .errors import ExplosionGuard, Indeterminate
from .graphs import (BipartiteGraph, SupportInstance, format_graph,
                     parse_graph_file)
from .lifting import LiftedProblem, lift
from .problems import ParseError, Problem, parse_problem
from .roundelim import (apply_RE, check_relaxation, find_relaxation,
                        merge_labels, parse_relaxation)

app = FastAPI(title="sre-workbench")


class SessionState:
    def __init__(self, sid: str, problem, action: str):
        self.sid = sid
        self.lock = threading.Lock()
        # history of (action, problem snapshot); last entry is current
        self.history = [(action, problem)]

    @property
    def problem(self):
        return self.history[-1][1]


_sessions: dict[str, SessionState] = {}


def _session(sid: str) -> SessionState:
    s = _sessions.get(sid)
    if s is None:
        raise HTTPException(404, f"no session {sid!r}")
    return s


def _snapshot(s: SessionState) -> dict:
    p = s.problem
    out = {"session": s.sid, "text": render_problem(p),
           "history": [a for a, _ in s.history]}
    if isinstance(p, Problem):
        out["alphabet"] = sorted(p.alphabet)
        out["white_configs"] = len(p.white.configs)
        out["black_configs"] = len(p.black.configs)
    else:
        out["alphabet"] = sorted(p.alphabet)
    return out


def _new_session(problem, action: str) -> SessionState:
    sid = uuid.uuid4().hex[:12]
    s = SessionState(sid, problem, action)
    _sessions[sid] = s
    return s


def _domain(fn, *args, **kw):
    """Run a library call, translating failures to HTTP statuses."""
    try:
        return fn(*args, **kw)
    except (ExplosionGuard, Indeterminate) as e:
        raise HTTPException(422, f"resource guard: {e}")
    except DomainFailure as e:
        raise HTTPException(409, str(e))
    except (ParseError, ValueError) as e:
        raise HTTPException(400, str(e))


@app.post("/api/problem/parse")
def problem_parse(payload: dict = Body(...)):
    p = _domain(parse_problem, payload["text"])
    return _snapshot(_new_session(p, "parse"))


@app.post("/api/family")
def family(payload: dict = Body(...)):
    p = _domain(build_family, payload["kind"], payload)
    return _snapshot(_new_session(p, f"family:{payload['kind']}"))


@app.get("/api/problem/{sid}")
def problem_get(sid: str):
    return _snapshot(_session(sid))


@app.post("/api/problem/{sid}/diagram")
def problem_diagram(sid: str, payload: dict = Body(...)):
    s = _session(sid)
    if not isinstance(s.problem, Problem):
        raise HTTPException(400, "diagram needs an unlifted problem")
    side = payload.get("side", "black")
    text = _domain(render_diagram, s.problem, side,
                   payload.get("full", False))
    return {"session": sid, "side": side, "text": text,
            "edges": [line.split(" -> ") for line in text.splitlines()]}


@app.post("/api/problem/{sid}/re")
def problem_re(sid: str, payload: dict = Body(...)):
    s = _session(sid)
    steps = int(payload.get("steps", 1))
    with s.lock:
        if not isinstance(s.problem, Problem):
            raise HTTPException(400, "round elimination needs an unlifted "
                                     "problem")
        p = s.problem
        for _ in range(steps):
            p = _domain(apply_RE, p)
        s.history.append((f"re:{steps}", p))
        out = _snapshot(s)
    out["growth"] = render_growth(p)
    return out


@app.post("/api/problem/{sid}/lift")
def problem_lift(sid: str, payload: dict = Body(...)):
    s = _session(sid)
    with s.lock:
        if not isinstance(s.problem, Problem):
            raise HTTPException(400, "problem is already lifted")
        lp = _domain(lift, s.problem, int(payload["delta"]),
                     int(payload["rank"]))
        s.history.append((f"lift:{lp.delta},{lp.rank}", lp))
        return _snapshot(s)


@app.post("/api/problem/{sid}/merge")
def problem_merge(sid: str, payload: dict = Body(...)):
    s = _session(sid)
    with s.lock:
        if not isinstance(s.problem, Problem):
            raise HTTPException(400, "merge needs an unlifted problem")
        merged, mapping = _domain(merge_labels, s.problem,
                                  payload["groups"])
        s.history.append(("merge:" + ";".join(
            ",".join(sorted(g)) for g in payload["groups"]), merged))
        out = _snapshot(s)
    out["label_map"] = mapping
    return out


@app.post("/api/problem/{sid}/relax-check")
def problem_relax(sid: str, payload: dict = Body(...)):
    s = _session(sid)
    if not isinstance(s.problem, Problem):
        raise HTTPException(400, "relaxation needs an unlifted problem")
    target = _domain(parse_problem, payload["target"])
    if payload.get("map"):
        f = _domain(parse_relaxation, payload["map"])
        rep = _domain(check_relaxation, s.problem, target, f)
        return {"session": sid, "ok": rep.ok, "reason": rep.reason,
                "text": "RELAXATION-OK" if rep.ok else
                f"not a relaxation: {rep.reason} {rep.counterexample}"}
    f = _domain(find_relaxation, s.problem, target)
    if f is None:
        return {"session": sid, "ok": False, "reason": "no relaxation found",
                "text": "no relaxation found"}
    return {"session": sid, "ok": True, "reason": "", "text": f.serialize()}


@app.post("/api/session/{sid}/undo")
def session_undo(sid: str):
    s = _session(sid)
    with s.lock:
        if len(s.history) <= 1:
            raise HTTPException(409, "nothing to undo")
        s.history.pop()
        return _snapshot(s)


@app.post("/api/graph/gen")
def graph_gen(payload: dict = Body(...)):
    g = _domain(gen_graph, payload["kind"], payload)
    return {"text": format_graph(g)}


def _resolve_problem(payload: dict):
    if "session" in payload:
        p = _session(payload["session"]).problem
    else:
        p = _domain(parse_problem, payload["problem"])
    if payload.get("lift") and not isinstance(p, LiftedProblem):
        spec = payload["lift"]
        p = _domain(lift, p, int(spec["delta"]), int(spec["rank"]))
    return p


@app.post("/api/solve")
def solve(payload: dict = Body(...)):
    p = _resolve_problem(payload)
    parsed = _domain(parse_graph_file, payload["graph"])
    text, sol = _domain(solve_instance, p, parsed,
                        scope=payload.get("scope"),
                        budget_ms=payload.get("budget_ms"),
                        expect=payload.get("expect"))
    return {"verdict": text.splitlines()[0], "text": text}


@app.post("/api/oracle")
def oracle(payload: dict = Body(...)):
    p = _resolve_problem(payload)
    g = _domain(parse_graph_file, payload["graph"])
    if isinstance(g, SupportInstance):
        g = g.support
    if not isinstance(g, BipartiteGraph):
        raise HTTPException(400, "the zero-round oracle needs a bipartite "
                                 "support")
    text = _domain(render_oracle, p, g)
    return {"text": text, "solvable": not text.startswith("NO-")}


@app.post("/api/bound")
def bound(payload: dict = Body(...)):
    which = payload["which"]
    if which == "det":
        g = payload["girth"]
        g = float("inf") if g in ("inf", "infinity") else int(g)
        text = _domain(render_bound_det, payload["kind"],
                       int(payload["k"]), g)
    elif which == "thm34":
        text = _domain(render_bound_thm34, float(payload["n"]),
                       int(payload["delta"]), int(payload["rank"]),
                       int(payload["k"]), float(payload.get("eps", 1.0)),
                       float(payload.get("c", 0.0)),
                       payload.get("kind", "bipartite"))
    elif which == "derand":
        table = {int(k): int(v)
                 for k, v in (payload.get("table") or {}).items()}
        text = _domain(render_bound_derand, payload["kind"], table,
                       payload.get("default"), float(payload["n"]))
    elif which == "seqlen":
        text = _domain(render_bound_seqlen, payload["kind"],
                       payload["params"])
    else:
        raise HTTPException(400, f"unknown bound kind {which!r}")
    return {"text": text}
