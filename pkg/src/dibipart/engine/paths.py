"""Correct connecting paths, and the short-path phase.

For family index ``i`` an *i-path* runs from ``b_i`` (head of the
in-dominating set) to ``a_i`` (tail of the out-dominating set).  It is
*correct* when its vertex count has the parity its class requires: any for
classes 0-1, odd for classes 2-3, even for classes 4-5.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from ..connectivity import candidate_paths
from ..errors import ClosureStuck, PipelineFailure, SearchBudgetExceeded
from .closure import safety_closure
from .state import I, II, EngineState, other


def required_parity(params, i):
    """0 (even), 1 (odd) or ``None`` (any) for family index ``i``."""
    cls = params.index_class(i)
    if cls <= 1:
        return None
    return 1 if cls <= 3 else 0


def is_correct(params, i, path) -> bool:
    want = required_parity(params, i)
    return want is None or len(path) % 2 == want


def path_colors(params, i, path, start_color):
    """Colours along ``path`` for index ``i``: constant for classes 0-1,
    alternating (starting at ``start_color``) otherwise."""
    cls = params.index_class(i)
    if cls <= 1:
        return [start_color] * len(path)
    out, c = [], start_color
    for _ in path:
        out.append(c)
        c = other(c)
    return out


@dataclass
class PathPlan:
    final: dict = field(default_factory=dict)            # i -> tuple path
    short_indices: list = field(default_factory=list)
    leftover: list = field(default_factory=list)
    incorrect_short: dict = field(default_factory=dict)  # i -> [paths]
    incorrect_single: dict = field(default_factory=dict)  # i -> path
    long_paths: dict = field(default_factory=dict)       # (i, j) -> tuple path
    segments: dict = field(default_factory=dict)         # (i, j) -> dict
    windows: dict = field(default_factory=dict)          # name -> {(i, j, alpha): [vertices]}
    index_sets: dict = field(default_factory=dict)       # L1..L4
    surgery: dict = field(default_factory=dict)          # i -> SurgeryPlan
    p_sets: dict = field(default_factory=dict)           # "I"/"II" core sets
    leftover_uncolored: frozenset = frozenset()          # uncolored long-path vertices

    def long_vertices(self):
        s = set()
        for p in self.long_paths.values():
            s |= set(p[1:-1])
        return s


def _terminals(state):
    led = state.ledger
    return {led.a(i) for i in range(len(led.out_family))} | {led.b(i) for i in range(len(led.in_family))}


def _shortest_len(d, x, y, avail):
    """Vertex count of a shortest ``x -> y`` path through ``avail`` (``None`` if none)."""
    if d.has_arc(x, y):
        return 2
    dist = {x: 1}
    queue = deque([x])
    while queue:
        u = queue.popleft()
        for w in d.out_neighbors(u):
            if w == y:
                return dist[u] + 1
            if w in avail and w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return None


def _search_short_family(state, avail, cap):
    """Maximum family of disjoint short correct paths (exact, budgeted)."""
    p, d, led = state.params, state.d, state.ledger
    m = p.num_indices
    budget = [p.short_budget]
    best = {"paths": {}}
    chosen = {}

    def rec(idx, avail):
        if len(chosen) > len(best["paths"]):
            best["paths"] = dict(chosen)
        if len(best["paths"]) == m:
            return True
        if idx == m or len(chosen) + (m - idx) <= len(best["paths"]):
            return False
        b, a = led.b(idx), led.a(idx)
        for path in candidate_paths(d, b, a, avail, max_length=cap, budget=budget,
                                    parity=required_parity(p, idx)):
            chosen[idx] = path
            if rec(idx + 1, avail - set(path[1:-1])):
                return True
            del chosen[idx]
            budget[0] -= 1
            if budget[0] < 0:
                raise SearchBudgetExceeded("short family search budget exhausted", best=best["paths"])
        return rec(idx + 1, avail)

    try:
        rec(0, avail)
    except SearchBudgetExceeded as exc:
        if len(best["paths"]) == m:
            return best["paths"]
        raise SearchBudgetExceeded(str(exc), best=best["paths"]) from exc
    return best["paths"]


def _disjoint_short_paths(d, x, y, avail, cap, limit, budget):
    """Greedy lexicographically-first internally disjoint ``x -> y`` paths."""
    found, avail = [], set(avail)
    used_direct = False
    while len(found) < limit:
        nxt = None
        for path in candidate_paths(d, x, y, avail, max_length=cap, budget=budget):
            if len(path) == 2 and used_direct:
                continue
            nxt = path
            break
        if nxt is None:
            break
        if len(nxt) == 2:
            used_direct = True
        found.append(nxt)
        avail -= set(nxt[1:-1])
    return found


def short_path_phase(state: EngineState) -> PathPlan:
    d, p, led, log = state.d, state.params, state.ledger, state.log
    plan = PathPlan()
    state.plan = plan
    c1 = set(state.color)
    avail = set(range(d.n)) - c1 - _terminals(state)
    cap = p.short_cap
    try:
        family = _search_short_family(state, avail, cap)
    except SearchBudgetExceeded as exc:
        raise PipelineFailure("short-paths", "short-family-maximality", str(exc),
                              summary={"found": sorted(exc.best)}, cause=exc) from exc
    plan.final.update(family)
    plan.short_indices = sorted(family)
    plan.leftover = [i for i in range(p.num_indices) if i not in family]
    log.check("short-family-count", p.num_indices, len(family), True)
    for i, path in family.items():
        if not is_correct(p, i, path) or len(path) > cap:
            raise PipelineFailure("short-paths", "path-parity", f"short path {i} is not a short correct path")

    used = set()
    for path in family.values():
        used |= set(path[1:-1])
    budget = [p.short_budget]
    # few short incorrect paths for leftover indices
    rest = avail - used
    for i in plan.leftover:
        paths = _disjoint_short_paths(d, led.b(i), led.a(i), rest, p.incorrect_cap, p.l + 2, budget)
        if len(paths) > p.l + 1:
            raise PipelineFailure("short-paths", "short-incorrect-count",
                                  f"index {i} has {len(paths)} > l+1 disjoint incorrect short paths")
        plan.incorrect_short[i] = paths
        for q in paths:
            rest -= set(q[1:-1])
    log.at_most("short-incorrect-count", max((len(v) for v in plan.incorrect_short.values()), default=0), p.l + 1, hard=True)
    # at most one further moderately short path per leftover index
    mid_cap = cap - 3 * p.l + 1
    for i in plan.leftover:
        paths = _disjoint_short_paths(d, led.b(i), led.a(i), rest, mid_cap, 2, budget)
        if len(paths) > 1:
            raise PipelineFailure("short-paths", "incorrect-uniqueness",
                                  f"index {i} has two disjoint incorrect paths of length <= {mid_cap}")
        if paths:
            plan.incorrect_single[i] = paths[0]
            rest -= set(paths[0][1:-1])
    log.check("incorrect-uniqueness", 1, max((1 for _ in plan.incorrect_single), default=0), True, hard=True)

    # colouring
    before = set(state.color)
    for i, path in sorted(family.items()):
        start = state.color[led.b(i)]
        for v, c in zip(path, path_colors(p, i, path, start)):
            if v in state.color and state.color[v] != c:
                raise PipelineFailure("short-paths", "path-coloring",
                                      f"endpoint {v} of path {i} has colour {state.color[v]}, pattern wants {c}")
            state.paint(v, c)
    for paths in list(plan.incorrect_short.values()) + [[q] for q in plan.incorrect_single.values()]:
        for q in paths:
            for v in q[1:-1]:
                state.paint(v, I)
    fresh = set(state.color) - before
    w_i = {v for v in fresh if state.color[v] == I}
    w_ii = {v for v in fresh if state.color[v] == II}
    lprime = p.scaled(7300 * p.f) + 16 * p.k * p.l ** 2
    try:
        safety_closure(state, c1, w_i, w_ii, max(lprime, len(w_i), len(w_ii)), "short-paths")
    except ClosureStuck as exc:
        raise PipelineFailure("short-paths", f"closure-pool:{exc.pool}", str(exc), summary=state.summary(), cause=exc) from exc
    state.sweep("short-paths")
    state.snapshot("C2")
    log.at_most("short-phase-size", len(state.color), p.scaled(25000 * (p.k + p.l) * p.f))
    # every remaining connecting path for leftover indices is long
    c2 = set(state.color)
    free = set(range(d.n)) - c2
    worst = None
    for i in plan.leftover:
        length = _shortest_len(d, led.b(i), led.a(i), free)
        if length is not None and (worst is None or length < worst):
            worst = length
    threshold = cap - 3 * p.l + 2
    if plan.leftover:
        ok = worst is None or worst >= threshold
        log.check("leftover-path-length", threshold, worst if worst is not None else "none", ok, hard=True)
        if not ok:
            raise PipelineFailure("short-paths", "leftover-path-length",
                                  f"a leftover index still has a path of length {worst} < {threshold}")
    return plan
