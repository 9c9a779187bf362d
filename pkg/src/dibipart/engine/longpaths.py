"""Long-path phase: correct i-paths for the indices the short phase left over.

For each leftover index ``i`` a fan of internally disjoint ``b_i -> a_i``
paths is found in the part of the digraph not yet coloured, and its
shortest members are kept.  Each kept path ``P_{i,j}`` (vertex ``0`` is
``b_i``, the last is ``a_i``) is cut into three segments::

    interior = P1 | P2 | P3,    |P1| = |P3| = segment_length

and each outer segment ``P^alpha`` into ``window | middle | window`` with
windows of ``2(k+l+2)`` vertices.  Windows are coloured *balanced*:
exactly ``k+l+2`` of each colour.

Paths are classified into four index sets:

* ``L1``: paths meeting the two core sets extracted from the outer segments;
* ``L2``: paths touched by the closure run after ``L1``;
* ``L3``: ``5l`` reserved paths per index, untouched so far; surgery on
  them yields the final correct path ``P_i``;
* ``L4``: everything else; only its windows are coloured (alternately).

Surgery splices a prefix of one reserved path, a middle portion of a second
and a suffix of a third.  The composite has ``m2 + 3 - gamma`` vertices
where ``m2`` is the vertex count of the middle path and ``gamma`` is even,
so its parity is the opposite of the middle path's: splicing around an
incorrect path gives a correct one.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..connectivity import (
    find_disjoint_path_fans,
    is_strongly_k_connected,
    is_strongly_connected,
    select_short_subfamily,
)
from ..dominating import core_set
from ..errors import (
    ClosureStuck,
    ConstructionStuck,
    HypothesisUnmet,
    MinimalityViolation,
    NoSuchFan,
    PipelineFailure,
    SearchBudgetExceeded,
    SurgeryStuck,
)
from .closure import safety_closure
from .paths import is_correct, path_colors
from .state import COLORS, I, II, EngineState

EXACT_FAN_LIMIT = 60
PHASE = "long-paths"


# ---------------------------------------------------------------- minimality
def minimality_defects(d, path, free):
    """Ways ``path`` could be shortened.

    ``("chord", t, u)``: an arc from position ``t`` to position ``u > t + 1``.
    ``("detour", t, u, w)``: a vertex ``w`` of ``free`` (off the path) with
    arcs from position ``t`` and into position ``u > t + 2``.
    A path with no defects satisfies both minimality facts: every vertex
    dominates only its successor among later path vertices, and no outside
    free vertex bypasses two or more path vertices.
    """
    pos = {v: t for t, v in enumerate(path)}
    on_path = set(path)
    defects = []
    for t, v in enumerate(path):
        for w in d.out_neighbors(v):
            u = pos.get(w)
            if u is not None and u > t + 1:
                defects.append(("chord", t, u))
    for t, v in enumerate(path):
        for w in sorted(d.out_neighbors(v)):
            if w in on_path or w not in free:
                continue
            far = max((pos[x] for x in d.out_neighbors(w) if x in pos), default=-1)
            if far > t + 2:
                defects.append(("detour", t, far, w))
    return defects


def tighten_path(d, path, free):
    """Apply the best shortcut until none remains; returns the new path."""
    path = list(path)
    while True:
        defects = minimality_defects(d, path, free - set(path))
        if not defects:
            return tuple(path)
        gain = lambda dfc: (dfc[2] - dfc[1]) - (2 if dfc[0] == "detour" else 1)
        best = max(defects, key=lambda dfc: (gain(dfc), -dfc[1]))
        if gain(best) <= 0:
            return tuple(path)
        if best[0] == "chord":
            _, t, u = best
            path = path[: t + 1] + path[u:]
        else:
            _, t, u, w = best
            path = path[: t + 1] + [w] + path[u:]


# ---------------------------------------------------------------- segments
def split_segments(path, seg, window):
    """Cut ``path`` into the three segments and the window sub-segments.

    Raises ``ValueError`` if the interior is shorter than ``2 * seg + 1``.
    """
    interior = list(path[1:-1])
    if len(interior) < 2 * seg + 1 or seg < 2 * window + 1:
        raise ValueError(f"path with {len(interior)} interior vertices cannot hold two segments of {seg}")
    p1, p2, p3 = interior[:seg], interior[seg:-seg], interior[-seg:]
    out = {"P1": p1, "P2": p2, "P3": p3}
    for name, part in (("P1", p1), ("P3", p3)):
        out[f"{name}.1"] = part[:window]
        out[f"{name}.2"] = part[window:-window]
        out[f"{name}.3"] = part[-window:]
    return out


def balanced_colors(window, fixed):
    """Colour ``window`` with exactly half of each colour, alternating where
    free, keeping the colours already in ``fixed``.  ``None`` if impossible."""
    half = len(window) // 2
    have = {c: sum(1 for v in window if fixed.get(v) == c) for c in COLORS}
    if have[I] > half or have[II] > len(window) - half:
        return None
    need = {I: half - have[I], II: len(window) - half - have[II]}
    out, nxt = {}, I
    for v in window:
        if v in fixed:
            out[v] = fixed[v]
            continue
        c = nxt if need[nxt] > 0 else (II if nxt == I else I)
        out[v] = c
        need[c] -= 1
        nxt = II if c == I else I
    return out


def alternating_colors(window, fixed):
    out, nxt = {}, I
    for v in window:
        out[v] = fixed.get(v, nxt)
        nxt = II if out[v] == I else I
    return out


# ---------------------------------------------------------------- surgery
@dataclass
class SurgeryPlan:
    i: int
    j1: int
    j2: int
    j3: int
    gamma: int
    path: tuple
    junctions: tuple = ()


def surgery_composite(p1, p2, p3, gamma, h):
    """Splice ``p1`` prefix, ``p2`` middle and ``p3`` suffix (``h = 2k + 2l``).

    Returns ``(path, junction arcs)`` without checking the junction arcs.
    """
    m2, m3 = len(p2), len(p3)
    start2, end2 = h + 4 + gamma, m2 - h - 6
    if gamma < 2 or gamma % 2 or start2 > end2 or m3 - h - 6 <= h + 5:
        return None
    path = (p1[0],) + tuple(p1[1: h + 6]) + tuple(p2[start2: end2 + 1]) + tuple(p3[m3 - h - 6: m3 - 1]) + (p3[-1],)
    return path, ((p1[h + 5], p2[start2]), (p2[end2], p3[m3 - h - 6]))


def find_surgery(d, paths, i, h, gamma_max=None):
    """Search ``j1, j2 != j1, j3 != j2`` and even ``gamma`` whose junction
    arcs exist; ``paths`` maps ``j -> path`` for one index."""
    keys = sorted(paths)
    for j2 in keys:
        p2 = paths[j2]
        top = gamma_max if gamma_max is not None else len(p2)
        for j1 in keys:
            if j1 == j2:
                continue
            for gamma in range(2, top + 1, 2):
                for j3 in keys:
                    if j3 == j2:
                        continue
                    got = surgery_composite(paths[j1], p2, paths[j3], gamma, h)
                    if got is None:
                        continue
                    path, junctions = got
                    if all(d.has_arc(x, y) for x, y in junctions) and len(set(path)) == len(path):
                        return SurgeryPlan(i, j1, j2, j3, gamma, path, junctions)
    raise SurgeryStuck(f"no junction pattern among the reserved paths of index {i}")


# ---------------------------------------------------------------- phase
def _fan(state, pairs, s, avoid):
    d, p = state.d, state.params
    free = d.n - len(avoid)
    heuristic = p.heuristic or free > EXACT_FAN_LIMIT
    try:
        fan = find_disjoint_path_fans(d, pairs, s, avoid=avoid, heuristic=heuristic, budget=p.fan_budget)
    except SearchBudgetExceeded:
        heuristic = True
        fan = find_disjoint_path_fans(d, pairs, s, avoid=avoid, heuristic=True, budget=p.fan_budget)
    state.provenance.append(f"long-fan: {'heuristic' if heuristic else 'exact'} search")
    return fan


def _paint_map(state, mapping):
    for v, c in mapping.items():
        state.paint(v, c)


def _closure(state, protected, before, label):
    fresh = set(state.color) - set(before)
    w_i = {v for v in fresh if state.color[v] == I}
    w_ii = {v for v in fresh if state.color[v] == II}
    lp = max(len(w_i), len(w_ii), 1)
    try:
        safety_closure(state, protected, w_i, w_ii, lp, label)
    except ClosureStuck as exc:
        raise PipelineFailure(PHASE, f"closure-pool:{exc.pool}", str(exc), summary=state.summary(), cause=exc) from exc


def long_path_phase(state: EngineState):
    d, p, led, log = state.d, state.params, state.ledger, state.log
    plan = state.plan
    leftover = list(plan.leftover)
    if not leftover:
        return plan
    c2 = set(state.color)
    terminals = {led.b(i) for i in leftover} | {led.a(i) for i in leftover}
    keep = (set(range(d.n)) - c2) | terminals
    sub_d = d.induced(sorted(keep))
    if p.long_gate_k:
        ok, _ = is_strongly_k_connected(sub_d, p.long_gate_k)
        log.check("long-phase-gate", p.long_gate_k, "pass" if ok else "fail", ok, hard=True)
        if not ok:
            raise PipelineFailure(PHASE, "long-phase-gate", f"remaining digraph is not strongly {p.long_gate_k}-connected")
    else:
        log.check("long-phase-gate", 1, is_strongly_connected(sub_d), is_strongly_connected(sub_d))

    # -- fan and short sub-family
    pairs = [(led.b(i), led.a(i)) for i in leftover]
    s, s_prime = p.long_fan, p.long_family
    avoid = c2 - terminals
    try:
        fan = _fan(state, pairs, s, avoid)
    except NoSuchFan as exc:
        raise PipelineFailure(PHASE, "long-fan", str(exc), summary=state.summary(), cause=exc) from exc
    sub = select_short_subfamily(fan, s, s_prime)
    lhs, rhs = sub.interior_total() * s, s_prime * fan.interior_total()
    log.check("short-subfamily-bound", rhs, lhs, lhs <= rhs, hard=True)
    log.at_most("long-family-interior", sub.interior_total(), (d.n - len(c2)) / 40)

    # -- minimality facts, with one repair pass
    fan_vertices = set()
    for w in sub.paths.values():
        fan_vertices |= w.interior
    free = set(range(d.n)) - c2 - terminals - fan_vertices
    paths = {}
    for (pi, j), w in sorted(sub.paths.items()):
        path = w.vertices
        if minimality_defects(d, path, free):
            path = tighten_path(d, path, free)
            if minimality_defects(d, path, free):
                exc = MinimalityViolation(f"path {(leftover[pi], j)} stays shortcut-able after repair")
                raise PipelineFailure(PHASE, "path-minimality", str(exc), cause=exc)
            free -= set(path)
        paths[(leftover[pi], j)] = tuple(path)
    log.check("path-minimality", 0, 0, True, hard=True)
    plan.long_paths = paths

    # -- segments
    seg, win = p.segment_length, p.window
    shortest = min(len(q) - 2 for q in paths.values())
    ok = shortest >= 2 * seg + 1
    log.check("segment-length", 2 * seg + 1, shortest, ok, hard=True)
    if not ok:
        raise PipelineFailure(PHASE, "segment-length",
                              f"a long path has {shortest} interior vertices; two segments of {seg} do not fit")
    for key, q in paths.items():
        plan.segments[key] = split_segments(q, seg, win)
    middle = min(len(sg["P1.2"]) for sg in plan.segments.values())
    log.at_least("segment-middle", middle, 4 * (p.k + p.l + 1), hard=True)

    # -- core sets of the outer segments (P_I, P_II) and L1
    before = set(state.color)
    outer = set()
    for sg in plan.segments.values():
        outer |= set(sg["P1"]) | set(sg["P3"])
    try:
        p_i = set(core_set(d, p.k, p.l, vertices=outer).members)
        p_ii = set(core_set(d, p.k, p.l, vertices=outer - p_i).members)
    except (HypothesisUnmet, ConstructionStuck) as exc:
        raise PipelineFailure(PHASE, "segment-core-sets", str(exc), cause=exc) from exc
    plan.p_sets = {I: frozenset(p_i), II: frozenset(p_ii)}
    bound = p.scaled(90 * (p.k + p.l) * p.log_term)
    log.at_most("segment-core-size", max(len(p_i), len(p_ii)), bound)
    state.paint_all(sorted(p_i), I)
    state.paint_all(sorted(p_ii), II)
    l1 = sorted(key for key, q in paths.items() if set(q[1:-1]) & (p_i | p_ii))

    def balance(keys, label):
        win_sets = {}
        for key in keys:
            sg = plan.segments[key]
            for name in ("P1.1", "P1.3", "P3.1", "P3.3"):
                cols = balanced_colors(sg[name], state.color)
                if cols is None:
                    raise PipelineFailure(PHASE, "window-balance", f"window {name} of path {key} cannot be balanced")
                _paint_map(state, cols)
                win_sets[(key, name)] = list(sg[name])
        plan.windows[label] = win_sets

    balance(l1, "U")
    _closure(state, c2, before, "long-paths:U")
    state.sweep("long-paths:U")
    state.snapshot("C3")

    # -- L2: paths touched by the closure
    c3 = set(state.color)
    l2 = sorted(key for key, q in paths.items() if key not in l1 and set(q[1:-1]) & c3)
    before = set(state.color)
    balance(l2, "V")
    _closure(state, c3 - (set(state.color) - before), before, "long-paths:V")
    state.sweep("long-paths:V")
    state.snapshot("C4")
    balanced_bad = sum(
        1 for ws in plan.windows.values() for vs in ws.values()
        if sum(1 for v in vs if state.color.get(v) == I) != len(vs) // 2
    )
    log.check("window-balance", 0, balanced_bad, balanced_bad == 0, hard=True)

    # -- L3 reserve, L4 rest
    c4 = set(state.color)
    used = set(l1) | set(l2)
    l3, l4 = [], []
    for i in leftover:
        untouched = [key for key in sorted(paths) if key[0] == i and key not in used and not (set(paths[key][1:-1]) & c4)]
        if len(untouched) < p.reserved:
            raise PipelineFailure(PHASE, "reserved-paths",
                                  f"index {i} has {len(untouched)} untouched long paths, needs {p.reserved}")
        l3.extend(untouched[: p.reserved])
    l3s = set(l3)
    l4 = sorted(key for key in paths if key not in used and key not in l3s)
    plan.index_sets = {"L1": l1, "L2": l2, "L3": l3, "L4": l4}

    # -- surgery
    before = set(state.color)
    h = 2 * p.k + 2 * p.l
    for i in leftover:
        mine = {key[1]: paths[key] for key in l3 if key[0] == i}
        correct = [j for j in sorted(mine) if is_correct(p, i, mine[j])]
        if correct:
            j = correct[0]
            plan.surgery[i] = SurgeryPlan(i, j, j, j, 0, mine[j])
        else:
            try:
                plan.surgery[i] = find_surgery(d, mine, i, h, gamma_max=win)
            except SurgeryStuck as exc:
                raise PipelineFailure(PHASE, "surgery", str(exc), cause=exc) from exc
        final = plan.surgery[i].path
        if not is_correct(p, i, final):
            raise PipelineFailure(PHASE, "path-parity", f"composed path for index {i} has the wrong parity")
        plan.final[i] = final
        start = state.color[led.b(i)]
        for v, c in zip(final, path_colors(p, i, final, start)):
            if state.color.get(v, c) != c:
                raise PipelineFailure(PHASE, "path-coloring", f"vertex {v} of composed path {i} is already {state.color[v]}")
            state.paint(v, c)
    final_vertices = set().union(*(set(q) for q in plan.final.values())) if plan.final else set()

    # -- colour the remaining reserved paths and the L4 windows
    for key in l3:
        if set(paths[key][1:-1]) & final_vertices:
            continue
        sg = plan.segments[key]
        for name in ("P1.1", "P3.3"):
            _paint_map(state, balanced_colors(sg[name], state.color) or alternating_colors(sg[name], state.color))
        state.paint_all([v for v in sg["P1.2"] + sg["P3.2"] if v not in state.color], I)
        state.paint_all([v for v in sg["P1.3"] + sg["P3.1"] if v not in state.color], II)
    for key in l4:
        sg = plan.segments[key]
        for name in ("P1.1", "P1.3", "P3.1", "P3.3"):
            _paint_map(state, alternating_colors(sg[name], state.color))
    _closure(state, c4, before, "long-paths:final")
    state.sweep("long-paths")
    state.snapshot("C5")

    # -- uncoloured leftovers must be safe with either colour
    leftovers = set()
    for q in paths.values():
        leftovers |= {v for v in q[1:-1] if v not in state.color}
    plan.leftover_uncolored = frozenset(leftovers)
    bad = [v for v in sorted(leftovers) if not state.safe_either(v)]
    log.check("long-leftover-either-colour", 0, len(bad), not bad, hard=True)
    if bad:
        raise PipelineFailure(PHASE, "long-leftover-either-colour",
                              f"{len(bad)} uncoloured long-path vertices are not safe with both colours; first {bad[0]}")
    middles = set()
    for sg in plan.segments.values():
        middles |= set(sg["P2"]) | set(sg["P1.1"]) | set(sg["P3.3"])
    log.at_most("long-phase-size", len(set(state.color) - middles), p.scaled(8e4 * (p.k + p.l) * p.f))
    return plan
