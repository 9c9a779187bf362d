"""Safety closure: given freshly coloured sets ``W_I``, ``W_II``, colour a small
set of extra vertices so that everything involved becomes safe.

The closure runs in two steps.  The *cross step* makes every vertex satisfy
the cross-graph clauses (s3)/(s4): reach sets of the cross graph on
``W_I | W_II`` are given private opposite-colour out-neighbours (Q'),
opposite-colour in-neighbours (Q), the colour classes of Q are split by a
core-set recolouring, and two top-up sets (Q1, Q2) repair what the recolour
broke.  The *class step* does the same inside each colour class for
(s1)/(s2): a greedy in-neighbour set (W), its core-set recolouring (U), and
top-ups (U', U'', W').

Greedy choices scan candidates in vertex-id order.  Nothing is assumed:
callers certify the outcome with a full safety sweep.
"""

from __future__ import annotations

from ..dominating import core_set, reach_sets
from ..errors import ClosureStuck, ConstructionStuck, HypothesisUnmet, PipelineFailure
from .state import COLORS, I, II, EngineState, other


def _reach_in_subgraph(state: EngineState, sub, l_param, label):
    """Reach sets of ``sub`` lifted to parent ids (search-derived, certified)."""
    k = state.params.k
    try:
        rs = reach_sets(sub, k, l_param, enforce_bound=False)
    except HypothesisUnmet as exc:
        raise ClosureStuck(label, str(exc)) from exc
    cap = 2 * k + l_param - 2
    state.log.at_most(f"reach-set-size:{label}", max(len(rs.u_set), len(rs.w_set)), max(cap, 1))
    lab = sub.labels
    return {lab[v] for v in rs.u_set}, {lab[v] for v in rs.w_set}


def _core(state: EngineState, vertices, label):
    p = state.params
    try:
        cs = core_set(state.d, p.k, p.l, vertices=vertices)
    except (HypothesisUnmet, ConstructionStuck) as exc:
        raise ClosureStuck(label, str(exc)) from exc
    return set(cs.members)


class _Greedy:
    """Helper that paints uncoloured vertices chosen in id order."""

    def __init__(self, state: EngineState, new: set):
        self.state = state
        self.new = new

    def candidates(self, nbrs, excluded):
        st = self.state
        return [w for w in sorted(nbrs) if w not in excluded and w not in st.color]

    def top_up(self, label, nbrs, have, need, excluded, color, into=None):
        if have >= need:
            return []
        cands = self.candidates(nbrs, excluded)
        if len(cands) < need - have:
            raise ClosureStuck(label, f"needs {need - have} more candidates, pool has {len(cands)}")
        chosen = cands[: need - have]
        for w in chosen:
            self.state.paint(w, color)
            self.new.add(w)
            if into is not None:
                into.add(w)
        return chosen


def safety_closure(state: EngineState, C, W_I, W_II, lprime, phase):
    """Return the set ``C'`` of vertices coloured to make ``W_I | W_II`` safe."""
    d, p = state.d, state.params
    k, l = p.k, p.l
    C, W_I, W_II = set(C), set(W_I), set(W_II)
    new = set()
    if not W_I and not W_II:
        return new
    if (W_I | W_II) & C:
        raise PipelineFailure(phase, "closure-input", "colored sets meet the protected set C")
    g = _Greedy(state, new)
    D0, E, E_A, E_B = state.d0, state.e, state.e_a, state.e_b
    inn, out = d.in_neighbors, d.out_neighbors
    col = state.color
    state.log.at_most(f"closure-input:{phase}", max(len(W_I), len(W_II)), lprime)

    # ---------------- cross step -----------------------------------------
    D1 = W_I | W_II
    l0 = l + max(lprime, len(W_I), len(W_II))
    excl_cross = C | D1 | D0 | E
    excl_cross_in = C | D1 | D0 | E_A
    heads, tails = _reach_in_subgraph(state, d.bipartite_subgraph(W_I, W_II), l0, f"{phase}:cross")

    q_prime = set()
    for u in sorted(heads):
        g.top_up("Q'", out(u), 0, k, excl_cross | q_prime, other(col[u]), into=q_prime)

    q = set()
    for u in sorted(tails):
        want = other(col[u])
        have = sum(1 for w in inn(u) if w in q and col.get(w) == want)
        g.top_up("Q", inn(u), have, k, excl_cross_in | q_prime, want, into=q)

    q_core = {}
    for c in COLORS:
        part = {w for w in q if col[w] == c}
        q_core[c] = _core(state, part, "Q_i'") if part else set()
    for c in COLORS:
        for w in sorted(q_core[c]):
            state.recolor(w, other(c), "cross-core-recolor")

    q1 = set()
    for u in sorted(tails):
        want = other(col[u])
        have = sum(1 for w in inn(u) if col.get(w) == want and w not in D0 and w not in E_A)
        g.top_up("Q1", inn(u), have, k, excl_cross_in | q_prime | q, want, into=q1)

    q2 = set()
    for v in sorted(q_core[I] | q_core[II] | q1):
        want = other(col[v])
        have = sum(1 for w in out(v) if col.get(w) == want and w not in D0 and w not in E_B)
        g.top_up("Q2", out(v), have, k, excl_cross | q_prime | q | q1, want, into=q2)

    cross_new = q_prime | q | q1 | q2

    # ---------------- class step (per colour) ----------------------------
    involved = W_I | W_II | cross_new
    excl_cls = C | E | involved | D0
    excl_cls_in = C | E_A | involved | D0
    for c in (I, II):
        members = {v for v in involved if col.get(v) == c}
        if not members:
            continue
        _, tails_c = _reach_in_subgraph(state, d.induced(members), l, f"{phase}:class-{c}")
        w_set = set()
        for u in sorted(tails_c):
            have = sum(1 for w in inn(u) if w in w_set)
            g.top_up("W", inn(u), have, k, excl_cls_in, c, into=w_set)
        u_core = _core(state, w_set, "U") if w_set else set()
        for w in sorted(u_core):
            state.recolor(w, other(c), "class-core-recolor")
        u_prime = set()
        for u in sorted(tails_c):
            have = sum(1 for w in inn(u) if col.get(w) == c and (w in w_set or w in u_prime) and w not in u_core)
            g.top_up("U'", inn(u), have, k, excl_cls_in, c, into=u_prime)
        u_dd = set()
        for v in sorted(u_core | u_prime):
            for want in COLORS:
                have = sum(1 for w in out(v) if w in u_dd and col.get(w) == want)
                g.top_up("U''", out(v), have, k, excl_cls, want, into=u_dd)
        rest = (w_set | members) - u_core
        heads_c, _ = _reach_in_subgraph(state, d.induced(rest), l, f"{phase}:class-{c}-out")
        w_prime = set()
        for u in sorted(heads_c):
            have = sum(1 for w in out(u) if w in w_prime and col.get(w) == c)
            g.top_up("W'", out(u), have, k, excl_cls, c, into=w_prime)
        excl_cls |= w_set | u_prime | u_dd | w_prime
        excl_cls_in |= w_set | u_prime | u_dd | w_prime

    bound = 2 * k * lprime + p.scaled(400 * p.f)
    state.log.at_most(f"closure-size:{phase}", len(new), bound)
    return new


def dominating_phase_coloring(state: EngineState):
    """Give every low-degree vertex 2k fresh in- and out-neighbours split
    between the colours, then close under safety."""
    d, p = state.d, state.params
    k = p.k
    ledger = state.ledger
    xy = list(ledger.X) + list(ledger.Y)
    fresh = set()
    for v in xy:
        ins = [w for w in sorted(d.in_neighbors(v)) if w not in state.color]
        if len(ins) < 2 * k:
            raise PipelineFailure("dominating-phase", "neighbour-pool",
                                  f"vertex {v} has {len(ins)} uncolored in-neighbours, needs {2 * k}")
        ins = ins[: 2 * k]
        for j, w in enumerate(ins):
            state.paint(w, I if j < k else II)
        outs = [w for w in sorted(d.out_neighbors(v)) if w not in state.color]
        if len(outs) < 2 * k:
            raise PipelineFailure("dominating-phase", "neighbour-pool",
                                  f"vertex {v} has {len(outs)} uncolored out-neighbours, needs {2 * k}")
        outs = outs[: 2 * k]
        for j, w in enumerate(outs):
            state.paint(w, I if j < k else II)
        fresh |= set(ins) | set(outs)
    region = (set(state.d0) | fresh) - set(xy)
    w_i = {v for v in region if state.color[v] == I}
    w_ii = {v for v in region if state.color[v] == II}
    lprime = 6 * p.spine_cap * k + 24 * k * k
    try:
        safety_closure(state, xy, w_i, w_ii, lprime, "dominating-phase")
    except ClosureStuck as exc:
        raise PipelineFailure("dominating-phase", f"closure-pool:{exc.pool}", str(exc), summary=state.summary(), cause=exc) from exc
    state.sweep("dominating-phase")
    state.snapshot("C1")
    state.log.at_most("dominating-phase-size", len(state.color), p.scaled(1000 * (p.k + p.l) * p.f))
