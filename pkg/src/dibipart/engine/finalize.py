"""Final assembly: complete the colouring to the target sizes and record one
routing witness per index class.

A routing witness for class ``c`` (index ``i = c * k``) is a path

    x' -> x'' -> b_i -> ... P_i ... -> a_i -> y'' -> y'

with ``x'' in B_i - {b_i}``, ``y'' in A_i - {a_i}``, ``x'`` outside
``D0 | E_B`` and ``y'`` outside ``D0 | E_A``.  For classes 0 and 1 it lies in
one colour class; for the rest its colours alternate, so it is a path of
the cross graph.  It illustrates how any vertex reaches any other through
the family of index ``i``.
"""

from __future__ import annotations

from ..errors import PipelineFailure
from .paths import is_correct
from .state import I, II, EngineState, other

PHASE = "finalize"


def complete_coloring(state: EngineState, w=()):
    """Colour uncoloured vertices (``w`` first, then by id) until the class
    sizes reach ``n1`` and ``n2``; returns ``(V1, V2)``."""
    p, d = state.params, state.d
    if p.n1 + p.n2 > d.n:
        raise PipelineFailure(PHASE, "completion", f"n1 + n2 = {p.n1 + p.n2} exceeds n = {d.n}")
    have = {c: len(state.classes[c]) for c in (I, II)}
    if have[I] > p.n1 or have[II] > p.n2:
        raise PipelineFailure(PHASE, "completion",
                              f"already coloured |V_I| = {have[I]}, |V_II| = {have[II]} exceed targets ({p.n1}, {p.n2})")
    special = state.d0 | state.e
    order = sorted(v for v in w if v not in state.color) + [
        v for v in range(d.n) if v not in state.color and v not in set(w)
    ]
    for v in order:
        if len(state.classes[I]) < p.n1:
            c = I
        elif len(state.classes[II]) < p.n2:
            c = II
        else:
            break
        if v in special and not state.safe_with(v, c):
            if state.safe_with(v, other(c)) and len(state.classes[other(c)]) < (p.n1 if other(c) == I else p.n2):
                c = other(c)
            else:
                raise PipelineFailure(PHASE, "completion-safety", f"vertex {v} of D0 | E is not safe with colour {c}")
        state.paint(v, c)
    if len(state.classes[I]) != p.n1 or len(state.classes[II]) != p.n2:
        raise PipelineFailure(PHASE, "completion", "not enough uncoloured vertices to reach the targets")
    return frozenset(state.classes[I]), frozenset(state.classes[II])


def _routing_witness(state: EngineState, i):
    d, led, col = state.d, state.ledger, state.color
    p = state.params
    path = list(state.plan.final[i])
    cls = p.index_class(i)
    a, b = led.a(i), led.b(i)
    A, B = led.out_family[i].members, led.in_family[i].members
    xs = [x for x in sorted(B - {b}) if d.has_arc(x, b)]
    ys = [y for y in sorted(A - {a}) if d.has_arc(a, y)]
    if not xs or not ys:
        return None

    def want(color_here):
        return color_here if cls <= 1 else other(color_here)

    on = set(path)
    for x2 in xs:
        x1s = [v for v in sorted(d.in_neighbors(x2))
               if v not in on and v not in state.d0 and v not in state.e_b and col.get(v) == want(col[x2])]
        if not x1s:
            continue
        for y2 in ys:
            y1s = [v for v in sorted(d.out_neighbors(y2))
                   if v not in on and v != x1s[0] and v not in state.d0 and v not in state.e_a
                   and col.get(v) == want(col[y2])]
            if y1s:
                return (x1s[0], x2) + tuple(path) + (y2, y1s[0])
    return None


def validate_witness(state: EngineState, i, walk):
    """Problems with a routing witness (empty list when valid)."""
    d, col, p = state.d, state.color, state.params
    errs = []
    if len(set(walk)) != len(walk):
        errs.append("repeated vertex")
    for u, v in zip(walk, walk[1:]):
        if not d.has_arc(u, v):
            errs.append(f"missing arc {u}->{v}")
        same = col.get(u) == col.get(v)
        if p.index_class(i) <= 1 and not same:
            errs.append(f"colour change on {u}->{v}")
        if p.index_class(i) >= 2 and same:
            errs.append(f"non-alternating arc {u}->{v}")
    if walk[0] in state.d0 | state.e_b or walk[-1] in state.d0 | state.e_a:
        errs.append("ends inside D0 | E")
    return errs


def finalize(state: EngineState, w=()):
    p, log = state.params, state.log
    bad_parity = [i for i in range(p.num_indices) if i not in state.plan.final or not is_correct(p, i, state.plan.final[i])]
    log.check("final-path-parity", 0, len(bad_parity), not bad_parity, hard=True)
    if bad_parity:
        raise PipelineFailure(PHASE, "final-path-parity", f"index {bad_parity[0]} has no correct final path")
    v1, v2 = complete_coloring(state, w)
    witnesses = {}
    bad = 0
    for cls in range(6):
        i = cls * p.k
        walk = _routing_witness(state, i)
        if walk is None or validate_witness(state, i, walk):
            bad += 1
            continue
        witnesses[f"routing-class-{cls}"] = list(walk)
    log.check("routing-witness", 0, bad, bad == 0, hard=True)
    if bad:
        raise PipelineFailure(PHASE, "routing-witness", f"{bad} index classes lack a valid routing witness")
    return v1, v2, witnesses
