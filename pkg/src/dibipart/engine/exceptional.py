"""Colouring the exceptional vertices (those some dominating set misses).

Vertices of ``E_A`` are handled first, then ``E_B``; each goes through the
first applicable case in this order:

1. *reserved-middle*: it has an in-neighbour (out-neighbour for ``E_B``)
   on the middle segment of a reserved long path; it is coloured I.
2. *fresh-neighbours*: it has ``2k`` uncoloured in-neighbours (out-neighbours
   for ``E_B``) outside ``E`` and the long-path leftovers; ``k`` of them are
   coloured I, ``k`` II, and added to the ledger ``Z_A`` (``Z_B``).
3. *existing-neighbours*: its already-coloured neighbourhood makes it safe
   with one of the colours.

A case *applies* only if the vertex is certified safe afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import CaseExhausted, PipelineFailure
from .state import I, II, EngineState

PHASE = "exceptional"


@dataclass
class ExceptionLedger:
    z_a: set = field(default_factory=set)
    z_b: set = field(default_factory=set)
    w: frozenset = frozenset()
    cases: dict = field(default_factory=dict)  # vertex -> case name

    @property
    def z(self):
        return self.z_a | self.z_b


def _balanced_order(state):
    """Both colours, the currently smaller class first (ties: I)."""
    return (II, I) if len(state.classes[II]) < len(state.classes[I]) else (I, II)


def _try_color(state, v, colors):
    for c in colors:
        if state.safe_with(v, c):
            state.paint(v, c)
            return c
    return None


def _resolve(state, v, side, ledger, reserved_middle):
    """Colour ``v`` by the first applicable case; returns the case name."""
    d, k = state.d, state.params.k
    nbrs = d.in_neighbors(v) if side == "A" else d.out_neighbors(v)
    z = ledger.z_a if side == "A" else ledger.z_b
    # case 1
    if nbrs & reserved_middle and _try_color(state, v, (I,)):
        return "reserved-middle"
    # case 2
    blocked = state.e | ledger.w
    fresh = [w for w in sorted(nbrs) if w not in state.color and w not in blocked]
    if len(fresh) >= 2 * k:
        chosen = fresh[: 2 * k]
        for j, w in enumerate(chosen):
            state.paint(w, I if j < k else II)
        if _try_color(state, v, _balanced_order(state)):
            z.update(chosen)
            return "fresh-neighbours"
        for w in chosen:
            state.uncolor(w)
    # case 3
    if _try_color(state, v, _balanced_order(state)):
        return "existing-neighbours"
    raise CaseExhausted(f"no case colours exceptional vertex {v} safely", vertex=v)


def exceptional_coloring(state: EngineState) -> ExceptionLedger:
    p, log, plan = state.params, state.log, state.plan
    w = frozenset(plan.leftover_uncolored) if plan is not None else frozenset()
    ledger = ExceptionLedger(w=w)
    reserved_middle = set()
    if plan is not None:
        for key in plan.index_sets.get("L3", []):
            reserved_middle |= set(plan.segments[key]["P2"])
    c5 = set(state.color)
    for side, pool, z, cap_set in (("A", state.e_a, ledger.z_a, state.e_a), ("B", state.e_b, ledger.z_b, state.e_b)):
        todo = sorted(v for v in pool if v not in c5 and v not in w)
        for v in todo:
            if v in state.color:  # already handled from the other side
                continue
            try:
                ledger.cases[v] = _resolve(state, v, side, ledger, reserved_middle)
            except CaseExhausted as exc:
                raise PipelineFailure(PHASE, "exceptional-coloring", str(exc), summary=state.summary(), cause=exc) from exc
            if len(z) > 2 * p.k * len(cap_set):
                raise PipelineFailure(PHASE, f"ledger-bound-{side}", f"|Z_{side}| = {len(z)} > 2k|E_{side}|")
        log.at_most(f"ledger-bound-{side}", len(z), 2 * p.k * len(cap_set), hard=True)
    state.sweep(PHASE)
    state.snapshot("C6")
    log.at_most("exceptional-phase-size", len(state.color), state.d.n / 20)
    return ledger
