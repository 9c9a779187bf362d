"""Mutable pipeline state: the partial two-colouring and the safety predicate.

A coloured vertex ``v`` of colour ``c`` is *safe* when four reachability
clauses hold, each a ``(v, U)`` / ``(U, v)`` k-connectedness query:

* ``s1``: from ``v`` into ``V - (D0 | E_B)`` inside the colour class of ``v``;
* ``s2``: from ``V - (D0 | E_A)`` into ``v`` inside the colour class;
* ``s3``/``s4``: the same two queries in the cross graph between the classes.

``D0`` is the union of the dominating families and ``E_A``/``E_B`` their
exceptional sets.  Colouring more vertices never breaks safety of others;
only recolouring can, so recolour events are logged and audited.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from ..connectivity import view_k_connected
from ..digraph import Digraph
from ..errors import PipelineFailure
from .log import PhaseLog
from .params import Parameters

I, II = "I", "II"
COLORS = (I, II)
CLAUSES = ("s1", "s2", "s3", "s4")
# the only sanctioned recolour kinds: core-set recolouring of greedy
# in-neighbour sets during the cross step, and of the same-colour
# reach set during the class step of the safety closure
RECOLOR_KINDS = frozenset({"cross-core-recolor", "class-core-recolor"})


def other(c):
    return II if c == I else I


class _Outside:
    """Membership view of ``V - excluded`` (targets never need iterating)."""

    __slots__ = ("excluded",)

    def __init__(self, excluded):
        self.excluded = excluded

    def __contains__(self, v):
        return v not in self.excluded


@dataclass
class RecolorEvent:
    vertex: int
    old: str
    new: str
    kind: str


@dataclass
class EngineState:
    d: Digraph
    params: Parameters
    log: PhaseLog = field(default_factory=PhaseLog)
    color: dict = field(default_factory=dict)
    d0: frozenset = frozenset()
    e_a: frozenset = frozenset()
    e_b: frozenset = frozenset()
    ledger: object = None
    plan: object = None
    events: list = field(default_factory=list)
    snapshots: dict = field(default_factory=dict)
    provenance: list = field(default_factory=list)

    def __post_init__(self):
        self.classes = {I: set(), II: set()}
        self._refresh_targets()

    # -- frozen context ----------------------------------------------
    def set_context(self, d0, e_a, e_b):
        self.d0, self.e_a, self.e_b = frozenset(d0), frozenset(e_a), frozenset(e_b)
        self._refresh_targets()

    def _refresh_targets(self):
        self.out_targets = _Outside(self.d0 | self.e_b)
        self.in_targets = _Outside(self.d0 | self.e_a)

    @property
    def e(self):
        return self.e_a | self.e_b

    # -- colouring ---------------------------------------------------
    def colored(self):
        return set(self.color)

    def is_colored(self, v):
        return v in self.color

    def paint(self, v, c):
        """Colour an uncoloured vertex (same-colour repaint is a no-op)."""
        old = self.color.get(v)
        if old == c:
            return
        if old is not None:
            raise PipelineFailure(
                "coloring", "recolor-audit",
                f"vertex {v} already coloured {old}; unsanctioned change to {c}",
            )
        self.color[v] = c
        self.classes[c].add(v)

    def paint_all(self, vs, c):
        for v in vs:
            self.paint(v, c)

    def recolor(self, v, c, kind):
        if kind not in RECOLOR_KINDS:
            raise PipelineFailure("coloring", "recolor-audit", f"unknown recolour kind {kind!r}")
        old = self.color.get(v)
        if old is None:
            raise PipelineFailure("coloring", "recolor-audit", f"recolouring uncoloured vertex {v}")
        if old == c:
            return
        self.classes[old].discard(v)
        self.classes[c].add(v)
        self.color[v] = c
        self.events.append(RecolorEvent(v, old, c, kind))

    def uncolor(self, v):
        """Undo a tentative colouring (used only by the either-colour check)."""
        c = self.color.pop(v)
        self.classes[c].discard(v)

    def snapshot(self, name):
        self.snapshots[name] = frozenset(self.color)

    # -- safety ------------------------------------------------------
    def _views(self, c):
        d, same, opp = self.d, self.classes[c], self.classes[other(c)]
        out_n, in_n = d._out, d._in

        def same_out(u):
            return [w for w in out_n[u] if w in same]

        def same_in(u):
            return [w for w in in_n[u] if w in same]

        def cross_out(u):
            side = opp if u in same else same
            return [w for w in out_n[u] if w in side]

        def cross_in(u):
            side = opp if u in same else same
            return [w for w in in_n[u] if w in side]

        return same_out, same_in, cross_out, cross_in

    def clause(self, v, name):
        c = self.color.get(v)
        if c is None:
            raise ValueError(f"vertex {v} is not coloured")
        same_out, same_in, cross_out, cross_in = self._views(c)
        k = self.params.k
        if name == "s1":
            return view_k_connected(same_out, v, self.out_targets, k)
        if name == "s2":
            return view_k_connected(same_in, v, self.in_targets, k)
        if name == "s3":
            return view_k_connected(cross_out, v, self.out_targets, k)
        if name == "s4":
            return view_k_connected(cross_in, v, self.in_targets, k)
        raise ValueError(f"unknown clause {name}")

    def is_safe(self, v, clauses=CLAUSES):
        """``(True, None)`` or ``(False, first failing clause)``."""
        for name in clauses:
            if not self.clause(v, name):
                return False, name
        return True, None

    def safe_with(self, v, c, clauses=CLAUSES):
        """Tentatively colour ``v`` with ``c`` and test safety; state unchanged."""
        if v in self.color:
            raise ValueError(f"vertex {v} is already coloured")
        self.paint(v, c)
        try:
            return self.is_safe(v, clauses)[0]
        finally:
            self.uncolor(v)

    def safe_either(self, v, clauses=CLAUSES):
        return all(self.safe_with(v, c, clauses) for c in COLORS)

    def unsafe_vertices(self, vertices=None):
        vs = sorted(self.color if vertices is None else vertices)
        jobs = max(1, self.params.jobs)
        if jobs == 1 or len(vs) < 64:
            results = [self.is_safe(v) for v in vs]
        else:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(self.is_safe, vs))
        return [(v, clause) for v, (ok, clause) in zip(vs, results) if not ok]

    def sweep(self, phase):
        """Assert every coloured vertex is safe; abort with a named failure otherwise."""
        bad = self.unsafe_vertices()
        self.log.check(f"safety-sweep:{phase}", 0, len(bad), not bad, hard=True)
        if bad:
            v, clause = bad[0]
            raise PipelineFailure(
                phase, f"safety-sweep:{phase}",
                f"{len(bad)} coloured vertices unsafe; first is {v} failing {clause}",
                summary=self.summary(),
            )

    def audit_recolors(self):
        bad = [e for e in self.events if e.kind not in RECOLOR_KINDS]
        return self.log.check("recolor-audit", 0, len(bad), not bad, hard=True)

    def summary(self):
        return {
            "colored": len(self.color),
            "class_I": len(self.classes[I]),
            "class_II": len(self.classes[II]),
            "d0": len(self.d0),
            "e_a": len(self.e_a),
            "e_b": len(self.e_b),
            "recolor_events": len(self.events),
            "snapshots": {k: len(v) for k, v in self.snapshots.items()},
        }
