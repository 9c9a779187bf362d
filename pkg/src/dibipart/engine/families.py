"""Selection of the low-degree vertices, the two dominating families and the
initial colouring of their union.

Family index ``i`` (0-based, ``6k`` of them) belongs to class ``i // k``:

====== =============================== ============================
class  colour I                        colour II
====== =============================== ============================
0      ``A_i | B_i``                   --
1      --                              ``A_i | B_i``
2      ``{a_i, b_i}``                  the rest of ``A_i | B_i``
3      ``A_i | B_i - {a_i, b_i}``      ``{a_i, b_i}``
4      ``A_i - {a_i}`` and ``b_i``     ``a_i`` and ``B_i - {b_i}``
5      ``B_i - {b_i}`` and ``a_i``     ``b_i`` and ``A_i - {a_i}``
====== =============================== ============================
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..dominating import (
    almost_in_dominating,
    almost_out_dominating,
    exceptional_bound,
    validate_triple,
)
from ..errors import ConstructionStuck, HypothesisUnmet, PipelineFailure
from .state import I, II, EngineState


@dataclass
class FamilyLedger:
    X: list
    Y: list
    out_family: list = field(default_factory=list)
    in_family: list = field(default_factory=list)
    delta_in: int = 0
    delta_out: int = 0

    @property
    def d0(self):
        s = set()
        for t in self.out_family + self.in_family:
            s |= t.members
        return frozenset(s)

    @property
    def e_a(self):
        return frozenset().union(*(t.exceptional for t in self.out_family))

    @property
    def e_b(self):
        return frozenset().union(*(t.exceptional for t in self.in_family))

    def a(self, i):
        return self.out_family[i].anchor

    def b(self, i):
        return self.in_family[i].anchor


def select_xy(d, params):
    """``X``: the 6k smallest in-degrees; ``Y``: the 6k smallest out-degrees
    among the rest.  Returns ``(X, Y, min in-degree off X, min out-degree off Y)``."""
    m = params.num_indices
    if d.n < 2 * m:
        raise HypothesisUnmet(f"need n >= 12k = {2 * m}, got n = {d.n}", claim="vertex-count")
    order_in = sorted(range(d.n), key=lambda v: (d.in_degree(v), v))
    x = order_in[:m]
    xs = set(x)
    order_out = sorted((v for v in range(d.n) if v not in xs), key=lambda v: (d.out_degree(v), v))
    y = order_out[:m]
    ys = set(y)
    delta_in = min(d.in_degree(v) for v in range(d.n) if v not in xs)
    delta_out = min(d.out_degree(v) for v in range(d.n) if v not in ys)
    return x, y, delta_in, delta_out


def connectivity_gate(state: EngineState, delta_in, delta_out):
    """Density/connectivity threshold gate; hard in strict mode only."""
    p, d = state.params, state.d
    need = p.connectivity_threshold
    observed = min(d.n, delta_in, delta_out)
    if p.strict:
        ok = state.log.at_least("connectivity-threshold", observed, need, hard=True)
        if not ok:
            raise PipelineFailure(
                "families", "connectivity-threshold",
                f"min(n, in-degree, out-degree) = {observed} < {need:.6g}",
                summary={"n": d.n, "delta_in": delta_in, "delta_out": delta_out},
                cause=HypothesisUnmet("threshold not met", claim="connectivity-threshold"),
            )
    else:
        state.log.at_least("connectivity-threshold", observed, p.scaled(need))


def build_families(state: EngineState, x, y, delta_in, delta_out) -> FamilyLedger:
    d, p = state.d, state.params
    c, l = p.spine_cap, p.l
    ledger = FamilyLedger(list(x), list(y), delta_in=delta_in, delta_out=delta_out)
    specials = set(x) | set(y)
    used = set()
    for kind, centers, build, family in (
        ("out", x, almost_out_dominating, ledger.out_family),
        ("in", y, almost_in_dominating, ledger.in_family),
    ):
        for i, v in enumerate(centers):
            forbidden = used | (specials - {v})
            try:
                t = build(d, v, c, l, forbidden=forbidden)
            except (HypothesisUnmet, ConstructionStuck) as exc:
                exc.index = i
                raise PipelineFailure(
                    "families", "families-hypothesis" if isinstance(exc, HypothesisUnmet) else "families-stuck",
                    f"{kind}-family index {i} (center {v}): {exc}",
                    summary={"index": i, "kind": kind, "built": len(family)},
                    cause=exc,
                ) from exc
            errs = validate_triple(d, t, c, l, forbidden=forbidden)
            if errs:
                raise PipelineFailure("families", "families-domination",
                                      f"{kind}-family index {i}: {errs[0]}", cause=None)
            family.append(t)
            used |= t.members
    check_families(state, ledger)
    return ledger


def check_families(state: EngineState, ledger: FamilyLedger):
    """Disjointness, spines, domination relative to ``D0 | E`` and the
    exceptional-set bounds; all hard except the aggregate bound."""
    d, p, log = state.d, state.params, state.log
    c, l = p.spine_cap, p.l
    fams = ledger.out_family + ledger.in_family
    total = sum(len(t.members) for t in fams)
    d0 = ledger.d0
    ok = log.check("families-disjoint", total, len(d0), total == len(d0), hard=True)
    sizes_ok = all(2 <= len(t.members) <= c for t in fams)
    ok &= log.check("families-sizes", c, max(len(t.members) for t in fams), sizes_ok, hard=True)
    spine_bad = 0
    for i, t in enumerate(ledger.out_family):
        if t.head != ledger.X[i] or t.tail != t.anchor:
            spine_bad += 1
    for i, t in enumerate(ledger.in_family):
        if t.tail != ledger.Y[i] or t.head != t.anchor:
            spine_bad += 1
    for t in fams:
        sp = t.spine
        for a_ in range(len(sp)):
            for b_ in range(a_ + 1, len(sp)):
                if not d.has_arc(sp[a_], sp[b_]):
                    spine_bad += 1
    ok &= log.check("families-spines", 0, spine_bad, spine_bad == 0, hard=True)
    dom_bad = 0
    for t in ledger.out_family:
        dom = t.members - {t.anchor}
        for w in range(d.n):
            if w in d0 or w in t.exceptional:
                continue
            if not (d.in_neighbors(w) & dom):
                dom_bad += 1
    for t in ledger.in_family:
        dom = t.members - {t.anchor}
        for w in range(d.n):
            if w in d0 or w in t.exceptional:
                continue
            if not (d.out_neighbors(w) & dom):
                dom_bad += 1
    ok &= log.check("families-domination", 0, dom_bad, dom_bad == 0, hard=True)
    # per-family bound with the minimum degree off X / off Y
    worst_a = max(len(t.exceptional) for t in ledger.out_family)
    worst_b = max(len(t.exceptional) for t in ledger.in_family)
    bound_a = exceptional_bound(ledger.delta_in, c, l)
    bound_b = exceptional_bound(ledger.delta_out, c, l)
    ok &= log.at_most("families-exceptional-out", worst_a, bound_a, hard=True)
    ok &= log.at_most("families-exceptional-in", worst_b, bound_b, hard=True)
    # aggregate bounds: fractions of the observed minimum degrees
    k = p.k
    log.at_most("exceptional-aggregate-out", len(ledger.e_a), ledger.delta_in / (2000 * k))
    log.at_most("exceptional-aggregate-in", len(ledger.e_b), ledger.delta_out / (2000 * k))
    if not ok:
        bad = next(e for e in reversed(log.entries) if not e.passed and e.hard)
        raise PipelineFailure("families", bad.name, f"observed {bad.observed}, bound {bad.bound}")


def d0_coloring(ledger: FamilyLedger, k: int) -> dict:
    """Colour of every vertex of ``D0`` per the class table above."""
    col = {}
    for i in range(len(ledger.out_family)):
        A, B = ledger.out_family[i].members, ledger.in_family[i].members
        a, b = ledger.a(i), ledger.b(i)
        cls = i // k
        first = set()
        if cls == 0:
            first = A | B
        elif cls == 1:
            first = set()
        elif cls == 2:
            first = {a, b}
        elif cls == 3:
            first = (A | B) - {a, b}
        elif cls == 4:
            first = (A - {a}) | {b}
        elif cls == 5:
            first = (B - {b}) | {a}
        for v in A | B:
            col[v] = I if v in first else II
    return col


def initial_coloring(state: EngineState, ledger: FamilyLedger):
    state.ledger = ledger
    state.set_context(ledger.d0, ledger.e_a, ledger.e_b)
    for v, c in sorted(d0_coloring(ledger, state.params.k).items()):
        state.paint(v, c)
    state.log.check("initial-coloring", len(ledger.d0), len(state.color), len(state.color) == len(ledger.d0), hard=True)
