"""Almost-dominating sets, core sets and reach sets in dense digraphs.

All constructions are greedy with smallest-id tie-breaking.  Each returns a
witness object that the matching ``validate_*`` function can check from
scratch against the digraph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .connectivity import pair_k_connected_from, pair_k_connected_to, _reach
from .digraph import Digraph
from .errors import ConstructionStuck, HypothesisUnmet


@dataclass(frozen=True)
class DominatorTriple:
    kind: str  # "out" or "in"
    members: frozenset
    anchor: int
    center: int
    exceptional: frozenset
    spine: tuple

    @property
    def tail(self):
        return self.spine[0]

    @property
    def head(self):
        return self.spine[-1]

    def to_json(self):
        return {
            "kind": self.kind,
            "set": sorted(self.members),
            "anchor": self.anchor,
            "center": self.center,
            "exceptional": sorted(self.exceptional),
            "spine": list(self.spine),
        }


def exceptional_bound(degree, c, l):
    """Allowed size of the exceptional set: ``degree / 2**(c-2) + c*(l-1)``."""
    return degree / 2 ** (c - 2) + c * (l - 1)


def _restricted(d: Digraph, forbidden):
    """Adjacency of ``d - forbidden`` as dicts of sets (parent ids kept)."""
    alive = set(range(d.n)) - set(forbidden)
    out = {v: d.out_neighbors(v) & alive for v in alive}
    inn = {v: d.in_neighbors(v) & alive for v in alive}
    return alive, out, inn


def _out_construction(d: Digraph, v, c, l, forbidden, kind):
    if c < 2:
        raise HypothesisUnmet("spine cap c must be at least 2")
    forbidden = frozenset(forbidden)
    if v in forbidden:
        raise HypothesisUnmet(f"center {v} is forbidden")
    alive, out, inn = _restricted(d, forbidden)
    need = 2 ** (c - 1) * l
    deg = len(inn[v])
    word = "in" if kind == "out" else "out"
    if deg < need:
        raise HypothesisUnmet(f"{word}-degree of {v} is {deg} < 2^(c-1)*l = {need}")
    bound = exceptional_bound(deg, c, l)

    chosen = [v]
    dominated = set(out[v])
    common = set(inn[v])  # vertices dominating every chosen vertex
    while True:
        exc = alive - dominated - set(chosen)
        pool = common - set(chosen)
        if not pool:
            raise ConstructionStuck(
                f"no vertex dominates all of {chosen}", best=(tuple(chosen), frozenset(exc))
            )
        hits = sorted(pool & exc)
        anchor = hits[0] if hits else min(pool)
        if len(exc - {anchor}) <= bound:
            members = frozenset(chosen) | {anchor}
            exceptional = frozenset(exc - {anchor})
            spine = (anchor,) + tuple(reversed(chosen))
            return members, anchor, exceptional, spine
        if len(chosen) + 1 >= c:
            raise ConstructionStuck(
                f"exceptional set still {len(exc)} > {bound:g} with |A| at cap {c}",
                best=(tuple(chosen), frozenset(exc)),
            )
        primed = sorted(u for u in pool if inn[u] & pool)
        if not primed:
            raise ConstructionStuck(
                "candidate pool has no vertex with an in-neighbour inside it",
                best=(tuple(chosen), frozenset(exc)),
            )
        primed_set = set(primed)
        nxt = min(primed, key=lambda u: (len((inn[u] - out[u]) & primed_set), u))
        chosen.append(nxt)
        dominated |= out[nxt]
        common &= inn[nxt]


def almost_out_dominating(d: Digraph, v, c, l, forbidden=()) -> DominatorTriple:
    """Set ``A`` with ``A - {anchor}`` out-dominating all but few vertices.

    ``D[A]`` carries a transitive tournament with tail ``anchor`` and head
    ``v``; the construction runs inside ``d - forbidden``.
    """
    members, anchor, exc, spine = _out_construction(d, v, c, l, forbidden, "out")
    return DominatorTriple("out", members, anchor, v, exc, spine)


def almost_in_dominating(d: Digraph, v, c, l, forbidden=()) -> DominatorTriple:
    """Mirror of :func:`almost_out_dominating` obtained by arc reversal."""
    members, anchor, exc, spine = _out_construction(d.reversed, v, c, l, forbidden, "in")
    return DominatorTriple("in", members, anchor, v, exc, tuple(reversed(spine)))


def validate_triple(d: Digraph, t: DominatorTriple, c, l, forbidden=()) -> list:
    """Return the list of violated properties (empty when the triple is valid)."""
    errs = []
    forbidden = set(forbidden)
    if not (2 <= len(t.members) <= c):
        errs.append(f"|set|={len(t.members)} outside [2, {c}]")
    if set(t.spine) != set(t.members) or len(t.spine) != len(t.members):
        errs.append("spine does not enumerate the set")
    for i, u in enumerate(t.spine):
        for w in t.spine[i + 1:]:
            if not d.has_arc(u, w):
                errs.append(f"spine arc {u}->{w} missing")
    if t.kind == "out":
        if (t.tail, t.head) != (t.anchor, t.center):
            errs.append("out-triple must have tail=anchor, head=center")
    else:
        if (t.tail, t.head) != (t.center, t.anchor):
            errs.append("in-triple must have tail=center, head=anchor")
    if t.members & t.exceptional:
        errs.append("set meets exceptional set")
    if t.members & forbidden:
        errs.append("set meets forbidden vertices")
    dom = t.members - {t.anchor}
    rest = set(range(d.n)) - t.members - t.exceptional - forbidden
    for w in sorted(rest):
        nbrs = d.in_neighbors(w) if t.kind == "out" else d.out_neighbors(w)
        if not (nbrs & dom):
            errs.append(f"vertex {w} not {t.kind}-dominated")
            break
    alive = set(range(d.n)) - forbidden
    deg_set = d.in_neighbors(t.center) if t.kind == "out" else d.out_neighbors(t.center)
    deg = len(deg_set & alive)
    bound = exceptional_bound(deg, c, l)
    if len(t.exceptional) > bound:
        errs.append(f"|E|={len(t.exceptional)} exceeds {bound:g}")
    return errs


# ---------------------------------------------------------------------------
# core set
# ---------------------------------------------------------------------------
@dataclass
class CoreSet:
    members: frozenset
    k: int
    l: int
    rounds: list = field(default_factory=list)

    def bound(self, n):
        return 3 * (self.k + self.l) * math.log2(n) if n > 1 else 0


def _in_dominating_round(alive, out, inn):
    """One almost-in-dominating round on ``alive``: every other vertex ends up
    with an out-neighbour in the returned set."""
    chosen = []
    remaining = set(alive)
    while remaining:
        # remaining = vertices not yet sending an arc into the chosen set
        v = min(remaining, key=lambda u: (len(remaining - inn[u] - {u}), u))
        chosen.append(v)
        remaining -= inn[v]
        remaining.discard(v)
    return chosen


def core_set(d: Digraph, k, l, vertices=None) -> CoreSet:
    """Small ``U`` such that every vertex outside has k in- and k out-neighbours in ``U``.

    ``vertices`` restricts the construction to an induced subgraph (parent
    ids are kept).
    """
    pool = set(range(d.n)) if vertices is None else set(vertices)
    if pool and d.induced(pool).min_union_degree() < len(pool) - l:
        raise HypothesisUnmet(f"minimum union degree below |D| - l with l={l}")
    rounds = []
    alive = set(pool)
    for direction in ("in", "out"):
        for _ in range(k + l):
            if not alive:
                break
            if direction == "in":
                out = {v: d.out_neighbors(v) & alive for v in alive}
                inn = {v: d.in_neighbors(v) & alive for v in alive}
            else:
                out = {v: d.in_neighbors(v) & alive for v in alive}
                inn = {v: d.out_neighbors(v) & alive for v in alive}
            chosen = _in_dominating_round(alive, out, inn)
            rounds.append((direction, tuple(chosen)))
            alive -= set(chosen)
    members = frozenset(pool - alive)

    def covered():
        for w in alive:
            if len(d.out_neighbors(w) & members) < k or len(d.in_neighbors(w) & members) < k:
                return False
        return True

    # with fewer than k+l rounds of each kind the coverage property can fail
    if not covered():
        raise ConstructionStuck("core set coverage failed", best=members)
    return CoreSet(members, k, l, rounds)


def validate_core_set(d: Digraph, cs: CoreSet, vertices=None) -> list:
    pool = set(range(d.n)) if vertices is None else set(vertices)
    errs = []
    n = len(pool)
    if len(cs.members) > cs.bound(n) and len(cs.members) < n:
        errs.append(f"|U|={len(cs.members)} exceeds 3(k+l)log n = {cs.bound(n):.2f}")
    for w in sorted(pool - cs.members):
        if len(d.out_neighbors(w) & cs.members) < cs.k:
            errs.append(f"{w} has fewer than k out-neighbours in U")
        if len(d.in_neighbors(w) & cs.members) < cs.k:
            errs.append(f"{w} has fewer than k in-neighbours in U")
    return errs


# ---------------------------------------------------------------------------
# reach sets
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class ReachSets:
    u_set: frozenset
    w_set: frozenset
    provenance: str = "search-derived"


def _grow(d: Digraph, k, check, reach, seed):
    chosen = set(seed)
    while True:
        failing = [v for v in range(d.n) if not check(v, chosen)]
        if not failing:
            return frozenset(chosen)
        best, best_gain = None, -1
        for cand in range(d.n):
            if cand in chosen:
                continue
            gain = sum(1 for v in failing if cand in reach[v])
            if gain > best_gain:
                best, best_gain = cand, gain
        chosen.add(best)


def reach_sets(d: Digraph, k, l, enforce_bound=True) -> ReachSets:
    """Sets ``U``, ``W`` with ``(v, U)`` and ``(W, v)`` k-connected for every ``v``.

    Greedy growth followed by certification of every vertex.  The size bound
    ``2k + l - 2`` raises :class:`ConstructionStuck` (carrying the certified
    but oversized sets) unless ``enforce_bound`` is false.
    """
    if d.n == 0:
        return ReachSets(frozenset(), frozenset())
    if d.min_union_degree() < d.n - l:
        raise HypothesisUnmet(f"minimum union degree below |D| - l with l={l}")
    fwd = {v: _reach(d.out_neighbors, [v]) for v in range(d.n)}
    back = {v: _reach(d.in_neighbors, [v]) for v in range(d.n)}
    by_in = sorted(range(d.n), key=lambda v: (-d.in_degree(v), v))
    by_out = sorted(range(d.n), key=lambda v: (-d.out_degree(v), v))
    u_set = _grow(
        d, k, lambda v, s: pair_k_connected_from(d, v, s, k)[0], fwd, by_in[:k]
    )
    w_set = _grow(
        d, k, lambda v, s: pair_k_connected_to(d, s, v, k)[0], back, by_out[:k]
    )
    rs = ReachSets(u_set, w_set)
    cap = 2 * k + l - 2
    if enforce_bound and (len(u_set) > cap or len(w_set) > cap):
        raise ConstructionStuck(
            f"reach sets of sizes {len(u_set)}, {len(w_set)} exceed 2k+l-2 = {cap}", best=rs
        )
    return rs


def validate_reach_sets(d: Digraph, rs: ReachSets, k) -> list:
    errs = []
    for v in range(d.n):
        if not pair_k_connected_from(d, v, rs.u_set, k)[0]:
            errs.append(f"({v}, U) not {k}-connected")
        if not pair_k_connected_to(d, rs.w_set, v, k)[0]:
            errs.append(f"(W, {v}) not {k}-connected")
    return errs
