"""Cycles in strong tournaments: Hamiltonian cycles, cycles of every length
through a prescribed vertex, and two disjoint cycles of complementary length
from a connected bipartition.
"""

from __future__ import annotations

from dataclasses import dataclass

from .connectivity import is_strongly_connected
from .digraph import Digraph
from .errors import InvalidPartition, NotATournament, NotStrong


@dataclass(frozen=True)
class CycleWitness:
    vertices: tuple

    @property
    def length(self):
        return len(self.vertices)

    def validate(self, d: Digraph) -> bool:
        vs = self.vertices
        if len(vs) < 2 or len(set(vs)) != len(vs):
            return False
        return all(d.has_arc(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs)))

    def to_json(self):
        return list(self.vertices)


def _rotated(cycle):
    i = cycle.index(min(cycle))
    return tuple(cycle[i:] + cycle[:i])


def _require_strong_tournament(t: Digraph):
    if not t.is_tournament():
        raise NotATournament("input is not a tournament")
    if t.n < 3 or not is_strongly_connected(t):
        raise NotStrong("tournament is not strongly connected")


def _triangle_through(t: Digraph, v):
    for o in sorted(t.out_neighbors(v)):
        for i in sorted(t.in_neighbors(v)):
            if t.has_arc(o, i):
                return [v, o, i]
    raise NotStrong(f"no 3-cycle through {v}")


def _extend(t: Digraph, cycle):
    """Return a cycle one longer than ``cycle`` that still starts at ``cycle[0]``."""
    m = len(cycle)
    on = set(cycle)
    dominating, dominated = [], []
    for x in range(t.n):
        if x in on:
            continue
        for p in range(m):
            if t.has_arc(cycle[p], x) and t.has_arc(x, cycle[(p + 1) % m]):
                return cycle[: p + 1] + [x] + cycle[p + 1:]
        if t.has_arc(x, cycle[0]):
            dominating.append(x)
        else:
            dominated.append(x)
    for b in dominated:
        for a in dominating:
            if t.has_arc(b, a):
                # v -> b -> a -> c_2 -> ... replaces c_1 by the pair (b, a)
                return [cycle[0], b, a] + cycle[2:]
    raise NotStrong("cycle cannot be extended; tournament is not strong")


def cycle_through_vertex(t: Digraph, v: int, length: int) -> CycleWitness:
    _require_strong_tournament(t)
    if not (0 <= v < t.n):
        raise ValueError(f"vertex {v} out of range")
    if not (3 <= length <= t.n):
        raise ValueError(f"cycle length must lie in [3, {t.n}], got {length}")
    cycle = _triangle_through(t, v)
    while len(cycle) < length:
        cycle = _extend(t, cycle)
    return CycleWitness(_rotated(cycle))


def hamiltonian_cycle(t: Digraph) -> CycleWitness:
    _require_strong_tournament(t)
    return cycle_through_vertex(t, 0, t.n)


def _lift(sub: Digraph, w: CycleWitness) -> CycleWitness:
    return CycleWitness(_rotated([sub.labels[x] for x in w.vertices]))


def disjoint_cycles(t: Digraph, v: int, length: int, partition):
    """Two disjoint cycles ``(C1, C2)`` with ``v`` on ``C1``, ``|C1| = length``
    and ``|C2| = n - length``.

    ``partition`` must split ``V(t)`` into two parts whose induced subgraphs
    and cross subgraph are strongly connected.
    """
    if not t.is_tournament():
        raise NotATournament("input is not a tournament")
    n = t.n
    if not (3 <= length <= n - 3):
        raise ValueError(f"cycle length must lie in [3, n-3] = [3, {n - 3}], got {length}")
    v1, v2 = set(partition[0]), set(partition[1])
    if v1 & v2 or v1 | v2 != set(range(n)):
        raise InvalidPartition("parts must partition the vertex set")
    for name, g in (("first part", t.induced(v1)), ("second part", t.induced(v2)),
                    ("cross graph", t.bipartite_subgraph(v1, v2))):
        if g.n < 2 or not is_strongly_connected(g):
            raise InvalidPartition(f"{name} is not strongly connected")
    if v not in v1:
        v1, v2 = v2, v1
    if len(v1) >= length:
        part = t.induced(v1)
        c1 = _lift(part, cycle_through_vertex(part, part.labels.index(v), length))
        rest = t.induced(set(range(n)) - set(c1.vertices))
        c2 = _lift(rest, hamiltonian_cycle(rest))
    else:
        part = t.induced(v2)
        c2 = _lift(part, cycle_through_vertex(part, 0, n - length))
        rest = t.induced(set(range(n)) - set(c2.vertices))
        c1 = _lift(rest, hamiltonian_cycle(rest))
    return c1, c2


def all_cycles(d: Digraph):
    """Every directed cycle (as a rotated vertex tuple); exponential, tests only."""
    out = []
    for s in range(d.n):
        stack = [(s, [s])]
        while stack:
            u, path = stack.pop()
            for w in d.out_neighbors(u):
                if w == s and len(path) >= 2:
                    out.append(tuple(path))
                elif w > s and w not in path:
                    stack.append((w, path + [w]))
    return out
