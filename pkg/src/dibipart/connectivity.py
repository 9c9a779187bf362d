"""Exact vertex connectivity for digraphs.

Everything here reduces to unit vertex-capacity max-flow (each vertex ``w``
split into ``w_in -> w_out`` with capacity one, arcs uncapacitated) solved
by BFS augmentation on an implicit residual graph.  Queries only ever need
to know whether the flow reaches a small bound ``k``, so augmentation stops
as soon as it does.

The low-level routines take a successor callable instead of a ``Digraph``
so that callers can run queries on vertex-filtered views (induced or
cross subgraphs) without materialising them.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .digraph import Digraph
from .errors import NoSuchFan, SearchBudgetExceeded

Succ = Callable[[int], Iterable[int]]

_SINK = -1


@dataclass(frozen=True)
class PathWitness:
    vertices: tuple

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("a path has at least one vertex")

    @property
    def length(self) -> int:
        return len(self.vertices)

    @property
    def start(self):
        return self.vertices[0]

    @property
    def end(self):
        return self.vertices[-1]

    @property
    def interior(self) -> frozenset:
        return frozenset(self.vertices[1:-1])

    def is_odd(self):
        return self.length % 2 == 1

    def validate(self, d: Digraph) -> bool:
        vs = self.vertices
        if len(set(vs)) != len(vs):
            return False
        if any(not (0 <= v < d.n) for v in vs):
            return False
        return all(d.has_arc(u, v) for u, v in zip(vs, vs[1:]))

    def to_json(self):
        return list(self.vertices)


@dataclass(frozen=True)
class SeparatorWitness:
    """Negative certificate: deleting ``cut`` kills every ``side_a -> side_b`` path.

    ``reason`` is ``"cut"`` for a genuine separator or ``"order"`` when the
    digraph simply has too few vertices.
    """

    cut: frozenset
    side_a: object = None
    side_b: object = None
    reason: str = "cut"

    def validate(self, d: Digraph, k: int) -> bool:
        if self.reason == "order":
            return d.n <= k
        if len(self.cut) > k - 1:
            return False
        sources = _as_set(self.side_a) - self.cut
        targets = _as_set(self.side_b) - self.cut
        if not sources:
            return False
        seen = _reach(lambda u: d.out_neighbors(u), sources, blocked=self.cut)
        return not (seen & targets)

    def to_json(self):
        def enc(x):
            if isinstance(x, (set, frozenset)):
                return sorted(x)
            return x

        return {
            "cut": sorted(self.cut),
            "side_a": enc(self.side_a),
            "side_b": enc(self.side_b),
            "reason": self.reason,
        }

    @classmethod
    def from_json(cls, obj):
        def dec(x):
            return frozenset(x) if isinstance(x, list) else x

        return cls(frozenset(obj["cut"]), dec(obj["side_a"]), dec(obj["side_b"]), obj["reason"])


def _as_set(x):
    if x is None:
        return set()
    if isinstance(x, (set, frozenset, list, tuple)):
        return set(x)
    return {x}


def _reach(succ: Succ, sources, blocked=frozenset()):
    seen = set(sources)
    queue = deque(seen)
    while queue:
        u = queue.popleft()
        for w in succ(u):
            if w not in seen and w not in blocked:
                seen.add(w)
                queue.append(w)
    return seen


# ---------------------------------------------------------------------------
# unit vertex-capacity flow
# ---------------------------------------------------------------------------
class _Flow:
    """Vertex-disjoint flow out of ``source``.

    In set mode every vertex of ``targets`` (except the source) may absorb
    one unit after paying its own capacity.  In pair mode the single target
    is uncapacitated, i.e. paths are internally disjoint.
    """

    def __init__(self, succ: Succ, source, targets=None, target=None):
        self.succ = succ
        self.s = source
        self.targets = targets
        self.y = target
        self.nxt = {}
        self.prv = {}
        self.src_out = set()
        self.value = 0
        self.last_seen = None

    def _augment_once(self) -> bool:
        s, y, targets, succ = self.s, self.y, self.targets, self.succ
        nxt, prv = self.nxt, self.prv
        start = (1, s)
        parent = {start: None}
        queue = deque([start])
        found = None
        while queue and found is None:
            node = queue.popleft()
            side, u = node
            if side == 1:
                # out(u)
                if targets is not None and u != s and u in targets and nxt.get(u) != _SINK:
                    found = (node, "sink")
                    break
                for w in sorted(succ(u)):
                    if w == s:
                        continue
                    if y is not None and w == y:
                        if u == s:
                            continue
                        if nxt.get(u) != y:
                            found = (node, "y")
                            break
                        continue
                    child = (0, w)
                    if child not in parent:
                        parent[child] = node
                        queue.append(child)
                if found is not None:
                    break
                if u != s and u in prv:
                    child = (0, u)
                    if child not in parent:
                        parent[child] = node
                        queue.append(child)
            else:
                # in(u)
                if u not in prv:
                    child = (1, u)
                    if child not in parent:
                        parent[child] = node
                        queue.append(child)
                else:
                    p = prv[u]
                    child = (1, p)
                    if child not in parent:
                        parent[child] = node
                        queue.append(child)
        if found is None:
            self.last_seen = parent
            return False
        # walk back and collect edges
        last, kind = found
        edges = [(last, kind)]
        node = last
        while parent[node] is not None:
            edges.append((parent[node], node))
            node = parent[node]
        edges.reverse()
        cancels, forwards = [], []
        for a, b in edges:
            if b in ("sink", "y"):
                forwards.append((a[1], _SINK if b == "sink" else y))
                continue
            if a[0] == 1 and b[0] == 0 and a[1] != b[1]:
                forwards.append((a[1], b[1]))
            elif a[0] == 0 and b[0] == 1 and a[1] != b[1]:
                cancels.append((b[1], a[1]))  # flow b -> a is cancelled
            # in(u)->out(u) and out(u)->in(u) are implied by nxt/prv
        for u, w in cancels:
            if u == s:
                self.src_out.discard(w)
            elif nxt.get(u) == w:
                del nxt[u]
            if prv.get(w) == u:
                del prv[w]
        for u, w in forwards:
            if u == s:
                self.src_out.add(w)
            else:
                nxt[u] = w
            if w != _SINK and w != y:
                prv[w] = u
        self.value += 1
        return True

    def run(self, limit=None):
        while limit is None or self.value < limit:
            if not self._augment_once():
                break
        return self.value

    def min_cut(self):
        """Vertex cut read off the last failed search (call after ``run`` stalls)."""
        if self.last_seen is None:
            self._augment_once()
        seen = self.last_seen
        if seen is None:
            return None
        return frozenset(u for side, u in seen if side == 0 and (1, u) not in seen)

    def paths(self):
        out = []
        for w in sorted(self.src_out):
            path = [self.s, w]
            cur = w
            while True:
                if cur == self.y:
                    break
                nx = self.nxt.get(cur)
                if nx is None or nx == _SINK:
                    break
                path.append(nx)
                cur = nx
            out.append(tuple(path))
        return out


def menger_to_set(succ: Succ, v, targets, limit=None):
    """Max number of paths from ``v`` into ``targets``, disjoint except at ``v``.

    Returns ``(value, flow)``; the value is infinite (``float('inf')``)
    when ``v`` itself is a target.
    """
    if v in targets:
        return float("inf"), None
    flow = _Flow(succ, v, targets=targets)
    return flow.run(limit), flow


def menger_pair(succ: Succ, x, y, limit=None):
    """Max number of internally disjoint ``x -> y`` paths, ignoring a direct arc."""
    flow = _Flow(succ, x, target=y)
    return flow.run(limit), flow


def local_connectivity(d: Digraph, x, y, limit=None):
    """Internally disjoint ``x->y`` path count (a direct arc counts as one path)."""
    value, _ = menger_pair(d.out_neighbors, x, y, limit)
    if d.has_arc(x, y):
        value += 1
    return value if limit is None else min(value, limit)


# ---------------------------------------------------------------------------
# public predicates
# ---------------------------------------------------------------------------
def strongly_connected_components(d: Digraph):
    """Tarjan's algorithm, iterative; components sorted by smallest member."""
    index = {}
    low = {}
    on_stack = set()
    stack = []
    comps = []
    counter = 0
    for root in range(d.n):
        if root in index:
            continue
        work = [(root, iter(sorted(d.out_neighbors(root))))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(sorted(d.out_neighbors(w)))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                comps.append(frozenset(comp))
    comps.sort(key=min)
    return comps


def is_strongly_connected(d: Digraph) -> bool:
    if d.n == 0:
        return False
    fwd = _reach(d.out_neighbors, [0])
    if len(fwd) != d.n:
        return False
    return len(_reach(d.in_neighbors, [0])) == d.n


def _unreached_pair(d: Digraph):
    fwd = _reach(d.out_neighbors, [0])
    if len(fwd) != d.n:
        return 0, min(set(range(d.n)) - fwd)
    back = _reach(d.in_neighbors, [0])
    return min(set(range(d.n)) - back), 0


def pair_is_k_connected(d: Digraph, x, y, k) -> Optional[frozenset]:
    """``None`` if no set of fewer than ``k`` vertices separates ``x`` from ``y``.

    Otherwise returns a minimum separator.
    """
    if d.has_arc(x, y):
        return None
    common = d.out_neighbors(x) & d.in_neighbors(y)
    if len(common) >= k:
        return None
    value, flow = menger_pair(d.out_neighbors, x, y, limit=k)
    if value >= k:
        return None
    return flow.min_cut()


def is_strongly_k_connected(d: Digraph, k: int):
    """``(ok, witness)``; on failure the witness is a separator of size < k.

    Pairs checked: ``(v_i, w)`` and ``(w, v_i)`` for ``v_i`` among the first
    ``k`` vertices -- any separator of size < k misses one of them.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if d.n <= k:
        return False, SeparatorWitness(frozenset(), None, None, reason="order")
    if k == 1:
        if is_strongly_connected(d):
            return True, None
        x, y = _unreached_pair(d)
        return False, SeparatorWitness(frozenset(), x, y)
    pairs = set()
    for anchor in range(k):
        for w in range(d.n):
            if w != anchor:
                pairs.add((anchor, w))
                pairs.add((w, anchor))
    for x, y in sorted(pairs):
        cut = pair_is_k_connected(d, x, y, k)
        if cut is not None:
            return False, SeparatorWitness(cut, x, y)
    return True, None


def _pair_k_connected(succ, nodes, v, targets, k):
    targets = set(targets) & nodes
    if v in targets:
        return True, None
    direct = sum(1 for w in succ(v) if w in targets)
    if direct >= k:
        return True, None
    value, flow = menger_to_set(succ, v, targets, limit=k)
    if value >= k:
        return True, None
    return False, SeparatorWitness(flow.min_cut(), v, frozenset(targets))


def pair_k_connected_from(d: Digraph, v, targets, k):
    """Is ``(v, targets)`` k-connected in ``d``?  Targets outside ``d`` are ignored."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if not (0 <= v < d.n):
        raise IndexError(f"vertex {v} not in digraph")
    nodes = set(range(d.n))
    return _pair_k_connected(d.out_neighbors, nodes, v, targets, k)


def pair_k_connected_to(d: Digraph, sources, v, k):
    """Is ``(sources, v)`` k-connected in ``d``?"""
    if k < 1:
        raise ValueError("k must be at least 1")
    if not (0 <= v < d.n):
        raise IndexError(f"vertex {v} not in digraph")
    nodes = set(range(d.n))
    ok, wit = _pair_k_connected(d.in_neighbors, nodes, v, sources, k)
    if wit is not None:
        wit = SeparatorWitness(wit.cut, wit.side_b, wit.side_a)
    return ok, wit


def view_k_connected(succ, v, targets, k) -> bool:
    """Pair k-connectedness on a filtered view; ``succ`` must already filter."""
    if v in targets:
        return True
    direct = 0
    for w in succ(v):
        if w in targets:
            direct += 1
            if direct >= k:
                return True
    value, _ = menger_to_set(succ, v, targets, limit=k)
    return value >= k


# ---------------------------------------------------------------------------
# disjoint path fans
# ---------------------------------------------------------------------------
@dataclass
class DisjointPathFan:
    pairs: list
    paths: dict = field(default_factory=dict)  # (i, j) -> PathWitness, j from 0
    s: int = 0
    provenance: str = "search-derived"

    def paths_for(self, i):
        return [self.paths[(i, j)] for j in range(self.s) if (i, j) in self.paths]

    def interior_total(self):
        return sum(len(p.interior) for p in self.paths.values())

    def validate(self, d: Digraph, avoid=()) -> list:
        errors = []
        terminals = {t for pair in self.pairs for t in pair}
        used = {}
        avoid = set(avoid)
        for (i, j), p in sorted(self.paths.items()):
            x, y = self.pairs[i]
            if p.start != x or p.end != y:
                errors.append(f"path {(i, j)} has wrong endpoints")
            if not p.validate(d):
                errors.append(f"path {(i, j)} is not a path of the digraph")
            if x != y and set(p.vertices) & terminals != {x, y}:
                errors.append(f"path {(i, j)} meets another terminal")
            for w in p.interior:
                if w in avoid:
                    errors.append(f"path {(i, j)} uses avoided vertex {w}")
                if w in used:
                    errors.append(f"paths {used[w]} and {(i, j)} share vertex {w}")
                used[w] = (i, j)
        seen = set()
        for (i, j), p in self.paths.items():
            key = p.vertices
            if key in seen and len(key) == 2:
                errors.append(f"arc path {key} used twice")
            seen.add(key)
        return errors


def _dist_to(pred: Succ, y, allowed):
    dist = {y: 0}
    queue = deque([y])
    while queue:
        u = queue.popleft()
        for w in pred(u):
            if w in allowed and w not in dist:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def _paths_of_length(d: Digraph, x, y, avail, length, budget=None):
    """Simple x->y paths with exactly ``length`` vertices, lexicographic order.

    ``budget`` is an optional one-element list counting down search nodes;
    :class:`SearchBudgetExceeded` is raised when it reaches zero.
    """
    allowed = set(avail) | {x}
    dist = _dist_to(d.in_neighbors, y, allowed)
    if x not in dist or dist[x] + 1 > length:
        return
    path = [x]
    on_path = {x}

    def rec(u):
        if budget is not None:
            budget[0] -= 1
            if budget[0] < 0:
                raise SearchBudgetExceeded("path enumeration budget exhausted")
        remaining = length - len(path)  # vertices still to add, y included
        if remaining == 1:
            if d.has_arc(u, y):
                yield tuple(path) + (y,)
            return
        for w in sorted(d.out_neighbors(u)):
            if w == y or w not in avail or w in on_path:
                continue
            if dist.get(w, length + 1) + 1 > remaining - 1 + 1:
                continue
            path.append(w)
            on_path.add(w)
            yield from rec(w)
            path.pop()
            on_path.discard(w)

    yield from rec(x)


def candidate_paths(d: Digraph, x, y, avail, max_length=None, budget=None, parity=None):
    """x->y paths through ``avail`` in (length, lexicographic) order.

    ``parity`` (0 or 1) restricts to lengths of that parity.
    """
    if x == y:
        yield (x,)
        return
    top = (len(avail) + 2) if max_length is None else max_length
    for length in range(2, top + 1):
        if parity is not None and length % 2 != parity:
            continue
        yield from _paths_of_length(d, x, y, avail, length, budget)


def _shortest_lex_path(d: Digraph, x, y, avail, allow_direct=True):
    allowed = set(avail) | {x}
    dist = _dist_to(d.in_neighbors, y, allowed)
    if allow_direct:
        if x not in dist:
            return None
        first = None
    else:
        options = [(dist[w], w) for w in d.out_neighbors(x) if w in avail and w in dist]
        if not options:
            return None
        first = min(options)[1]
    path = [x] if first is None else [x, first]
    u = path[-1]
    while u != y:
        nxt = None
        for w in sorted(d.out_neighbors(u)):
            if (w == y or w in avail) and dist.get(w) == dist[u] - 1 and w not in path:
                nxt = w
                break
        if nxt is None:
            return None
        path.append(nxt)
        u = nxt
    return tuple(path)


def _flow_bound(d: Digraph, x, y, avail, need, arc_free):
    allowed = set(avail)

    def succ(u):
        return [w for w in d.out_neighbors(u) if w in allowed or w == y]

    value, _ = menger_pair(succ, x, y, limit=need)
    if arc_free and d.has_arc(x, y):
        value += 1
    return value >= need


def find_disjoint_path_fans(d: Digraph, pairs, s, avoid=(), heuristic=False, budget=200_000):
    """``s`` internally disjoint paths per pair, all pairwise internally disjoint.

    Exact backtracking unless ``heuristic`` is set (greedy shortest-path
    peeling).  Interiors avoid ``avoid`` and every terminal.
    """
    pairs = [tuple(p) for p in pairs]
    terminals = {t for p in pairs for t in p}
    avoid = set(avoid)
    if avoid & terminals:
        raise ValueError("avoid set meets the terminals")
    for t in terminals:
        if not (0 <= t < d.n):
            raise IndexError(f"terminal {t} not in digraph")
    if s < 1:
        raise ValueError("s must be positive")
    for x, y in pairs:
        if x == y and s > 1:
            raise NoSuchFan(f"degenerate pair ({x}, {x}) admits a single path only", best=None)

    base_avail = set(range(d.n)) - terminals - avoid
    requests = [(i, j) for j in range(s) for i in range(len(pairs))]
    fan = DisjointPathFan(pairs=pairs, s=s)

    if heuristic:
        avail = set(base_avail)
        used_arcs = set()
        for i, j in requests:
            x, y = pairs[i]
            if x == y:
                fan.paths[(i, j)] = PathWitness((x,))
                continue
            if d.has_arc(x, y) and (x, y) not in used_arcs:
                used_arcs.add((x, y))
                fan.paths[(i, j)] = PathWitness((x, y))
                continue
            p = _shortest_lex_path(d, x, y, avail - {x, y}, allow_direct=False)
            if p is None:
                fan.provenance = "heuristic"
                raise NoSuchFan(f"greedy peeling found no path for pair {i}", best=fan)
            fan.paths[(i, j)] = PathWitness(p)
            avail -= set(p[1:-1])
        fan.provenance = "heuristic"
        return fan

    best = {"paths": {}}
    nodes = [0]
    chosen = {}
    used_arcs = set()

    def remaining_ok(r, avail):
        need = {}
        for i, _ in requests[r:]:
            need[i] = need.get(i, 0) + 1
        for i, cnt in need.items():
            x, y = pairs[i]
            if x == y:
                continue
            if not _flow_bound(d, x, y, avail, cnt, (x, y) not in used_arcs):
                return False
        return True

    def rec(r, avail):
        nodes[0] += 1
        if nodes[0] > budget:
            raise SearchBudgetExceeded("fan search budget exhausted", best=_to_fan(best["paths"]))
        if len(chosen) > len(best["paths"]):
            best["paths"] = dict(chosen)
        if r == len(requests):
            return True
        if not remaining_ok(r, avail):
            return False
        i, j = requests[r]
        x, y = pairs[i]
        prev = chosen.get((i, j - 1)) if j > 0 else None
        prev_key = (len(prev), prev) if prev is not None else None
        for p in candidate_paths(d, x, y, avail):
            if prev_key is not None and (len(p), p) <= prev_key:
                continue
            if len(p) == 2:
                if (x, y) in used_arcs:
                    continue
                used_arcs.add((x, y))
            chosen[(i, j)] = p
            if rec(r + 1, avail - set(p[1:-1])):
                return True
            del chosen[(i, j)]
            if len(p) == 2:
                used_arcs.discard((x, y))
        return False

    def _to_fan(paths):
        f = DisjointPathFan(pairs=pairs, s=s)
        f.paths = {key: PathWitness(p) for key, p in paths.items()}
        return f

    if not rec(0, base_avail):
        raise NoSuchFan("no fan with the requested number of paths exists", best=_to_fan(best["paths"]))
    fan.paths = {key: PathWitness(p) for key, p in chosen.items()}
    return fan


def select_short_subfamily(fan: DisjointPathFan, s, s_prime) -> DisjointPathFan:
    """Keep the ``s_prime`` shortest paths per pair (ties: lexicographic)."""
    if s_prime > s:
        raise ValueError("s_prime must not exceed s")
    if s_prime < 1:
        raise ValueError("s_prime must be positive")
    out = DisjointPathFan(pairs=list(fan.pairs), s=s_prime, provenance=fan.provenance)
    for i in range(len(fan.pairs)):
        ps = sorted(fan.paths_for(i), key=lambda p: (p.length, p.vertices))
        for j, p in enumerate(ps[:s_prime]):
            out.paths[(i, j)] = p
    return out
