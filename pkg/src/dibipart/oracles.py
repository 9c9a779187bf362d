"""Brute-force reference implementations (small inputs only).

These deliberately share no code with the flow-based machinery: each
enumerates deletion sets and runs a plain breadth-first search.  They exist
to cross-check the fast routines and back the ``oracle`` CLI subcommand.
"""

from __future__ import annotations

from itertools import combinations

from .digraph import Digraph
from .verify import brute_force_partition

KCONN_LIMIT = 12
PATHS_LIMIT = 12


def _guard(d: Digraph, limit, what):
    if d.n > limit:
        raise ValueError(f"{what} oracle limited to n <= {limit}, got {d.n}")


def _reachable(d: Digraph, src, removed, forward=True):
    step = d.out_neighbors if forward else d.in_neighbors
    seen = {src}
    stack = [src]
    while stack:
        u = stack.pop()
        for w in step(u):
            if w not in removed and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def _deletion_sets(vertices, k):
    vertices = sorted(vertices)
    for size in range(k):
        yield from combinations(vertices, size)


def oracle_strongly_connected(d: Digraph, removed=frozenset()) -> bool:
    alive = [v for v in range(d.n) if v not in removed]
    if not alive:
        return False
    r = alive[0]
    return len(_reachable(d, r, removed)) == len(alive) and len(_reachable(d, r, removed, False)) == len(alive)


def oracle_strongly_k_connected(d: Digraph, k: int) -> bool:
    """At least ``k + 1`` vertices and strong after deleting any ``< k`` vertices."""
    if k < 1:
        raise ValueError("k must be at least 1")
    _guard(d, KCONN_LIMIT, "connectivity")
    if d.n < k + 1:
        return False
    return all(oracle_strongly_connected(d, frozenset(s)) for s in _deletion_sets(range(d.n), k))


def oracle_pair_from(d: Digraph, v, targets, k: int) -> bool:
    """For every ``S`` avoiding ``v`` with ``|S| < k``, ``v`` reaches ``targets - S``."""
    _guard(d, KCONN_LIMIT, "connectivity")
    targets = {t for t in targets if 0 <= t < d.n}
    if v in targets:
        return True
    for s in _deletion_sets(set(range(d.n)) - {v}, k):
        removed = frozenset(s)
        if not (_reachable(d, v, removed) & (targets - removed)):
            return False
    return True


def oracle_pair_to(d: Digraph, sources, v, k: int) -> bool:
    _guard(d, KCONN_LIMIT, "connectivity")
    sources = {t for t in sources if 0 <= t < d.n}
    if v in sources:
        return True
    for s in _deletion_sets(set(range(d.n)) - {v}, k):
        removed = frozenset(s)
        if not (_reachable(d, v, removed, False) & (sources - removed)):
            return False
    return True


def _simple_paths(d: Digraph, x, y, avail):
    path = [x]

    def rec(u):
        for w in sorted(d.out_neighbors(u)):
            if w == y:
                yield tuple(path) + (y,)
            elif w in avail and w not in path:
                path.append(w)
                yield from rec(w)
                path.pop()

    yield from rec(x)


def oracle_disjoint_paths(d: Digraph, pairs, s: int, avoid=()):
    """``s`` internally disjoint paths per pair, all pairwise internally
    disjoint (each direct arc usable once); ``None`` if impossible."""
    _guard(d, PATHS_LIMIT, "paths")
    pairs = [tuple(p) for p in pairs]
    terminals = {t for p in pairs for t in p}
    base = set(range(d.n)) - terminals - set(avoid)
    requests = [i for i in range(len(pairs)) for _ in range(s)]
    chosen = []

    def rec(idx, avail, used_direct):
        if idx == len(requests):
            return True
        i = requests[idx]
        x, y = pairs[i]
        if x == y:
            if s > 1:
                return False
            chosen.append((x,))
            if rec(idx + 1, avail, used_direct):
                return True
            chosen.pop()
            return False
        # symmetry: paths of the same pair appear in increasing order
        prev = chosen[-1] if idx and requests[idx - 1] == i else None
        for p in _simple_paths(d, x, y, avail):
            if prev is not None and p <= prev:
                continue
            if len(p) == 2 and (x, y) in used_direct:
                continue
            chosen.append(p)
            nxt_direct = used_direct | {(x, y)} if len(p) == 2 else used_direct
            if rec(idx + 1, avail - set(p[1:-1]), nxt_direct):
                return True
            chosen.pop()
        return False

    if rec(0, base, frozenset()):
        out = {}
        for idx, p in enumerate(chosen):
            out.setdefault(requests[idx], []).append(p)
        return out
    return None


__all__ = [
    "oracle_strongly_connected",
    "oracle_strongly_k_connected",
    "oracle_pair_from",
    "oracle_pair_to",
    "oracle_disjoint_paths",
    "brute_force_partition",
]
