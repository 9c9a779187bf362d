"""Deterministic instance generators.

Randomness comes from SplitMix64 (state increment ``0x9E3779B97F4A7C15``,
mix multipliers ``0xBF58476D1CE4E5B9`` and ``0x94D049BB133111EB``, shifts
30/27/31) so that test vectors are reproducible across platforms and
languages.  Pairs are always visited in lexicographic ``i < j`` order.
"""

from __future__ import annotations

from .connectivity import is_strongly_connected
from .digraph import Digraph

_MASK = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def bit(self) -> int:
        return self.next() >> 63

    def below(self, numerator: int, denominator: int) -> bool:
        """True with probability ``numerator / denominator`` (top-bit scaling)."""
        return (self.next() * denominator) >> 64 < numerator


def _pairs(n):
    for i in range(n):
        for j in range(i + 1, n):
            yield i, j


def gen_tournament(n: int, seed: int) -> Digraph:
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = SplitMix64(seed)
    arcs = [(i, j) if rng.bit() else (j, i) for i, j in _pairs(n)]
    return Digraph(n, arcs)


def gen_dense_digraph(n: int, l: int, seed: int, retries: int = 16) -> Digraph:
    """Random digraph with ``min_union_degree >= n - l``.

    Start from a random tournament; for each pair (in order) delete its arc
    with probability 1/2 when both endpoints keep union degree at least
    ``n - l``; then add the reverse of each surviving arc with probability
    1/4 to create digons.
    """
    if l < 1:
        raise ValueError("l must be at least 1")
    if n < 1:
        raise ValueError("n must be at least 1")
    for attempt in range(retries):
        s = seed + attempt
        rng = SplitMix64(s)
        t = gen_tournament(n, s)
        arcs = set(t.arcs())
        degree = [n - 1] * n
        for i, j in _pairs(n):
            if rng.bit() and degree[i] - 1 >= n - l and degree[j] - 1 >= n - l:
                arcs.discard((i, j))
                arcs.discard((j, i))
                degree[i] -= 1
                degree[j] -= 1
        for u, v in sorted(arcs):
            if rng.below(1, 4):
                arcs.add((v, u))
        d = Digraph(n, arcs)
        if n == 1 or d.min_union_degree() >= n - l:
            return d
    raise ValueError(f"could not satisfy min union degree >= n - {l} after {retries} tries")


def gen_strong_tournament(n: int, seed: int, retries: int = 1000) -> Digraph:
    if n < 3:
        raise ValueError("strong tournaments need n >= 3")
    for attempt in range(retries):
        t = gen_tournament(n, seed + attempt * 0x10001)
        if is_strongly_connected(t):
            return t
    raise ValueError(f"no strong tournament found in {retries} tries")


def near_miss_digraph(n: int, l: int, seed: int) -> Digraph:
    """Dense digraph with one vertex whose union degree drops to ``n - l - 1``.

    Useful to exercise hypothesis checks.
    """
    d = gen_dense_digraph(n, l, seed)
    arcs = set(d.arcs())
    v = 0
    nbrs = sorted(d.out_neighbors(v) | d.in_neighbors(v))
    need = len(nbrs) - (n - l - 1)
    for w in nbrs[:max(need, 0)]:
        arcs.discard((v, w))
        arcs.discard((w, v))
    return Digraph(n, arcs)
