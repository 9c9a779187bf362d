"""Immutable simple digraphs on dense integer vertex ids.

Loops and repeated arcs are rejected; digons (``u->v`` and ``v->u``) are
allowed.  Induced and bipartite subgraphs are relabelled to ``0..m-1`` and
keep ``labels`` mapping each local id back to the parent graph.
"""

from __future__ import annotations

import hashlib
from functools import cached_property
from typing import Iterable, NamedTuple

from .errors import ParseError


class DegreeProfile(NamedTuple):
    out_degree: int
    in_degree: int
    sole_out: int
    sole_in: int
    union: int


class Digraph:
    def __init__(self, n: int, arcs: Iterable[tuple[int, int]] = (), labels=None):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        out = [set() for _ in range(n)]
        inn = [set() for _ in range(n)]
        for u, v in arcs:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc ({u}, {v}) out of range for n={n}")
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if v in out[u]:
                raise ValueError(f"duplicate arc ({u}, {v})")
            out[u].add(v)
            inn[v].add(u)
        self.n = n
        self._out = tuple(frozenset(s) for s in out)
        self._in = tuple(frozenset(s) for s in inn)
        if labels is None:
            labels = tuple(range(n))
        elif len(labels) != n:
            raise ValueError("labels must have one entry per vertex")
        self.labels = tuple(labels)

    @classmethod
    def _from_adjacency(cls, out, labels):
        g = cls.__new__(cls)
        n = len(out)
        inn = [set() for _ in range(n)]
        for u, nbrs in enumerate(out):
            for v in nbrs:
                inn[v].add(u)
        g.n = n
        g._out = tuple(frozenset(s) for s in out)
        g._in = tuple(frozenset(s) for s in inn)
        g.labels = tuple(labels)
        return g

    # -- basic queries -------------------------------------------------
    def _check(self, v):
        if not (0 <= v < self.n):
            raise IndexError(f"vertex {v} out of range 0..{self.n - 1}")

    def vertices(self):
        return range(self.n)

    def out_neighbors(self, v: int) -> frozenset:
        self._check(v)
        return self._out[v]

    def in_neighbors(self, v: int) -> frozenset:
        self._check(v)
        return self._in[v]

    def has_arc(self, u: int, v: int) -> bool:
        return 0 <= u < self.n and v in self._out[u]

    def adjacent(self, u: int, v: int) -> bool:
        return self.has_arc(u, v) or self.has_arc(v, u)

    def arcs(self):
        for u in range(self.n):
            for v in sorted(self._out[u]):
                yield (u, v)

    @cached_property
    def arc_count(self) -> int:
        return sum(len(s) for s in self._out)

    def out_degree(self, v):
        return len(self.out_neighbors(v))

    def in_degree(self, v):
        return len(self.in_neighbors(v))

    def sole_out_neighbors(self, v):
        return self.out_neighbors(v) - self._in[v]

    def sole_in_neighbors(self, v):
        return self.in_neighbors(v) - self._out[v]

    def degree_profile(self, v: int) -> DegreeProfile:
        out, inn = self.out_neighbors(v), self._in[v]
        return DegreeProfile(len(out), len(inn), len(out - inn), len(inn - out), len(out | inn))

    def union_degree(self, v):
        return len(self.out_neighbors(v) | self._in[v])

    def min_union_degree(self) -> int:
        if self.n == 0:
            raise ValueError("min_union_degree of the empty digraph")
        return min(len(self._out[v] | self._in[v]) for v in range(self.n))

    def is_tournament(self) -> bool:
        for u in range(self.n):
            if self._out[u] & self._in[u]:
                return False
            if len(self._out[u]) + len(self._in[u]) != self.n - 1:
                return False
        return True

    # -- derived graphs ------------------------------------------------
    def _as_set(self, vs):
        s = set(vs)
        for v in s:
            self._check(v)
        return s

    def induced(self, vs: Iterable[int]) -> "Digraph":
        keep = sorted(self._as_set(vs))
        local = {v: i for i, v in enumerate(keep)}
        out = [{local[w] for w in self._out[v] if w in local} for v in keep]
        return Digraph._from_adjacency(out, [self.labels[v] for v in keep])

    def bipartite_subgraph(self, a: Iterable[int], b: Iterable[int]) -> "Digraph":
        a, b = self._as_set(a), self._as_set(b)
        if a & b:
            raise ValueError("bipartite_subgraph needs disjoint vertex sets")
        keep = sorted(a | b)
        local = {v: i for i, v in enumerate(keep)}
        out = []
        for v in keep:
            other = b if v in a else a
            out.append({local[w] for w in self._out[v] if w in other})
        return Digraph._from_adjacency(out, [self.labels[v] for v in keep])

    @cached_property
    def reversed(self) -> "Digraph":
        g = Digraph.__new__(Digraph)
        g.n, g._out, g._in, g.labels = self.n, self._in, self._out, self.labels
        return g

    def reverse(self) -> "Digraph":
        return self.reversed

    def to_parent(self, vs):
        return {self.labels[v] for v in vs}

    # -- identity ------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, Digraph) and self.n == other.n and self._out == other._out

    def __hash__(self):
        return hash((self.n, self._out))

    def __repr__(self):
        return f"Digraph(n={self.n}, m={self.arc_count})"

    def graph_hash(self) -> str:
        h = hashlib.sha256(f"{self.n}\n".encode())
        for u, v in self.arcs():
            h.update(f"{u} {v}\n".encode())
        return h.hexdigest()


# -- convenience constructors ------------------------------------------
def complete_digraph(n):
    return Digraph(n, [(u, v) for u in range(n) for v in range(n) if u != v])


def directed_cycle(n):
    return Digraph(n, [(i, (i + 1) % n) for i in range(n)])


def directed_path(n):
    return Digraph(n, [(i, i + 1) for i in range(n - 1)])


def out_neighbors(d: Digraph, v: int):
    return d.out_neighbors(v)


def degree_profile(d: Digraph, v: int):
    return d.degree_profile(v)


def min_union_degree(d: Digraph):
    return d.min_union_degree()


def induced(d: Digraph, vs):
    return d.induced(vs)


def bipartite_subgraph(d: Digraph, a, b):
    return d.bipartite_subgraph(a, b)


def reverse(d: Digraph):
    return d.reversed


# -- text format -------------------------------------------------------
def parse_digraph(text: str) -> Digraph:
    header = None
    arcs = []
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        try:
            nums = [int(p) for p in parts]
        except ValueError:
            raise ParseError(f"expected integers, got {line!r}", lineno) from None
        if len(nums) != 2:
            raise ParseError(f"expected two integers, got {len(nums)}", lineno)
        if header is None:
            n, m = nums
            if n <= 0:
                raise ParseError("vertex count must be positive", lineno)
            if m < 0:
                raise ParseError("arc count must be non-negative", lineno)
            header = (n, m)
            continue
        n, m = header
        u, v = nums
        if len(arcs) >= m:
            raise ParseError(f"more than the declared {m} arcs", lineno)
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"arc ({u}, {v}) out of range for n={n}", lineno)
        if u == v:
            raise ParseError(f"loop at vertex {u}", lineno)
        if (u, v) in seen:
            raise ParseError(f"duplicate arc ({u}, {v})", lineno)
        seen.add((u, v))
        arcs.append((u, v))
    if header is None:
        raise ParseError("missing 'n m' header")
    if len(arcs) != header[1]:
        raise ParseError(f"declared {header[1]} arcs, found {len(arcs)}")
    return Digraph(header[0], arcs)


def format_digraph(d: Digraph, comment=None) -> str:
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"{d.n} {d.arc_count}")
    lines.extend(f"{u} {v}" for u, v in d.arcs())
    return "\n".join(lines) + "\n"


def read_digraph(path) -> Digraph:
    with open(path) as fh:
        return parse_digraph(fh.read())


def write_digraph(d: Digraph, path, comment=None):
    with open(path, "w") as fh:
        fh.write(format_digraph(d, comment))
