"""Independent verification of a bipartition and its JSON certificate.

Only the digraph primitives and the connectivity checks are used here; no
construction code is touched, so engine output and brute-force output go
through the identical path.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

from .connectivity import SeparatorWitness, is_strongly_k_connected
from .digraph import Digraph

CHECK_NAMES = ("first-part", "second-part", "cross-graph")
BRUTE_FORCE_LIMIT = 16


@dataclass
class PartitionCertificate:
    graph_hash: str
    params: dict
    V1: list
    V2: list
    checks: list  # dicts: name, bound, observed, pass
    witnesses: dict = field(default_factory=dict)
    provenance: list = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return bool(self.checks) and all(c["pass"] for c in self.checks)

    def verdicts(self):
        return [c["pass"] for c in self.checks]

    def to_json(self) -> dict:
        return {
            "graph_hash": self.graph_hash,
            "params": dict(self.params),
            "V1": sorted(self.V1),
            "V2": sorted(self.V2),
            "checks": [dict(c) for c in self.checks],
            "witnesses": dict(self.witnesses),
            "provenance": list(self.provenance),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2) + "\n"

    @classmethod
    def from_json(cls, data: dict) -> "PartitionCertificate":
        missing = {"graph_hash", "params", "V1", "V2", "checks"} - set(data)
        if missing:
            raise ValueError(f"certificate lacks fields {sorted(missing)}")
        return cls(
            graph_hash=data["graph_hash"],
            params=dict(data["params"]),
            V1=list(data["V1"]),
            V2=list(data["V2"]),
            checks=[dict(c) for c in data["checks"]],
            witnesses=dict(data.get("witnesses", {})),
            provenance=list(data.get("provenance", [])),
        )

    @classmethod
    def loads(cls, text: str) -> "PartitionCertificate":
        return cls.from_json(json.loads(text))


def _lift_witness(sub: Digraph, w: SeparatorWitness) -> dict:
    lab = sub.labels

    def lift(x):
        if isinstance(x, (set, frozenset, list, tuple)):
            return sorted(lab[i] for i in x)
        return lab[x] if x is not None else None

    return {
        "cut": sorted(lab[i] for i in w.cut),
        "side_a": lift(w.side_a),
        "side_b": lift(w.side_b),
        "reason": w.reason,
    }


def verify_partition(d: Digraph, k: int, v1, v2, params=None, provenance=()) -> PartitionCertificate:
    a, b = set(v1), set(v2)
    for v in a | b:
        if not (0 <= v < d.n):
            raise ValueError(f"vertex {v} out of range")
    if a & b:
        raise ValueError(f"parts overlap on {sorted(a & b)}")
    graphs = (d.induced(a), d.induced(b), d.bipartite_subgraph(a, b))
    checks, witnesses = [], {}
    for name, g in zip(CHECK_NAMES, graphs):
        ok, wit = is_strongly_k_connected(g, k)
        if ok:
            observed = k
        elif wit.reason == "order":
            observed = max(g.n - 1, 0)
        else:
            observed = len(wit.cut)
        checks.append({"name": name, "bound": k, "observed": observed, "pass": ok})
        if not ok:
            witnesses[name] = _lift_witness(g, wit)
    p = {"k": k, "l": None, "n1": len(a), "n2": len(b), "mode": None, "scale": None}
    if params:
        p.update(params)
    return PartitionCertificate(
        graph_hash=d.graph_hash(),
        params=p,
        V1=sorted(a),
        V2=sorted(b),
        checks=checks,
        witnesses=witnesses,
        provenance=list(provenance),
    )


def reverify(d: Digraph, cert: PartitionCertificate):
    """Re-run verification for ``cert``; returns ``(fresh_certificate, problems)``."""
    problems = []
    if cert.graph_hash != d.graph_hash():
        problems.append(f"graph hash mismatch: certificate {cert.graph_hash[:12]}, graph {d.graph_hash()[:12]}")
    k = cert.params.get("k")
    fresh = verify_partition(d, k, cert.V1, cert.V2, params=cert.params, provenance=cert.provenance)
    if fresh.verdicts() != cert.verdicts():
        problems.append("recorded check verdicts differ from re-verification")
    return fresh, problems


def brute_force_partition(d: Digraph, k: int, n1: int, n2: int):
    """First ``(V1, V2)`` in lexicographic order passing :func:`verify_partition`."""
    if d.n > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force limited to n <= {BRUTE_FORCE_LIMIT}, got {d.n}")
    if n1 < 0 or n2 < 0 or n1 + n2 > d.n:
        raise ValueError("target sizes do not fit")
    vs = range(d.n)
    for first in itertools.combinations(vs, n1):
        rest = [v for v in vs if v not in set(first)]
        for second in itertools.combinations(rest, n2):
            if verify_partition(d, k, first, second).accepted:
                return set(first), set(second)
    return None
