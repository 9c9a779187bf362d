"""Cross-check the flow-based connectivity routines against brute force.

Draws seeded random digraphs, compares ``is_strongly_k_connected`` and the
(v, U) predicates with the subset-deletion oracles, and reports mismatch
counts and timings per order n.

    python3 scripts/oracle_crosscheck.py --orders 4 5 6 7 8 9 --per-order 100
"""

from __future__ import annotations

import argparse
import random
import time
from dataclasses import dataclass, field

from dibipart.connectivity import is_strongly_k_connected, pair_k_connected_from, pair_k_connected_to
from dibipart.digraph import Digraph
from dibipart.oracles import oracle_pair_from, oracle_pair_to, oracle_strongly_k_connected


@dataclass
class CrossCheckConfig:
    orders: list = field(default_factory=lambda: [4, 5, 6, 7, 8, 9])
    per_order: int = 100
    max_k: int = 3
    densities: list = field(default_factory=lambda: [0.3, 0.5, 0.7, 0.9])
    seed: int = 0


def run(cfg: CrossCheckConfig):
    rng = random.Random(cfg.seed)
    rows = []
    for n in cfg.orders:
        mismatches = checks = 0
        fast = slow = 0.0
        for _ in range(cfg.per_order):
            p = rng.choice(cfg.densities)
            d = Digraph(n, [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p])
            v = rng.randrange(n)
            targets = set(rng.sample(range(n), rng.randint(1, n - 1)))
            for k in range(1, cfg.max_k + 1):
                t0 = time.perf_counter()
                got = (is_strongly_k_connected(d, k)[0], pair_k_connected_from(d, v, targets, k)[0],
                       pair_k_connected_to(d, targets, v, k)[0])
                t1 = time.perf_counter()
                want = (oracle_strongly_k_connected(d, k), oracle_pair_from(d, v, targets, k),
                        oracle_pair_to(d, targets, v, k))
                t2 = time.perf_counter()
                fast += t1 - t0
                slow += t2 - t1
                checks += 3
                mismatches += sum(a != b for a, b in zip(got, want))
        rows.append({"n": n, "checks": checks, "mismatches": mismatches,
                     "flow_ms": round(1000 * fast, 1), "oracle_ms": round(1000 * slow, 1)})
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    d = CrossCheckConfig()
    ap.add_argument("--orders", nargs="+", type=int, default=d.orders)
    ap.add_argument("--per-order", type=int, default=d.per_order)
    ap.add_argument("--max-k", type=int, default=d.max_k)
    ap.add_argument("--seed", type=int, default=d.seed)
    cfg = CrossCheckConfig(**vars(ap.parse_args(argv)))
    print(f"{'n':>3} {'checks':>7} {'mismatch':>9} {'flow ms':>9} {'oracle ms':>10}")
    for r in run(cfg):
        print(f"{r['n']:>3} {r['checks']:>7} {r['mismatches']:>9} {r['flow_ms']:>9} {r['oracle_ms']:>10}")


if __name__ == "__main__":
    main()
