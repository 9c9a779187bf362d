"""Success-rate sweep of the partition pipeline over dense instances.

Runs every (model, n, seed) combination, records whether an accepted
certificate came out or which phase/claim failed, and writes one JSON line
per run plus a summary table.

    python3 scripts/pipeline_sweep.py --sizes 200 300 400 --seeds 1 2 3
    python3 scripts/pipeline_sweep.py --scale 0.02 --spine-cap 3 --out sweep.jsonl
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from collections import Counter
from dataclasses import asdict, dataclass, field

from dibipart.digraph import complete_digraph
from dibipart.engine.params import Parameters
from dibipart.engine.pipeline import run_pipeline
from dibipart.errors import PipelineFailure
from dibipart.instances import gen_dense_digraph


@dataclass
class SweepConfig:
    models: list = field(default_factory=lambda: ["complete", "dense"])
    sizes: list = field(default_factory=lambda: [200, 300, 400, 500, 600])
    seeds: list = field(default_factory=lambda: [1, 2, 3])
    k: int = 1
    l: int = 1
    scale: float = 0.01
    spine_cap: int | None = None
    out: str | None = None


def instance(model, n, l, seed):
    if model == "complete":
        return complete_digraph(n)
    return gen_dense_digraph(n, l, seed)


def run_one(cfg: SweepConfig, model, n, seed):
    d = instance(model, n, cfg.l, seed)
    params = Parameters(cfg.k, cfg.l, n // 2, n - n // 2, scale=cfg.scale, c=cfg.spine_cap)
    start = time.perf_counter()
    row = {"model": model, "n": n, "seed": seed}
    try:
        cert, state = run_pipeline(d, params)
        row.update(
            accepted=cert.accepted,
            spine_cap=state.params.spine_cap,
            exceptional=len(state.e),
            ledger=len(state.exceptions.z),
            colored_before_completion=len(state.snapshots["C6"]),
            soft_failures=sorted({e.name for e in state.log.failures()}),
        )
    except PipelineFailure as exc:
        row.update(accepted=False, phase=exc.phase, claim=exc.claim)
    row["seconds"] = round(time.perf_counter() - start, 3)
    return row


def sweep(cfg: SweepConfig):
    rows = []
    for model in cfg.models:
        for n in cfg.sizes:
            for seed in cfg.seeds if model == "dense" else [0]:
                rows.append(run_one(cfg, model, n, seed))
    return rows


def summarize(rows):
    lines = []
    for model in sorted({r["model"] for r in rows}):
        mine = [r for r in rows if r["model"] == model]
        ok = sum(r["accepted"] for r in mine)
        claims = Counter(r.get("claim") for r in mine if not r["accepted"])
        lines.append(f"{model:9s} accepted {ok}/{len(mine)} ({ok / len(mine):.0%})"
                     + (f"  failures {dict(claims)}" if claims else ""))
    return "\n".join(lines)


def parse_args(argv=None) -> SweepConfig:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    d = SweepConfig()
    ap.add_argument("--models", nargs="+", default=d.models, choices=["complete", "dense"])
    ap.add_argument("--sizes", nargs="+", type=int, default=d.sizes)
    ap.add_argument("--seeds", nargs="+", type=int, default=d.seeds)
    ap.add_argument("--k", type=int, default=d.k)
    ap.add_argument("--l", type=int, default=d.l)
    ap.add_argument("--scale", type=float, default=d.scale)
    ap.add_argument("--spine-cap", type=int, default=None)
    ap.add_argument("--out")
    return SweepConfig(**vars(ap.parse_args(argv)))


def main(argv=None):
    cfg = parse_args(argv)
    rows = sweep(cfg)
    text = "".join(json.dumps(r, sort_keys=True) + "\n" for r in rows)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    print(summarize(rows), file=sys.stderr)
    print(json.dumps({"config": asdict(cfg)}, sort_keys=True), file=sys.stderr)


if __name__ == "__main__":
    main()
