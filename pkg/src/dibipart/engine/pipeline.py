"""Orchestration of the partition pipeline.

``run_pipeline`` sequences the phases, checks the cross-phase invariants
(monotone coloured sets, sanctioned recolours only) and hands the final
parts to the independent verifier.  Any hard failure surfaces as a
``PipelineFailure`` naming the phase and the violated claim.
"""

from __future__ import annotations

from dataclasses import replace

from ..digraph import Digraph
from ..errors import HypothesisUnmet, PipelineFailure
from ..verify import PartitionCertificate, verify_partition
from .closure import dominating_phase_coloring
from .exceptional import exceptional_coloring
from .families import build_families, connectivity_gate, initial_coloring, select_xy
from .finalize import finalize
from .log import PhaseLog
from .longpaths import long_path_phase
from .params import Parameters
from .paths import short_path_phase
from .state import EngineState

SNAPSHOTS = ("C1", "C2", "C3", "C4", "C5", "C6")


def check_monotone(state: EngineState) -> bool:
    snaps = [state.snapshots.get(name) for name in SNAPSHOTS]
    if any(s is None for s in snaps):
        missing = [n for n, s in zip(SNAPSHOTS, snaps) if s is None]
        raise PipelineFailure("pipeline", "phase-monotone", f"missing snapshots {missing}")
    broken = sum(1 for a, b in zip(snaps, snaps[1:]) if not a <= b)
    return state.log.check("phase-monotone", 0, broken, broken == 0, hard=True)


def run_pipeline(d: Digraph, params: Parameters, log: PhaseLog | None = None):
    """Run every phase; returns ``(certificate, state)``.

    Pass ``log`` to keep the phase log when the run fails.
    """
    log = PhaseLog() if log is None else log
    if params.n1 + params.n2 > d.n:
        raise PipelineFailure("pipeline", "targets", f"n1 + n2 = {params.n1 + params.n2} exceeds n = {d.n}")
    try:
        x, y, din, dout = select_xy(d, params)
    except HypothesisUnmet as exc:
        raise PipelineFailure("families", exc.claim or "vertex-count", str(exc), cause=exc) from exc
    if params.c is None and not params.strict:
        params = replace(params, c=params.adapted_spine_cap(min(din, dout)))
    state = EngineState(d, params, log=log)
    connectivity_gate(state, din, dout)
    ledger = build_families(state, x, y, din, dout)
    initial_coloring(state, ledger)
    dominating_phase_coloring(state)
    plan = short_path_phase(state)
    if plan.leftover:
        long_path_phase(state)
    else:
        for name in ("C3", "C4", "C5"):
            state.snapshot(name)
        state.log.note("every index has a short correct path; long-path phase skipped")
    exc_ledger = exceptional_coloring(state)
    state.exceptions = exc_ledger
    if not check_monotone(state):
        raise PipelineFailure("pipeline", "phase-monotone", "coloured sets shrank between phases")
    v1, v2, routing = finalize(state, exc_ledger.w)
    if not state.audit_recolors():
        raise PipelineFailure("pipeline", "recolor-audit", "unsanctioned recolour event")
    provenance = ["reach-sets: search-derived"] + list(state.provenance)
    cert = verify_partition(d, params.k, v1, v2, params=params.to_json(), provenance=provenance)
    cert.witnesses.update(routing)
    state.log.check("independent-verification", "accept", "accept" if cert.accepted else "reject", cert.accepted)
    return cert, state


def try_pipeline(d: Digraph, params: Parameters):
    """``(certificate or None, phase log, failure or None)``."""
    log = PhaseLog()
    try:
        cert, _ = run_pipeline(d, params, log=log)
        return cert, log, None
    except PipelineFailure as exc:
        return None, log, exc


__all__ = ["run_pipeline", "try_pipeline", "check_monotone", "PartitionCertificate"]
