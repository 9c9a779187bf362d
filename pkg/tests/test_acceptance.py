"""Acceptance suite: one test, and one PASS/FAIL line, per criterion.

Run with ``pytest tests/test_acceptance.py -s`` to see the report lines.
"""

from __future__ import annotations

import itertools
import json
import math
import random
import time
from fractions import Fraction

import networkx as nx

from conftest import report
from dibipart.cli import main
from dibipart.connectivity import (
    find_disjoint_path_fans,
    is_strongly_k_connected,
    pair_k_connected_from,
    pair_k_connected_to,
    select_short_subfamily,
)
from dibipart.digraph import Digraph, complete_digraph
from dibipart.dominating import (
    almost_in_dominating,
    almost_out_dominating,
    core_set,
    exceptional_bound,
    validate_core_set,
    validate_triple,
)
from dibipart.engine.params import Parameters
from dibipart.engine.paths import is_correct
from dibipart.engine.pipeline import run_pipeline
from dibipart.errors import ConstructionStuck, HypothesisUnmet, NoSuchFan, PipelineFailure, SearchBudgetExceeded
from dibipart.instances import gen_dense_digraph, gen_strong_tournament, gen_tournament
from dibipart.oracles import oracle_pair_from, oracle_pair_to, oracle_strongly_k_connected
from dibipart.verify import brute_force_partition, reverify, verify_partition
from dibipart.tournaments import all_cycles, cycle_through_vertex, disjoint_cycles


def random_digraph(rng, n, p):
    return Digraph(n, [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < p])


def all_tournaments(n):
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield Digraph(n, [(u, v) if mask >> j & 1 else (v, u) for j, (u, v) in enumerate(pairs)])


# ---------------------------------------------------------------- 1
def test_criterion_1_connectivity_oracle_equivalence():
    start = time.perf_counter()
    rng = random.Random(20261014)
    mismatches, graphs, pair_checks = [], 0, 0
    for idx in range(240):
        n = 4 + idx % 6
        d = random_digraph(rng, n, rng.choice([0.3, 0.5, 0.7, 0.9]))
        graphs += 1
        for k in (1, 2, 3):
            if is_strongly_k_connected(d, k)[0] != oracle_strongly_k_connected(d, k):
                mismatches.append(("kconn", idx, k))
            for _ in range(2):
                v = rng.randrange(n)
                targets = set(rng.sample(range(n), rng.randint(1, n - 1)))
                pair_checks += 2
                if pair_k_connected_from(d, v, targets, k)[0] != oracle_pair_from(d, v, targets, k):
                    mismatches.append(("from", idx, k, v))
                if pair_k_connected_to(d, targets, v, k)[0] != oracle_pair_to(d, targets, v, k):
                    mismatches.append(("to", idx, k, v))
    tours = 0
    for n in range(1, 7):
        for t in all_tournaments(n):
            tours += 1
            for k in (1, 2, 3):
                if is_strongly_k_connected(t, k)[0] != oracle_strongly_k_connected(t, k):
                    mismatches.append(("tournament", n, k))
    elapsed = time.perf_counter() - start
    ok = not mismatches and elapsed < 120
    report(1, ok, f"{graphs} random digraphs, {tours} labelled tournaments (n<=6), "
                  f"{pair_checks} pair checks, {len(mismatches)} mismatches, {elapsed:.1f}s")
    assert ok, mismatches[:5]


# ---------------------------------------------------------------- 2
def test_criterion_2_dominating_triples():
    violations, triples, instances, skipped = [], 0, 0, 0
    for idx in range(120):
        n = 30 + (idx * 37) % 171
        l = 1 + idx % 3
        c = 2 + (idx // 3) % 3
        d = gen_dense_digraph(n, l, seed=idx)
        instances += 1
        for v in (0, n // 2, n - 1):
            for build in (almost_out_dominating, almost_in_dominating):
                try:
                    t = build(d, v, c, l)
                except HypothesisUnmet:
                    skipped += 1
                    continue
                triples += 1
                errs = validate_triple(d, t, c, l)
                # out-domination is bounded by the centre's in-degree and vice versa
                deg = len(d.in_neighbors(v)) if t.kind == "out" else len(d.out_neighbors(v))
                if len(t.exceptional) > exceptional_bound(deg, c, l):
                    errs.append("exceptional bound")
                if errs:
                    violations.append((idx, v, t.kind, errs))
    ok = not violations and instances >= 100 and triples > 0
    report(2, ok, f"{instances} dense digraphs, {triples} triples validated, "
                  f"{skipped} skipped (degree hypothesis), {len(violations)} violations")
    assert ok, violations[:3]


# ---------------------------------------------------------------- 3
def test_criterion_3_core_sets():
    violations, instances, stuck = [], 0, 0
    for idx in range(110):
        n = 16 + (idx * 53) % 241
        k, l = 1 + idx % 3, 1 + (idx // 3) % 3
        d = gen_dense_digraph(n, l, seed=1000 + idx)
        try:
            cs = core_set(d, k, l)
        except ConstructionStuck:
            stuck += 1
            continue
        instances += 1
        errs = validate_core_set(d, cs)
        if len(cs.members) > 3 * (k + l) * math.log2(n):
            errs.append(f"|U|={len(cs.members)}")
        outside = set(range(n)) - cs.members
        for v in outside:  # exhaustive coverage re-check, independent of the validator
            if len(d.in_neighbors(v) & cs.members) < k or len(d.out_neighbors(v) & cs.members) < k:
                errs.append(f"coverage {v}")
                break
        if errs:
            violations.append((idx, errs))
    ok = not violations and instances >= 100
    report(3, ok, f"{instances} core sets (n in [16,256], k,l<=3), {stuck} stuck, {len(violations)} violations")
    assert ok, violations[:3]


# ---------------------------------------------------------------- 4
def test_criterion_4_short_subfamily_arithmetic():
    rng = random.Random(4)
    fans, checks, violations = 0, 0, []
    for idx in range(80):
        n = rng.randint(14, 40)
        d = random_digraph(rng, n, rng.choice([0.4, 0.6, 0.8]))
        verts = rng.sample(range(n), 4)
        pairs = [(verts[0], verts[1]), (verts[2], verts[3])]
        s = rng.randint(2, 4)
        try:
            fan = find_disjoint_path_fans(d, pairs, s, heuristic=idx % 2 == 1)
        except (NoSuchFan, SearchBudgetExceeded):
            continue
        fans += 1
        assert fan.validate(d) == []
        for s_prime in range(1, s + 1):
            sub = select_short_subfamily(fan, s, s_prime)
            checks += 1
            if Fraction(sub.interior_total()) > Fraction(s_prime, s) * fan.interior_total():
                violations.append((idx, s, s_prime))
    ok = not violations and fans >= 20
    report(4, ok, f"{fans} fans, {checks} sub-family inequalities, {len(violations)} violations")
    assert ok, violations[:3]


# ---------------------------------------------------------------- 5
def _canonical_cycle(c):
    i = c.index(min(c))
    return tuple(c[i:] + c[:i])


def test_criterion_5_cycles_through_vertex():
    seen, failures, calls, cross = set(), [], 0, 0
    for n in range(3, 10):
        per_n = {3: 5, 4: 10, 5: 60, 6: 300, 7: 700, 8: 250, 9: 150}[n]
        for seed in range(per_n):
            t = gen_strong_tournament(n, seed=seed)
            key = (n, nx.weisfeiler_lehman_graph_hash(nx.DiGraph(list(t.arcs())), iterations=4))
            if key in seen:
                continue
            seen.add(key)
            cycles = {_canonical_cycle(list(c)) for c in all_cycles(t)} if n <= 7 else None
            for v in range(n):
                for length in range(3, n + 1):
                    calls += 1
                    c = cycle_through_vertex(t, v, length)
                    if not (c.validate(t) and len(c.vertices) == length and v in c.vertices):
                        failures.append((n, seed, v, length))
                    elif cycles is not None:
                        cross += 1
                        if _canonical_cycle(list(c.vertices)) not in cycles:
                            failures.append(("enumeration", n, seed, v, length))
            if cycles is not None:
                # enumeration agrees that every vertex lies on cycles of every length
                for v in range(n):
                    lengths = {len(c) for c in cycles if v in c}
                    if lengths != set(range(3, n + 1)):
                        failures.append(("pancyclic", n, seed, v))
    ok = not failures and len(seen) >= 500
    report(5, ok, f"{len(seen)} non-isomorphic strong tournaments (WL hash), {calls} (v,t) queries, "
                  f"{cross} cross-checked by enumeration, {len(failures)} failures")
    assert ok, failures[:3]


# ---------------------------------------------------------------- 6
def test_criterion_6_two_disjoint_cycles():
    found, failures, queries = 0, [], 0
    for seed in range(400):
        if found >= 55:
            break
        n = 6 + seed % 7
        t = gen_tournament(n, seed=seed)
        part = brute_force_partition(t, 1, n // 2, n - n // 2) if n <= 10 or seed % 3 == 0 else None
        if part is None:
            continue
        found += 1
        for length in range(3, n - 2):
            for v in range(n):
                queries += 1
                try:
                    c1, c2 = disjoint_cycles(t, v, length, part)
                except Exception as exc:  # any exception is a failure here
                    failures.append((seed, v, length, repr(exc)))
                    continue
                lens = sorted((len(c1.vertices), len(c2.vertices)))
                ok = (c1.validate(t) and c2.validate(t) and not set(c1.vertices) & set(c2.vertices)
                      and lens == sorted((length, n - length)) and v in set(c1.vertices) | set(c2.vertices))
                if not ok:
                    failures.append((seed, v, length))
    ok = not failures and found >= 50
    report(6, ok, f"{found} bipartitionable tournaments (n in [6,12]), {queries} queries, {len(failures)} failures")
    assert ok, failures[:3]


# ---------------------------------------------------------------- 7
PIPELINE_CASES = [("K", n, 0) for n in range(200, 601, 50)] + [
    ("dense", n, seed) for n in (200, 300, 400, 500, 600) for seed in (1, 2, 3)
]


def _instance(model, n, seed):
    return complete_digraph(n) if model == "K" else gen_dense_digraph(n, 1, seed)


def _family_invariants(state):
    led, p = state.ledger, state.params
    errs = []
    fams = list(led.out_family) + list(led.in_family)
    members = [t.members for t in fams]
    if sum(map(len, members)) != len(set().union(*members)):
        errs.append("P0 disjointness")
    if [t.center for t in led.out_family] != list(led.X) or [t.center for t in led.in_family] != list(led.Y):
        errs.append("P1 anchors")
    # each triple is built in D minus the earlier triples and the other centres
    specials, used = set(led.X) | set(led.Y), set()
    for t in fams:
        errs += validate_triple(state.d, t, p.spine_cap, p.l, forbidden=used | (specials - {t.center}))
        used |= t.members
    return errs


_PIPELINE_RESULTS = {}


def _run_all():
    if not _PIPELINE_RESULTS:
        for case in PIPELINE_CASES:
            d = _instance(*case)
            params = Parameters(1, 1, d.n // 2, d.n - d.n // 2)
            try:
                cert, state = run_pipeline(d, params)
                _PIPELINE_RESULTS[case] = (d, cert, state, None)
            except PipelineFailure as exc:
                _PIPELINE_RESULTS[case] = (d, None, None, exc)
    return _PIPELINE_RESULTS


def test_criterion_7_pipeline_invariants():
    results = _run_all()
    silent, accepted, named = [], 0, []
    k_runs = k_ok = 0
    for case, (d, cert, st, failure) in results.items():
        if case[0] == "K":
            k_runs += 1
        if failure is not None:
            if not failure.claim:
                silent.append((case, "unnamed failure"))
            named.append((case, failure.phase, failure.claim))
            continue
        errs = []
        errs += [f"unsafe {v}:{c}" for v, c in st.unsafe_vertices()]
        errs += _family_invariants(st)
        for i, path in st.plan.final.items():
            if not is_correct(st.params, i, path):
                errs.append(f"parity {i}")
        ex, k = st.exceptions, st.params.k
        if len(ex.z_a) > 2 * k * len(st.e_a) or len(ex.z_b) > 2 * k * len(st.e_b):
            errs.append("ledger bound")
        snaps = [st.snapshots[f"C{j}"] for j in range(1, 7)]
        if not all(a <= b for a, b in zip(snaps, snaps[1:])):
            errs.append("monotone")
        if st.log.failures(hard_only=True):
            errs.append("hard log failure")
        if not cert.accepted:
            errs.append("rejected certificate")
        if errs:
            silent.append((case, errs))
        else:
            accepted += 1
            if case[0] == "K":
                k_ok += 1
    rate = accepted / len(results)
    k_rate = k_ok / k_runs
    ok = not silent and len(results) >= 20 and k_rate >= 0.8
    report(7, ok, f"{len(results)} runs, end-to-end success {accepted}/{len(results)} ({rate:.0%}), "
                  f"K_n {k_ok}/{k_runs} ({k_rate:.0%}), named failures {named}, silent violations {len(silent)}")
    assert ok, silent[:3]


# ---------------------------------------------------------------- 8
def _oracle_verdict(d, k, v1, v2):
    """Deletion-oracle verdict for a candidate partition (small n only)."""
    if not v1 or not v2:
        return False
    return (oracle_strongly_k_connected(d.induced(v1), k) and oracle_strongly_k_connected(d.induced(v2), k)
            and oracle_strongly_k_connected(d.bipartite_subgraph(v1, v2), k))


def test_criterion_8_verifier_independence():
    problems = []
    reverified = 0
    for case, (d, cert, _, failure) in _run_all().items():
        if cert is None:
            continue
        _, errs = reverify(d, cert)
        fresh = verify_partition(d, cert.params["k"], cert.V1, cert.V2)
        reverified += 1
        if errs or not fresh.accepted:
            problems.append(("pipeline", case, errs))
    # brute-force certificates at n <= 12, then single-vertex flips
    rng = random.Random(8)
    small_certs, flips, rejected, still_valid = 0, 0, 0, 0
    seed = 0
    while small_certs < 100 and seed < 2000:
        n = 6 + seed % 7
        d = gen_tournament(n, seed) if seed % 2 else random_digraph(rng, n, 0.75)
        seed += 1
        k = 1
        part = brute_force_partition(d, k, n // 2, n - n // 2) if n <= 10 or seed % 4 == 0 else None
        if part is None:
            continue
        cert = verify_partition(d, k, *part, provenance=["brute-force"])
        small_certs += 1
        if not cert.accepted or reverify(d, cert)[1] or not _oracle_verdict(d, k, *part):
            problems.append(("brute", seed))
        v1, v2 = set(part[0]), set(part[1])
        v = rng.choice(sorted(v1 | v2))
        if v in v1:
            v1, v2 = v1 - {v}, v2 | {v}
        else:
            v1, v2 = v1 | {v}, v2 - {v}
        flips += 1
        try:
            flipped = verify_partition(d, k, v1, v2)
        except Exception as exc:
            problems.append(("crash", seed, repr(exc)))
            continue
        if flipped.accepted:
            still_valid += 1
        else:
            rejected += 1
        if flipped.accepted != _oracle_verdict(d, k, v1, v2):
            problems.append(("oracle disagreement", seed))
    ok = not problems and small_certs >= 100 and reverified > 0 and rejected >= 1
    report(8, ok, f"{reverified} pipeline certificates re-verified, {small_certs} brute-force certificates, "
                  f"{flips} flips ({rejected} rejected, {still_valid} still valid), {len(problems)} problems")
    assert ok, problems[:3]


# ---------------------------------------------------------------- 9
def _run_twice(tmp_path, argv_fn, outputs):
    blobs = []
    for j in range(2):
        rc = main(argv_fn(j))
        blobs.append((rc,) + tuple((tmp_path / f"{name}{j}").read_bytes() for name in outputs))
    return blobs


def test_criterion_9_cli_determinism(tmp_path, capsys):
    checks = {}
    g = tmp_path / "g.txt"
    checks["generate"] = _run_twice(
        tmp_path, lambda j: ["generate", "--model", "dense", "--n", "220", "--seed", "7", "--out", str(tmp_path / f"gen{j}")],
        ["gen"])
    (tmp_path / "gen0").replace(g)
    checks["partition"] = _run_twice(
        tmp_path, lambda j: ["partition", "--in", str(g), "--cert-out", str(tmp_path / f"cert{j}"),
                             "--log-out", str(tmp_path / f"log{j}")], ["cert", "log"])
    checks["partition-strict"] = _run_twice(
        tmp_path, lambda j: ["partition", "--in", str(g), "--mode", "strict", "--cert-out", str(tmp_path / f"sc{j}"),
                             "--log-out", str(tmp_path / f"sl{j}")], ["sc", "sl"])
    checks["export-dot"] = _run_twice(
        tmp_path, lambda j: ["export-dot", "--in", str(g), "--cert", str(tmp_path / "cert0"),
                             "--out", str(tmp_path / f"dot{j}")], ["dot"])
    t = tmp_path / "t.txt"
    main(["generate", "--model", "strong-tournament", "--n", "9", "--seed", "3", "--out", str(t)])
    capsys.readouterr()
    for name, argv in {
        "verify": ["verify", "--in", str(g), "--cert", str(tmp_path / "cert0")],
        "cycles": ["cycles", "--in", str(t), "--v", "2", "--t", "6"],
        "oracle-kconn": ["oracle", "kconn", "--in", str(t), "--k", "2"],
        "oracle-partition": ["oracle", "partition", "--in", str(t)],
        "oracle-paths": ["oracle", "paths", "--in", str(t), "--pairs", "0:1,2:3"],
    }.items():
        outs = []
        for _ in range(2):
            rc = main(argv)
            outs.append((rc, capsys.readouterr().out))
        checks[name] = outs
    differing = [name for name, (a, b) in checks.items() if a != b]
    json.loads((tmp_path / "cert0").read_text())
    ok = not differing
    report(9, ok, f"{len(checks)} subcommand invocations repeated, {len(differing)} differed {differing}")
    assert ok
