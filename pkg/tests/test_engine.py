import pytest

from dibipart.digraph import Digraph, complete_digraph
from dibipart.dominating import validate_triple
from dibipart.engine.closure import dominating_phase_coloring, safety_closure
from dibipart.engine.families import build_families, connectivity_gate, d0_coloring, initial_coloring, select_xy
from dibipart.engine.log import PhaseLog
from dibipart.engine.longpaths import (
    alternating_colors,
    balanced_colors,
    find_surgery,
    long_path_phase,
    minimality_defects,
    split_segments,
    surgery_composite,
    tighten_path,
)
from dibipart.engine.params import Parameters
from dibipart.engine.paths import is_correct, path_colors, required_parity, short_path_phase
from dibipart.engine.pipeline import run_pipeline, try_pipeline
from dibipart.engine.state import I, II, EngineState
from dibipart.errors import HypothesisUnmet, PipelineFailure, SurgeryStuck
from dibipart.instances import gen_dense_digraph
from dibipart.verify import reverify


def prepared(d, k=1, l=1, **kw):
    p = Parameters(k, l, d.n // 2, d.n - d.n // 2, **kw)
    st = EngineState(d, p)
    x, y, din, dout = select_xy(d, p)
    connectivity_gate(st, din, dout)
    led = build_families(st, x, y, din, dout)
    initial_coloring(st, led)
    return st


# ---------------------------------------------------------------- parameters
def test_parameters_validation():
    with pytest.raises(ValueError):
        Parameters(0, 1, 1, 1)
    with pytest.raises(ValueError):
        Parameters(4, 1, 1, 1)
    Parameters(4, 1, 1, 1, mode="strict")
    with pytest.raises(ValueError):
        Parameters(1, 1, 1, 1, mode="loose")
    with pytest.raises(ValueError):
        Parameters(1, 1, 1, 1, fan_size=1)


def test_parameter_arithmetic():
    p = Parameters(1, 1, 10, 10, mode="strict")
    assert p.log_term == 1.0 and p.f == 2.0
    assert p.spine_cap == 17
    assert p.connectivity_threshold == 1e7 * 4
    assert p.short_cap == 2400 + 3
    assert p.window == 8
    q = Parameters(1, 1, 10, 10)
    seg = q.segment_length
    middle = seg - 2 * q.window
    assert middle >= 4 * (q.k + q.l + 1)
    assert [q.index_class(i) for i in range(6)] == [0, 1, 2, 3, 4, 5]
    assert q.adapted_spine_cap(109) == 6 and q.adapted_spine_cap(2) == 3


def test_required_parity_table():
    p = Parameters(2, 1, 10, 10)
    assert [required_parity(p, i) for i in range(12)] == [None] * 4 + [1] * 4 + [0] * 4
    assert is_correct(p, 4, (0, 1, 2)) and not is_correct(p, 4, (0, 1))
    assert is_correct(p, 8, (0, 1)) and not is_correct(p, 8, (0, 1, 2))
    assert path_colors(p, 0, (0, 1, 2), II) == [II, II, II]
    assert path_colors(p, 4, (0, 1, 2), I) == [I, II, I]


# ---------------------------------------------------------------- families
def test_select_xy_examples():
    p = Parameters(1, 1, 7, 7)
    x, y, _, _ = select_xy(complete_digraph(14), p)
    assert x == [0, 1, 2, 3, 4, 5] and y == [6, 7, 8, 9, 10, 11]
    with pytest.raises(HypothesisUnmet):
        select_xy(complete_digraph(11), p)
    # a sink-like vertex has smallest out-degree
    n = 14
    arcs = [(u, v) for u in range(n) for v in range(n) if u != v and u != 13]
    d = Digraph(n, arcs)
    x, y, _, _ = select_xy(d, p)
    assert 13 in y


def test_families_on_complete():
    st = prepared(complete_digraph(200))
    led = st.ledger
    assert len(led.out_family) == 6 and len(led.in_family) == 6
    members = [t.members for t in led.out_family + led.in_family]
    assert sum(map(len, members)) == len(set().union(*members))
    for t in led.out_family + led.in_family:
        assert validate_triple(st.d, t, st.params.spine_cap, 1) == []
    assert all(e.passed for e in st.log.entries if e.hard)


def test_d0_coloring_table():
    st = prepared(complete_digraph(200))
    led = st.ledger
    col = d0_coloring(led, 1)
    A = [t.members for t in led.out_family]
    B = [t.members for t in led.in_family]
    assert all(col[v] == I for v in A[0] | B[0])
    assert all(col[v] == II for v in A[1] | B[1])
    a3, b3 = led.a(2), led.b(2)
    assert {v for v in A[2] | B[2] if col[v] == I} == {a3, b3}
    assert set(col) == set(st.d0)


def test_strict_mode_gate():
    d = complete_digraph(200)
    p = Parameters(1, 1, 100, 100, mode="strict")
    with pytest.raises(PipelineFailure) as info:
        run_pipeline(d, p)
    assert info.value.claim == "connectivity-threshold"
    assert isinstance(info.value.cause, HypothesisUnmet)


def test_family_failure_carries_index():
    # a digraph where some low in-degree vertex cannot host a family
    n = 40
    arcs = [(u, v) for u in range(n) for v in range(n) if u != v and not (v == 0 and u > 1)]
    d = Digraph(n, arcs)
    p = Parameters(1, 1, 20, 20, c=3)
    st = EngineState(d, p)
    x, y, din, dout = select_xy(d, p)
    with pytest.raises(PipelineFailure) as info:
        build_families(st, x, y, din, dout)
    assert info.value.claim in ("families-hypothesis", "families-stuck")
    assert "index" in info.value.summary


# ---------------------------------------------------------------- safety
def test_safety_examples():
    d = complete_digraph(30)
    p = Parameters(1, 1, 15, 15)
    st = EngineState(d, p)
    for v in range(0, 10):
        st.paint(v, I if v < 5 else II)
    assert st.is_safe(0) == (True, None)
    lonely = Digraph(4, [(0, 1), (1, 0)])
    st2 = EngineState(lonely, Parameters(1, 1, 2, 2))
    # a vertex counts as reaching itself unless it lies in the excluded core
    st2.paint(2, I)
    assert st2.is_safe(2) == (True, None)
    st2.set_context({2, 3}, set(), set())
    st2.paint(3, II)
    assert st2.is_safe(2) == (False, "s1")
    with pytest.raises(ValueError):
        st2.is_safe(0)


def test_recolor_only_sanctioned():
    st = EngineState(complete_digraph(10), Parameters(1, 1, 5, 5))
    st.paint(0, I)
    with pytest.raises(PipelineFailure):
        st.paint(0, II)
    with pytest.raises(PipelineFailure):
        st.recolor(0, II, "whim")
    st.recolor(0, II, "class-core-recolor")
    assert st.color[0] == II and st.audit_recolors()


def test_closure_trivial_and_complete():
    st = EngineState(complete_digraph(300), Parameters(1, 1, 150, 150))
    assert safety_closure(st, set(), set(), set(), 5, "t") == set()
    w_i, w_ii = {0, 1, 2}, {3, 4}
    st.paint_all(w_i, I)
    st.paint_all(w_ii, II)
    new = safety_closure(st, {10}, w_i, w_ii, 5, "t")
    assert not st.unsafe_vertices()
    p = st.params
    assert len(new) <= 2 * 5 + p.scaled(400 * p.f) + 20


def test_closure_pool_exhaustion():
    n = 12
    d = Digraph(n, [(u, (u + 1) % n) for u in range(n)])
    st = EngineState(d, Parameters(1, 1, 6, 6))
    st.paint(0, I)
    st.paint(6, II)
    from dibipart.errors import ClosureStuck
    with pytest.raises(ClosureStuck):
        safety_closure(st, set(), {0}, {6}, 2, "t")


def test_dominating_phase_pool_error():
    d = complete_digraph(40)
    st = prepared(d)
    for v in range(d.n):
        if v not in st.color and v not in st.ledger.X + st.ledger.Y:
            st.paint(v, I)
    with pytest.raises(PipelineFailure) as info:
        dominating_phase_coloring(st)
    assert info.value.claim == "neighbour-pool"


@pytest.mark.parametrize("n", [200, 400])
def test_phases_on_complete(n):
    st = prepared(complete_digraph(n))
    dominating_phase_coloring(st)
    assert all(v in st.color for v in st.ledger.X + st.ledger.Y)
    plan = short_path_phase(st)
    assert plan.leftover == []
    for i, path in plan.final.items():
        assert is_correct(st.params, i, path)
        assert path[0] == st.ledger.b(i) and path[-1] == st.ledger.a(i)
        assert all(st.d.has_arc(u, v) for u, v in zip(path, path[1:]))
    assert st.snapshots["C1"] <= st.snapshots["C2"]
    p = st.params
    assert len(st.snapshots["C2"]) <= p.scaled(25000 * (p.k + p.l) * p.f)


# ---------------------------------------------------------------- long-path pieces
def test_split_segments_arithmetic():
    p = Parameters(1, 1, 10, 10)
    seg, win = p.segment_length, p.window
    path = tuple(range(2 * seg + 5))
    sg = split_segments(path, seg, win)
    assert len(sg["P1"]) == len(sg["P3"]) == seg
    assert sg["P1"] + sg["P2"] + sg["P3"] == list(path[1:-1])
    assert len(sg["P1.1"]) == len(sg["P3.3"]) == win
    assert len(sg["P1.2"]) >= 4 * (p.k + p.l + 1)
    with pytest.raises(ValueError):
        split_segments(tuple(range(2 * seg)), seg, win)


def test_window_balance():
    w = list(range(8))
    cols = balanced_colors(w, {})
    assert sum(1 for v in w if cols[v] == I) == 4
    cols = balanced_colors(w, {0: I, 1: I, 2: I})
    assert sum(1 for v in w if cols[v] == I) == 4 and cols[0] == I
    assert balanced_colors(w, {v: I for v in range(5)}) is None
    alt = alternating_colors(w, {})
    assert [alt[v] for v in w] == [I, II] * 4


def _spliceable(m, h, gamma, parity_offset=0):
    """Three disjoint b->a paths of ``m`` vertices plus two junction arcs."""
    b, a = 0, 1
    nxt = 2
    paths = {}
    arcs = set()
    for j, length in enumerate((m, m + parity_offset, m)):
        interior = list(range(nxt, nxt + length - 2))
        nxt += length - 2
        p = (b,) + tuple(interior) + (a,)
        paths[j] = p
        arcs |= set(zip(p, p[1:]))
    p1, p2, p3 = paths[0], paths[1], paths[2]
    arcs.add((p1[h + 5], p2[h + 4 + gamma]))
    arcs.add((p2[len(p2) - h - 6], p3[len(p3) - h - 6]))
    return Digraph(nxt, sorted(arcs)), paths


def test_surgery_flips_parity():
    h = 4
    d, paths = _spliceable(40, h, 2)
    plan = find_surgery(d, paths, i=0, h=h)
    m2 = len(paths[plan.j2])
    assert len(plan.path) == m2 + 3 - plan.gamma
    assert len(plan.path) % 2 != m2 % 2
    assert all(d.has_arc(u, v) for u, v in zip(plan.path, plan.path[1:]))
    assert len(set(plan.path)) == len(plan.path)
    assert plan.path[0] == 0 and plan.path[-1] == 1


def test_surgery_composite_guards():
    p = tuple(range(30))
    assert surgery_composite(p, p, p, 3, 4) is None
    assert surgery_composite(p, p, p, 0, 4) is None
    assert surgery_composite(p, tuple(range(10)), p, 2, 4) is None


def test_surgery_stuck_without_junctions():
    b, a = 0, 1
    arcs, paths, nxt = set(), {}, 2
    for j in range(3):
        interior = list(range(nxt, nxt + 38))
        nxt += 38
        q = (b,) + tuple(interior) + (a,)
        paths[j] = q
        arcs |= set(zip(q, q[1:]))
    d = Digraph(nxt, sorted(arcs))
    with pytest.raises(SurgeryStuck):
        find_surgery(d, paths, 0, 4, gamma_max=8)


def test_minimality_repair():
    # path 0-1-2-3-4 with a chord 1->3 and an outside detour 0->5->4
    d = Digraph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (1, 3), (0, 5), (5, 4)])
    path = (0, 1, 2, 3, 4)
    kinds = {dfc[0] for dfc in minimality_defects(d, path, {5})}
    assert kinds == {"chord", "detour"}
    tight = tighten_path(d, path, {5})
    assert minimality_defects(d, tight, {5} - set(tight)) == []
    assert tight == (0, 5, 4)
    assert minimality_defects(d, path, set()) == [("chord", 1, 3)]


def test_long_phase_reports_short_fan_paths():
    """On a complete digraph every long-path fan is short; forcing the long
    phase must end in a named failure, never a silent pass."""
    d = complete_digraph(200)
    st = prepared(d, fan_size=40)
    dominating_phase_coloring(st)
    plan = short_path_phase(st)
    plan.final.pop(2)
    plan.leftover = [2]
    with pytest.raises(PipelineFailure) as info:
        long_path_phase(st)
    assert info.value.phase == "long-paths"
    assert info.value.claim == "segment-length"
    hard = {e.name for e in st.log.entries if e.hard and e.passed}
    assert "short-subfamily-bound" in hard and "path-minimality" in hard


# ---------------------------------------------------------------- end to end
@pytest.mark.parametrize("make", [lambda: complete_digraph(200), lambda: gen_dense_digraph(240, 1, 2)])
def test_pipeline_end_to_end(make):
    d = make()
    p = Parameters(1, 1, d.n // 2, d.n - d.n // 2)
    cert, st = run_pipeline(d, p)
    assert cert.accepted
    fresh, problems = reverify(d, cert)
    assert problems == [] and fresh.accepted
    assert not st.log.failures(hard_only=True)
    ex = st.exceptions
    assert len(ex.z_a) <= 2 * p.k * len(st.e_a) and len(ex.z_b) <= 2 * p.k * len(st.e_b)
    snaps = [st.snapshots[f"C{j}"] for j in range(1, 7)]
    assert all(a <= b for a, b in zip(snaps, snaps[1:]))
    assert {f"routing-class-{c}" for c in range(6)} <= set(cert.witnesses)
    assert "reach-sets: search-derived" in cert.provenance


def test_finalize_target_errors():
    d = complete_digraph(200)
    _, _, failure = try_pipeline(d, Parameters(1, 1, 10, 190))
    assert failure is not None and failure.claim == "completion"
    with pytest.raises(PipelineFailure):
        run_pipeline(d, Parameters(1, 1, 150, 150))


def test_partial_partition():
    d = complete_digraph(200)
    cert, st = run_pipeline(d, Parameters(1, 1, 80, 90))
    assert cert.accepted and len(cert.V1) == 80 and len(cert.V2) == 90
    assert len(st.color) == 170


def test_exceptional_phase_records_cases():
    d = gen_dense_digraph(300, 1, 3)
    cert, st = run_pipeline(d, Parameters(1, 1, 150, 150))
    ex = st.exceptions
    handled = set(ex.cases)
    assert handled <= set(st.e)
    assert set(ex.cases.values()) <= {"reserved-middle", "fresh-neighbours", "existing-neighbours"}


def test_phase_log_format():
    log = PhaseLog()
    log.at_most("x", 3, 4.0)
    log.at_least("y", 1, 2, hard=True)
    log.note("hello")
    assert log.text() == "CLAIM x bound=4 observed=3 PASS\nCLAIM y bound=2 observed=1 FAIL\nNOTE hello\n"
    assert [e.name for e in log.failures(hard_only=True)] == ["y"]
