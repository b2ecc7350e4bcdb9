"""Event-stream IR: gate semantics, wire bookkeeping, reversal, counting."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catshor.revsim import (
    Circuit,
    CircuitError,
    CircuitSummary,
    Counter,
    CountsBundle,
    QReg,
    Recorder,
    SimulationError,
    Simulator,
    reverse_events,
    summarize,
)


# ---------------------------------------------------------------------------
# registers


def test_qreg_indexing_and_slicing():
    reg = QReg([4, 7, 9, 11])
    assert len(reg) == 4
    assert reg[0] == 4 and reg[-1] == 11
    assert list(reg[1:3]) == [7, 9]
    assert isinstance(reg[1:3], QReg)
    assert list(reg + QReg([2])) == [4, 7, 9, 11, 2]
    assert list(iter(reg)) == [4, 7, 9, 11]


# ---------------------------------------------------------------------------
# gate semantics on the simulator


def test_gate_actions(fresh):
    circ, sim = fresh()
    a, b, c = (circ.alloc_wire() for _ in range(3))
    circ.x(a)
    assert sim.peek(a) == 1
    circ.cx(a, b)
    assert sim.peek(b) == 1
    circ.ccx(a, b, c)
    assert sim.peek(c) == 1
    circ.ccx(a, b, c)
    circ.cx(a, b)
    circ.x(a)
    assert (sim.peek(a), sim.peek(b), sim.peek(c)) == (0, 0, 0)


def test_negated_controls(fresh):
    circ, sim = fresh()
    a, b, c = (circ.alloc_wire() for _ in range(3))
    # both controls on |0>: fires only when a=b=0
    circ.ccx(a, b, c, neg1=True, neg2=True)
    assert sim.peek(c) == 1
    circ.x(a)
    circ.ccx(a, b, c, neg1=True, neg2=True)
    assert sim.peek(c) == 1  # a=1 blocks the negated control


def test_mcx_fans_out(fresh):
    circ, sim = fresh()
    c = circ.alloc_wire()
    targets = circ.alloc_reg(3)
    circ.x(c)
    circ.mcx(c, list(targets))
    assert [sim.peek(w) for w in targets] == [1, 1, 1]


def test_cswap_semantics(fresh):
    circ, sim = fresh()
    c, a, b = (circ.alloc_wire() for _ in range(3))
    circ.x(a)
    circ.cswap(c, a, b)  # control clear: no swap
    assert (sim.peek(a), sim.peek(b)) == (1, 0)
    circ.x(c)
    circ.cswap(c, a, b)
    assert (sim.peek(a), sim.peek(b)) == (0, 1)


def test_distinct_wire_guards(fresh):
    circ, _ = fresh()
    a, b = circ.alloc_wire(), circ.alloc_wire()
    with pytest.raises(CircuitError):
        circ.cx(a, a)
    with pytest.raises(CircuitError):
        circ.ccx(a, b, a)
    with pytest.raises(CircuitError):
        circ.cswap(a, b, b)
    with pytest.raises(CircuitError):
        circ.mcx(a, [a, b])


# ---------------------------------------------------------------------------
# wire allocation


def test_lifo_reuse():
    circ = Circuit(None)
    reg = circ.alloc_reg(3)
    assert list(reg) == [0, 1, 2]
    circ.free_reg(reg)
    # free_reg frees high-to-low, so reallocation hands back ascending ids
    again = circ.alloc_reg(3)
    assert list(again) == [0, 1, 2]
    assert circ.live_count == 3


def test_alloc_live_wire_rejected():
    circ = Circuit(None)
    w = circ.alloc_wire()
    with pytest.raises(CircuitError):
        circ.emit(("alloc", w))
    circ.free_wire(w)
    with pytest.raises(CircuitError):
        circ.free_wire(w)


def test_replayed_alloc_respected():
    # a replayed stream may re-allocate an id sitting on the free stack;
    # the allocator must skip it instead of double-allocating
    circ = Circuit(None)
    a = circ.alloc_wire()
    b = circ.alloc_wire()
    circ.free_wire(b)
    circ.free_wire(a)
    circ.emit(("alloc", a))
    c = circ.alloc_wire()
    assert c == b
    assert circ.live_count == 2


def test_simulator_rejects_dirty_free(fresh):
    circ, sim = fresh()
    w = circ.alloc_wire()
    circ.x(w)
    with pytest.raises(SimulationError):
        circ.free_wire(w)


def test_simulator_dead_wire_access(fresh):
    circ, sim = fresh()
    w = circ.alloc_wire()
    circ.free_wire(w)
    with pytest.raises(SimulationError):
        sim.peek(w)
    with pytest.raises(SimulationError):
        sim.poke(w, 1)


def test_read_write_reg_roundtrip(fresh):
    circ, sim = fresh()
    reg = circ.alloc_reg(6)
    for value in (0, 1, 37, 63):
        sim.write_reg(reg, value)
        assert sim.read_reg(reg) == value
    assert sim.live_wires == 6
    assert sim.live_wire_ids == list(reg)


def test_unknown_opcode_rejected():
    sim = Simulator()
    with pytest.raises(SimulationError):
        sim.run([("zz", 0)])


# ---------------------------------------------------------------------------
# reversal


def test_reverse_swaps_alloc_free_and_brackets():
    events = [
        ("alloc", 0),
        ("note", ("load.begin", 2, 3, (0,) * 8)),
        ("x", 0),
        ("note", ("load.end", 2, 3)),
        ("free", 0),
    ]
    rev = reverse_events(events)
    assert rev[0] == ("alloc", 0)
    assert rev[1][1][0] == "unload.begin"
    assert rev[3][1][0] == "unload.end"
    assert rev[4] == ("free", 0)
    assert reverse_events(rev) == events


@st.composite
def random_streams(draw):
    """Random well-formed gate streams over 5 pre-existing wires."""
    ops = []
    for _ in range(draw(st.integers(0, 30))):
        kind = draw(st.sampled_from(["x", "cx", "ccx", "cswap", "mcx"]))
        wires = draw(st.permutations(range(5)))
        if kind == "x":
            ops.append(("x", wires[0]))
        elif kind == "cx":
            ops.append(("cx", wires[0], wires[1]))
        elif kind == "ccx":
            ops.append(
                ("ccx", wires[0], wires[1], wires[2], draw(st.booleans()), draw(st.booleans()))
            )
        elif kind == "cswap":
            ops.append(("cswap", wires[0], wires[1], wires[2]))
        else:
            ops.append(("mcx", wires[0], tuple(wires[1 : 1 + draw(st.integers(1, 3))])))
    return ops


@given(random_streams(), st.integers(0, 31))
@settings(max_examples=60, deadline=None)
def test_reversal_property(events, start):
    # applying a stream then its reversal restores any basis state
    sim = Simulator()
    circ = Circuit(sim)
    reg = circ.alloc_reg(5)
    sim.write_reg(reg, start)
    circ.replay(events)
    circ.emit_reversed(events)
    assert sim.read_reg(reg) == start
    assert sim.live_wires == 5


# ---------------------------------------------------------------------------
# recording


def test_record_tee(fresh):
    circ, sim = fresh()
    a, b = circ.alloc_wire(), circ.alloc_wire()
    circ.x(a)
    with circ.record() as rec:
        circ.cx(a, b)
    # tee: the gate executed and was captured
    assert sim.peek(b) == 1
    assert rec.events == [("cx", a, b)]


def test_record_detached(fresh):
    circ, sim = fresh()
    a, b = circ.alloc_wire(), circ.alloc_wire()
    circ.x(a)
    with circ.record() as outer:
        with circ.record_detached() as rec:
            circ.cx(a, b)
    # detached: captured but never executed, invisible to outer recorders
    assert sim.peek(b) == 0
    assert rec.events == [("cx", a, b)]
    assert outer.events == []
    # the stream can then be replayed for real
    circ.replay(rec.events)
    assert sim.peek(b) == 1


def test_recorder_sink():
    rec = Recorder()
    circ = Circuit(rec)
    w = circ.alloc_wire()
    circ.x(w)
    assert rec.events == [("alloc", w), ("x", w)]


# ---------------------------------------------------------------------------
# counting


def test_counter_tallies():
    cnt = Counter()
    circ = Circuit(cnt)
    reg = circ.alloc_reg(3)
    circ.x(reg[0])
    circ.cx(reg[0], reg[1])
    circ.ccx(reg[0], reg[1], reg[2])
    circ.mcx(reg[0], [reg[1], reg[2]])
    circ.cswap(reg[0], reg[1], reg[2])
    b = cnt.bundle()
    assert b == CountsBundle(
        toffoli=1, cnot1=1, mcx_ops=1, mcx_pairs=2, x=1, cswap=1, alloc_ops=3, free_ops=0
    )
    assert b.cnot_pairs == 3  # 1 plain CNOT + 2 fanned-out pairs
    assert b.depth_slots == 1 + 1 + 1 + 1 + 3  # x carries no depth
    g = cnt.gate_counts()
    assert g.alloc_high_water == 3
    assert g.logical_depth == b.depth_slots


def test_counter_unload_bracket_charges_fixup():
    fixup = CountsBundle(toffoli=5, cnot1=7)
    cnt = Counter()
    circ = Circuit(cnt)
    a, b = circ.alloc_wire(), circ.alloc_wire()
    circ.note(("unload.begin", 2, 3, tuple(__import__("attrs").astuple(fixup))))
    circ.ccx(a, b, circ.alloc_wire())  # suppressed
    circ.note(("unload.end", 2, 3))
    got = cnt.bundle()
    # the bracketed Toffoli and alloc are not tallied; the fixup is
    assert got.toffoli == 5
    assert got.cnot1 == 7
    assert got.alloc_ops == 2
    # live tracking continued inside the bracket
    assert cnt.summary().peak == 3


def test_bundle_algebra():
    a = CountsBundle(toffoli=1, cnot1=2, alloc_ops=3)
    b = CountsBundle(toffoli=10, x=4, free_ops=1)
    assert (a + b).toffoli == 11
    assert a.scaled(3) == CountsBundle(toffoli=3, cnot1=6, alloc_ops=9)
    assert a.swapped_alloc_free() == CountsBundle(toffoli=1, cnot1=2, free_ops=3)


def _summary(toffoli, delta, peak):
    return CircuitSummary(CountsBundle(toffoli=toffoli), delta, peak)


def test_summary_then_tracks_peak():
    a = _summary(1, delta=4, peak=6)
    b = _summary(2, delta=-4, peak=1)
    ab = a.then(b)
    assert ab.counts.toffoli == 3
    assert ab.delta == 0
    assert ab.peak == 6  # b's peak (4+1) stays under a's


def test_summary_reversed_involution():
    s = _summary(3, delta=2, peak=5)
    assert s.reversed_().reversed_() == s
    # reversal of a net-allocating block frees, peak measured from the end
    assert s.reversed_().delta == -2
    assert s.reversed_().peak == 3


def test_summary_repeated_matches_folding():
    s = _summary(2, delta=1, peak=3)
    assert s.repeated(0) == CircuitSummary.empty()
    folded = CircuitSummary.sequence([s] * 4)
    assert s.repeated(4) == folded


@given(
    st.lists(
        st.tuples(st.integers(0, 5), st.integers(-3, 3), st.integers(0, 6)).map(
            lambda t: _summary(*t) if t[2] >= max(0, t[1]) else _summary(t[0], t[1], max(0, t[1]))
        ),
        max_size=6,
    )
)
@settings(max_examples=80, deadline=None)
def test_summary_sequence_associative(parts):
    # folding left equals pairwise grouping: then() is associative
    left = CircuitSummary.sequence(parts)
    right = CircuitSummary.empty()
    for p in reversed(parts):
        right = p.then(right)
    assert left == right


def test_summarize_with_preallocated():
    def build(circ, pre):
        tmp = circ.alloc_reg(2)
        circ.ccx(pre[0], tmp[0], tmp[1])
        circ.free_reg(tmp)

    s = summarize(build, n_pre=1)
    # the pre-wire is not part of the block's own footprint
    assert s.counts.alloc_ops == 2
    assert s.delta == 0
    assert s.peak == 2


def test_counter_matches_simulator_peak(fresh):
    # the same stream drives both a Counter and a Simulator: peaks agree
    events = []
    cnt = Counter()
    circ = Circuit(cnt)
    with circ.record() as rec:
        r = circ.alloc_reg(4)
        circ.x(r[0])
        circ.cx(r[0], r[1])
        t = circ.alloc_reg(2)
        circ.ccx(r[0], r[1], t[0])
        circ.ccx(r[0], r[1], t[0])
        circ.free_reg(t)
        circ.x(r[0])
    events = rec.events
    sim = Simulator()
    sim.run(events)
    assert cnt.summary().peak == 6
    assert sim.live_wires == 4
