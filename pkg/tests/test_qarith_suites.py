"""Oracle-equivalence suites for every reversible arithmetic builder, plus
randomized spot checks beyond the exhaustive field sizes."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catshor.numtheory import mont_mul_oracle, prev_prime
from catshor.qarith.adders import build_add, build_ctrl_add
from catshor.qarith.lookup import build_load, build_unload
from catshor.qarith.montgomery import build_mont_dirty_mul
from catshor.revsim import Circuit, Simulator
from catshor.verify import FIELD_PRIMES, SUITE_NAMES, report, run_suite


def _assert_all_ok(results):
    for res in results:
        assert res.ok, f"{res.name}: {res.counterexample}"
        assert res.cases > 0


@pytest.mark.parametrize("suite", SUITE_NAMES)
def test_suite_passes(suite):
    _assert_all_ok(run_suite(suite))


@pytest.mark.parametrize("prime", FIELD_PRIMES)
def test_all_suites_single_prime(prime):
    results = run_suite("all", prime=prime)
    _assert_all_ok(results)
    names = [r.name for r in results]
    assert len(names) == len(set(names))


def test_unknown_suite_rejected():
    with pytest.raises(ValueError):
        run_suite("nonsense")


def test_fault_injection_is_caught():
    results = run_suite("adders", prime=7, inject_fault=True)
    bad = [r for r in results if not r.ok]
    assert len(bad) == 1
    ce = bad[0].counterexample
    assert ce is not None
    assert set(ce) == {"inputs", "expected", "got"}


def test_report_shape():
    results = run_suite("modular", prime=7)
    rep = report(results)
    assert rep["schema"] == "catshor/verify_report/v1"
    assert rep["ok"] is True
    assert len(rep["checks"]) == len(results)
    assert all(c["ok"] for c in rep["checks"])


# ---------------------------------------------------------------------------
# randomized builder checks on wider registers than the exhaustive suites


@given(st.integers(5, 9), st.data())
@settings(max_examples=40, deadline=None)
def test_ripple_add_random_widths(m, data):
    a = data.draw(st.integers(0, (1 << m) - 1))
    b = data.draw(st.integers(0, (1 << m) - 1))
    sim = Simulator()
    circ = Circuit(sim)
    src, dst = circ.alloc_reg(m), circ.alloc_reg(m)
    sim.write_reg(src, a)
    sim.write_reg(dst, b)
    build_add(circ, src, dst)
    assert sim.read_reg(dst) == (a + b) % (1 << m)
    assert sim.read_reg(src) == a
    assert sim.live_wires == 2 * m


@given(st.integers(4, 8), st.booleans(), st.data())
@settings(max_examples=40, deadline=None)
def test_ctrl_add_random_widths(m, ctrl, data):
    a = data.draw(st.integers(0, (1 << m) - 1))
    b = data.draw(st.integers(0, (1 << m) - 1))
    sim = Simulator()
    circ = Circuit(sim)
    c = circ.alloc_wire()
    sim.poke(c, ctrl)
    src, dst = circ.alloc_reg(m), circ.alloc_reg(m)
    sim.write_reg(src, a)
    sim.write_reg(dst, b)
    build_ctrl_add(circ, c, src, dst)
    expected = (a + b) % (1 << m) if ctrl else b
    assert sim.read_reg(dst) == expected
    assert sim.read_reg(src) == a and sim.peek(c) == ctrl


@given(st.integers(2, 6), st.integers(3, 8), st.data())
@settings(max_examples=30, deadline=None)
def test_lookup_random_tables(a_bits, v_bits, data):
    entries = [
        data.draw(st.integers(0, (1 << v_bits) - 1)) for _ in range(1 << a_bits)
    ]
    addr_val = data.draw(st.integers(0, (1 << a_bits) - 1))
    sim = Simulator()
    circ = Circuit(sim)
    addr, val = circ.alloc_reg(a_bits), circ.alloc_reg(v_bits)
    sim.write_reg(addr, addr_val)
    build_load(circ, addr, val, entries)
    assert sim.read_reg(val) == entries[addr_val]
    assert sim.read_reg(addr) == addr_val
    build_unload(circ, addr, val, entries)
    assert sim.read_reg(val) == 0
    assert sim.live_wires == a_bits + v_bits


@given(st.data())
@settings(max_examples=25, deadline=None)
def test_mont_dirty_mul_random_primes(data):
    bits = data.draw(st.integers(5, 9))
    p = prev_prime(1 << bits)
    n = p.bit_length()
    w = data.draw(st.integers(1, 3))
    x = data.draw(st.integers(1, p - 1))
    y = data.draw(st.integers(1, p - 1))
    sim = Simulator()
    circ = Circuit(sim)
    xr, yr = circ.alloc_reg(n), circ.alloc_reg(n)
    sim.write_reg(xr, x)
    sim.write_reg(yr, y)
    out, _garbage = build_mont_dirty_mul(circ, xr, yr, p, w)
    assert sim.read_reg(out) == mont_mul_oracle(x, y, n, p)
    assert sim.read_reg(xr) == x
