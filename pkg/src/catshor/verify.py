"""Exhaustive oracle-equivalence suites for the reversible arithmetic.

Every builder is run on all valid inputs (at small field sizes) and
compared against plain integer arithmetic; register restoration and
residual-ancilla cleanliness are asserted alongside values.  Suites:

  adders      bit-level primitives: ripple adders, controlled and
              constant adders, comparators, register swap, multi-target
              NOT, table lookup and unlookup
  modular     the three reduction variants, modular add/sub/double and
              negation
  montgomery  dirty and clean windowed products, squares, and the fused
              square-subtract
  kaliski     the almost-inverse step, full modular inversion, division
              and controlled division
  ecc         windowed curve-point addition and scalar multiplication on
              the builtin toy curve

Each check stops at its first mismatch and reports the inputs, expected
value and observed value, so a red run always carries a concrete
counterexample.
"""

from __future__ import annotations

import random

import attrs

from . import ecc
from . import numtheory as nt
from .qarith import (
    adders,
    division,
    ecpoints,
    inversion,
    lookup,
    modular,
    montgomery,
    semiclassical,
)
from .revsim import Circuit, Counter, Simulator

FIELD_PRIMES = (7, 13)
SUITE_NAMES = ("adders", "modular", "montgomery", "kaliski", "ecc")


@attrs.frozen
class CheckResult:
    name: str
    ok: bool
    cases: int
    counterexample: dict | None = None

    def to_dict(self):
        out = {"name": self.name, "ok": self.ok, "cases": self.cases}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


class _Check:
    """Accumulates cases until the first failure."""

    def __init__(self, name):
        self.name = name
        self.cases = 0
        self.bad = None

    def case(self, ok, inputs, expected, got):
        self.cases += 1
        if not ok and self.bad is None:
            self.bad = {
                "inputs": inputs,
                "expected": repr(expected),
                "got": repr(got),
            }
        return self.bad is None

    def result(self):
        return CheckResult(self.name, self.bad is None, self.cases, self.bad)


def _fresh():
    sim = Simulator()
    return Circuit(sim), sim


def _clean(sim, *regs):
    want = []
    for r in regs:
        want.extend(r if isinstance(r, (list, tuple)) else list(r))
    return sorted(sim.live_wire_ids) == sorted(want)


# ---------------------------------------------------------------------------
# adders suite

def _check_ripple_add(widths=(1, 2, 3, 4)):
    chk = _Check("ripple_add")
    for m in widths:
        for a in range(1 << m):
            for b in range(1 << m):
                for carry in (False, True):
                    circ, sim = _fresh()
                    src = circ.alloc_reg(m)
                    dst = circ.alloc_reg(m + 1 if carry else m)
                    sim.write_reg(src, a)
                    sim.write_reg(dst, b)
                    adders.build_add(circ, src, dst)
                    want = a + b if carry else (a + b) % (1 << m)
                    got = (sim.read_reg(dst), sim.read_reg(src))
                    ok = got == (want, a) and _clean(sim, src, dst)
                    if not chk.case(ok, {"m": m, "a": a, "b": b, "carry": carry}, (want, a), got):
                        return chk.result()
    return chk.result()


def _check_ctrl_add(widths=(1, 2, 3, 4)):
    chk = _Check("ctrl_add")
    for m in widths:
        for c in (0, 1):
            for a in range(1 << m):
                for b in range(1 << m):
                    circ, sim = _fresh()
                    cw = circ.alloc_wire()
                    src = circ.alloc_reg(m)
                    dst = circ.alloc_reg(m)
                    sim.poke(cw, c)
                    sim.write_reg(src, a)
                    sim.write_reg(dst, b)
                    adders.build_ctrl_add(circ, cw, src, dst)
                    want = (b + a) % (1 << m) if c else b
                    got = (sim.read_reg(dst), sim.read_reg(src), sim.peek(cw))
                    ok = got == (want, a, c) and _clean(sim, [cw], src, dst)
                    if not chk.case(ok, {"m": m, "c": c, "a": a, "b": b}, (want, a, c), got):
                        return chk.result()
    return chk.result()


def _check_ctrl_add_ext(shapes=((1, 3), (2, 4), (3, 5))):
    chk = _Check("ctrl_add_ext")
    for mlen, dlen in shapes:
        for c in (0, 1):
            for a in range(1 << mlen):
                for b in range(1 << dlen):
                    circ, sim = _fresh()
                    cw = circ.alloc_wire()
                    src = circ.alloc_reg(mlen)
                    dst = circ.alloc_reg(dlen)
                    sim.poke(cw, c)
                    sim.write_reg(src, a)
                    sim.write_reg(dst, b)
                    adders.build_ctrl_add_ext(circ, cw, src, dst)
                    want = (b + a) % (1 << dlen) if c else b
                    got = (sim.read_reg(dst), sim.read_reg(src))
                    ok = got == (want, a) and _clean(sim, [cw], src, dst)
                    if not chk.case(
                        ok, {"msrc": mlen, "mdst": dlen, "c": c, "a": a, "b": b}, (want, a), got
                    ):
                        return chk.result()
    return chk.result()


def _check_less_than(widths=(2, 3)):
    chk = _Check("less_than_flip")
    for m in widths:
        for a in range(1 << m):
            for b in range(1 << m):
                for f1 in (0, 1):
                    for f2 in (0, 1):
                        circ, sim = _fresh()
                        ra = circ.alloc_reg(m)
                        rb = circ.alloc_reg(m)
                        w1 = circ.alloc_wire()
                        w2 = circ.alloc_wire()
                        tgt = circ.alloc_wire()
                        sim.write_reg(ra, a)
                        sim.write_reg(rb, b)
                        sim.poke(w1, f1)
                        sim.poke(w2, f2)
                        adders.build_less_than_flip(
                            circ, ra, rb, [tgt], ctrls=[(w1, False), (w2, True)]
                        )
                        want = 1 if (a < b and f1 and not f2) else 0
                        got = (sim.peek(tgt), sim.read_reg(ra), sim.read_reg(rb))
                        ok = got == (want, a, b)
                        if not chk.case(
                            ok, {"m": m, "a": a, "b": b, "f1": f1, "f2": f2}, (want, a, b), got
                        ):
                            return chk.result()
    return chk.result()


def _check_cswap_regs(widths=(2, 3)):
    chk = _Check("cswap_regs")
    for m in widths:
        for c in (0, 1):
            for a in range(1 << m):
                for b in range(1 << m):
                    circ, sim = _fresh()
                    cw = circ.alloc_wire()
                    ra = circ.alloc_reg(m)
                    rb = circ.alloc_reg(m)
                    sim.poke(cw, c)
                    sim.write_reg(ra, a)
                    sim.write_reg(rb, b)
                    adders.build_cswap_regs(circ, cw, ra, rb)
                    want = (b, a) if c else (a, b)
                    got = (sim.read_reg(ra), sim.read_reg(rb))
                    ok = got == want and sim.peek(cw) == c
                    if not chk.case(ok, {"m": m, "c": c, "a": a, "b": b}, want, got):
                        return chk.result()
    return chk.result()


def _check_const_arith(widths=(1, 2, 3, 4)):
    chk = _Check("const_add_sub_compare")
    for m in widths:
        for c in range(1 << m):
            for z in range(1 << m):
                circ, sim = _fresh()
                r = circ.alloc_reg(m)
                sim.write_reg(r, z)
                semiclassical.build_const_add(circ, r, c)
                got_add = sim.read_reg(r)
                circ, sim = _fresh()
                r = circ.alloc_reg(m)
                sim.write_reg(r, z)
                semiclassical.build_const_sub(circ, r, c)
                got_sub = sim.read_reg(r)
                circ, sim = _fresh()
                r = circ.alloc_reg(m)
                t = circ.alloc_wire()
                sim.write_reg(r, z)
                semiclassical.build_const_compare_flip(circ, r, c, [t])
                got_cmp = (sim.peek(t), sim.read_reg(r))
                want = ((z + c) % (1 << m), (z - c) % (1 << m), (1 if z >= c else 0, z))
                got = (got_add, got_sub, got_cmp)
                if not chk.case(got == want, {"m": m, "z": z, "c": c}, want, got):
                    return chk.result()
    return chk.result()


def _check_ctrl_const_add(widths=(1, 2, 3, 4)):
    chk = _Check("ctrl_const_add")
    for m in widths:
        for c in range(1 << m):
            for z in range(1 << m):
                for ct in (0, 1):
                    circ, sim = _fresh()
                    cw = circ.alloc_wire()
                    r = circ.alloc_reg(m)
                    sim.poke(cw, ct)
                    sim.write_reg(r, z)
                    semiclassical.build_ctrl_const_add(circ, cw, r, c)
                    want = (z + c) % (1 << m) if ct else z
                    got = (sim.read_reg(r), sim.peek(cw))
                    if not chk.case(
                        got == (want, ct), {"m": m, "z": z, "c": c, "ctrl": ct}, (want, ct), got
                    ):
                        return chk.result()
    return chk.result()


def _check_multi_ctrl_not(ks=(1, 2, 3, 4)):
    chk = _Check("multi_ctrl_not")
    for k in ks:
        for pat in range(1 << k):
            for negpat in range(1 << k):
                circ, sim = _fresh()
                ws = [circ.alloc_wire() for _ in range(k)]
                t = circ.alloc_wire()
                for i, w in enumerate(ws):
                    sim.poke(w, (pat >> i) & 1)
                ctrls = [(w, bool((negpat >> i) & 1)) for i, w in enumerate(ws)]
                lookup.build_multi_ctrl_not(circ, ctrls, t)
                want = int(all(((pat >> i) & 1) != ((negpat >> i) & 1) for i in range(k)))
                got = sim.peek(t)
                ok = got == want and sim.live_wires == k + 1
                ok = ok and all(sim.peek(w) == (pat >> i) & 1 for i, w in enumerate(ws))
                if not chk.case(ok, {"k": k, "pattern": pat, "negations": negpat}, want, got):
                    return chk.result()
    return chk.result()


def _check_lookup(shapes=((0, 3), (1, 4), (2, 5), (3, 6), (4, 8))):
    chk = _Check("lookup_load_unload")
    rng = random.Random(7)
    for a, v in shapes:
        table = [rng.randrange(1 << v) for _ in range(1 << a)]
        if a >= 1:
            table[rng.randrange(len(table))] = 0  # zero entries are legal
        for addr in range(1 << a):
            circ, sim = _fresh()
            ar = circ.alloc_reg(a)
            vr = circ.alloc_reg(v)
            sim.write_reg(ar, addr)
            lookup.build_load(circ, ar, vr, table)
            got_load = (sim.read_reg(vr), sim.read_reg(ar), sim.live_wires)
            lookup.build_unload(circ, ar, vr, table)
            got_unload = (sim.read_reg(vr), sim.read_reg(ar))
            want = ((table[addr], addr, a + v), (0, addr))
            got = (got_load, got_unload)
            if not chk.case(got == want, {"addr_bits": a, "val_bits": v, "addr": addr}, want, got):
                return chk.result()
    return chk.result()


def _check_lookup_counts(shapes=((2, 4), (3, 5), (4, 6), (5, 8), (6, 8))):
    # closed-form cost formulas against a counted build
    chk = _Check("lookup_count_formulas")
    rng = random.Random(11)
    for a, v in shapes:
        table = [rng.randrange(1, 1 << v) for _ in range(1 << a)]
        cnt = Counter()
        circ = Circuit(cnt)
        ar = circ.alloc_reg(a)
        vr = circ.alloc_reg(v)
        with circ.record() as rec:
            lookup.build_load(circ, ar, vr, table)
        load_cnt = Counter()
        for ev in rec.events:
            load_cnt.consume(ev)
        got_load = load_cnt.summary()
        nz, pairs = lookup.table_stats(table, v)
        want_load = lookup.lookup_summary(a, v, nz, pairs)
        with circ.record() as rec:
            lookup.build_unload(circ, ar, vr, table)
        unload_cnt = Counter()
        for ev in rec.events:
            unload_cnt.consume(ev)
        got_unload = unload_cnt.summary().counts
        want_unload = lookup.fixup_bundle(a, v)
        ok = got_load == want_load and got_unload == want_unload
        if not chk.case(
            ok,
            {"addr_bits": a, "val_bits": v},
            (want_load, want_unload),
            (got_load, got_unload),
        ):
            return chk.result()
    return chk.result()


def _run_adders(primes):
    return [
        _check_ripple_add(),
        _check_ctrl_add(),
        _check_ctrl_add_ext(),
        _check_less_than(),
        _check_cswap_regs(),
        _check_const_arith(),
        _check_ctrl_const_add(),
        _check_multi_ctrl_not(),
        _check_lookup(),
        _check_lookup_counts(),
    ]


# ---------------------------------------------------------------------------
# modular suite

def _check_reductions(p):
    chk = _Check(f"reduce_variants_p{p}")
    m = p.bit_length() + 1
    variants = (
        ("v1", modular.build_reduce_v1),
        ("v2", modular.build_reduce_v2),
        ("v3", modular.build_reduce_v3),
    )
    for z in range(2 * p):
        for label, fn in variants:
            circ, sim = _fresh()
            zr = circ.alloc_reg(m)
            sim.write_reg(zr, z)
            fn(circ, zr, p)
            got = sim.read_reg(zr)
            if not chk.case(got == z % p, {"variant": label, "p": p, "z": z}, z % p, got):
                return chk.result()
        # v3 with a caller-provided scratch wire also reports the borrow
        circ, sim = _fresh()
        seed = circ.alloc_wire()
        zr = circ.alloc_reg(m)
        sim.write_reg(zr, z)
        flag = modular.build_reduce_v3(circ, zr, p, seed=seed)
        want = (z % p, 0, 1 if z >= p else 0)
        got = (sim.read_reg(zr), sim.peek(seed), sim.peek(flag))
        if not chk.case(got == want, {"variant": "v3+seed", "p": p, "z": z}, want, got):
            return chk.result()
    return chk.result()


def _check_mod_add_sub(p):
    chk = _Check(f"mod_add_sub_p{p}")
    n = p.bit_length()
    for x in range(p):
        for y in range(p):
            circ, sim = _fresh()
            xr = circ.alloc_reg(n)
            yr = circ.alloc_reg(n)
            sim.write_reg(xr, x)
            sim.write_reg(yr, y)
            modular.build_mod_add(circ, xr, yr, p)
            got_add = (sim.read_reg(yr), sim.read_reg(xr), _clean(sim, xr, yr))
            modular.build_mod_sub(circ, xr, yr, p)
            got_sub = (sim.read_reg(yr), sim.read_reg(xr))
            want = (((x + y) % p, x, True), (y, x))
            got = (got_add, got_sub)
            if not chk.case(got == want, {"p": p, "x": x, "y": y}, want, got):
                return chk.result()
    return chk.result()


def _check_mod_double(p):
    chk = _Check(f"mod_double_p{p}")
    n = p.bit_length()
    for v in range(p):
        for spare in (False, True):
            circ, sim = _fresh()
            sp = circ.alloc_wire() if spare else None
            r = circ.alloc_reg(n)
            sim.write_reg(r, v)
            out = modular.build_mod_double(circ, r, p, spare=sp)
            got = sim.read_reg(out)
            ok = got == (2 * v) % p and (sp is None or sim.peek(sp) == 0)
            if not chk.case(ok, {"p": p, "v": v, "spare": spare}, (2 * v) % p, got):
                return chk.result()
    return chk.result()


def _check_mod_negate(p):
    chk = _Check(f"mod_negate_p{p}")
    n = p.bit_length()
    for v in range(1, p):
        circ, sim = _fresh()
        r = circ.alloc_reg(n)
        sim.write_reg(r, v)
        semiclassical.build_mod_negate(circ, r, p)
        got = sim.read_reg(r)
        if not chk.case(got == p - v, {"p": p, "v": v}, p - v, got):
            return chk.result()
        for ct in (0, 1):
            circ, sim = _fresh()
            cw = circ.alloc_wire()
            r = circ.alloc_reg(n)
            sim.poke(cw, ct)
            sim.write_reg(r, v)
            semiclassical.build_mod_negate(circ, r, p, ctrl=cw)
            want = p - v if ct else v
            got = sim.read_reg(r)
            if not chk.case(got == want, {"p": p, "v": v, "ctrl": ct}, want, got):
                return chk.result()
    return chk.result()


def _run_modular(primes):
    out = []
    for p in primes:
        out.extend(
            [
                _check_reductions(p),
                _check_mod_add_sub(p),
                _check_mod_double(p),
                _check_mod_negate(p),
            ]
        )
    return out


# ---------------------------------------------------------------------------
# montgomery suite

def _check_mont_mul(p, windows=(1, 2, 3)):
    chk = _Check(f"mont_mul_p{p}")
    n = p.bit_length()
    for w in windows:
        for x in range(p):
            for y in range(p):
                want = nt.mont_mul_oracle(x, y, n, p)
                circ, sim = _fresh()
                xr = circ.alloc_reg(n)
                yr = circ.alloc_reg(n)
                sim.write_reg(xr, x)
                sim.write_reg(yr, y)
                out, _garbage = montgomery.build_mont_dirty_mul(circ, xr, yr, p, w)
                got_dirty = (sim.read_reg(out), sim.read_reg(xr), sim.read_reg(yr))
                circ, sim = _fresh()
                xr = circ.alloc_reg(n)
                yr = circ.alloc_reg(n)
                sim.write_reg(xr, x)
                sim.write_reg(yr, y)
                out = montgomery.build_mont_clean_mul(circ, xr, yr, p, w)
                got_clean = (
                    sim.read_reg(out),
                    sim.read_reg(xr),
                    sim.read_reg(yr),
                    _clean(sim, xr, yr, out),
                )
                want_all = ((want, x, y), (want, x, y, True))
                got = (got_dirty, got_clean)
                if not chk.case(got == want_all, {"p": p, "w": w, "x": x, "y": y}, want_all, got):
                    return chk.result()
    return chk.result()


def _check_mont_square(p, windows=(1, 2, 3)):
    chk = _Check(f"mont_square_p{p}")
    n = p.bit_length()
    for w in windows:
        for y in range(p):
            want = nt.mont_mul_oracle(y, y, n, p)
            circ, sim = _fresh()
            yr = circ.alloc_reg(n)
            sim.write_reg(yr, y)
            out, _garbage = montgomery.build_mont_dirty_square(circ, yr, p, w)
            got_dirty = (sim.read_reg(out), sim.read_reg(yr))
            circ, sim = _fresh()
            yr = circ.alloc_reg(n)
            sim.write_reg(yr, y)
            out = montgomery.build_mont_clean_square(circ, yr, p, w)
            got_clean = (sim.read_reg(out), sim.read_reg(yr))
            want_all = ((want, y), (want, y))
            got = (got_dirty, got_clean)
            if not chk.case(got == want_all, {"p": p, "w": w, "y": y}, want_all, got):
                return chk.result()
    return chk.result()


def _check_square_subtract(p, windows=(1, 2, 3)):
    chk = _Check(f"mont_square_subtract_p{p}")
    n = p.bit_length()
    for w in windows:
        for y in range(p):
            for t in range(p):
                want = (t - nt.mont_mul_oracle(y, y, n, p)) % p
                circ, sim = _fresh()
                yr = circ.alloc_reg(n)
                tr = circ.alloc_reg(n)
                sim.write_reg(yr, y)
                sim.write_reg(tr, t)
                montgomery.build_mont_square_subtract(circ, yr, p, w, target=tr)
                got = (sim.read_reg(tr), sim.read_reg(yr), _clean(sim, yr, tr))
                if not chk.case(
                    got == (want, y, True), {"p": p, "w": w, "y": y, "t": t}, (want, y, True), got
                ):
                    return chk.result()
    return chk.result()


def _run_montgomery(primes):
    out = []
    for p in primes:
        out.extend(
            [
                _check_mont_mul(p),
                _check_mont_square(p),
                _check_square_subtract(p),
            ]
        )
    return out


# ---------------------------------------------------------------------------
# kaliski suite

def _check_inverse(p):
    chk = _Check(f"mod_inverse_p{p}")
    n = p.bit_length()
    for x in range(1, p):
        circ, sim = _fresh()
        xr = circ.alloc_reg(n)
        sim.write_reg(xr, x)
        out, ms = inversion.build_mod_inverse(circ, xr, p)
        want = nt.mont_inverse_oracle(x, n, p)
        got = (sim.read_reg(out), len(ms), sim.live_wires)
        if not chk.case(got == (want, 2 * n, 3 * n), {"p": p, "x": x}, (want, 2 * n, 3 * n), got):
            return chk.result()
    return chk.result()


def _check_step_uniformity(p):
    # every almost-inverse iteration must cost exactly the same, or the
    # composed per-iteration pricing would be wrong
    chk = _Check(f"kaliski_step_uniformity_p{p}")
    n = p.bit_length()
    circ, sim = _fresh()
    xr = circ.alloc_reg(n)
    sim.write_reg(xr, 2 % p)
    u = circ.alloc_reg(n)
    for i in range(n):
        if (p >> i) & 1:
            circ.x(u[i])
    r = circ.alloc_reg(n)
    s = circ.alloc_reg(n)
    circ.x(s[0])
    f = circ.alloc_wire()
    circ.x(f)
    a = circ.alloc_wire()
    b = circ.alloc_wire()
    v = xr
    summaries = []
    for _ in range(2 * n):
        with circ.record() as rec:
            v, r, _m = inversion.build_kaliski_step(circ, u, v, r, s, f, a, b, p)
        cnt = Counter()
        for ev in rec.events:
            cnt.consume(ev)
        summaries.append(cnt.summary())
    first = summaries[0]
    for it, s_it in enumerate(summaries):
        if not chk.case(s_it == first, {"p": p, "iteration": it}, first, s_it):
            return chk.result()
    return chk.result()


def _check_division(p, ctrl=False):
    tag = "ctrl_division" if ctrl else "division"
    chk = _Check(f"{tag}_p{p}")
    n = p.bit_length()
    w = 2
    for c in (0, 1) if ctrl else (1,):
        for x in range(1, p):
            for y in range(p):
                circ, sim = _fresh()
                cw = circ.alloc_wire() if ctrl else None
                xr = circ.alloc_reg(n)
                yr = circ.alloc_reg(n)
                if ctrl:
                    sim.poke(cw, c)
                sim.write_reg(xr, x)
                sim.write_reg(yr, y)
                lam = division.build_mod_div(circ, xr, yr, p, w, ctrl=cw)
                quotient = y * pow(x, p - 2, p) * pow(2, n, p) % p
                want = quotient if c else 0
                got = (sim.read_reg(lam), sim.read_reg(xr), sim.read_reg(yr))
                ok = got == (want, x, y)
                if not ctrl:
                    ok = ok and _clean(sim, xr, yr, lam)
                if not chk.case(ok, {"p": p, "ctrl": c, "x": x, "y": y}, (want, x, y), got):
                    return chk.result()
                if not ctrl:
                    # running again with out= uncomputes the quotient
                    division.build_mod_div(circ, xr, yr, p, w, out=lam)
                    got2 = (sim.read_reg(lam), sim.read_reg(xr), sim.read_reg(yr))
                    if not chk.case(
                        got2 == (0, x, y), {"p": p, "x": x, "y": y, "pass": 2}, (0, x, y), got2
                    ):
                        return chk.result()
    return chk.result()


def _run_kaliski(primes):
    out = []
    for p in primes:
        out.extend(
            [
                _check_step_uniformity(p),
                _check_inverse(p),
                _check_division(p),
                _check_division(p, ctrl=True),
            ]
        )
    return out


# ---------------------------------------------------------------------------
# ecc suite (always on the builtin toy curve)

def _run_window_add(spec, q, i, w_m=2):
    curve = spec.curve
    n = curve.n_bits
    circ, sim = _fresh()
    idx = circ.alloc_reg(spec.width)
    ax = circ.alloc_reg(n)
    ay = circ.alloc_reg(n)
    sim.write_reg(idx, i)
    sim.write_reg(ax, nt.to_mont(q[0], n, curve.p))
    sim.write_reg(ay, nt.to_mont(q[1], n, curve.p))
    ecpoints.build_ec_add_lookup(circ, idx, ax, ay, spec, w_m)
    clean = _clean(sim, idx, ax, ay)
    res = (
        nt.from_mont(sim.read_reg(ax), n, curve.p),
        nt.from_mont(sim.read_reg(ay), n, curve.p),
    )
    return res, sim.read_reg(idx), clean


def _check_ec_window_add(curve):
    chk = _Check("ec_window_add")
    spec = ecc.WindowSpec(width=2, shift=0, base=curve.g, curve=curve)
    for i in range(1 << spec.width):
        if spec.is_exceptional(i):
            continue
        t = spec.window_point(i)
        for kq in range(1, curve.r):
            q = ecc.scalar_mul(kq, curve.g, curve)
            if not ecc.generic_case_ok(q, t, curve):
                continue
            want = ecc.ec_add(q, t, curve)
            res, idx_after, clean = _run_window_add(spec, q, i)
            got = (res, idx_after, clean)
            if not chk.case(
                got == (want, i, True), {"window": i, "accumulator": f"{kq}*G"}, (want, i, True), got
            ):
                return chk.result()
    return chk.result()


def _check_ec_window_width_invariance(curve):
    chk = _Check("ec_window_width_invariance")
    spec = ecc.WindowSpec(width=2, shift=0, base=curve.g, curve=curve)
    q = ecc.scalar_mul(3, curve.g, curve)
    t = spec.window_point(3)
    want = ecc.ec_add(q, t, curve)
    for w_m in (1, 2, 3, 4):
        res, _, clean = _run_window_add(spec, q, 3, w_m=w_m)
        if not chk.case((res, clean) == (want, True), {"w_m": w_m}, want, res):
            return chk.result()
    return chk.result()


def _windowed_walk(k, n_e, w_e, base, p0, curve):
    """Classical mirror of the windowed scalar mult; None when any window
    hits an excluded exceptional configuration."""
    acc = p0
    for s in ecc.scalar_windows(n_e, w_e, base, curve):
        i = (k >> s.shift) & ((1 << s.width) - 1)
        if s.is_exceptional(i):
            return None
        t = s.window_point(i)
        if not ecc.generic_case_ok(acc, t, curve):
            return None
        acc = ecc.ec_add(acc, t, curve)
    return acc


def _check_ec_scalar_mul(curve, n_e=4, w_e=2, w_m=2):
    chk = _Check("ec_scalar_mul")
    n = curve.n_bits
    p0 = ecc.scalar_mul(7, curve.g, curve)
    offset = ecpoints.scalar_mul_offset(n_e, w_e, curve.g, curve)
    for k in range(1 << n_e):
        want = _windowed_walk(k, n_e, w_e, curve.g, p0, curve)
        if want is None:
            continue
        # the windowed walk is p0 + k*G shifted by the constant offset
        direct = ecc.ec_add(
            ecc.ec_add(p0, ecc.scalar_mul(k, curve.g, curve), curve), offset, curve
        )
        if not chk.case(want == direct, {"k": k, "stage": "offset identity"}, direct, want):
            return chk.result()
        circ, sim = _fresh()
        ax = circ.alloc_reg(n)
        ay = circ.alloc_reg(n)
        sim.write_reg(ax, nt.to_mont(p0[0], n, curve.p))
        sim.write_reg(ay, nt.to_mont(p0[1], n, curve.p))
        ecpoints.build_ec_scalar_mul(circ, k, ax, ay, n_e, w_e, w_m, curve.g, curve)
        got = (
            nt.from_mont(sim.read_reg(ax), n, curve.p),
            nt.from_mont(sim.read_reg(ay), n, curve.p),
        )
        if not chk.case(got == want, {"k": k}, want, got):
            return chk.result()
    return chk.result()


def _run_ecc(primes):
    curve = ecc.TOY_CURVE
    return [
        _check_ec_window_add(curve),
        _check_ec_window_width_invariance(curve),
        _check_ec_scalar_mul(curve),
    ]


# ---------------------------------------------------------------------------
# drivers

_SUITE_RUNNERS = {
    "adders": _run_adders,
    "modular": _run_modular,
    "montgomery": _run_montgomery,
    "kaliski": _run_kaliski,
    "ecc": _run_ecc,
}


def _fault_injection_check():
    # negative control: a deliberately corrupted 2-bit addition, proving
    # the harness actually detects and reports mismatches
    chk = _Check("fault_injection")
    m, a, b = 2, 1, 2
    circ, sim = _fresh()
    src = circ.alloc_reg(m)
    dst = circ.alloc_reg(m)
    sim.write_reg(src, a)
    sim.write_reg(dst, b)
    adders.build_add(circ, src, dst)
    circ.x(dst[0])
    want = (a + b) % (1 << m)
    got = sim.read_reg(dst)
    chk.case(got == want, {"m": m, "a": a, "b": b, "injected": True}, want, got)
    return chk.result()


def run_suite(suite, prime=None, inject_fault=False):
    """CheckResults for one suite ("all" runs every suite).

    ``prime`` fixes the field for the modular/montgomery/kaliski suites;
    None means both builtin primes.  The adders and ecc suites have fixed
    operand shapes (bit widths, the toy curve) and ignore it.
    """
    if suite != "all" and suite not in _SUITE_RUNNERS:
        raise ValueError(f"unknown suite {suite!r}; pick from {SUITE_NAMES + ('all',)}")
    primes = FIELD_PRIMES if prime is None else (prime,)
    names = SUITE_NAMES if suite == "all" else (suite,)
    results = []
    if inject_fault:
        results.append(_fault_injection_check())
    for name in names:
        results.extend(_SUITE_RUNNERS[name](primes))
    return results


def report(results):
    """Serializable verification report."""
    return {
        "schema": "catshor/verify_report/v1",
        "ok": all(r.ok for r in results),
        "checks": [r.to_dict() for r in results],
    }
