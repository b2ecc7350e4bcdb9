"""Discrete-log circuit f(x1, x2) = P0 + x1*G - x2*P and its exact cost.

The builder emits the full event stream (feasible to simulate up to 16-bit
fields); the counter composes per-block summaries streamed once from the
same builders, so gate counts, depth and peak width for cryptographic
sizes come out exactly without materializing 10^10 events.  Both paths are
asserted equal at small sizes.

Exponent registers follow the semiclassical recycling: only the current
window's index wires exist, allocated and prepared around each lookup
addition and freed after, with prep and clear notes so a replay harness
can inject window values.

Counting conventions: scalars are taken as zero (window preparation X
gates vanish; they cost no logical time anyway) and both scalar bases
default to the curve generator and its negation.  Point tables wider than
4096 entries, or on fields beyond 32 bits, are priced by a density fiat
(all entries nonzero, half the value bits set) instead of being built.
"""

from .. import revsim
from ..ecc import ec_neg, scalar_windows, synthetic_curve
from ..numtheory import to_mont
from .ecpoints import (
    _ctrl_negate_y,
    _negate_index,
    build_ec_scalar_mul,
    ec_tables,
)
from .inversion import (
    _inverse_epilogue,
    _inverse_prologue,
    build_kaliski_step,
)
from .lookup import lookup_summary, table_stats, unload_summary
from .modular import build_mod_add
from .montgomery import build_mont_dirty_mul, build_mont_dirty_square
from .semiclassical import build_mod_negate

MAX_BUILD_BITS = 16
REAL_TABLE_LIMIT = 4096
REAL_TABLE_FIELD_LIMIT = 32


def build_shor_f(circ, curve, pub, p0, x1, x2, n_e, w_e, w_m):
    """Accumulate P0 + x1*G - x2*pub (plus the classical window offset)
    into two fresh Montgomery-encoded coordinate registers; returns
    (acc_x, acc_y).  n_e is the total exponent width, split evenly."""
    n = curve.n_bits
    if n > MAX_BUILD_BITS:
        raise ValueError(f"explicit builds stop at {MAX_BUILD_BITS}-bit fields; use count_shor")
    acc_x = circ.alloc_reg(n)
    acc_y = circ.alloc_reg(n)
    mx = to_mont(p0[0], n, curve.p)
    my = to_mont(p0[1], n, curve.p)
    for i in range(n):
        if (mx >> i) & 1:
            circ.x(acc_x[i])
        if (my >> i) & 1:
            circ.x(acc_y[i])
    half = n_e // 2
    build_ec_scalar_mul(circ, x1, acc_x, acc_y, half, w_e, w_m, curve.g, curve, label=0)
    build_ec_scalar_mul(
        circ, x2, acc_x, acc_y, half, w_e, w_m, ec_neg(pub, curve), curve, label=1
    )
    return acc_x, acc_y


# ---------------------------------------------------------------------------
# composed counting

_CACHE = {}


def _memo(key, thunk):
    if key not in _CACHE:
        _CACHE[key] = thunk()
    return _CACHE[key]


def _alloc_summary(k):
    return revsim.CircuitSummary(revsim.CountsBundle(alloc_ops=k), k, k)


def _free_summary(k):
    return revsim.CircuitSummary(revsim.CountsBundle(free_ops=k), -k, 0)


def _gate_summary(**kw):
    return revsim.CircuitSummary(revsim.CountsBundle(**kw), 0, 0)


def _mod_add_summary(n, p):
    def build(circ, pre):
        build_mod_add(circ, pre[:n], pre[n:], p)

    return _memo(("mod_add", n, p), lambda: revsim.summarize(build, 2 * n))


def _mod_neg_summary(n, p):
    def build(circ, pre):
        build_mod_negate(circ, pre, p)

    return _memo(("mod_neg", n, p), lambda: revsim.summarize(build, n))


def _ctrl_neg_y_summary(n, p):
    def build(circ, pre):
        _ctrl_negate_y(circ, pre[n], pre[:n], p)

    return _memo(("cnegy", n, p), lambda: revsim.summarize(build, n + 1))


def _neg_idx_summary(w):
    def build(circ, pre):
        _negate_index(circ, pre[w - 1], list(pre)[: w - 1])

    return _memo(("negidx", w), lambda: revsim.summarize(build, w))


def _dirty_mul_summary(n, p, w_m):
    def build(circ, pre):
        build_mont_dirty_mul(circ, pre[:n], pre[n:], p, w_m)

    return _memo(("dirty", n, p, w_m), lambda: revsim.summarize(build, 2 * n))


def _dirty_square_summary(n, p, w_m):
    def build(circ, pre):
        build_mont_dirty_square(circ, pre, p, w_m)

    return _memo(("dirtysq", n, p, w_m), lambda: revsim.summarize(build, n))


def _inverse_summary(n, p):
    def whole():
        def prologue(circ, pre):
            _inverse_prologue(circ, n, p)

        def regs(pre):
            parts = [pre[i * n : (i + 1) * n] for i in range(4)]
            return parts + [pre[4 * n], pre[4 * n + 1], pre[4 * n + 2]]

        def step(circ, pre):
            u, v, r, s, f, a, b = regs(pre)
            build_kaliski_step(circ, u, v, r, s, f, a, b, p)

        def epilogue(circ, pre):
            u, v, r, s, f, a, b = regs(pre)
            _inverse_epilogue(circ, v, u, r, s, f, a, b, p)

        s_pro = revsim.summarize(prologue, n)
        s_it = revsim.summarize(step, 4 * n + 3)
        s_epi = revsim.summarize(epilogue, 4 * n + 3)
        return s_pro.then(s_it.repeated(2 * n)).then(s_epi)

    return _memo(("inv", n, p), whole)


def _div_summary(n, p, w_m, fresh_out, ctrl=False):
    def whole():
        s_inv = _inverse_summary(n, p)
        s_dirty = _dirty_mul_summary(n, p, w_m)
        copy = _gate_summary(toffoli=n) if ctrl else _gate_summary(cnot1=n)
        core = revsim.CircuitSummary.sequence(
            [s_inv, s_dirty, copy, s_dirty.reversed_(), s_inv.reversed_()]
        )
        if fresh_out:
            core = _alloc_summary(n).then(core)
        return core

    return _memo(("div", n, p, w_m, fresh_out, ctrl), whole)


def _clean_mul_summary(n, p, w_m):
    def whole():
        s_dirty = _dirty_mul_summary(n, p, w_m)
        return revsim.CircuitSummary.sequence(
            [s_dirty, _gate_summary(cnot1=n), s_dirty.reversed_()]
        )

    return _memo(("cleanmul", n, p, w_m), whole)


def _square_subtract_summary(n, p, w_m):
    def whole():
        s_sq = _dirty_square_summary(n, p, w_m)
        return revsim.CircuitSummary.sequence(
            [s_sq, _mod_add_summary(n, p).reversed_(), s_sq.reversed_()]
        )

    return _memo(("sqsub", n, p, w_m), whole)


def _window_table_stats(spec):
    """(xy stats, 3x stats) for one window, real when small enough."""
    n = spec.curve.n_bits
    a = spec.width - 1
    key = ("tstats", n, spec.curve.p, spec.width, spec.shift, spec.base)

    def compute():
        if (1 << a) <= REAL_TABLE_LIMIT and n <= REAL_TABLE_FIELD_LIMIT:
            xy, x3 = ec_tables(spec)
            return table_stats(xy, 2 * n), table_stats(x3, n)
        nz = max((1 << a) - 1, 1)
        return (nz, nz * n), (nz, nz * (n // 2))

    return _memo(key, compute)


def _ec_add_summary(spec, w_m):
    n = spec.curve.n_bits
    p = spec.curve.p
    w = spec.width
    a = w - 1
    (nz_xy, pr_xy), (nz_3x, pr_3x) = _window_table_stats(spec)
    s_negidx = _neg_idx_summary(w) if w > 1 else revsim.CircuitSummary.empty()
    s_cnegy = _ctrl_neg_y_summary(n, p)
    s_sub = _mod_add_summary(n, p).reversed_()
    xy_block = revsim.CircuitSummary.sequence(
        [
            _alloc_summary(2 * n),
            lookup_summary(a, 2 * n, nz_xy, pr_xy),
            s_cnegy,
            s_sub,
            s_sub,
            s_cnegy,
            unload_summary(a, 2 * n),
            _free_summary(2 * n),
        ]
    )
    return revsim.CircuitSummary.sequence(
        [
            s_negidx,
            xy_block,
            _div_summary(n, p, w_m, fresh_out=True),
            _clean_mul_summary(n, p, w_m).reversed_(),
            _alloc_summary(n),
            lookup_summary(a, n, nz_3x, pr_3x),
            _mod_add_summary(n, p),
            unload_summary(a, n),
            _free_summary(n),
            _square_subtract_summary(n, p, w_m),
            _clean_mul_summary(n, p, w_m),
            _div_summary(n, p, w_m, fresh_out=False),
            _free_summary(n),
            xy_block,
            _mod_neg_summary(n, p),
            s_negidx,
        ]
    )


def shor_count_bundle(n, w_e, w_m, curve=None, pub=None, p0=None):
    """CircuitSummary of the full f-computation with zero scalars."""
    if curve is None:
        curve = synthetic_curve(n)
    if pub is None:
        pub = curve.g
    if p0 is None:
        p0 = curve.g
    if n != curve.n_bits:
        raise ValueError("field width disagrees with the curve")

    def compute():
        mx = to_mont(p0[0], n, curve.p)
        my = to_mont(p0[1], n, curve.p)
        parts = [
            _alloc_summary(2 * n),
            _gate_summary(x=bin(mx).count("1") + bin(my).count("1")),
        ]
        for base in (curve.g, ec_neg(pub, curve)):
            for spec in scalar_windows(n, w_e, base, curve):
                parts.append(_alloc_summary(spec.width))
                parts.append(_ec_add_summary(spec, w_m))
                parts.append(_free_summary(spec.width))
        return revsim.CircuitSummary.sequence(parts)

    return _memo(("bundle", n, w_e, w_m, curve.p, pub, p0), compute)


def count_shor(n, w_e, w_m, curve=None, pub=None, p0=None):
    """Exact gate tally of the discrete-log circuit at any field width."""
    s = shor_count_bundle(n, w_e, w_m, curve=curve, pub=pub, p0=p0)
    b = s.counts
    return revsim.GateCounts(
        toffoli=b.toffoli,
        cnot_pairs=b.cnot_pairs,
        multi_cnot_ops=b.mcx_ops,
        x=b.x,
        cswap=b.cswap,
        alloc_high_water=s.peak,
        logical_depth=b.depth_slots,
    )
