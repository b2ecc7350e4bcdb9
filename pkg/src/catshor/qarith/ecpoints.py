"""Elliptic-curve windowed addition into classical-point tables.

One window of the scalar selects a precomputed multiple of the base point
through its low index bits; the top index bit is a sign, realized by a
conditional two's-complement of the address and a conditional negation of
the looked-up y, so a w-bit window only stores 2**(w-1) points.  Each
window therefore adds (i - 2**(w-1)) * 2**shift * base; the accumulated
constant offset is known classically and removed downstream.

The addition itself follows the slope algebra: subtract the table point,
divide to get the slope, clear the old y against the slope identity, form
the new coordinates, clear the slope by the mirrored division, subtract
the table point again and negate.  Only the generic case is implemented;
callers exclude neutral operands, equal x coordinates and the centre index
i = 2**(w-1).
"""

from .. import revsim
from ..ecc import scalar_windows
from ..numtheory import to_mont
from .division import build_mod_div
from .lookup import build_load, build_unload
from .modular import build_mod_add, build_mod_sub
from .montgomery import (
    build_mont_clean_mul,
    build_mont_square_subtract,
)
from .semiclassical import build_ctrl_const_add, build_mod_negate


def ec_tables(spec):
    """Montgomery-encoded (x||y) and 3x lookup tables for one window."""
    n = spec.curve.n_bits
    p = spec.curve.p
    xy = []
    x3 = []
    for pt in spec.table_points():
        if pt is None:
            # neutral entries are stored all-zero; addresses selecting them
            # are non-generic and excluded by callers
            xy.append(0)
            x3.append(0)
            continue
        mx = to_mont(pt[0], n, p)
        my = to_mont(pt[1], n, p)
        xy.append(mx | (my << n))
        x3.append(to_mont(3 * pt[0] % p, n, p))
    return xy, x3


def _negate_index(circ, sign, low):
    """low <- (2**len(low) - low) mod 2**len(low) when sign is clear."""
    if not low:
        return
    circ.x(sign)
    for wire in low:
        circ.cx(sign, wire)
    build_ctrl_const_add(circ, sign, revsim.QReg(low), 1)
    circ.x(sign)


def _ctrl_negate_y(circ, sign, yt, p):
    # sign clear selects the mirrored point
    circ.x(sign)
    build_mod_negate(circ, yt, p, ctrl=sign)
    circ.x(sign)


def build_ec_add_lookup(circ, idx, acc_x, acc_y, spec, w_m, tables=None):
    """Add the table point selected by idx into (acc_x, acc_y), both
    Montgomery encoded.  idx is restored; no scratch survives."""
    curve = spec.curve
    n = curve.n_bits
    p = curve.p
    if len(idx) != spec.width:
        raise ValueError("index register width mismatch")
    low = list(idx)[: spec.width - 1]
    sign = idx[spec.width - 1]
    tbl_xy, tbl_3x = tables if tables is not None else ec_tables(spec)
    addr = revsim.QReg(low)

    _negate_index(circ, sign, low)
    val = circ.alloc_reg(2 * n)
    xt = revsim.QReg(list(val)[:n])
    yt = revsim.QReg(list(val)[n:])
    build_load(circ, addr, val, tbl_xy)
    _ctrl_negate_y(circ, sign, yt, p)
    build_mod_sub(circ, xt, acc_x, p)
    build_mod_sub(circ, yt, acc_y, p)
    _ctrl_negate_y(circ, sign, yt, p)
    build_unload(circ, addr, val, tbl_xy)
    circ.free_reg(val)

    # acc now holds the differences; slope, then clear the old y through
    # the line equation
    lam = build_mod_div(circ, acc_x, acc_y, p, w_m)
    with circ.record_detached() as rec:
        build_mont_clean_mul(circ, acc_x, lam, p, w_m, out=acc_y)
    circ.emit_reversed(rec.events)

    val3 = circ.alloc_reg(n)
    build_load(circ, addr, val3, tbl_3x)
    build_mod_add(circ, val3, acc_x, p)
    build_unload(circ, addr, val3, tbl_3x)
    circ.free_reg(val3)

    build_mont_square_subtract(circ, lam, p, w_m, target=acc_x)
    build_mont_clean_mul(circ, acc_x, lam, p, w_m, out=acc_y)
    build_mod_div(circ, acc_x, acc_y, p, w_m, out=lam)
    circ.free_reg(lam)

    val = circ.alloc_reg(2 * n)
    xt = revsim.QReg(list(val)[:n])
    yt = revsim.QReg(list(val)[n:])
    build_load(circ, addr, val, tbl_xy)
    _ctrl_negate_y(circ, sign, yt, p)
    build_mod_sub(circ, xt, acc_x, p)
    build_mod_sub(circ, yt, acc_y, p)
    _ctrl_negate_y(circ, sign, yt, p)
    build_unload(circ, addr, val, tbl_xy)
    circ.free_reg(val)

    build_mod_negate(circ, acc_x, p)
    _negate_index(circ, sign, low)


def build_ec_scalar_mul(circ, k, acc_x, acc_y, n_e, w_e, w_m, base, curve, label=0):
    """Windowed k * base accumulation with a classical scalar: each window
    index register exists only around its addition, bracketed by prep and
    clear notes so a phase-kickback harness can drive the bits."""
    for j, spec in enumerate(scalar_windows(n_e, w_e, base, curve)):
        value = (k >> spec.shift) & ((1 << spec.width) - 1)
        idx = circ.alloc_reg(spec.width)
        circ.note(("window.prep", label, j, tuple(idx), value))
        for bit in range(spec.width):
            if (value >> bit) & 1:
                circ.x(idx[bit])
        build_ec_add_lookup(circ, idx, acc_x, acc_y, spec, w_m)
        for bit in range(spec.width):
            if (value >> bit) & 1:
                circ.x(idx[bit])
        circ.note(("window.clear", label, j, tuple(idx), value))
        circ.free_reg(idx)


def scalar_mul_offset(n_e, w_e, base, curve):
    """The classical translation added by the sign-window trick:
    -sum_j 2**(shift_j + w_j - 1) * base."""
    from ..ecc import ec_neg, scalar_mul

    total = 0
    for spec in scalar_windows(n_e, w_e, base, curve):
        total += 1 << (spec.shift + spec.width - 1)
    return ec_neg(scalar_mul(total % curve.r, base, curve), curve)
