"""Windowed Montgomery product x*y*2**-n mod p.

Each window of w bits does w controlled additions of y into a shifted slice
of the accumulator, copies the low bits out as a garbage address, looks up
the precomputed multiple of p that zeroes them, adds it, unloads the table,
and relabels the cleared low wires to the top.  The dirty product keeps the
address copies (about n garbage wires); the clean variant copies the result
out and runs the dirty circuit backwards.
"""

from .. import revsim
from ..numtheory import mont_t_table
from .adders import build_add, build_ctrl_add_ext
from .lookup import build_load, build_unload
from .modular import build_reduce_v3


def window_widths(n, w):
    widths = [w] * (n // w)
    if n % w:
        widths.append(n % w)
    return widths


def _plain_window(circ, y, pos, wi, ctrl_for):
    return [ctrl_for(pos + l) for l in range(wi)], None


def _dirty_core(circ, y, p, widths, window_ctrls):
    """Accumulator loop shared by product and square.  window_ctrls(pos, wi)
    returns (control wires, cleanup) so squaring can substitute transient
    copies of the multiplier bits."""
    n = len(y)
    z = circ.alloc_reg(n + 1 + widths[0])
    garbage = []
    pos = 0
    for wi in widths:
        if len(z) > n + 1 + wi:
            # the previous window was wider; its rotated zeros shrink off
            for wub in reversed(list(z)[n + 1 + wi :]):
                circ.free_wire(wub)
            z = revsim.QReg(list(z)[: n + 1 + wi])
        ctrls, cleanup = window_ctrls(pos, wi)
        for l in range(wi):
            build_ctrl_add_ext(circ, ctrls[l], y, revsim.QReg(list(z)[l:]))
        if cleanup is not None:
            cleanup()
        g = circ.alloc_reg(wi)
        for j in range(wi):
            circ.cx(z[j], g[j])
        table = mont_t_table(wi, p)
        taux = circ.alloc_reg(n + wi)
        build_load(circ, g, taux, table)
        build_add(circ, taux, z)
        build_unload(circ, g, taux, table)
        circ.free_reg(taux)
        garbage.append(g)
        z = revsim.QReg(list(z)[wi:] + list(z)[:wi])
        pos += wi
    # rotated zeros sit on top; drop them, reduce, drop the result carry
    for wub in reversed(list(z)[n + 1 :]):
        circ.free_wire(wub)
    z = revsim.QReg(list(z)[: n + 1])
    flag = build_reduce_v3(circ, z, p)
    garbage.append(revsim.QReg([flag]))
    circ.free_wire(z[n])
    return revsim.QReg(list(z)[:n]), garbage


def build_mont_dirty_mul(circ, x, y, p, w):
    """Return (out, garbage): out holds x*y*2**-n mod p, garbage is the
    list of kept address registers plus the reduce flag.  x and y are
    restored."""
    n = len(y)
    if len(x) != n:
        raise ValueError("width mismatch")

    def ctrls(pos, wi):
        return [x[pos + l] for l in range(wi)], None

    return _dirty_core(circ, y, p, window_widths(n, w), ctrls)


def build_mont_dirty_square(circ, y, p, w):
    """Dirty y*y*2**-n mod p; multiplier bits are transient copies of y so
    the controlled additions never gate on a wire they also add."""
    n = len(y)

    def ctrls(pos, wi):
        copies = circ.alloc_reg(wi)
        for j in range(wi):
            circ.cx(y[pos + j], copies[j])

        def cleanup():
            for j in range(wi):
                circ.cx(y[pos + j], copies[j])
            circ.free_reg(copies)

        return list(copies), cleanup

    return _dirty_core(circ, y, p, window_widths(n, w), ctrls)


def build_mont_clean_mul(circ, x, y, p, w, out=None):
    """out ^= x*y*2**-n mod p with all scratch uncomputed.  Allocates out
    when not supplied; pass an existing register to target it (running the
    whole block in reverse then clears that register)."""
    if out is None:
        # allocated ahead of the record so the reversal can reclaim every
        # id the dirty pass freed
        out = circ.alloc_reg(len(y))
    with circ.record() as rec:
        prod, _ = build_mont_dirty_mul(circ, x, y, p, w)
    for i in range(len(y)):
        circ.cx(prod[i], out[i])
    circ.emit_reversed(rec.events)
    return out


def build_mont_clean_square(circ, y, p, w, out=None):
    if out is None:
        out = circ.alloc_reg(len(y))
    with circ.record() as rec:
        prod, _ = build_mont_dirty_square(circ, y, p, w)
    for i in range(len(y)):
        circ.cx(prod[i], out[i])
    circ.emit_reversed(rec.events)
    return out


def build_mont_square_subtract(circ, y, p, w, target):
    """target = (target - y*y*2**-n) mod p; the dirty square is folded away
    immediately after the subtraction."""
    from .modular import build_mod_sub

    with circ.record() as rec:
        prod, _ = build_mont_dirty_square(circ, y, p, w)
    build_mod_sub(circ, prod, target, p)
    circ.emit_reversed(rec.events)
