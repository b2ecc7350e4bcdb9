"""Modular division y/x as inversion conjugated around a dirty product.

The quotient register is allocated up front so the forward and reverse
halves trace the same width profile; the dirty product of x**-1 and y is
copied out (optionally under a control), then product and inversion run
backwards, restoring x, y and every scratch wire.  Calling the block again
with `out` set to a register already holding y/x clears that register.
"""

from .inversion import build_mod_inverse
from .montgomery import build_mont_dirty_mul


def build_mod_div(circ, x, y, p, w, ctrl=None, out=None):
    """out ^= y * x**-1 * 2**n mod p (Montgomery-encoded quotient); returns
    out.  x and y are restored; nothing else is left behind."""
    n = len(x)
    if out is None:
        out = circ.alloc_reg(n)
    with circ.record() as rec:
        inv, _ = build_mod_inverse(circ, x, p)
        prod, _ = build_mont_dirty_mul(circ, inv, y, p, w)
    for i in range(n):
        if ctrl is None:
            circ.cx(prod[i], out[i])
        else:
            circ.ccx(ctrl, prod[i], out[i])
    circ.emit_reversed(rec.events)
    return out
