"""Modular add / sub / double on an odd modulus p held classically.

The workhorse is a single-pass conditional reduction: on an m-wire register
holding z < 2p it computes the compare carry chain for z + (2**m - p), keeps
the top carry as the did-reduce flag, and folds the controlled subtraction
into the chain teardown, about 3m Toffolis.  The flag comes back garbage;
each caller clears it from data it still has (comparison or parity).
"""

from .. import revsim
from .adders import build_add, build_less_than_flip
from .semiclassical import (
    _bit,
    _carry_chain,
    _uncompute_carry,
    build_const_sub,
    build_ctrl_const_add,
    build_const_compare_flip,
)


def build_reduce_v3(circ, z, p, seed=None):
    """z < 2p on m wires becomes z mod p; returns the garbage did-reduce
    wire (z >= p).  A caller may lend a |0> wire via `seed` to hold the
    first carry, keeping the transient width flat; it comes back cleared."""
    m = len(z)
    if (p << 1) > (1 << m):
        raise ValueError("need 2p <= 2**m for the wrap to be faithful")
    k = (1 << m) - p
    lent = seed is not None
    carries = _carry_chain(circ, z, k, m, seed=seed)
    out = carries.pop(m)
    for i in range(m - 1, -1, -1):
        if i < m - 1:
            _uncompute_carry(circ, carries, z, k, i + 1, keep=lent and i + 1 == 1)
        if i > 0:
            circ.ccx(out, carries[i], z[i])
        if _bit(k, i):
            circ.cx(out, z[i])
    return out


def build_reduce_v1(circ, z, p):
    """Subtract-then-fix reduction: z -= p with wraparound, then add p back
    under the sign.  Returns the garbage flag (set iff no reduction
    happened)."""
    m = len(z)
    if (p << 1) > (1 << m):
        raise ValueError("need 2p <= 2**m")
    build_const_sub(circ, z, p)
    c = circ.alloc_wire()
    circ.cx(z[m - 1], c)
    build_ctrl_const_add(circ, c, z, p)
    return c


def build_reduce_v2(circ, z, p):
    """Compare-then-subtract reduction; returns the garbage flag
    (z >= p before the subtraction)."""
    m = len(z)
    if (p << 1) > (1 << m):
        raise ValueError("need 2p <= 2**m")
    c = circ.alloc_wire()
    build_const_compare_flip(circ, z, p, [c])
    build_ctrl_const_add(circ, c, z, (1 << m) - p)
    return c


def build_mod_add(circ, x, y, p):
    """y = (y + x) mod p for x, y in [0, p); x restored, no garbage left.
    The did-reduce flag is erased by comparing the result with x:
    y' < x iff the reduction fired."""
    n = len(x)
    if len(y) != n:
        raise ValueError("width mismatch")
    top = circ.alloc_wire()
    z = revsim.QReg(list(y) + [top])
    build_add(circ, x, z)
    flag = build_reduce_v3(circ, z, p)
    build_less_than_flip(circ, y, x, [flag])
    circ.free_wire(flag)
    circ.free_wire(top)


def build_mod_sub(circ, x, y, p):
    """y = (y - x) mod p; exact inverse of build_mod_add."""
    with circ.record_detached() as rec:
        build_mod_add(circ, x, y, p)
    circ.emit_reversed(rec.events)


def build_mod_double(circ, reg, p, spare=None):
    """Return a register holding 2*value mod p (p odd).  The doubling is a
    relabel onto one fresh low wire; the reduce flag is erased by the result
    parity and the stale top wire is freed |0>."""
    n = len(reg)
    low = circ.alloc_wire()
    z = revsim.QReg([low] + list(reg))
    flag = build_reduce_v3(circ, z, p, seed=spare)
    circ.cx(z[0], flag)
    circ.free_wire(flag)
    top = z[n]
    out = revsim.QReg(list(z)[:n])
    circ.free_wire(top)
    return out
