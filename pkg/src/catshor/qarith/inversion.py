"""In-place modular inversion by 2n reversible binary-GCD iterations.

State registers: v (the input, consumed), u, r, s plus three flag wires
f (still-iterating), a and b (scratch deductions).  Each iteration leaves
one garbage wire m recording which branch fired; the inverse of the whole
block returns them to |0>.  Halving v is a pure relabel; doubling r runs
the conditional-reduce relabel with b lent as the carry seed.  After the
loop r is negated so the register holds x**-1 * 2**2n mod p.
"""

from .. import revsim
from .adders import build_ctrl_add, build_less_than_flip, build_cswap_regs
from .lookup import build_multi_ctrl_not
from .modular import build_mod_double
from .semiclassical import build_const_add


def build_kaliski_step(circ, u, v, r, s, f, a, b, p):
    """One iteration; returns (v, r, m) with v and r relabelled and m the
    kept branch wire."""
    n = len(u)
    m = circ.alloc_wire()
    # finished-early detection: v hit zero while f still set
    build_multi_ctrl_not(circ, [(f, False)] + [(w, True) for w in v], m)
    circ.cx(m, f)
    # branch deduction from the low bits
    circ.ccx(f, u[0], a, neg2=True)
    build_multi_ctrl_not(circ, [(f, False), (a, True), (v[0], True)], m)
    circ.cx(a, b)
    circ.cx(m, b)
    # both operands odd: compare settles which gets the subtraction
    build_less_than_flip(circ, v, u, [a, m], ctrls=[(f, False), (b, True)])
    build_cswap_regs(circ, a, u, v)
    build_cswap_regs(circ, a, r, s)
    t = circ.alloc_wire()
    circ.ccx(f, b, t, neg2=True)
    with circ.record_detached() as rec:
        build_ctrl_add(circ, t, u, v)
    circ.emit_reversed(rec.events)
    build_ctrl_add(circ, t, r, s)
    circ.ccx(f, b, t, neg2=True)
    circ.free_wire(t)
    circ.cx(m, b)
    circ.cx(a, b)
    v = revsim.QReg(list(v)[1:] + [v[0]])
    r = build_mod_double(circ, r, p, spare=b)
    build_cswap_regs(circ, a, r, s)
    build_cswap_regs(circ, a, u, v)
    circ.x(s[0])
    circ.cx(s[0], a)
    circ.x(s[0])
    return v, r, m


def _inverse_prologue(circ, n, p):
    """Workspace prep: u = p, r = 0, s = 1, f = 1, scratch a and b."""
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
    return u, r, s, f, a, b


def _inverse_epilogue(circ, v, u, r, s, f, a, b, p):
    """Negate r and release the workspace against the loop's terminal
    state v = 0, u = 1, s = p, f = 0."""
    n = len(r)
    for w in r:
        circ.x(w)
    build_const_add(circ, r, (p + 1) % (1 << n))
    circ.free_reg(v)
    circ.x(u[0])
    circ.free_reg(u)
    for i in range(n):
        if (p >> i) & 1:
            circ.x(s[i])
    circ.free_reg(s)
    circ.free_wire(f)
    circ.free_wire(a)
    circ.free_wire(b)


def build_mod_inverse(circ, x, p):
    """Consume register x (value in [1, p)) and return (out, ms): out is a
    fresh labelling holding x**-1 * 2**2n mod p, ms the 2n garbage branch
    wires.  x's wire ids are freed; reversing the block restores them."""
    n = len(x)
    u, r, s, f, a, b = _inverse_prologue(circ, n, p)
    v = x
    ms = []
    for _ in range(2 * n):
        v, r, m = build_kaliski_step(circ, u, v, r, s, f, a, b, p)
        ms.append(m)
    _inverse_epilogue(circ, v, u, r, s, f, a, b, p)
    return r, ms
