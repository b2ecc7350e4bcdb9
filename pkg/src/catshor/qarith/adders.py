"""Ripple-carry adder family built from MAJ / UMA blocks.

All registers are little endian.  The in-place target register is always
`dst`; `src` is restored bit for bit.  Gate budget per bit: 2 Toffolis for
the plain adder, 3 for the singly controlled one.
"""

from .. import revsim


def _maj(circ, carry, d, s):
    # after this block the src wire s holds the carry out of the column
    circ.cx(s, d)
    circ.cx(s, carry)
    circ.ccx(carry, d, s)


def _maj_inv(circ, carry, d, s):
    circ.ccx(carry, d, s)
    circ.cx(s, carry)
    circ.cx(s, d)


def _uma(circ, carry, d, s):
    circ.ccx(carry, d, s)
    circ.cx(s, carry)
    circ.cx(carry, d)


def _carry_wire(src, anc, i):
    # column i borrows the carry from the previous src wire; column 0 from anc
    return anc if i == 0 else src[i - 1]


def build_add(circ, src, dst):
    """dst += src.  len(dst) == len(src) adds modulo 2**m; len(dst) ==
    len(src) + 1 produces the true sum with carry into the top dst wire,
    which must start |0>."""
    m = len(src)
    if len(dst) == m:
        if m == 1:
            circ.cx(src[0], dst[0])
            return
        anc = circ.alloc_wire()
        for i in range(m - 1):
            _maj(circ, _carry_wire(src, anc, i), dst[i], src[i])
        circ.cx(src[m - 1], dst[m - 1])
        circ.cx(src[m - 2], dst[m - 1])
        for i in range(m - 2, -1, -1):
            _uma(circ, _carry_wire(src, anc, i), dst[i], src[i])
        circ.free_wire(anc)
    elif len(dst) == m + 1:
        anc = circ.alloc_wire()
        for i in range(m):
            _maj(circ, _carry_wire(src, anc, i), dst[i], src[i])
        circ.cx(src[m - 1], dst[m])
        for i in range(m - 1, -1, -1):
            _uma(circ, _carry_wire(src, anc, i), dst[i], src[i])
        circ.free_wire(anc)
    else:
        raise ValueError("dst must be as wide as src or one bit wider")


def build_ctrl_add(circ, ctrl, src, dst):
    """dst += src modulo 2**len(dst) when ctrl is set.  Carries are computed
    unconditionally; only the sum writes are controlled, so the control wire
    touches 3 gates per bit instead of gating the whole ripple."""
    m = len(src)
    if len(dst) != m:
        raise ValueError("controlled adder is modular only")
    if m == 1:
        circ.ccx(ctrl, src[0], dst[0])
        return
    anc = circ.alloc_wire()
    for i in range(m - 1):
        _maj(circ, _carry_wire(src, anc, i), dst[i], src[i])
    circ.ccx(ctrl, src[m - 1], dst[m - 1])
    circ.ccx(ctrl, src[m - 2], dst[m - 1])
    for i in range(m - 2, -1, -1):
        carry = _carry_wire(src, anc, i)
        circ.ccx(carry, dst[i], src[i])
        circ.ccx(ctrl, carry, dst[i])
        circ.cx(src[i], dst[i])
        circ.cx(src[i], carry)
    circ.free_wire(anc)


def build_ctrl_add_ext(circ, ctrl, src, dst):
    """dst += src when ctrl is set, with len(dst) >= len(src).  The source is
    zero extended through temporary wires so the carry propagates across the
    full target width."""
    m = len(src)
    if len(dst) < m:
        raise ValueError("target narrower than source")
    if len(dst) == m:
        build_ctrl_add(circ, ctrl, src, dst)
        return
    pad = circ.alloc_reg(len(dst) - m)
    wide = revsim.QReg(list(src) + list(pad))
    build_ctrl_add(circ, ctrl, wide, dst)
    circ.free_reg(pad)


def build_less_than_flip(circ, a, b, targets, ctrls=()):
    """Flip every target wire iff value(a) < value(b), optionally ANDed with
    extra (wire, negated) controls.  Both registers are restored.  Cost
    2m + 2*len(ctrls) Toffolis."""
    m = len(a)
    if len(b) != m:
        raise ValueError("width mismatch")
    for w in a:
        circ.x(w)
    anc = circ.alloc_wire()
    for i in range(m):
        _maj(circ, _carry_wire(b, anc, i), a[i], b[i])
    # b[m-1] now carries the borrow: set iff value(b) + ~value(a) wraps
    chain = [b[m - 1]]
    for wire, neg in ctrls:
        nxt = circ.alloc_wire()
        circ.ccx(chain[-1], wire, nxt, neg2=neg)
        chain.append(nxt)
    for t in targets:
        circ.cx(chain[-1], t)
    for j in range(len(chain) - 1, 0, -1):
        wire, neg = ctrls[j - 1]
        circ.ccx(chain[j - 1], wire, chain[j], neg2=neg)
        circ.free_wire(chain[j])
    for i in range(m - 1, -1, -1):
        _maj_inv(circ, _carry_wire(b, anc, i), a[i], b[i])
    circ.free_wire(anc)
    for w in a:
        circ.x(w)


def build_cswap_regs(circ, ctrl, x, y):
    """Swap registers x and y when ctrl is set; one Fredkin per bit pair,
    emitted as cx / ccx / cx."""
    if len(x) != len(y):
        raise ValueError("width mismatch")
    for xi, yi in zip(x, y):
        circ.cx(yi, xi)
        circ.ccx(ctrl, xi, yi)
        circ.cx(yi, xi)
