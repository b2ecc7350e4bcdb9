"""In-place arithmetic against classical constants.

The constant is folded into the gate pattern: a carry chain of one ancilla
per column is computed with Toffolis (an OR where the constant bit is set),
then consumed top-down so each carry is uncomputed before its column flips.
Roughly 2m Toffolis per addition, 3m when singly controlled.
"""


def _bit(c, i):
    return (c >> i) & 1


def _emit_carry(circ, prev, z, out, kbit):
    # out ^= carry(prev, z, kbit); kbit = 1 turns the AND into an OR
    if kbit:
        circ.ccx(prev, z, out, neg1=True, neg2=True)
        circ.x(out)
    else:
        circ.ccx(prev, z, out)


def _emit_carry_first(circ, z, out, kbit):
    if kbit:
        circ.cx(z, out)


def _carry_chain(circ, reg, c, count, seed=None):
    """Allocate and fill carry wires g[1..count]; g[i] is the carry into
    column i of reg + c.  `seed`, if given, is a caller-owned |0> wire used
    in place of g[1]."""
    carries = {}
    for i in range(1, count + 1):
        if i == 1 and seed is not None:
            g = seed
        else:
            g = circ.alloc_wire()
        if i == 1:
            _emit_carry_first(circ, reg[0], g, _bit(c, 0))
        else:
            _emit_carry(circ, carries[i - 1], reg[i - 1], g, _bit(c, i - 1))
        carries[i] = g
    return carries


def _uncompute_carry(circ, carries, reg, c, i, keep=False):
    """Clear carry i; `keep` skips the free for a caller-owned seed wire."""
    g = carries.pop(i)
    if i == 1:
        _emit_carry_first(circ, reg[0], g, _bit(c, 0))
    else:
        if _bit(c, i - 1):
            circ.x(g)
            circ.ccx(carries[i - 1], reg[i - 1], g, neg1=True, neg2=True)
        else:
            circ.ccx(carries[i - 1], reg[i - 1], g)
    if not keep:
        circ.free_wire(g)


def build_const_add(circ, reg, c):
    """reg += c modulo 2**len(reg)."""
    m = len(reg)
    c %= 1 << m
    if c == 0:
        return
    carries = _carry_chain(circ, reg, c, m - 1)
    for i in range(m - 1, 0, -1):
        if _bit(c, i):
            circ.x(reg[i])
        circ.cx(carries[i], reg[i])
        _uncompute_carry(circ, carries, reg, c, i)
    if _bit(c, 0):
        circ.x(reg[0])


def build_const_sub(circ, reg, c):
    """reg -= c modulo 2**len(reg)."""
    m = len(reg)
    build_const_add(circ, reg, (-c) % (1 << m))


def build_ctrl_const_add(circ, ctrl, reg, c):
    """reg += c modulo 2**len(reg) when ctrl is set.  Carries run
    unconditionally; only the column writes consult the control."""
    m = len(reg)
    c %= 1 << m
    if c == 0:
        return
    carries = _carry_chain(circ, reg, c, m - 1)
    for i in range(m - 1, 0, -1):
        if _bit(c, i):
            circ.cx(ctrl, reg[i])
        circ.ccx(ctrl, carries[i], reg[i])
        _uncompute_carry(circ, carries, reg, c, i)
    if _bit(c, 0):
        circ.cx(ctrl, reg[0])


def build_const_compare_flip(circ, reg, c, targets):
    """Flip every target iff value(reg) >= c; reg is restored."""
    m = len(reg)
    if c <= 0:
        for t in targets:
            circ.x(t)
        return
    if c >= (1 << m):
        return
    k = (1 << m) - c
    carries = _carry_chain(circ, reg, k, m)
    for t in targets:
        circ.cx(carries[m], t)
    for i in range(m, 0, -1):
        _uncompute_carry(circ, carries, reg, k, i)


def build_mod_negate(circ, reg, p, ctrl=None):
    """reg <- p - reg for values in (0, p); 0 maps to p, so callers must
    exclude it.  With ctrl the negation applies only when the wire is set."""
    m = len(reg)
    if ctrl is None:
        for w in reg:
            circ.x(w)
        build_const_add(circ, reg, (p + 1) % (1 << m))
    else:
        for w in reg:
            circ.cx(ctrl, w)
        build_ctrl_const_add(circ, ctrl, reg, (p + 1) % (1 << m))
