"""Table lookup into a value register by unary iteration over the address.

A lookup over a address bits costs 2*(2**a - 2) Toffolis, 2**a - 2 CNOTs,
2 X gates and a - 1 tree ancillas; one MultiCNOT fans each nonzero entry
into the value wires.  Zero entries are skipped.

Loads and unloads are wrapped in paired bracket notes.  The counting sink
suppresses everything inside an unload bracket and charges the fixup bundle
carried by the note instead: an unload can be rewritten offline as a
measure-and-fixup whose cost is a fresh lookup over ceil(a/2) address bits
into 2**floor(a/2) correction wires.  The simulator ignores the notes and
executes the bracketed gates exactly, so verification still covers them.
"""

import attrs

from .. import revsim


def build_multi_ctrl_not(circ, ctrls, target):
    """target ^= AND of (wire, negated) controls, via a 2(k-1) Toffoli
    ladder with k-1 transient wires."""
    ctrls = list(ctrls)
    if not ctrls:
        circ.x(target)
        return
    if len(ctrls) == 1:
        wire, neg = ctrls[0]
        if neg:
            circ.x(wire)
        circ.cx(wire, target)
        if neg:
            circ.x(wire)
        return
    chain = []
    (w1, n1), (w2, n2) = ctrls[0], ctrls[1]
    g = circ.alloc_wire()
    circ.ccx(w1, w2, g, neg1=n1, neg2=n2)
    chain.append(g)
    for wire, neg in ctrls[2:]:
        g = circ.alloc_wire()
        circ.ccx(chain[-1], wire, g, neg2=neg)
        chain.append(g)
    circ.cx(chain[-1], target)
    for j in range(len(chain) - 1, 0, -1):
        wire, neg = ctrls[j + 1]
        circ.ccx(chain[j - 1], wire, chain[j], neg2=neg)
        circ.free_wire(chain[j])
    circ.ccx(w1, w2, chain[0], neg1=n1, neg2=n2)
    circ.free_wire(chain[0])


def _fan_entry(circ, ctrl, value, entry):
    targets = [value[i] for i in range(len(value)) if (entry >> i) & 1]
    if targets:
        circ.mcx(ctrl, targets)


def _node(circ, ctrl, bits, value, entries):
    """Unary iteration under an incoming control; high half first."""
    if not bits:
        _fan_entry(circ, ctrl, value, entries[0])
        return
    top = bits[-1]
    half = 1 << (len(bits) - 1)
    anc = circ.alloc_wire()
    circ.ccx(ctrl, top, anc)
    _node(circ, anc, bits[:-1], value, entries[half:])
    circ.cx(ctrl, anc)
    _node(circ, anc, bits[:-1], value, entries[:half])
    circ.ccx(ctrl, top, anc, neg2=True)
    circ.free_wire(anc)


def _emit_tree(circ, addr, value, entries):
    a = len(addr)
    if len(entries) != (1 << a):
        raise ValueError("table must have 2**a entries")
    if a == 0:
        for i in range(len(value)):
            if (entries[0] >> i) & 1:
                circ.x(value[i])
        return
    top = addr[a - 1]
    half = 1 << (a - 1)
    if a == 1:
        _fan_entry(circ, top, value, entries[1])
        circ.x(top)
        _fan_entry(circ, top, value, entries[0])
        circ.x(top)
        return
    _node(circ, top, list(addr)[: a - 1], value, entries[half:])
    circ.x(top)
    _node(circ, top, list(addr)[: a - 1], value, entries[:half])
    circ.x(top)


def fixup_bundle(a, v):
    """Gate cost charged for an unload of a address bits into v value wires:
    a lookup over ceil(a/2) addresses of 2**floor(a/2) correction wires,
    all entries assumed nonzero and half the bits set."""
    a2 = (a + 1) // 2
    v2 = 1 << (a // 2)
    nonzero = (1 << a2) - 1 if a2 else 1
    pairs = nonzero * max(v2 // 2, 1)
    return _tree_bundle(a2, nonzero, pairs)


def _tree_bundle(a, nonzero, pairs):
    if a == 0:
        return revsim.CountsBundle(x=pairs)
    if a == 1:
        return revsim.CountsBundle(x=2, mcx_ops=nonzero, mcx_pairs=pairs)
    interior = (1 << a) - 2
    return revsim.CountsBundle(
        toffoli=2 * interior,
        cnot1=interior,
        x=2,
        mcx_ops=nonzero,
        mcx_pairs=pairs,
        alloc_ops=interior,
        free_ops=interior,
    )


def table_stats(entries, width):
    """(nonzero entry count, total set bits) with every value clipped to
    the register width."""
    mask = (1 << width) - 1
    nonzero = 0
    pairs = 0
    for e in entries:
        e &= mask
        if e:
            nonzero += 1
            pairs += bin(e).count("1")
    return nonzero, pairs


def lookup_summary(a, v, nonzero, pairs):
    """Exact load cost as a composable summary; the tree peak is the a - 1
    recursion ancillas."""
    counts = _tree_bundle(a, nonzero, pairs)
    peak = max(a - 1, 0)
    return revsim.CircuitSummary(counts=counts, delta=0, peak=peak)


def unload_summary(a, v):
    """Fixup-priced unload; no net wires, no transient (charged offline)."""
    return revsim.CircuitSummary(counts=fixup_bundle(a, v), delta=0, peak=0)


def _bracket(kind, a, v):
    fix = fixup_bundle(a, v)
    return (kind, a, v, attrs.astuple(fix))


def build_load(circ, addr, value, entries):
    """value ^= entries[addr], bracketed as a full-cost load."""
    a, v = len(addr), len(value)
    circ.note(_bracket("load.begin", a, v))
    _emit_tree(circ, addr, value, entries)
    circ.note(_bracket("load.end", a, v))


def build_unload(circ, addr, value, entries):
    """value ^= entries[addr] again, clearing it; bracketed so the counter
    swaps the gates for the measure-and-fixup price."""
    a, v = len(addr), len(value)
    with circ.record_detached() as rec:
        _emit_tree(circ, addr, value, entries)
    circ.note(_bracket("unload.begin", a, v))
    circ.emit_reversed(rec.events)
    circ.note(_bracket("unload.end", a, v))
