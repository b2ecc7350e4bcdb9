"""Reversible-circuit event stream: builders emit, sinks consume.

Events are plain tuples whose first element is an opcode:

    ("x", t)                      bit flip
    ("cx", c, t)                  CNOT
    ("ccx", c1, c2, t, n1, n2)    Toffoli; ni=True marks a control on |0>
    ("mcx", c, targets)           one control fanning out to k targets
    ("cswap", c, a, b)            Fredkin (kept in the IR; builders usually
                                  emit the 2-CNOT + 1-Toffoli decomposition)
    ("alloc", w)                  wire w enters the computation in |0>
    ("free", w)                   wire w leaves; must hold |0>
    ("note", tag)                 classical bookkeeping, zero quantum cost

`tag` is a tuple whose first element is a string.  Table-lookup builders
bracket their event blocks with ("load.begin", a, v, fixup) / ("load.end",
a, v) and the unload counterparts.  An unload block contains the exact
inverse-lookup events (the simulator executes them), but the counter
suppresses everything inside the bracket and charges the embedded `fixup`
bundle instead: measurement-based uncomputation replaces the inverse tree
by a fixup lookup over half the address bits.  Reversing a stream swaps
load brackets with unload brackets, so the reverse of a cheap unload is a
fully charged load; reversal is an involution.
"""

from __future__ import annotations

import attrs


class CircuitError(Exception):
    """Wire bookkeeping violation while emitting events."""


class SimulationError(Exception):
    """State-level violation: bad wire access or a dirty freed wire."""


# ---------------------------------------------------------------------------
# registers


class QReg:
    """Ordered list of wire ids, little endian: wires[0] is the LSB."""

    __slots__ = ("wires",)

    def __init__(self, wires):
        self.wires = list(wires)

    def __len__(self):
        return len(self.wires)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return QReg(self.wires[i])
        return self.wires[i]

    def __iter__(self):
        return iter(self.wires)

    def __add__(self, other):
        return QReg(self.wires + list(other))

    def __repr__(self):
        return f"QReg({self.wires!r})"


# ---------------------------------------------------------------------------
# stream reversal

_REVERSED_BRACKET = {
    "load.begin": "unload.end",
    "load.end": "unload.begin",
    "unload.begin": "load.end",
    "unload.end": "load.begin",
}


def reverse_events(events):
    """Exact inverse stream: reversed order, alloc<->free, brackets swapped.

    Every gate opcode is self-inverse, so gates pass through unchanged.
    """
    out = []
    for ev in reversed(events):
        op = ev[0]
        if op == "alloc":
            out.append(("free", ev[1]))
        elif op == "free":
            out.append(("alloc", ev[1]))
        elif op == "note":
            tag = ev[1]
            swapped = _REVERSED_BRACKET.get(tag[0])
            if swapped is not None:
                out.append(("note", (swapped,) + tag[1:]))
            else:
                out.append(ev)
        else:
            out.append(ev)
    return out


# ---------------------------------------------------------------------------
# circuit context: wire allocation + event routing


class Circuit:
    """Routes builder events to a sink while tracking live wires.

    The allocator is LIFO with lazy invalidation: freed ids are reused in
    reverse order, skipping ids that a replayed stream re-allocated in the
    meantime.  Replayed alloc/free events (from `replay`/`emit_reversed`)
    go through the same `emit`, keeping the live set consistent.
    """

    def __init__(self, sink=None):
        self._sinks = [sink]
        self._recorders = []
        self._next = 0
        self._live = set()
        self._stack = []

    # -- wire management

    @property
    def live_count(self):
        return len(self._live)

    def alloc_wire(self):
        while self._stack and self._stack[-1] in self._live:
            self._stack.pop()
        w = self._stack.pop() if self._stack else None
        if w is None:
            w = self._next
            self._next += 1
        self.emit(("alloc", w))
        return w

    def alloc_reg(self, n):
        return QReg([self.alloc_wire() for _ in range(n)])

    def free_wire(self, w):
        self.emit(("free", w))

    def free_reg(self, reg):
        # free high to low so LIFO reuse hands back ascending ids
        for w in reversed(reg.wires):
            self.free_wire(w)

    # -- event routing

    def emit(self, ev):
        op = ev[0]
        if op == "alloc":
            w = ev[1]
            if w in self._live:
                raise CircuitError(f"alloc of live wire {w}")
            self._live.add(w)
            if w >= self._next:
                self._next = w + 1
        elif op == "free":
            w = ev[1]
            if w not in self._live:
                raise CircuitError(f"free of dead wire {w}")
            self._live.remove(w)
            self._stack.append(w)
        for rec in self._recorders:
            rec.append(ev)
        sink = self._sinks[-1]
        if sink is not None:
            sink.consume(ev)

    def replay(self, events):
        for ev in events:
            self.emit(ev)

    def emit_reversed(self, events):
        self.replay(reverse_events(events))

    # -- gate helpers

    def x(self, t):
        self.emit(("x", t))

    def cx(self, c, t):
        if c == t:
            raise CircuitError("cx control equals target")
        self.emit(("cx", c, t))

    def ccx(self, c1, c2, t, neg1=False, neg2=False):
        if len({c1, c2, t}) != 3:
            raise CircuitError("ccx wires not distinct")
        self.emit(("ccx", c1, c2, t, neg1, neg2))

    def mcx(self, c, targets):
        targets = tuple(targets)
        if c in targets:
            raise CircuitError("mcx control among targets")
        self.emit(("mcx", c, targets))

    def cswap(self, c, a, b):
        if len({c, a, b}) != 3:
            raise CircuitError("cswap wires not distinct")
        self.emit(("cswap", c, a, b))

    def note(self, tag):
        self.emit(("note", tuple(tag)))

    # -- recording

    def record(self):
        """Tee: events keep flowing to the sink and are also captured."""
        return _Recording(self, detached=False)

    def record_detached(self):
        """Capture without executing: the sink is muted for the duration."""
        return _Recording(self, detached=True)


class _Recording:
    def __init__(self, circ, detached):
        self._circ = circ
        self._detached = detached
        self.events = []
        self._saved = None

    def __enter__(self):
        if self._detached:
            # a detached segment never happened: hide it from outer
            # recorders as well as from the sink
            self._saved = self._circ._recorders
            self._circ._recorders = [self.events]
            self._circ._sinks.append(None)
        else:
            self._circ._recorders.append(self.events)
        return self

    def __exit__(self, exc_type, exc, tb):
        if self._detached:
            self._circ._recorders = self._saved
            self._circ._sinks.pop()
        else:
            self._circ._recorders.pop()
        return False


# ---------------------------------------------------------------------------
# exact bit-vector simulation


class Simulator:
    """Executes event streams on classical basis states.

    `note_handler(sim, tag)`, when given, is called for every note event;
    it may poke wires (window preparation in replayed streams).
    """

    def __init__(self, note_handler=None):
        self._state = bytearray()
        self._alive = bytearray()
        self.note_handler = note_handler

    def _grow(self, w):
        need = w + 1 - len(self._state)
        if need > 0:
            self._state.extend(bytes(need))
            self._alive.extend(bytes(need))

    def consume(self, ev):
        self.run((ev,))

    def run(self, events):
        st = self._state
        alive = self._alive
        for ev in events:
            op = ev[0]
            if op == "ccx":
                _, c1, c2, t, n1, n2 = ev
                if (st[c1] ^ n1) and (st[c2] ^ n2):
                    st[t] ^= 1
            elif op == "cx":
                if st[ev[1]]:
                    st[ev[2]] ^= 1
            elif op == "x":
                st[ev[1]] ^= 1
            elif op == "mcx":
                if st[ev[1]]:
                    for t in ev[2]:
                        st[t] ^= 1
            elif op == "cswap":
                _, c, a, b = ev
                if st[c] and st[a] != st[b]:
                    st[a] ^= 1
                    st[b] ^= 1
            elif op == "alloc":
                w = ev[1]
                if w >= len(st):
                    self._grow(w)
                    st = self._state
                    alive = self._alive
                if alive[w]:
                    raise SimulationError(f"alloc of live wire {w}")
                alive[w] = 1
                st[w] = 0
            elif op == "free":
                w = ev[1]
                if not alive[w]:
                    raise SimulationError(f"free of dead wire {w}")
                if st[w]:
                    raise SimulationError(f"freed wire {w} is not |0>")
                alive[w] = 0
            elif op == "note":
                if self.note_handler is not None:
                    self.note_handler(self, ev[1])
            else:
                raise SimulationError(f"unknown opcode {op!r}")

    # -- classical access

    def peek(self, w):
        if not self._alive[w]:
            raise SimulationError(f"peek at dead wire {w}")
        return self._state[w]

    def poke(self, w, bit):
        if not self._alive[w]:
            raise SimulationError(f"poke at dead wire {w}")
        self._state[w] = 1 if bit else 0

    def read_reg(self, reg):
        val = 0
        for i, w in enumerate(reg):
            val |= self.peek(w) << i
        return val

    def write_reg(self, reg, value):
        for i, w in enumerate(reg):
            self.poke(w, (value >> i) & 1)

    @property
    def live_wires(self):
        return sum(self._alive)

    @property
    def live_wire_ids(self):
        return [w for w, a in enumerate(self._alive) if a]


class Recorder:
    """Sink that stores the raw event stream."""

    def __init__(self):
        self.events = []

    def consume(self, ev):
        self.events.append(ev)


# ---------------------------------------------------------------------------
# counting


@attrs.frozen
class CountsBundle:
    """Raw op tallies; cnot1 are single-target CNOTs, mcx_pairs the summed
    fan-out of multi-target ones."""

    toffoli: int = 0
    cnot1: int = 0
    mcx_ops: int = 0
    mcx_pairs: int = 0
    x: int = 0
    cswap: int = 0
    alloc_ops: int = 0
    free_ops: int = 0

    def __add__(self, other):
        return CountsBundle(*(a + b for a, b in zip(attrs.astuple(self), attrs.astuple(other))))

    def scaled(self, k):
        return CountsBundle(*(a * k for a in attrs.astuple(self)))

    def swapped_alloc_free(self):
        return attrs.evolve(self, alloc_ops=self.free_ops, free_ops=self.alloc_ops)

    @property
    def cnot_pairs(self):
        return self.cnot1 + self.mcx_pairs

    @property
    def depth_slots(self):
        # sequential logical-operation slots: everything except X and notes
        return self.cnot1 + self.mcx_ops + self.toffoli + self.cswap + self.alloc_ops + self.free_ops


@attrs.frozen
class GateCounts:
    """Public gate tally of a streamed or composed circuit."""

    toffoli: int
    cnot_pairs: int
    multi_cnot_ops: int
    x: int
    cswap: int
    alloc_high_water: int
    logical_depth: int


@attrs.frozen
class CircuitSummary:
    """Composable cost summary of a circuit block.

    `delta` is the net live-wire change, `peak` the high-water mark of
    live wires relative to the block's entry level.
    """

    counts: CountsBundle
    delta: int
    peak: int

    @staticmethod
    def empty():
        return CircuitSummary(CountsBundle(), 0, 0)

    def then(self, other):
        return CircuitSummary(
            self.counts + other.counts,
            self.delta + other.delta,
            max(self.peak, self.delta + other.peak),
        )

    def reversed_(self):
        return CircuitSummary(
            self.counts.swapped_alloc_free(),
            -self.delta,
            self.peak - self.delta,
        )

    def repeated(self, k):
        if k == 0:
            return CircuitSummary.empty()
        return CircuitSummary(
            self.counts.scaled(k),
            self.delta * k,
            self.peak + max(0, (k - 1) * self.delta),
        )

    @staticmethod
    def sequence(parts):
        out = CircuitSummary.empty()
        for p in parts:
            out = out.then(p)
        return out


class Counter:
    """Streaming tally sink with live-wire high-water tracking.

    Inside an unload bracket, gate and alloc/free tallies are suppressed
    (live tracking continues) and the bracket's embedded fixup bundle is
    charged once instead.
    """

    def __init__(self):
        self.toffoli = 0
        self.cnot1 = 0
        self.mcx_ops = 0
        self.mcx_pairs = 0
        self.x = 0
        self.cswap_ops = 0
        self.alloc_ops = 0
        self.free_ops = 0
        self._fixup = CountsBundle()
        self._cur = 0
        self._peak = 0
        self._suppress = 0

    def consume(self, ev):
        op = ev[0]
        if op == "alloc":
            self._cur += 1
            if self._cur > self._peak:
                self._peak = self._cur
            if not self._suppress:
                self.alloc_ops += 1
        elif op == "free":
            self._cur -= 1
            if not self._suppress:
                self.free_ops += 1
        elif op == "note":
            tag = ev[1]
            kind = tag[0]
            if kind == "unload.begin":
                if self._suppress == 0:
                    self._fixup = self._fixup + CountsBundle(*tag[3])
                self._suppress += 1
            elif kind == "unload.end":
                self._suppress -= 1
        elif not self._suppress:
            if op == "ccx":
                self.toffoli += 1
            elif op == "cx":
                self.cnot1 += 1
            elif op == "mcx":
                self.mcx_ops += 1
                self.mcx_pairs += len(ev[2])
            elif op == "x":
                self.x += 1
            elif op == "cswap":
                self.cswap_ops += 1

    def bundle(self):
        own = CountsBundle(
            toffoli=self.toffoli,
            cnot1=self.cnot1,
            mcx_ops=self.mcx_ops,
            mcx_pairs=self.mcx_pairs,
            x=self.x,
            cswap=self.cswap_ops,
            alloc_ops=self.alloc_ops,
            free_ops=self.free_ops,
        )
        return own + self._fixup

    def summary(self):
        return CircuitSummary(self.bundle(), self._cur, self._peak)

    def gate_counts(self):
        b = self.bundle()
        return GateCounts(
            toffoli=b.toffoli,
            cnot_pairs=b.cnot_pairs,
            multi_cnot_ops=b.mcx_ops,
            x=b.x,
            cswap=b.cswap,
            alloc_high_water=self._peak,
            logical_depth=b.depth_slots,
        )


def summarize(build, n_pre=0):
    """Stream `build(circ, pre)` into a Counter and return its summary.

    `n_pre` wires are allocated before counting starts, so the summary's
    peak is relative to a block that receives existing registers.
    """
    counter = Counter()
    circ = Circuit(None)
    pre = circ.alloc_reg(n_pre) if n_pre else QReg([])
    circ._sinks[-1] = counter
    build(circ, pre)
    return counter.summary()
