"""Physical gate-error formulas, the repetition-code logical error rate,
magic-state factory parameters, and processor-layout qubit accounting.

All probabilities here are Pauli phase-flip (Z) probabilities unless a key
says otherwise; bit flips are exponentially suppressed in the photon number
and enter only through the ``bitflip`` entries and the second addend of
``logical_error_rate``.
"""

import csv
import math

import attrs

# Fitted ansatz constants for the repetition-code phase-flip rate.  Exact
# decimal literals; never re-fitted.
PHASE_PREFACTOR = 5.6e-2
PHASE_ALPHA_EXPONENT = 0.86
PHASE_THRESHOLD = 1.3e-2
BITFLIP_PREFACTOR_FAST = 0.50
BITFLIP_PREFACTOR_SLOW = 0.02

# A code cycle is five physical steps (ancilla prep, CNOT round, idle,
# CNOT round, ancilla measure), each lasting 1/kappa2.
CYCLE_STEPS = 5
DEFAULT_CYCLE_TIME = 500e-9

# Slow, fidelity-optimized gates run for 89/(alpha^2 kappa2) instead of
# 1/kappa2; combined with the linear photon-loss term this makes every slow
# phase-flip probability a function of kappa1/kappa2 alone.
SLOW_TIME_FACTOR = 89.0

GATE_TAGS = ("prep", "meas", "cnot_fast", "cnot_slow", "ccx")


def _positive(instance, attribute, value):
    if value <= 0:
        raise ValueError(f"{attribute.name} must be positive, got {value}")


@attrs.frozen
class ErrorParams:
    """Physical operating point: loss ratio, photon number, cycle duration."""

    kappa_ratio: float = attrs.field(validator=_positive)
    alpha_sq: float = attrs.field(validator=_positive)
    cycle_time: float = attrs.field(default=DEFAULT_CYCLE_TIME, validator=_positive)

    @property
    def kappa2(self):
        return CYCLE_STEPS / self.cycle_time

    @property
    def kappa1(self):
        return self.kappa_ratio * self.kappa2

    def with_alpha_sq(self, alpha_sq):
        return attrs.evolve(self, alpha_sq=alpha_sq)


def physical_errors(params, gate):
    """Per-gate Pauli-Z probability table for one of the GATE_TAGS.

    Keys: the individual Z components, ``total`` (their sum, the gate
    infidelity), and ``bitflip`` for the entangling gates.
    """
    a2 = params.alpha_sq
    ratio = params.kappa_ratio
    if gate in ("prep", "meas"):
        # duration 1/kappa2; only photon loss contributes
        p = a2 * ratio
        return {"z": p, "total": p}
    if gate == "cnot_fast":
        # duration 1/kappa2: loss term alpha^2*kappa1/kappa2, non-adiabatic
        # term pi^2/(64 alpha^2)
        z1 = a2 * ratio + math.pi**2 / (64.0 * a2)
        z2 = 0.5 * a2 * ratio
        return {
            "z1": z1,
            "z2": z2,
            "z1z2": z2,
            "total": z1 + 2.0 * z2,
            "bitflip": BITFLIP_PREFACTOR_FAST * math.exp(-2.0 * a2),
        }
    if gate == "cnot_slow":
        # duration 89/(alpha^2 kappa2): alpha^2 cancels everywhere
        loss = SLOW_TIME_FACTOR * ratio
        z1 = loss + math.pi**2 / (64.0 * SLOW_TIME_FACTOR)
        z2 = 0.5 * loss
        return {
            "z1": z1,
            "z2": z2,
            "z1z2": z2,
            "total": z1 + 2.0 * z2,
            "bitflip": BITFLIP_PREFACTOR_SLOW * math.exp(-2.0 * a2),
        }
    if gate == "ccx":
        # duration 89/(alpha^2 kappa2); the third-qubit family sees the
        # five-fold shorter effective interaction time
        loss = SLOW_TIME_FACTOR * ratio
        nonad = math.pi**2 / (128.0 * SLOW_TIME_FACTOR)
        z1 = loss + nonad
        # the target qubit interacts for a fifth of the gate duration
        z3 = (5.0 / 8.0) * loss / 5.0
        z13 = (1.0 / 8.0) * loss / 5.0
        return {
            "z1": z1,
            "z2": z1,
            "z3": z3,
            "z1z2": nonad,
            "z1z3": z13,
            "z2z3": z13,
            "z1z2z3": z13,
            "total": 2.0 * z1 + nonad + z3 + 3.0 * z13,
            "bitflip": BITFLIP_PREFACTOR_SLOW * math.exp(-2.0 * a2),
        }
    raise ValueError(f"unknown gate tag {gate!r}; expected one of {GATE_TAGS}")


def logical_error_terms(params, d):
    """(phase, bit) addends of the per-cycle logical error rate."""
    if d < 1 or d % 2 == 0:
        raise ValueError(f"code distance must be odd and >= 1, got {d}")
    scaled = params.alpha_sq**PHASE_ALPHA_EXPONENT * params.kappa_ratio
    phase = PHASE_PREFACTOR * (scaled / PHASE_THRESHOLD) ** ((d + 1) // 2)
    bit = 2.0 * (d - 1) * BITFLIP_PREFACTOR_FAST * math.exp(-2.0 * params.alpha_sq)
    return phase, bit


def logical_error_rate(params, d):
    """Per-cycle logical error probability of the distance-d repetition code."""
    phase, bit = logical_error_terms(params, d)
    return phase + bit


@attrs.frozen
class FactoryRow:
    """One operating point of the magic-state preparation pipeline.

    ``prep_time`` is quoted at the default cycle time (kappa2 = 1e7 /s) and
    scales linearly with the cycle time.  Rows with ``acceptance`` = 1 use the
    deterministic (majority-vote) scheme, the others the heralded one.
    """

    i: int
    d_f: int
    alpha_sq_f: float
    error_prob: float
    steps: int
    prep_time: float
    acceptance: float

    def prep_time_at(self, cycle_time):
        return self.prep_time * (cycle_time / DEFAULT_CYCLE_TIME)


_FACTORY_ROWS = (
    FactoryRow(0, 3, 3.75, 1.05e-3, 23, 54.7e-6, 0.84),
    FactoryRow(1, 3, 3.93, 1.02e-4, 29, 65.8e-6, 0.745),
    FactoryRow(2, 3, 5.32, 8.14e-5, 35, 58.7e-6, 0.66),
    FactoryRow(3, 5, 7.15, 4.62e-6, 46, 57.4e-6, 0.456),
    FactoryRow(4, 5, 8.18, 7.00e-7, 53, 57.8e-6, 0.362),
    FactoryRow(5, 5, 8.38, 5.36e-7, 60, 63.9e-6, 0.288),
    FactoryRow(6, 7, 9.71, 6.14e-8, 73, 67.1e-6, 0.148),
    FactoryRow(7, 7, 10.76, 8.40e-9, 81, 67.2e-6, 0.105),
    FactoryRow(8, 7, 11.06, 5.16e-9, 89, 71.8e-6, 0.0727),
    FactoryRow(9, 9, 11.64, 2.28e-9, 104, 79.7e-6, 0.0262),
    FactoryRow(10, 9, 12.83, 2.30e-10, 113, 78.6e-6, 0.0154),
    FactoryRow(11, 9, 13.44, 7.36e-11, 122, 81.0e-6, 0.00975),
    FactoryRow(12, 19, 17.35, 7.90e-12, 9576, 4.92e-3, 1.0),
    FactoryRow(13, 21, 18.94, 5.40e-13, 14112, 6.65e-3, 1.0),
    FactoryRow(14, 23, 20.53, 3.74e-14, 21344, 9.27e-3, 1.0),
)

_FACTORY_CSV_HEADER = [
    "i", "d_f", "alpha_sq_f", "error_prob", "steps", "prep_time", "acceptance",
]


def factory_table(csv_path=None):
    """The factory parameter rows, optionally overridden by a CSV file."""
    if csv_path is None:
        return list(_FACTORY_ROWS)
    with open(csv_path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != _FACTORY_CSV_HEADER:
            raise ValueError(
                f"factory CSV header must be {_FACTORY_CSV_HEADER}, got {header}"
            )
        rows = []
        for rec in reader:
            if not rec:
                continue
            rows.append(
                FactoryRow(
                    i=int(rec[0]),
                    d_f=int(rec[1]),
                    alpha_sq_f=float(rec[2]),
                    error_prob=float(rec[3]),
                    steps=int(rec[4]),
                    prep_time=float(rec[5]),
                    acceptance=float(rec[6]),
                )
            )
    return rows


def factory_lookup(i, rows=None):
    rows = _FACTORY_ROWS if rows is None else rows
    for row in rows:
        if row.i == i:
            return row
    raise IndexError(f"no factory row with index {i}")


def _non_negative(instance, attribute, value):
    if value < 0:
        raise ValueError(f"{attribute.name} must be >= 0, got {value}")


@attrs.frozen
class LayoutSpec:
    """Processor contents: logical data qubits, factories, code distance."""

    nb_log: int = attrs.field(validator=_non_negative)
    nb_factories: int = attrs.field(validator=_non_negative)
    d: int = attrs.field(validator=_positive)


@attrs.frozen
class LayoutBreakdown:
    nb_rout: int
    logical_qubits_phys: int
    routing_qubits: int
    side_qubits: int
    factory_qubits: int

    @property
    def total(self):
        return (
            self.logical_qubits_phys
            + self.routing_qubits
            + self.side_qubits
            + self.factory_qubits
        )

    def as_dict(self):
        out = attrs.asdict(self)
        out["total"] = self.total
        return out


def layout_qubits(spec, d_f):
    """Physical-qubit breakdown of the linear-bus layout.

    Each logical qubit is a horizontal line of d data + (d-1) ancilla qubits.
    Routing lines (one per pair of logical lines or factories, plus one) have
    the same width.  Each side bus holds 3 qubits per line with factories
    counting four lines each.  A factory is modeled as 5 logical-qubit
    equivalents at its own distance d_f (three data blocks, the GHZ ancilla
    line, one routing line); this calibrated footprint tracks the reference
    totals to within a few percent.
    """
    width = 2 * spec.d - 1
    nb_rout = (spec.nb_log + spec.nb_factories + 1) // 2 + 1
    side = 3 * (spec.nb_log + nb_rout + 4 * spec.nb_factories) - 1
    return LayoutBreakdown(
        nb_rout=nb_rout,
        logical_qubits_phys=spec.nb_log * width,
        routing_qubits=nb_rout * width,
        side_qubits=2 * side,
        factory_qubits=spec.nb_factories * 5 * (2 * d_f - 1),
    )


def logical_qubit_count(n, w_e):
    """Logical qubits consumed at the widest point of the algorithm."""
    return 9 * n + w_e + 4
