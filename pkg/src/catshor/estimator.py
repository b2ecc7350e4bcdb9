"""End-to-end resource estimation and the exhaustive parameter search.

Gate tallies come from the composed circuit counter, error rates and the
processor footprint from the error model.  The timing model charges d+2
cycles per logical CNOT or multi-target CNOT, 5(d+2) per teleported
Toffoli, 7(d+2) per controlled swap and d per preparation or measurement,
with strictly sequential execution; the constants are a calibrated model
choice, centralized here.  The error budget multiplies the per-cycle
logical error rate by qubit-cycles (all logical qubits held for the whole
run), adds the consumed magic states' infidelity, and converts to a
success probability as exp(-E); expected time follows the geometric rule
t_exp = t_run / p_success.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import attrs

from .errormodel import (
    DEFAULT_CYCLE_TIME,
    PHASE_ALPHA_EXPONENT,
    PHASE_PREFACTOR,
    PHASE_THRESHOLD,
    ErrorParams,
    LayoutSpec,
    factory_lookup,
    factory_table,
    layout_qubits,
    logical_error_terms,
    logical_qubit_count,
)
from .qarith.shor import shor_count_bundle

# logical-operation durations in code cycles
CNOT_CYCLE_FACTOR = 1  # times (d + 2)
TOFFOLI_CYCLE_FACTOR = 5
CSWAP_CYCLE_FACTOR = 7
# preparations and measurements take d cycles flat

# points whose error budget exceeds this are treated as infeasible; below
# it exp(-E) is still a normal positive float
MAX_ERROR_BUDGET = 700.0
DEFAULT_MAX_FACTORIES = 1000

RESOURCE_ESTIMATE_SCHEMA = "catshor/resource_estimate/v1"
OPTIMIZATION_RESULT_SCHEMA = "catshor/optimization_result/v1"
RESULTS_TABLE_SCHEMA = "catshor/results_table/v1"


class InfeasibleError(Exception):
    """A parameter point (or a whole search) has no valid estimate.

    ``binding`` names the constraint that failed: "factories" when the
    magic-state demand exceeds the factory cap, "error budget" when
    exp(-E) underflows, "grid" when a search found no feasible point.
    """

    def __init__(self, message, binding):
        super().__init__(message)
        self.binding = binding


def _odd(instance, attribute, value):
    if value % 2 == 0 or value < 1:
        raise ValueError(f"{attribute.name} must be odd and >= 1, got {value}")


def _at_least_one(instance, attribute, value):
    if value < 1:
        raise ValueError(f"{attribute.name} must be >= 1, got {value}")


@attrs.frozen
class AlgoParams:
    """One point of the search space for an n-bit discrete logarithm."""

    n: int = attrs.field(validator=_at_least_one)
    w_e: int = attrs.field(validator=_at_least_one)
    w_m: int = attrs.field(validator=_at_least_one)
    alpha_sq: float = attrs.field(validator=_at_least_one)
    d: int = attrs.field(validator=_odd)
    factory_i: int = attrs.field(default=0)

    @property
    def n_e(self):
        # two exponent registers of n bits each
        return 2 * self.n

    def as_dict(self):
        out = attrs.asdict(self)
        out["n_e"] = self.n_e
        return out

    def key(self):
        # deterministic tie-break order of the optimizer
        return (self.w_e, self.w_m, self.alpha_sq, self.d, self.factory_i)


@attrs.frozen
class ResourceEstimate:
    """Full cost of one parameter point."""

    params: AlgoParams
    error_params: ErrorParams
    logical_qubits: int
    nb_factories: int
    factory_qubits: int
    physical_qubits: int
    t_run: float
    p_success: float
    t_exp: float
    breakdown: dict

    def to_dict(self):
        return {
            "schema": RESOURCE_ESTIMATE_SCHEMA,
            "params": self.params.as_dict(),
            "error_params": {
                "kappa_ratio": self.error_params.kappa_ratio,
                "alpha_sq": self.error_params.alpha_sq,
                "cycle_time": self.error_params.cycle_time,
            },
            "logical_qubits": self.logical_qubits,
            "nb_factories": self.nb_factories,
            "factory_qubits": self.factory_qubits,
            "physical_qubits": self.physical_qubits,
            "t_run": self.t_run,
            "p_success": self.p_success,
            "t_exp": self.t_exp,
            "breakdown": self.breakdown,
        }


def _op_tallies(bundle):
    """(toffoli, cnot-like ops, cswaps, prep/meas ops) of a count bundle."""
    b = bundle.counts
    return b.toffoli, b.cnot1 + b.mcx_ops, b.cswap, b.alloc_ops + b.free_ops


def total_cycles(bundle, d):
    toffoli, cnot_ops, cswaps, prep_ops = _op_tallies(bundle)
    return (
        cnot_ops * CNOT_CYCLE_FACTOR * (d + 2)
        + toffoli * TOFFOLI_CYCLE_FACTOR * (d + 2)
        + cswaps * CSWAP_CYCLE_FACTOR * (d + 2)
        + prep_ops * d
    )


def _factories_needed(toffoli, prep_time, acceptance, t_run):
    """Factories needed to deliver states at the mean consumption rate."""
    if toffoli == 0:
        return 0
    return max(1, math.ceil(toffoli * prep_time / (acceptance * t_run)))


def estimate(
    params,
    err,
    counts=None,
    factory_rows=None,
    max_factories=DEFAULT_MAX_FACTORIES,
):
    """ResourceEstimate at one parameter point.

    ``counts`` may carry a precomputed count bundle for params' (n, w_e,
    w_m); ``factory_rows`` overrides the builtin factory table.
    """
    if counts is None:
        counts = shor_count_bundle(params.n, params.w_e, params.w_m)
    eff = err.with_alpha_sq(params.alpha_sq)
    toffoli, cnot_ops, cswaps, prep_ops = _op_tallies(counts)
    d = params.d
    cyc_cnot = cnot_ops * CNOT_CYCLE_FACTOR * (d + 2)
    cyc_toffoli = toffoli * TOFFOLI_CYCLE_FACTOR * (d + 2)
    cyc_cswap = cswaps * CSWAP_CYCLE_FACTOR * (d + 2)
    cyc_prep = prep_ops * d
    cycles = cyc_cnot + cyc_toffoli + cyc_cswap + cyc_prep
    t_run = cycles * eff.cycle_time

    row = factory_lookup(params.factory_i, rows=factory_rows)
    prep_time = row.prep_time_at(eff.cycle_time)
    nb_f = _factories_needed(toffoli, prep_time, row.acceptance, t_run)
    if nb_f > max_factories:
        raise InfeasibleError(
            f"{nb_f} factories needed, cap is {max_factories}", binding="factories"
        )

    nlog = logical_qubit_count(params.n, params.w_e)
    phase, bit = logical_error_terms(eff, d)
    e_phase = nlog * cycles * phase
    e_bit = nlog * cycles * bit
    e_factory = toffoli * row.error_prob
    budget = e_phase + e_bit + e_factory
    if budget > MAX_ERROR_BUDGET:
        raise InfeasibleError(
            f"error budget {budget:.3g} exceeds {MAX_ERROR_BUDGET:g}",
            binding="error budget",
        )
    p_success = math.exp(-budget)
    t_exp = t_run / p_success

    layout = layout_qubits(LayoutSpec(nb_log=nlog, nb_factories=nb_f, d=d), row.d_f)
    breakdown = {
        "counts": {
            "toffoli": toffoli,
            "cnot_ops": cnot_ops,
            "cswap": cswaps,
            "prep_meas_ops": prep_ops,
        },
        "cycles": {
            "cnot": cyc_cnot,
            "toffoli": cyc_toffoli,
            "cswap": cyc_cswap,
            "prep_meas": cyc_prep,
            "total": cycles,
        },
        "error_budget": {
            "phase": e_phase,
            "bit": e_bit,
            "factory": e_factory,
            "total": budget,
        },
        "logical_error_rate": phase + bit,
        "layout": layout.as_dict(),
        "factory_row": attrs.asdict(row),
    }
    return ResourceEstimate(
        params=params,
        error_params=eff,
        logical_qubits=nlog,
        nb_factories=nb_f,
        factory_qubits=layout.factory_qubits,
        physical_qubits=layout.total,
        t_run=t_run,
        p_success=p_success,
        t_exp=t_exp,
        breakdown=breakdown,
    )


# ---------------------------------------------------------------------------
# exhaustive search

DEFAULT_GRID = {
    "w_e": tuple(range(1, 33)),
    "w_m": tuple(range(1, 11)),
    "alpha_sq": tuple(range(4, 31)),
    "d": tuple(range(3, 32, 2)),
    "factory_i": tuple(range(0, 15)),
}


@attrs.frozen
class OptimizationResult:
    params: AlgoParams
    estimate: ResourceEstimate
    objective_value: float
    n_points: int
    n_feasible: int

    def to_dict(self):
        return {
            "schema": OPTIMIZATION_RESULT_SCHEMA,
            "objective_value": self.objective_value,
            "n_points": self.n_points,
            "n_feasible": self.n_feasible,
            "estimate": self.estimate.to_dict(),
        }


def _grid_with_defaults(grid):
    g = dict(DEFAULT_GRID)
    if grid:
        g.update(grid)
    for d in g["d"]:
        if d % 2 == 0 or d < 1:
            raise ValueError(f"code distances must be odd and >= 1, got {d}")
    return g


def _layout_total(nb_log, nb_f, d, d_f):
    # plain-arithmetic copy of layout_qubits().total for the hot loop;
    # equality with the attrs version is asserted in tests
    width = 2 * d - 1
    nb_rout = (nb_log + nb_f + 1) // 2 + 1
    return (
        (nb_log + nb_rout) * width
        + 2 * (3 * (nb_log + nb_rout + 4 * nb_f) - 1)
        + nb_f * 5 * (2 * d_f - 1)
    )


def _scan_windows(n, err, grid, w_e_values, rows, max_factories, objective):
    """Best (objective, key) over the sub-grid with w_e in w_e_values."""
    ratio = err.kappa_ratio
    cycle_time = err.cycle_time
    row_info = [
        (r.i, r.d_f, r.error_prob, r.prep_time_at(cycle_time), r.acceptance)
        for r in rows
    ]
    alpha_grid = [
        (a2, a2**PHASE_ALPHA_EXPONENT * ratio / PHASE_THRESHOLD, math.exp(-2.0 * a2))
        for a2 in grid["alpha_sq"]
    ]
    best = None
    n_points = 0
    n_feasible = 0
    for w_e in w_e_values:
        nlog = logical_qubit_count(n, w_e)
        for w_m in grid["w_m"]:
            toffoli, cnot_ops, cswaps, prep_ops = _op_tallies(
                shor_count_bundle(n, w_e, w_m)
            )
            for d in grid["d"]:
                cycles = (
                    cnot_ops * CNOT_CYCLE_FACTOR * (d + 2)
                    + toffoli * TOFFOLI_CYCLE_FACTOR * (d + 2)
                    + cswaps * CSWAP_CYCLE_FACTOR * (d + 2)
                    + prep_ops * d
                )
                t_run = cycles * cycle_time
                qubit_cycles = nlog * cycles
                half_d = (d + 1) // 2
                bit_weight = 2.0 * (d - 1) * 0.5
                for a2, scaled, damp in alpha_grid:
                    e_data = qubit_cycles * (
                        PHASE_PREFACTOR * scaled**half_d + bit_weight * damp
                    )
                    n_points += len(row_info)
                    if e_data > MAX_ERROR_BUDGET:
                        continue
                    for i, d_f, err_prob, prep_time, acceptance in row_info:
                        nb_f = _factories_needed(toffoli, prep_time, acceptance, t_run)
                        if nb_f > max_factories:
                            continue
                        budget = e_data + toffoli * err_prob
                        if budget > MAX_ERROR_BUDGET:
                            continue
                        n_feasible += 1
                        t_exp = t_run / math.exp(-budget)
                        if objective is None:
                            value = a2 * _layout_total(nlog, nb_f, d, d_f) * t_exp
                        else:
                            value = objective(
                                estimate(
                                    AlgoParams(n, w_e, w_m, a2, d, i),
                                    err,
                                    factory_rows=rows,
                                    max_factories=max_factories,
                                )
                            )
                        cand = (value, (w_e, w_m, a2, d, i))
                        if best is None or cand < best:
                            best = cand
    return best, n_points, n_feasible


def optimize(
    n,
    err,
    objective=None,
    grid=None,
    workers=1,
    factory_rows=None,
    max_factories=DEFAULT_MAX_FACTORIES,
):
    """Exhaustive grid search; argmin of the objective with a lexicographic
    (w_e, w_m, alpha_sq, d, factory_i) tie-break.

    The default objective is alpha_sq * physical_qubits * t_exp; a custom
    one is called with each point's ResourceEstimate (slower path).
    Results are independent of ``workers``.
    """
    g = _grid_with_defaults(grid)
    rows = factory_table() if factory_rows is None else list(factory_rows)
    rows = [r for r in rows if r.i in set(g["factory_i"])]
    w_e_values = list(g["w_e"])
    parts = []
    if workers > 1 and len(w_e_values) > 1:
        chunks = [w_e_values[k::workers] for k in range(workers)]
        chunks = [c for c in chunks if c]
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            futures = [
                pool.submit(
                    _scan_windows, n, err, g, chunk, rows, max_factories, objective
                )
                for chunk in chunks
            ]
            parts = [f.result() for f in futures]
    else:
        parts = [_scan_windows(n, err, g, w_e_values, rows, max_factories, objective)]

    best = None
    n_points = 0
    n_feasible = 0
    for part_best, part_points, part_feasible in parts:
        n_points += part_points
        n_feasible += part_feasible
        if part_best is not None and (best is None or part_best < best):
            best = part_best
    if best is None:
        raise InfeasibleError("no feasible point in the search grid", binding="grid")
    value, (w_e, w_m, a2, d, i) = best
    params = AlgoParams(n=n, w_e=w_e, w_m=w_m, alpha_sq=a2, d=d, factory_i=i)
    est = estimate(params, err, factory_rows=rows, max_factories=max_factories)
    return OptimizationResult(
        params=params,
        estimate=est,
        objective_value=value,
        n_points=n_points,
        n_feasible=n_feasible,
    )


# ---------------------------------------------------------------------------
# results table

TABLE_COLUMNS = (
    "n",
    "n_e",
    "w_e",
    "w_m",
    "alpha_sq",
    "d",
    "factory_i",
    "nb_factories",
    "factory_qubits",
    "physical_qubits",
    "t_run",
    "t_exp",
    "logical_qubits",
)

# reference window widths per key size; the full (w_e, w_m) scan at every
# n would dominate table generation without changing the printed optima
CANONICAL_WINDOWS = {
    8: (9, 2),
    16: (11, 4),
    32: (13, 4),
    64: (15, 4),
    128: (17, 5),
    256: (18, 6),
    512: (20, 7),
}


def table_row(result):
    est = result.estimate
    p = result.params
    return {
        "n": p.n,
        "n_e": p.n_e,
        "w_e": p.w_e,
        "w_m": p.w_m,
        "alpha_sq": p.alpha_sq,
        "d": p.d,
        "factory_i": p.factory_i,
        "nb_factories": est.nb_factories,
        "factory_qubits": est.factory_qubits,
        "physical_qubits": est.physical_qubits,
        "t_run": est.t_run,
        "t_exp": est.t_exp,
        "logical_qubits": est.logical_qubits,
    }


def emit_results_table(
    n_list,
    err,
    full_search=False,
    workers=1,
    factory_rows=None,
    max_factories=DEFAULT_MAX_FACTORIES,
):
    """One optimized row per key size, in TABLE_COLUMNS order.

    Key sizes with a canonical window pair search only (alpha_sq, d,
    factory_i) unless ``full_search`` is set.
    """
    rows = []
    for n in n_list:
        grid = None
        if not full_search and n in CANONICAL_WINDOWS:
            w_e, w_m = CANONICAL_WINDOWS[n]
            grid = {"w_e": (w_e,), "w_m": (w_m,)}
        result = optimize(
            n,
            err,
            grid=grid,
            workers=workers,
            factory_rows=factory_rows,
            max_factories=max_factories,
        )
        rows.append(table_row(result))
    return rows
