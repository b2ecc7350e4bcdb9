"""Resource estimation and exact circuit verification for elliptic-curve
discrete logarithms on a repetition-coded cat-qubit processor.

Layers: ``revsim`` (reversible-circuit event streams, exact simulation
and composable cost summaries), ``qarith`` (the windowed arithmetic and
curve circuits), ``errormodel``/``qecsim`` (physical error rates, the
repetition-code layout and its Monte Carlo), ``estimator`` (end-to-end
costs and the exhaustive parameter search), plus ``verify``, ``cli`` and
``service`` front ends.
"""

from .ecc import SECP256K1, TOY_CURVE, CurveParams
from .errormodel import (
    ErrorParams,
    FactoryRow,
    LayoutSpec,
    factory_table,
    layout_qubits,
    logical_error_rate,
    logical_qubit_count,
    physical_errors,
)
from .estimator import (
    AlgoParams,
    InfeasibleError,
    OptimizationResult,
    ResourceEstimate,
    emit_results_table,
    estimate,
    optimize,
)
from .qarith.shor import build_shor_f, count_shor
from .qecsim import logical_z_rate, logical_z_rate_record
from .revsim import Circuit, Counter, GateCounts, Simulator

__version__ = "1.0.0"

__all__ = [
    "AlgoParams",
    "Circuit",
    "Counter",
    "CurveParams",
    "ErrorParams",
    "FactoryRow",
    "GateCounts",
    "InfeasibleError",
    "LayoutSpec",
    "OptimizationResult",
    "ResourceEstimate",
    "SECP256K1",
    "Simulator",
    "TOY_CURVE",
    "build_shor_f",
    "count_shor",
    "emit_results_table",
    "estimate",
    "factory_table",
    "layout_qubits",
    "logical_error_rate",
    "logical_qubit_count",
    "logical_z_rate",
    "logical_z_rate_record",
    "optimize",
    "physical_errors",
    "__version__",
]
