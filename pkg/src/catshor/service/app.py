"""HTTP wrapper around the estimator, verifier and QEC sampler.

Run with ``uvicorn catshor.service.app:app``.  Infeasible parameter
points come back as 422 with the binding constraint named; every
response body is a deterministic function of the request.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from .. import qecsim, verify
from ..errormodel import ErrorParams
from ..estimator import (
    TABLE_COLUMNS,
    AlgoParams,
    InfeasibleError,
    emit_results_table,
    estimate,
    optimize,
)
from .schemas import (
    EstimateRequest,
    OptimizeRequest,
    QecSampleRequest,
    TableRequest,
    VerifyRequest,
)

app = FastAPI(title="catshor", version="1.0")


def _error_params(cfg):
    return ErrorParams(
        kappa_ratio=cfg.kappa_ratio, alpha_sq=1.0, cycle_time=cfg.cycle_ns * 1e-9
    )


def _infeasible(exc):
    return HTTPException(
        status_code=422, detail={"error": "infeasible", "binding": exc.binding, "message": str(exc)}
    )


@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/estimate")
def post_estimate(req: EstimateRequest):
    try:
        params = AlgoParams(
            n=req.n, w_e=req.w_e, w_m=req.w_m, alpha_sq=req.alpha_sq, d=req.d,
            factory_i=req.factory_i,
        )
        return estimate(params, _error_params(req.error)).to_dict()
    except InfeasibleError as exc:
        raise _infeasible(exc)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.post("/optimize")
def post_optimize(req: OptimizeRequest):
    grid = req.grid.as_grid() if req.grid is not None else None
    try:
        result = optimize(
            req.n, _error_params(req.error), grid=grid, workers=req.workers
        )
    except InfeasibleError as exc:
        raise _infeasible(exc)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return result.to_dict()


@app.post("/table")
def post_table(req: TableRequest):
    try:
        rows = emit_results_table(
            req.n_list,
            _error_params(req.error),
            full_search=req.full_search,
            workers=req.workers,
        )
    except InfeasibleError as exc:
        raise _infeasible(exc)
    return {
        "schema": "catshor/results_table/v1",
        "columns": list(TABLE_COLUMNS),
        "rows": rows,
    }


@app.post("/qec-sample")
def post_qec_sample(req: QecSampleRequest):
    params = ErrorParams(kappa_ratio=req.kappa_ratio, alpha_sq=req.alpha_sq)
    return qecsim.logical_z_rate_record(
        req.d, params, req.trials, master_seed=req.seed
    )


@app.post("/verify")
def post_verify(req: VerifyRequest):
    try:
        results = verify.run_suite(req.suite, prime=req.prime)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
    return verify.report(results)
