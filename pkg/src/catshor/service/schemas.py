"""Request and response models for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel, Field


class ErrorConfig(BaseModel):
    kappa_ratio: float = Field(default=1e-5, gt=0)
    cycle_ns: float = Field(default=500.0, gt=0)


class EstimateRequest(BaseModel):
    n: int = Field(ge=2)
    w_e: int = Field(ge=1)
    w_m: int = Field(ge=1)
    alpha_sq: float = Field(ge=1)
    d: int = Field(ge=1)
    factory_i: int = Field(ge=0)
    error: ErrorConfig = ErrorConfig()

    model_config = {"extra": "forbid"}


class GridOverride(BaseModel):
    w_e: list[int] | None = None
    w_m: list[int] | None = None
    alpha_sq: list[float] | None = None
    d: list[int] | None = None
    factory_i: list[int] | None = None

    model_config = {"extra": "forbid"}

    def as_grid(self):
        fields = ("w_e", "w_m", "alpha_sq", "d", "factory_i")
        grid = {k: tuple(v) for k in fields if (v := getattr(self, k)) is not None}
        return grid or None


class OptimizeRequest(BaseModel):
    n: int = Field(ge=2)
    error: ErrorConfig = ErrorConfig()
    grid: GridOverride | None = None
    workers: int = Field(default=1, ge=1)

    model_config = {"extra": "forbid"}


class TableRequest(BaseModel):
    n_list: list[int] = Field(default_factory=list)
    error: ErrorConfig = ErrorConfig()
    full_search: bool = False
    workers: int = Field(default=1, ge=1)

    model_config = {"extra": "forbid"}


class QecSampleRequest(BaseModel):
    d: int = Field(ge=1)
    alpha_sq: float = Field(ge=1)
    kappa_ratio: float = Field(default=1e-5, gt=0)
    trials: int = Field(ge=1)
    seed: int = 0

    model_config = {"extra": "forbid"}


class VerifyRequest(BaseModel):
    suite: str = "all"
    prime: int | None = None

    model_config = {"extra": "forbid"}
