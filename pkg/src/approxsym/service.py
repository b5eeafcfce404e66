"""HTTP service exposing every report the engine produces.

All request parameters that feed exact arithmetic are accepted as strings
(or numbers) and parsed into rationals, so "0.1" means 1/10 exactly; floats
never enter the computation path.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Literal, Optional, Union

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel, Field, field_validator

from . import reports
from .grids import FIGURE_PARAMS, GridSpec, PARAM_SYMBOLS

RatLike = Union[str, int, float]


def to_fraction(value: RatLike) -> Fraction:
    if isinstance(value, float):
        value = repr(value)
    return Fraction(str(value))


class SymmetriesRequest(BaseModel):
    equation: Literal["kdv", "gardner"]
    degree: int = Field(default=3, ge=1, le=4)


class TablesRequest(BaseModel):
    which: Literal["commutator", "adjoint"]
    # test hook: corrupt one reference cell to demonstrate mismatch reporting
    corrupt_cell: Optional[tuple[int, int]] = None


class InvariantsRequest(BaseModel):
    # test hook: corrupt one table row to demonstrate the erratum path
    corrupt_case: Optional[tuple[int, int]] = None


class GridRequest(BaseModel):
    solution: Literal["galilean_unperturbed", "galilean_approximate",
                      "linear_drift"] = "galilean_approximate"
    x_range: tuple[RatLike, RatLike] = ("-3", "3")
    t_range: tuple[RatLike, RatLike] = ("0.1", "3")
    nx: int = 61
    nt: int = 30
    eps: RatLike = "0.1"
    params: dict[str, RatLike] = Field(
        default_factory=lambda: {k: str(v) for k, v in FIGURE_PARAMS.items()})

    @field_validator("params")
    @classmethod
    def _known_params(cls, v):
        unknown = set(v) - set(PARAM_SYMBOLS)
        if unknown:
            raise ValueError(f"unknown parameters: {sorted(unknown)}")
        return v

    def to_spec(self) -> GridSpec:
        try:
            return GridSpec(
                x_range=(to_fraction(self.x_range[0]),
                         to_fraction(self.x_range[1])),
                t_range=(to_fraction(self.t_range[0]),
                         to_fraction(self.t_range[1])),
                nx=self.nx, nt=self.nt,
                eps=to_fraction(self.eps),
                params={k: to_fraction(v) for k, v in self.params.items()},
            )
        except (ValueError, ZeroDivisionError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))


class ResidualScalingRequest(GridRequest):
    eps_list: list[RatLike] = Field(
        default_factory=lambda: ["0.1", "0.05", "0.025"])


app = FastAPI(
    title="approxsym",
    description="Exact first-order approximate symmetry engine for the "
                "perturbed Gardner equation",
    version="0.1.0",
)


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/symmetries")
def symmetries(req: SymmetriesRequest) -> dict:
    return reports.symmetries_report(req.equation, req.degree)


@app.post("/tables")
def tables(req: TablesRequest) -> dict:
    return reports.tables_report(req.which, corrupt_cell=req.corrupt_cell)


@app.post("/optimal")
def optimal() -> dict:
    return reports.optimal_report()


@app.post("/structure")
def structure() -> dict:
    return reports.structure_report()


@app.post("/invariants")
def invariants(req: InvariantsRequest | None = None) -> dict:
    corrupt = req.corrupt_case if req else None
    return reports.invariants_report(corrupt=corrupt)


@app.post("/galilean")
def galilean() -> dict:
    return reports.galilean_report()


@app.post("/grid", response_class=PlainTextResponse)
def grid(req: GridRequest) -> str:
    spec = req.to_spec()
    try:
        return reports.grid_report(spec, req.solution)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc))


@app.post("/residual-scaling")
def residual_scaling(req: ResidualScalingRequest) -> dict:
    spec = req.to_spec()
    try:
        eps_list = [to_fraction(e) for e in req.eps_list]
        return reports.residual_scaling_report(spec, eps_list, req.solution)
    except (ValueError, ZeroDivisionError) as exc:
        raise HTTPException(status_code=422, detail=str(exc))
