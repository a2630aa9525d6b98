"""FastAPI front end: one POST endpoint per computation, pydantic-validated.

Run with: uvicorn logdiff.service.app:app
Malformed payloads get FastAPI's 422; domain failures get 400 with an
ErrorBody naming the exception class.
"""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .. import __version__
from . import schemas
from .handlers import (
    DomainError,
    handle_decompose,
    handle_dsym,
    handle_hsym,
    handle_nf,
    handle_nu_basis,
    handle_nu_check,
    handle_omega,
    handle_solve_as,
    handle_witt,
)

app = FastAPI(
    title="logdiff",
    version=__version__,
    description="Exact differential-form and symbol computations over "
    "characteristic-p function fields.",
)


@app.exception_handler(DomainError)
async def _domain_error(request, exc: DomainError):
    body = schemas.ErrorBody(error=exc.code, message=str(exc))
    return JSONResponse(status_code=400, content=body.model_dump())


@app.exception_handler(ValueError)
async def _value_error(request, exc: ValueError):
    # payload content that fails conversion (bad expressions, wrong shapes)
    body = schemas.ErrorBody(error=type(exc).__name__, message=str(exc))
    return JSONResponse(status_code=422, content=body.model_dump())


@app.get("/v1/health")
def health():
    return {"status": "ok", "version": __version__, "schema_version": schemas.SCHEMA_VERSION}


@app.post("/v1/omega", response_model=schemas.OmegaResponse)
def omega(req: schemas.OmegaRequest):
    return handle_omega(req)


@app.post("/v1/nf", response_model=schemas.NfResponse)
def nf(req: schemas.NfRequest):
    return handle_nf(req)


@app.post("/v1/nu-check", response_model=schemas.NuCheckResponse, response_model_by_alias=True)
def nu_check(req: schemas.NuCheckRequest):
    return handle_nu_check(req)


@app.post("/v1/dsym", response_model=schemas.DsymResponse)
def dsym(req: schemas.DsymRequest):
    return handle_dsym(req)


@app.post("/v1/decompose", response_model=schemas.DecomposeResponse)
def decompose(req: schemas.DecomposeRequest):
    return handle_decompose(req)


@app.post("/v1/witt", response_model=schemas.WittResponse)
def witt(req: schemas.WittRequest):
    return handle_witt(req)


@app.post("/v1/hsym", response_model=schemas.HsymResponse)
def hsym(req: schemas.HsymRequest):
    return handle_hsym(req)


@app.post("/v1/nu-basis", response_model=schemas.NuBasisResponse)
def nu_basis(req: schemas.NuBasisRequest):
    return handle_nu_basis(req)


@app.post("/v1/solve-as", response_model=schemas.SolveASResponse)
def solve_as(req: schemas.SolveASRequest):
    return handle_solve_as(req)
