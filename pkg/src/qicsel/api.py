"""HTTP front end: ``uvicorn qicsel.api:app``."""
from __future__ import annotations

from typing import Literal

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from . import __version__, service
from .coupling import fixture
from .errors import QicselError
from .models import (
    BuildQicRequest,
    BuildQicResponse,
    CountsModel,
    CouplingModel,
    GenericResponse,
    LayoutsRequest,
    LayoutsResponse,
    PartitionRequest,
    ReportRequest,
    ScoreRequest,
    SelectRequest,
    SimulateRequest,
)

app = FastAPI(title="qicsel", version=__version__)

# HTTP status per error family; the body carries the CLI exit code.
_STATUS = {2: 400, 3: 409, 4: 500}


@app.exception_handler(QicselError)
async def _qicsel_error(request: Request, exc: QicselError) -> JSONResponse:
    return JSONResponse(
        status_code=_STATUS.get(exc.exit_code, 500),
        content={"error": type(exc).__name__, "exit_code": exc.exit_code, "detail": str(exc)},
    )


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.get("/couplings/{name}", response_model=CouplingModel)
def coupling(name: str):
    return fixture(name).to_dict()


@app.post("/qic", response_model=BuildQicResponse)
def build_qic(req: BuildQicRequest):
    return service.handle_build_qic(req)


@app.post("/layouts", response_model=LayoutsResponse)
def layouts(req: LayoutsRequest):
    return service.handle_layouts(req)


@app.post("/partition", response_model=GenericResponse)
def partition(req: PartitionRequest):
    return service.handle_partition(req)


@app.post("/simulate", response_model=CountsModel)
def simulate(req: SimulateRequest):
    return service.handle_simulate(req)


@app.post("/score", response_model=GenericResponse)
def score(req: ScoreRequest):
    return service.handle_score(req)


@app.post("/select")
def select(req: SelectRequest, format: Literal["json", "csv"] = "json"):
    report = service.handle_select(req)
    if format == "csv":
        return PlainTextResponse(report.to_csv(), media_type="text/csv")
    return report.to_dict()


@app.post("/report")
def report(req: ReportRequest, format: Literal["json", "csv"] = "json"):
    result = service.handle_report(req)
    if format == "csv":
        return PlainTextResponse(result.to_csv(), media_type="text/csv")
    return result.to_dict()
