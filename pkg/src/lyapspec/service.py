"""HTTP front end: the four operations as JSON endpoints.

Run with:  uvicorn lyapspec.service:app
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import ops
from .errors import CylinderBudgetError, DomainError, InvalidMapError
from .schemas import (
    BifurcationRequest,
    BifurcationResponse,
    BowenRequest,
    BowenResponse,
    ClassifyRequest,
    ClassifyResponse,
    SpectrumRequest,
    SpectrumResponse,
)

app = FastAPI(
    title="lyapspec",
    description="Pressure, Lyapunov exponents and dimension-spectrum "
                "concavity for expanding full-branch interval maps.",
    version="0.1.0",
)


@app.exception_handler(InvalidMapError)
@app.exception_handler(DomainError)
@app.exception_handler(CylinderBudgetError)
async def _bad_input(request: Request, exc: Exception):
    return JSONResponse(status_code=422, content={"detail": str(exc)})


@app.get("/healthz")
def healthz():
    return {"status": "ok"}


@app.post("/spectrum", response_model=SpectrumResponse)
def spectrum(req: SpectrumRequest) -> SpectrumResponse:
    return ops.run_spectrum(req, grid=req.grid)


@app.post("/classify", response_model=ClassifyResponse)
def classify(req: ClassifyRequest) -> ClassifyResponse:
    return ops.run_classify(req)


@app.post("/bifurcation", response_model=BifurcationResponse)
def bifurcation(req: BifurcationRequest) -> BifurcationResponse:
    return ops.run_bifurcation(req.a)


@app.post("/bowen", response_model=BowenResponse)
def bowen(req: BowenRequest) -> BowenResponse:
    return ops.run_bowen(req)


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(app, host="127.0.0.1", port=8000)
