"""FastAPI application exposing the cone toolkit."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..errors import HomconeError, OutsideCone, ParseError
from . import handlers
from . import schemas as S

app = FastAPI(
    title="homcone",
    description=(
        "Generalized Cholesky factorization, face identification, and PSD "
        "completion for homogeneous matrix cones."
    ),
    version="0.1.0",
)


@app.exception_handler(HomconeError)
async def homcone_error_handler(request: Request, exc: HomconeError):
    status = 422 if isinstance(exc, ParseError) else 400
    if isinstance(exc, OutsideCone):
        status = 409
    payload = S.ErrorResponse(error=type(exc).__name__, message=str(exc)).model_dump()
    if hasattr(exc, "kind"):
        payload["witness"] = {"kind": exc.kind, "vertices": sorted(exc.vertices)}
    return JSONResponse(status_code=status, content=payload)


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/recognize", response_model=S.RecognizeResponse)
def recognize(req: S.RecognizeRequest) -> S.RecognizeResponse:
    return handlers.do_recognize(req)


@app.post("/order", response_model=S.OrderResponse)
def order(req: S.OrderRequest) -> S.OrderResponse:
    return handlers.do_order(req)


@app.post("/factor", response_model=S.FactorResponse)
def factor(req: S.FactorRequest) -> S.FactorResponse:
    return handlers.do_factor(req)


@app.post("/face", response_model=S.FaceResponse)
def face(req: S.FaceRequest) -> S.FaceResponse:
    return handlers.do_face(req)


@app.post("/complete", response_model=S.CompleteResponse)
def complete(req: S.CompleteRequest) -> S.CompleteResponse:
    return handlers.do_complete(req)


@app.post("/reduce", response_model=S.ReduceResponse)
def reduce_problem(req: S.ReduceRequest) -> S.ReduceResponse:
    return handlers.do_reduce(req)


@app.post("/check-axioms", response_model=S.CheckAxiomsResponse)
def check_axioms(req: S.CheckAxiomsRequest) -> S.CheckAxiomsResponse:
    return handlers.do_check_axioms(req)
