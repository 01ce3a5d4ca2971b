"""HTTP front end: the same runs and calculators as the CLI, as JSON.

POST /word            letters of a word prefix
POST /minimal-points  sweep a pair and return the sequence + summary
POST /verify          full verification report (optionally from replayed rows)
POST /bounds/evertse  subspace-count bound (log2 and natural log)
POST /bounds/measure  transcendence-measure values
GET  /healthz         liveness probe

Domain and parse failures map to 400, precision exhaustion to 409.
Lemma violations are data, not errors: the report arrives with status
200 and carries its verdicts.
"""

from __future__ import annotations

import json
import math
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .analysis import MeasureParams, evertse_count_log2, measure_w
from .errors import MinPointsError, PrecisionExhausted
from .minimal_points import MinimalPoint, format_json
from .runner import RunConfig, compute_points, run_verify, summarize_points
from .specparse import parse_rational, parse_word_id
from .words import word_letters

app = FastAPI(
    title="minpoints",
    description="Minimal-point sequences and verification of growth inequalities",
)


@app.exception_handler(MinPointsError)
async def _domain_error(request: Request, exc: MinPointsError) -> JSONResponse:
    status = 409 if isinstance(exc, PrecisionExhausted) else 400
    return JSONResponse(status_code=status, content={"detail": str(exc)})


class WordRequest(BaseModel):
    word_id: str
    n: int = Field(ge=1)


class WordResponse(BaseModel):
    word_id: str
    letters: list[int]


class RunRequest(BaseModel):
    xi: str
    eta: str = "sq:xi"
    x_max: int = Field(default=10000, ge=1)
    max_depth: int = Field(default=512, ge=4)
    threads: int = Field(default=1, ge=1)

    def to_config(self, **extra: object) -> RunConfig:
        raw = {
            "xi": self.xi,
            "eta": self.eta,
            "x_max": self.x_max,
            "max_depth": self.max_depth,
            "threads": self.threads,
        }
        raw.update(extra)
        return RunConfig.from_mapping(raw)


class PointRow(BaseModel):
    index: int
    X_i: int
    x0: int
    x1: int
    x2: int
    delta_lo: str
    delta_hi: str


class PointsResponse(BaseModel):
    points: list[PointRow]
    summary: dict


class VerifyRequest(RunRequest):
    lam: str = Field(default="3/5", alias="lambda")
    theta: str = "auto"
    conic: str = "parabola"
    replay_points: Optional[list[PointRow]] = None

    model_config = {"populate_by_name": True}


class VerifyResponse(BaseModel):
    run: dict
    exponent: Optional[dict] = None
    lemmas: dict
    bounds: Optional[dict] = None


class EvertseRequest(BaseModel):
    n: int = 3
    delta: str
    D: int = Field(alias="D")

    model_config = {"populate_by_name": True}


class EvertseResponse(BaseModel):
    evertse_log2: float
    evertse_ln: float


class MeasureRequest(BaseModel):
    c: str = "1"
    d: int
    H: int


class MeasureResponse(BaseModel):
    w: float
    log_bound: float


def _rows(points: list[MinimalPoint]) -> list[PointRow]:
    data = json.loads(format_json(points))
    return [PointRow(**row) for row in data["points"]]


def _rows_to_points(rows: list[PointRow]) -> list[MinimalPoint]:
    from .minimal_points import parse_json

    payload = json.dumps({"points": [row.model_dump() for row in rows]})
    return parse_json(payload)


@app.get("/healthz")
async def healthz() -> dict:
    return {"status": "ok"}


@app.post("/word", response_model=WordResponse)
def word(req: WordRequest) -> WordResponse:
    spec = parse_word_id(req.word_id)
    return WordResponse(word_id=spec.describe(), letters=word_letters(spec, req.n))


@app.post("/minimal-points", response_model=PointsResponse)
def minimal_points(req: RunRequest) -> PointsResponse:
    cfg = req.to_config()
    points = compute_points(cfg)
    return PointsResponse(points=_rows(points), summary=summarize_points(points))


@app.post("/verify", response_model=VerifyResponse)
def verify(req: VerifyRequest) -> VerifyResponse:
    cfg = req.to_config(**{"lambda": req.lam, "theta": req.theta, "conic": req.conic})
    points = _rows_to_points(req.replay_points) if req.replay_points else None
    report = run_verify(cfg, points=points)
    return VerifyResponse(**report)


@app.post("/bounds/evertse", response_model=EvertseResponse)
def bounds_evertse(req: EvertseRequest) -> EvertseResponse:
    log2_value = evertse_count_log2(req.n, parse_rational(req.delta), req.D)
    return EvertseResponse(evertse_log2=log2_value, evertse_ln=log2_value * math.log(2))


@app.post("/bounds/measure", response_model=MeasureResponse)
def bounds_measure(req: MeasureRequest) -> MeasureResponse:
    w, log_bound = measure_w(MeasureParams(parse_rational(req.c), req.d, req.H))
    return MeasureResponse(w=w, log_bound=log_bound)
