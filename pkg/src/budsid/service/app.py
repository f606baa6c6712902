"""HTTP front for the ops layer."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import ops
from .schemas import (
    BenchRequest,
    EvalRequest,
    GenRequest,
    QuantizeRequest,
    SweepRequest,
    TrainRequest,
)


def create_app() -> FastAPI:
    app = FastAPI(title="budsid", version="0.1.0")

    @app.exception_handler(ValueError)
    async def bad_value(_: Request, exc: ValueError) -> JSONResponse:
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(FileNotFoundError)
    async def missing_file(_: Request, exc: FileNotFoundError) -> JSONResponse:
        return JSONResponse(status_code=404, content={"detail": str(exc)})

    @app.get("/health")
    def health() -> dict:
        return {"status": "ok"}

    @app.post("/gen")
    def gen(req: GenRequest) -> dict:
        return ops.op_gen(req.kind, req.out_dir, req.participants, req.reps, req.seed)

    @app.post("/train")
    def train(req: TrainRequest) -> dict:
        return ops.op_train(
            req.dataset,
            req.model,
            req.out,
            seed=req.seed,
            epochs=req.epochs,
            batch_size=req.batch_size,
            learning_rate=req.learning_rate,
            folds=req.folds,
            n_before=req.n_before,
            n_after=req.n_after,
        )

    @app.post("/eval")
    def evaluate(req: EvalRequest) -> dict:
        return ops.op_eval(
            req.dataset,
            req.regime,
            req.out_dir,
            models=tuple(req.models),
            seed=req.seed,
            epochs=req.epochs,
            batch_size=req.batch_size,
            learning_rate=req.learning_rate,
            folds=req.folds,
            posture=req.posture,
            hand=req.hand,
        )

    @app.post("/sweep")
    def sweep(req: SweepRequest) -> dict:
        return ops.op_sweep(
            req.dataset,
            req.out_dir,
            seed=req.seed,
            epochs=req.epochs,
            batch_size=req.batch_size,
            learning_rate=req.learning_rate,
        )

    @app.post("/quantize")
    def quantize(req: QuantizeRequest) -> dict:
        return ops.op_quantize(req.model, req.out)

    @app.post("/bench")
    def bench(req: BenchRequest) -> dict:
        return ops.op_bench(req.model, n_runs=req.n_runs, seed=req.seed)

    return app
