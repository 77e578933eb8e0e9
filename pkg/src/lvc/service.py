"""FastAPI service wrapping the compression package.

The CLI talks to this app (in-process by default); it can also be served
standalone with uvicorn for multi-client use. Array payloads travel as
NPY files on the service host's filesystem; requests carry paths.
"""

from __future__ import annotations

from typing import List, Literal, Optional

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__, pipeline, reports
from .errors import IoFailure, LvcError

app = FastAPI(title="lvc", version=__version__)


@app.exception_handler(LvcError)
def _lvc_error_handler(request, exc: LvcError):
    status = 500 if isinstance(exc, IoFailure) else 422
    return JSONResponse(status_code=status,
                        content={"error": type(exc).__name__,
                                 "message": str(exc)})


class CompressRequest(BaseModel):
    features_path: str
    query_path: Optional[str] = None
    tokens_per_frame: int = Field(ge=1)
    pseudo_frames: int = Field(ge=1)
    heads: int = Field(default=1, ge=1)
    mode: Literal["query-attn", "query-attn-mh", "avg-pool"] = "query-attn"
    out_path: str
    sidecar_path: Optional[str] = None
    threads: Optional[int] = Field(default=None, ge=1)


class SampleIndicesRequest(BaseModel):
    total_frames: int = Field(ge=1)
    frames: int = Field(ge=1)


class SynthEvalRequest(BaseModel):
    trials: int = Field(default=1000, ge=1)
    frames: int = Field(default=64, ge=1)
    tokens_per_frame: int = Field(default=1, ge=1)
    dim: int = Field(default=64, ge=1)
    pseudo_frames: int = Field(default=4, ge=1)
    noise_sigma: float = Field(default=0.0, ge=0.0)
    seed: int = 0
    report_path: Optional[str] = None


class BenchRequest(BaseModel):
    sizes: List[str]
    repetitions: int = Field(default=5, ge=1)
    seed: int = 0
    pseudo_frames: int = Field(default=16, ge=1)
    report_path: Optional[str] = None
    threads: Optional[int] = Field(default=None, ge=1)


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/compress")
def compress_job(req: CompressRequest):
    return pipeline.run_compression_job(
        req.features_path, req.query_path,
        tokens_per_frame=req.tokens_per_frame,
        pseudo_frames=req.pseudo_frames, heads=req.heads, mode=req.mode,
        out_path=req.out_path, sidecar_path=req.sidecar_path,
        threads=req.threads)


@app.post("/sample-indices")
def sample_indices(req: SampleIndicesRequest):
    plan = pipeline.sample_frame_indices(req.total_frames, req.frames)
    return {"total_frames": plan.total_frames, "frames": plan.frames,
            "indices": plan.indices}


@app.post("/synth-eval")
def synth_eval(req: SynthEvalRequest):
    report = pipeline.run_synthetic_retrieval_eval(
        trials=req.trials, frames=req.frames,
        tokens_per_frame=req.tokens_per_frame, dim=req.dim,
        pseudo_frames=req.pseudo_frames, noise_sigma=req.noise_sigma,
        seed=req.seed)
    if req.report_path is not None:
        reports.write_report(req.report_path, report)
    return report


@app.post("/bench")
def bench(req: BenchRequest):
    report = pipeline.run_throughput_bench(
        sizes=req.sizes, repetitions=req.repetitions, seed=req.seed,
        pseudo_frames=req.pseudo_frames, threads=req.threads)
    if req.report_path is not None:
        reports.write_report(req.report_path, report)
    return report
