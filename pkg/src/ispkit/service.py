"""HTTP/JSON facade for interactive steering (upload, render, curves, search).

All endpoints live under ``/v1``. State is in memory only: uploaded images
and search sessions, the latter evicted after 30 minutes idle.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field

import numpy as np
from fastapi import FastAPI, HTTPException, Request, Response
from pydantic import BaseModel

from . import imgio
from .decoder import DecoderWeights, decode, synth_weights
from .errors import ImageFormatError, IspKitError
from .params import IspParams, default_params
from .pipeline import FLOPS_PER_PIXEL, apply_pipeline, sample_curves
from .search import SearchConfig, SearchState, SearchTrace, make_mse_oracle, search_step

MAX_UPLOAD_BYTES = 32 * 1024 * 1024
SESSION_IDLE_SECONDS = 30 * 60


class RenderRequest(BaseModel):
    image_id: str
    task: list[float] | None = None
    params: dict | None = None


class SearchStartRequest(BaseModel):
    image_id: str
    reference_id: str
    t_init: list[float]
    s: float = 0.1
    K: int = 100


class SearchStepRequest(BaseModel):
    session: str
    n: int = 1


@dataclass
class _Session:
    image_id: str
    reference_id: str
    state: SearchState
    trace: SearchTrace
    oracle: object
    last_access: float = field(default_factory=time.monotonic)


def _params_header(params: IspParams) -> str:
    return json.dumps(params.to_dict(), separators=(",", ":"))


def _state_doc(state: SearchState) -> dict:
    return {
        "t": state.t.tolist(),
        "best_t": state.best_t.tolist(),
        "best_error": state.best_error if np.isfinite(state.best_error) else None,
        "coord": state.coord,
        "cycle_fails": state.cycle_fails,
        "consecutive_fails": state.consecutive_fails,
        "evaluations": state.evaluations,
        "finished": state.finished,
    }


def create_app(weights: DecoderWeights | None = None) -> FastAPI:
    weights = weights if weights is not None else synth_weights(42, 1.0)
    app = FastAPI(title="ispkit service")
    images: dict[str, np.ndarray] = {}
    sessions: dict[str, _Session] = {}
    lock = threading.Lock()

    def _evict_idle() -> None:
        now = time.monotonic()
        stale = [sid for sid, s in sessions.items() if now - s.last_access > SESSION_IDLE_SECONDS]
        for sid in stale:
            del sessions[sid]

    def _get_image(image_id: str) -> np.ndarray:
        try:
            return images[image_id]
        except KeyError:
            raise HTTPException(status_code=404, detail=f"unknown image {image_id!r}")

    def _resolve_params(task, params_doc) -> IspParams:
        if (task is None) == (params_doc is None):
            raise HTTPException(status_code=422, detail="give exactly one of task or params")
        try:
            if task is not None:
                return decode(np.asarray(task, dtype=float), weights)
            params = IspParams.from_dict(params_doc)
            params.validate()
            row_sums = params.ccm.sum(axis=1)
            if np.any(np.abs(row_sums - 1.0) > 1e-6):
                raise HTTPException(
                    status_code=422, detail=f"CCM rows must sum to 1, got {row_sums.tolist()}"
                )
            return params
        except IspKitError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.post("/v1/images")
    async def upload_image(request: Request):
        body = await request.body()
        if len(body) > MAX_UPLOAD_BYTES:
            raise HTTPException(status_code=413, detail="image exceeds 32 MiB")
        if not body.startswith(imgio.PNG_MAGIC):
            raise HTTPException(status_code=415, detail="only PNG uploads are supported")
        try:
            img = imgio.decode_image(body)
        except ImageFormatError as exc:
            raise HTTPException(status_code=415, detail=str(exc))
        image_id = uuid.uuid4().hex
        with lock:
            images[image_id] = img
        return {"image_id": image_id}

    @app.post("/v1/render")
    def render(req: RenderRequest):
        with lock:
            img = _get_image(req.image_id)
        params = _resolve_params(req.task, req.params)
        out = apply_pipeline(img, params)
        return Response(
            content=imgio.encode_png(out),
            media_type="image/png",
            headers={
                "X-Params": _params_header(params),
                "X-Flops-Per-Pixel": str(FLOPS_PER_PIXEL),
            },
        )

    @app.post("/v1/search/start")
    def search_start(req: SearchStartRequest):
        with lock:
            img = _get_image(req.image_id)
            ref = _get_image(req.reference_id)
            _evict_idle()
        if img.shape != ref.shape:
            raise HTTPException(status_code=422, detail="input and reference sizes differ")
        try:
            cfg = SearchConfig(t_init=np.asarray(req.t_init, dtype=float), step=req.s,
                               max_fails=req.K)
            state = SearchState.fresh(cfg)
        except IspKitError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        session_id = uuid.uuid4().hex
        with lock:
            sessions[session_id] = _Session(
                image_id=req.image_id,
                reference_id=req.reference_id,
                state=state,
                trace=SearchTrace(),
                oracle=make_mse_oracle(img, ref, weights),
            )
        return {"session": session_id, "state": _state_doc(state)}

    @app.post("/v1/search/step")
    def search_step_endpoint(req: SearchStepRequest):
        if req.n < 0:
            raise HTTPException(status_code=422, detail="n must be >= 0")
        with lock:
            _evict_idle()
            session = sessions.get(req.session)
            if session is None:
                raise HTTPException(status_code=404, detail=f"unknown session {req.session!r}")
            session.last_access = time.monotonic()
        if session.state.finished and req.n > 0:
            raise HTTPException(status_code=409, detail="session already terminated")
        before = len(session.trace)
        for _ in range(req.n):
            if session.state.finished:
                break
            session.state = search_step(session.state, session.oracle, session.trace)
        delta = [
            {
                "t": entry.t.tolist(),
                "error": entry.error,
                "improved": entry.improved,
                "diagonal_jump": entry.diagonal_jump,
            }
            for entry in session.trace.entries[before:]
        ]
        return {"state": _state_doc(session.state), "trace_delta": delta}

    @app.get("/v1/curves")
    def curves(task: str | None = None, params: str | None = None, n: int = 64):
        if (task is None) == (params is None):
            raise HTTPException(status_code=422, detail="give exactly one of task or params")
        try:
            if task is not None:
                p = decode(np.array([float(v) for v in task.split(",")]), weights)
            elif params == "init":
                p = default_params()
            else:
                p = IspParams.from_json(params)
            samples = sample_curves(p, n)
        except (IspKitError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {
            "x": samples.x.tolist(),
            "gamma": samples.gamma_curve.tolist(),
            "tone": samples.tone_curve.tolist(),
            "ccm_r": samples.ccm_r.tolist(),
            "ccm_g": samples.ccm_g.tolist(),
            "ccm_b": samples.ccm_b.tolist(),
        }

    return app
