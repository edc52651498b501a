"""Read-only HTTP JSON API over an immutable in-memory framework.

All endpoints live under /v1. The framework document hash is attached to
every response as X-Framework-Hash so clients can detect staleness.
Sessions are held in memory and serialized per session id; the framework
itself is never mutated.
"""

from __future__ import annotations

import threading
from typing import Optional

from fastapi import FastAPI, HTTPException, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from nvsyn.evidence import RelationshipTier
from nvsyn.framework import Framework, UnknownState, build_confusable_pair
from nvsyn.inference import (
    TIER_PRESETS,
    DiagnosticSession,
    InconsistentObservation,
    NoKnownCues,
    Observation,
    run_inference,
)
from nvsyn.normalization import NormalizationDictionary
from nvsyn.powerlaw import analyze_counts, relationship_count_distribution


class ObservationBody(BaseModel):
    observed: list[str] = Field(default_factory=list)
    absent: list[str] = Field(default_factory=list)
    min_tier: Optional[str] = None


def _min_tier(value: Optional[str]) -> RelationshipTier:
    if value is None:
        return RelationshipTier.R6
    if value in TIER_PRESETS:
        return TIER_PRESETS[value]
    try:
        return RelationshipTier[value.upper()]
    except KeyError:
        raise HTTPException(
            400, detail={"code": "bad-min-tier", "message": f"unknown tier {value!r}"}
        ) from None


def create_app(fw: Framework, dictionary: NormalizationDictionary) -> FastAPI:
    app = FastAPI(title="nvsyn", version="1")
    fw_hash = fw.document_hash()
    sessions: dict[str, DiagnosticSession] = {}
    session_locks: dict[str, threading.Lock] = {}
    registry_lock = threading.Lock()

    @app.middleware("http")
    async def add_framework_hash(request: Request, call_next):
        response = await call_next(request)
        response.headers["X-Framework-Hash"] = fw_hash
        return response

    @app.exception_handler(HTTPException)
    async def http_error(request: Request, exc: HTTPException):
        detail = exc.detail
        if not isinstance(detail, dict):
            detail = {"code": "error", "message": str(detail)}
        return JSONResponse(
            status_code=exc.status_code,
            content=detail,
            headers={"X-Framework-Hash": fw_hash},
        )

    def observation(body: ObservationBody) -> Observation:
        try:
            return Observation.from_raw(body.observed, dictionary, absent=body.absent)
        except InconsistentObservation as exc:
            raise HTTPException(
                409, detail={"code": "inconsistent-observation", "message": str(exc)}
            ) from None

    @app.get("/v1/states")
    def list_states():
        return {
            "framework_hash": fw_hash,
            "states": [
                {
                    "state": s,
                    "papers": fw.index.state_papers[s],
                    "tier": fw.index.state_tier[s].code,
                    "cues": len(fw.index.cues_of_state(s)),
                }
                for s in fw.index.states()
            ],
        }

    @app.get("/v1/states/{name}")
    def get_state(name: str):
        if name not in fw.clusters:
            raise HTTPException(404, detail={"code": "unknown-state", "message": name})
        doc = fw.clusters[name].to_dict()
        doc["profile"] = fw.profiles[name].to_dict()
        return doc

    @app.get("/v1/cues")
    def list_cues():
        return {
            "framework_hash": fw_hash,
            "cues": [e.to_dict() for e in fw.vocabulary],
        }

    @app.get("/v1/cues/{name}")
    def get_cue(name: str):
        for entry in fw.vocabulary:
            if entry.canonical_cue == name:
                return entry.to_dict()
        raise HTTPException(404, detail={"code": "unknown-cue", "message": name})

    @app.get("/v1/pairs")
    def get_pair(a: str, b: str):
        try:
            pair = build_confusable_pair(fw.index, a, b)
        except UnknownState as exc:
            raise HTTPException(
                404, detail={"code": "unknown-state", "message": str(exc)}
            ) from None
        return pair.to_dict()

    @app.get("/v1/powerlaw")
    def powerlaw(bootstrap: int = 0, seed: int = 0):
        sample = relationship_count_distribution(fw.index)
        report = analyze_counts(
            sample, n_bootstrap=bootstrap, seed=seed, with_gof=bootstrap > 0
        )
        return report.to_dict()

    @app.post("/v1/infer")
    def infer(body: ObservationBody):
        obs = observation(body)
        try:
            result = run_inference(obs, fw, min_tier=_min_tier(body.min_tier))
        except NoKnownCues as exc:
            raise HTTPException(
                400, detail={"code": "no-known-cues", "message": str(exc)}
            ) from None
        return result.to_dict()

    @app.post("/v1/sessions", status_code=201)
    def create_session(min_tier: Optional[str] = None):
        sess = DiagnosticSession(framework=fw, min_tier=_min_tier(min_tier))
        with registry_lock:
            sessions[sess.session_id] = sess
            session_locks[sess.session_id] = threading.Lock()
        return {"session_id": sess.session_id, "framework_hash": fw_hash}

    def _session(session_id: str) -> tuple[DiagnosticSession, threading.Lock]:
        with registry_lock:
            sess = sessions.get(session_id)
            lock = session_locks.get(session_id)
        if sess is None:
            raise HTTPException(
                404, detail={"code": "unknown-session", "message": session_id}
            )
        return sess, lock

    @app.post("/v1/sessions/{session_id}/observations")
    def add_observation(session_id: str, body: ObservationBody):
        sess, lock = _session(session_id)
        delta = observation(body)
        with lock:
            try:
                result = sess.update(delta)
            except NoKnownCues as exc:
                raise HTTPException(
                    400, detail={"code": "no-known-cues", "message": str(exc)}
                ) from None
        return result.to_dict()

    @app.get("/v1/sessions/{session_id}")
    def get_session(session_id: str):
        sess, lock = _session(session_id)
        with lock:
            return sess.to_dict()

    return app
