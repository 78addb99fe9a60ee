"""Live trial-conduct HTTP service.

One append-only JSONL event log per trial (fsynced, write-ahead): every
state change is validated, persisted, then applied to an in-memory
``TrialSession``.  Restart replays the logs, so the reconstructed state
is always exactly the persisted event history.  The per-patient uniform
draw comes from the trial's own counter-based assignment stream and is
recorded in the event log (auditable) but not returned by the enroll
response.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
import threading
import time
import uuid

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .allocation import Arm
from .engine import TrialConfig, TrialSession, TrialStatus
from .errors import DlmTrialError
from .rng import ASSIGNMENT_STREAM, CounterStream
from .stopping import BFPriors


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str,
                 field: str | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.field = field

    def response(self) -> JSONResponse:
        body = {"code": self.code, "message": self.message}
        if self.field is not None:
            body["field"] = self.field
        return JSONResponse(status_code=self.status, content=body)


_CONFIG_KEYS = {f.name for f in dataclasses.fields(TrialConfig)}
_BF_KEYS = {f.name for f in dataclasses.fields(BFPriors)}


def _config_from_payload(payload: dict) -> TrialConfig:
    if not isinstance(payload, dict):
        raise ApiError(422, "validation_error", "body must be a JSON object")
    kw = {}
    for key, value in payload.items():
        if key == "bf":
            if not isinstance(value, dict) or set(value) - _BF_KEYS:
                raise ApiError(422, "validation_error",
                               "bf must be an object with keys "
                               f"{sorted(_BF_KEYS)}", field="bf")
            try:
                kw["bf"] = BFPriors(**value)
            except DlmTrialError as err:
                raise ApiError(422, "validation_error", str(err), field="bf")
        elif key in _CONFIG_KEYS:
            kw[key] = tuple(value) if key == "m0" else value
        else:
            raise ApiError(422, "validation_error",
                           f"unknown config field {key!r}", field=key)
    try:
        return TrialConfig(**kw)
    except (DlmTrialError, TypeError, ValueError) as err:
        field = next((k for k in kw if k in str(err)), None)
        raise ApiError(422, "validation_error", str(err), field=field)


def _config_payload(cfg: TrialConfig) -> dict:
    d = dataclasses.asdict(cfg)
    d["rule"] = cfg.rule.value
    d["m0"] = list(cfg.m0)
    return d


class LiveTrial:
    """One trial's event log plus the replayed in-memory session."""

    def __init__(self, trial_id: str, cfg: TrialConfig, log_path: str):
        self.trial_id = trial_id
        self.cfg = cfg
        self.log_path = log_path
        self.session = TrialSession(cfg)
        self.us = CounterStream(cfg.seed, ASSIGNMENT_STREAM)
        self.seq = 0
        self.lock = threading.Lock()

    # -- persistence ----------------------------------------------------

    def _append(self, kind: str, payload: dict) -> None:
        self.seq += 1
        event = {"seq": self.seq, "kind": kind, "payload": payload,
                 "timestamp": time.time()}
        with open(self.log_path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(event) + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    @classmethod
    def create(cls, cfg: TrialConfig, state_dir: str) -> "LiveTrial":
        trial_id = uuid.uuid4().hex
        trial = cls(trial_id, cfg,
                    os.path.join(state_dir, f"{trial_id}.jsonl"))
        trial._append("CREATED", {"trial_id": trial_id,
                                  "config": _config_payload(cfg)})
        return trial

    @classmethod
    def replay(cls, log_path: str) -> "LiveTrial":
        with open(log_path, "r", encoding="utf-8") as fh:
            events = [json.loads(line) for line in fh if line.strip()]
        if not events or events[0]["kind"] != "CREATED":
            raise ValueError(f"{log_path}: missing CREATED event")
        created = events[0]["payload"]
        cfg = _config_from_payload(created["config"])
        trial = cls(created["trial_id"], cfg, log_path)
        for event in events:
            if event["seq"] != trial.seq + 1:
                raise ValueError(
                    f"{log_path}: event seq {event['seq']} after {trial.seq}")
            trial.seq = event["seq"]
            kind, payload = event["kind"], event["payload"]
            if kind == "ENROLLED":
                trial.session.enroll(payload["x"], payload["u"])
            elif kind == "OUTCOME":
                trial.session.observe(payload["y"])
        return trial

    # -- operations (validated, persisted, then applied) -----------------

    def enroll(self, x: float) -> dict:
        session = self.session
        if session.status is not TrialStatus.ENROLLING:
            raise ApiError(409, "conflict",
                           f"cannot enroll while {session.status.value}")
        if not isinstance(x, (int, float)) or isinstance(x, bool) \
                or not (0.0 <= float(x) <= 1.0):
            raise ApiError(422, "validation_error",
                           "x must be a number in [0, 1]", field="x")
        t = session.t_next
        u = self.us.uniform(t)
        self._append("ENROLLED", {"t": t, "x": float(x), "u": u})
        rec = session.enroll(float(x), u)
        return {"t": rec.t, "wA": rec.wA, "arm": rec.arm.value,
                "rule": self.cfg.rule.value, "status": session.status.value}

    def record_outcome(self, t: int, y) -> dict:
        session = self.session
        if session.status is not TrialStatus.AWAITING_OUTCOME:
            raise ApiError(409, "conflict",
                           f"no outcome expected while {session.status.value}")
        if t != session.t_next:
            raise ApiError(409, "conflict",
                           f"outcome for patient {t} but patient "
                           f"{session.t_next} is pending")
        if not isinstance(y, (int, float)) or isinstance(y, bool) \
                or not math.isfinite(float(y)):
            raise ApiError(422, "validation_error",
                           "y must be a finite number", field="y")
        self._append("OUTCOME", {"t": t, "y": float(y)})
        rec = session.observe(float(y))
        return {
            "t": rec.t,
            "bf": rec.bf,
            "decisive": session.status is TrialStatus.STOPPED_DECISIVE,
            "status": session.status.value,
            "posterior_summary": {
                "m": [float(v) for v in session.state.m],
                "C_diag": [float(v) for v in session.state.C.diagonal()],
            },
        }

    def view(self) -> dict:
        session = self.session
        records = [{
            "t": r.t, "x": r.x, "wA": r.wA, "arm": r.arm.value,
            "y": r.y, "bf": r.bf,
        } for r in session.records]
        pending = None
        if session.status is TrialStatus.AWAITING_OUTCOME:
            pending = {"t": session._pending[0], "x": session._pending[1],
                       "wA": session._pending[3],
                       "arm": session._pending[4].value}
        return {
            "trial_id": self.trial_id,
            "config": _config_payload(self.cfg),
            "status": session.status.value,
            "records": records,
            "pending": pending,
            "weight_trajectory": [r.wA for r in session.records],
            "bf_trajectory": [r.bf for r in session.records],
            "nA": session.stats[Arm.A].n,
            "nB": session.stats[Arm.B].n,
        }


class TrialStore:
    """All live trials; replays every event log found in state_dir."""

    def __init__(self, state_dir: str):
        self.state_dir = state_dir
        os.makedirs(state_dir, exist_ok=True)
        self.trials: dict[str, LiveTrial] = {}
        self.lock = threading.Lock()
        for name in sorted(os.listdir(state_dir)):
            if name.endswith(".jsonl"):
                trial = LiveTrial.replay(os.path.join(state_dir, name))
                self.trials[trial.trial_id] = trial

    def create(self, cfg: TrialConfig) -> LiveTrial:
        trial = LiveTrial.create(cfg, self.state_dir)
        with self.lock:
            self.trials[trial.trial_id] = trial
        return trial

    def get(self, trial_id: str) -> LiveTrial:
        trial = self.trials.get(trial_id)
        if trial is None:
            raise ApiError(404, "not_found", f"unknown trial {trial_id!r}")
        return trial


def create_app(state_dir: str = "trial-state") -> FastAPI:
    app = FastAPI(title="dlmtrial service")
    store = TrialStore(state_dir)
    app.state.store = store

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, err: ApiError):
        return err.response()

    async def _body(request: Request) -> dict:
        try:
            payload = await request.json()
        except Exception:
            raise ApiError(422, "validation_error", "invalid JSON body")
        if not isinstance(payload, dict):
            raise ApiError(422, "validation_error",
                           "body must be a JSON object")
        return payload

    @app.get("/api/healthz")
    async def healthz():
        return {"status": "ok", "trials": len(store.trials)}

    @app.post("/api/trials", status_code=201)
    async def create_trial(request: Request):
        cfg = _config_from_payload(await _body(request))
        trial = store.create(cfg)
        return {"trial_id": trial.trial_id,
                "status": trial.session.status.value}

    @app.post("/api/trials/{trial_id}/patients")
    async def enroll_patient(trial_id: str, request: Request):
        payload = await _body(request)
        if "x" not in payload:
            raise ApiError(422, "validation_error", "missing field x",
                           field="x")
        trial = store.get(trial_id)
        with trial.lock:
            return trial.enroll(payload["x"])

    @app.post("/api/trials/{trial_id}/patients/{t}/outcome")
    async def record_outcome(trial_id: str, t: int, request: Request):
        payload = await _body(request)
        if "y" not in payload:
            raise ApiError(422, "validation_error", "missing field y",
                           field="y")
        trial = store.get(trial_id)
        with trial.lock:
            return trial.record_outcome(t, payload["y"])

    @app.get("/api/trials/{trial_id}")
    async def get_trial(trial_id: str):
        trial = store.get(trial_id)
        with trial.lock:
            return trial.view()

    return app
