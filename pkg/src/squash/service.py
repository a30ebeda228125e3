"""HTTP service for interactive exploration.

Jobs are submitted with a document and optional config, run on background
threads, and polled for results. Stored forests are immutable pre-budget
snapshots, so the refilter endpoint can re-apply a new budget without
rerunning generation or answering.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from dataclasses import dataclass, field, replace

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .budget import BudgetConfig
from .errors import ConfigError, SquashError
from .pipeline import (
    DATA_DIR_ENV,
    PipelineConfig,
    assemble_output,
    prepare_document,
    squash_forests,
)


class DocumentBody(BaseModel):
    title: str | None = None
    paragraphs: list[str]


class SquashRequestBody(BaseModel):
    text: str | None = None
    document: DocumentBody | None = None
    config: dict | None = None


class RefilterBody(BaseModel):
    general_fraction: float
    specific_fraction: float


@dataclass
class Job:
    job_id: str
    status: str = "pending"  # pending | running | done | error
    error: str | None = None
    document: object = None
    config: PipelineConfig | None = None
    forests: list = field(default_factory=list)  # pre-budget snapshots
    result: dict | None = None


class JobStore:
    def __init__(self, data_dir=None):
        self._jobs = {}
        self._lock = threading.Lock()
        self.data_dir = data_dir

    def create(self, job):
        with self._lock:
            self._jobs[job.job_id] = job

    def get(self, job_id):
        with self._lock:
            return self._jobs.get(job_id)

    def persist(self, job):
        if not self.data_dir or job.result is None:
            return
        os.makedirs(self.data_dir, exist_ok=True)
        path = os.path.join(self.data_dir, f"{job.job_id}.json")
        with open(path, "w", encoding="utf-8") as f:
            json.dump(job.result, f, indent=2, ensure_ascii=False)

    def load_persisted(self, job_id):
        if not self.data_dir:
            return None
        path = os.path.join(self.data_dir, f"{job_id}.json")
        if not os.path.exists(path):
            return None
        with open(path, encoding="utf-8") as f:
            return json.load(f)


def _run_job(job, store):
    job.status = "running"
    try:
        forests = squash_forests(job.document, job.config)
        job.forests = forests
        job.result = assemble_output(job.document, forests, job.config).to_dict()
        job.status = "done"
        store.persist(job)
    except Exception as exc:  # a stuck "running" job would be unpollable
        job.status = "error"
        job.error = f"{type(exc).__name__}: {exc}"


def create_app(data_dir=None):
    store = JobStore(data_dir=data_dir or os.environ.get(DATA_DIR_ENV))
    app = FastAPI(title="squash service")
    app.state.store = store

    @app.get("/api/health")
    def health():
        return {"status": "ok"}

    @app.post("/api/squash")
    def submit(body: SquashRequestBody):
        try:
            config = (
                PipelineConfig.from_dict(body.config)
                if body.config
                else PipelineConfig()
            )
            if body.text is not None:
                document = prepare_document(
                    raw_text=body.text,
                    doc_id=str(uuid.uuid4()),
                    max_paragraph_chars=config.max_paragraph_chars,
                )
            elif body.document is not None:
                document = prepare_document(
                    paragraphs=body.document.paragraphs,
                    doc_id=str(uuid.uuid4()),
                    title=body.document.title,
                    max_paragraph_chars=config.max_paragraph_chars,
                )
            else:
                raise HTTPException(
                    status_code=400, detail="provide either text or document"
                )
        except (SquashError, TypeError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))

        job = Job(job_id=document.doc_id, document=document, config=config)
        store.create(job)
        thread = threading.Thread(target=_run_job, args=(job, store), daemon=True)
        thread.start()
        return {"job_id": job.job_id, "status": job.status}

    @app.get("/api/squash/{job_id}")
    def status(job_id: str):
        job = store.get(job_id)
        if job is None:
            persisted = store.load_persisted(job_id)
            if persisted is not None:
                return {"job_id": job_id, "status": "done", "result": persisted}
            raise HTTPException(status_code=404, detail=f"unknown job {job_id}")
        payload = {"job_id": job.job_id, "status": job.status}
        if job.status == "done":
            payload["result"] = job.result
        if job.status == "error":
            payload["error"] = job.error
        return payload

    @app.post("/api/squash/{job_id}/refilter")
    def refilter(job_id: str, body: RefilterBody):
        job = store.get(job_id)
        if job is None:
            raise HTTPException(status_code=404, detail=f"unknown job {job_id}")
        if job.status != "done":
            raise HTTPException(
                status_code=409, detail=f"job {job_id} is {job.status}, not done"
            )
        try:
            budget = BudgetConfig(
                general_fraction=body.general_fraction,
                specific_fraction=body.specific_fraction,
            )
        except ConfigError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        config = replace(job.config, budget=budget)
        output = assemble_output(job.document, job.forests, config)
        return {"job_id": job.job_id, "status": "done", "result": output.to_dict()}

    return app
