"""HTTP service wrapping the toolkit: POST a problem document, get the
report bundle back.  The CLI talks to this app in-process by default, so the
service is also the single dispatch point for every computation."""

from __future__ import annotations

from typing import Optional

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .artinian import UnstableError
from .families import FamilySpec
from .problems import ProblemError, emit_fixture, run_problem

app = FastAPI(title="tsplit", version=__version__)


class PolicyBlock(BaseModel):
    base: int = 4
    buffer: int = 2
    window: int = 2
    cap: int = 12
    seed: int = 0
    trials: int = 5


class RingBlock(BaseModel):
    p: int = 32003
    vars: list[str]
    ideal: list[str] = Field(default_factory=list)


class ModuleBlock(BaseModel):
    generators: list[str]
    relations: list[list[str]] = Field(default_factory=list)


class ExtensionBlock(BaseModel):
    N: str
    E: str
    M: str
    iota: list[list[str]]
    pi: list[list[str]]


class ProblemRequest(BaseModel):
    schema_version: int = 1
    ring: RingBlock
    modules: dict[str, ModuleBlock] = Field(default_factory=dict)
    extensions: dict[str, ExtensionBlock] = Field(default_factory=dict)
    policy: Optional[PolicyBlock] = None
    tasks: list[str] = Field(default_factory=list)


class RunResponse(BaseModel):
    status: str                  # "ok" | "task-error"
    exit_code: int
    bundle: dict


class FixtureRequest(BaseModel):
    kind: str
    params: dict = Field(default_factory=dict)
    seed: int = 0
    assertions: dict = Field(default_factory=dict)


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/run", response_model=RunResponse)
def run(req: ProblemRequest):
    doc = req.model_dump(exclude_none=True)
    try:
        bundle, code = run_problem(doc)
    except ProblemError as exc:
        return JSONResponse(status_code=422,
                            content={"status": "problem-error",
                                     "detail": str(exc)})
    except UnstableError as exc:
        return JSONResponse(status_code=422,
                            content={"status": "unstable",
                                     "detail": str(exc)})
    return RunResponse(status="ok" if code == 0 else "task-error",
                       exit_code=code, bundle=bundle)


@app.post("/fixture")
def fixture(req: FixtureRequest):
    spec = FamilySpec(kind=req.kind, params=req.params, seed=req.seed,
                      assertions=req.assertions)
    try:
        doc = emit_fixture(spec)
    except ProblemError as exc:
        return JSONResponse(status_code=422,
                            content={"status": "problem-error",
                                     "detail": str(exc)})
    return {"status": "ok", "problem": doc}
