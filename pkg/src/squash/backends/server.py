"""Serve backends over the wire protocol.

Wraps any generator/answerer/classifier triple (the built-in mocks by
default) in a FastAPI app speaking the same JSON protocol the HttpBackend
client consumes, so a separate model process can be swapped in without
touching the engine.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from ..errors import SquashError
from ..taxonomy import HeuristicFallback, SpecificityLabel
from .mock import MockAnswerer, MockGenerator
from .types import DecodePolicy, GenerationRequest


class SpanBody(BaseModel):
    start: int
    end: int


class GenerateBody(BaseModel):
    paragraph: str
    span: SpanBody
    label: str
    policy: str = "OVERGENERATE"
    k: int = 10
    p: float = 0.9


class GenerateBatchBody(BaseModel):
    requests: list[GenerateBody]


class AnswerBody(BaseModel):
    paragraph: str
    question: str


class AnswerBatchBody(BaseModel):
    paragraph: str
    questions: list[str]


class ClassifyBody(BaseModel):
    questions: list[str]


def _generation_request(body):
    return GenerationRequest(
        paragraph=body.paragraph,
        start=body.span.start,
        end=body.span.end,
        label=SpecificityLabel(body.label),
        policy=DecodePolicy(body.policy),
        k=body.k,
        p=body.p,
    )


def _candidate_dict(candidate):
    return {
        "question": candidate.question,
        "origin": candidate.origin.value,
        "score": candidate.score,
    }


def _prediction_dict(prediction):
    out = {"answerable": prediction.answerable, "confidence": prediction.confidence}
    if prediction.answerable:
        out["span"] = {"start": prediction.start, "end": prediction.end}
    return out


def create_backend_app(generator=None, answerer=None, classifier=None, seed=0):
    generator = generator or MockGenerator(seed=seed)
    answerer = answerer or MockAnswerer()
    classifier = classifier or HeuristicFallback()
    app = FastAPI(title="squash backend")

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.post("/generate")
    def generate(body: GenerateBody):
        try:
            candidates = generator.generate(_generation_request(body))
        except (SquashError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"candidates": [_candidate_dict(c) for c in candidates]}

    @app.post("/generate_batch")
    def generate_batch(body: GenerateBatchBody):
        results = []
        for item in body.requests:
            try:
                candidates = generator.generate(_generation_request(item))
            except (SquashError, ValueError) as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            results.append({"candidates": [_candidate_dict(c) for c in candidates]})
        return {"results": results}

    @app.post("/answer")
    def answer(body: AnswerBody):
        try:
            prediction = answerer.answer(body.paragraph, body.question)
        except SquashError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return _prediction_dict(prediction)

    @app.post("/answer_batch")
    def answer_batch(body: AnswerBatchBody):
        try:
            predictions = [
                answerer.answer(body.paragraph, q) for q in body.questions
            ]
        except SquashError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        return {"results": [_prediction_dict(p) for p in predictions]}

    @app.post("/classify")
    def classify(body: ClassifyBody):
        labels = classifier.classify(body.questions)
        return {"labels": [SpecificityLabel(l).value for l in labels]}

    return app
