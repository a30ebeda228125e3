"""Backend interfaces and the engine-side generation wrapper."""

from __future__ import annotations

from typing import Protocol, runtime_checkable

from ..errors import InvalidInputError, ProtocolError
from ..taxonomy import SpecificityLabel
from .types import (
    DecodePolicy,
    GenerationRequest,
    Origin,
    OVERGENERATE_BEAM,
    OVERGENERATE_SAMPLED,
    QuestionCandidate,
)


@runtime_checkable
class GeneratorBackend(Protocol):
    def generate(self, request):
        """GenerationRequest -> list[GeneratedQuestion]."""
        ...


@runtime_checkable
class AnswererBackend(Protocol):
    def answer(self, paragraph, question):
        """(paragraph text, question) -> AnswerPrediction."""
        ...


def validate_candidate_counts(request, raw):
    n = len(raw)
    beams = sum(1 for c in raw if c.origin == Origin.BEAM)
    sampled = n - beams
    if request.policy == DecodePolicy.OVERGENERATE:
        if n != request.expected_candidates():
            raise ProtocolError(
                f"overgeneration must yield {request.expected_candidates()} "
                f"candidates, backend returned {n}"
            )
        if beams > OVERGENERATE_BEAM or sampled > OVERGENERATE_SAMPLED:
            raise ProtocolError(
                f"candidate origins out of policy: {beams} beam / {sampled} sampled"
            )
    elif n != 1:
        raise ProtocolError(
            f"single-candidate policy got {n} candidates from backend"
        )


def generate_candidates(generator, paragraph_text, span, policy, k=10, p=0.9):
    """Run one span through a generator and tie candidates to the span."""
    if span.target_label not in (SpecificityLabel.GENERAL, SpecificityLabel.SPECIFIC):
        raise InvalidInputError(
            f"generation target must be GENERAL or SPECIFIC, got {span.target_label}"
        )
    if not (0 <= span.start < span.end <= len(paragraph_text)):
        raise InvalidInputError(
            f"span {span.start}:{span.end} outside paragraph of length "
            f"{len(paragraph_text)}"
        )
    request = GenerationRequest(
        paragraph=paragraph_text,
        start=span.start,
        end=span.end,
        label=span.target_label,
        policy=policy,
        k=k,
        p=p,
    )
    raw = generator.generate(request)
    validate_candidate_counts(request, raw)
    return [
        QuestionCandidate(question=c.question, origin=c.origin, score=c.score, span=span)
        for c in raw
    ]
