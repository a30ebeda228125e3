"""Wire-level types shared by all generation/answering backends."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from ..span_selection import AnswerSpanCandidate
from ..taxonomy import SpecificityLabel


class DecodePolicy(str, Enum):
    # beam width 3 plus 10 sampled candidates per span
    OVERGENERATE = "OVERGENERATE"
    # one nucleus-sampled candidate per span
    SINGLE = "SINGLE"


class Origin(str, Enum):
    BEAM = "BEAM"
    SAMPLED = "SAMPLED"


OVERGENERATE_BEAM = 3
OVERGENERATE_SAMPLED = 10
OVERGENERATE_TOTAL = OVERGENERATE_BEAM + OVERGENERATE_SAMPLED


@dataclass(frozen=True)
class GenerationRequest:
    paragraph: str
    start: int
    end: int
    label: SpecificityLabel
    policy: DecodePolicy = DecodePolicy.OVERGENERATE
    k: int = 10
    p: float = 0.9

    def expected_candidates(self):
        if self.policy == DecodePolicy.OVERGENERATE:
            return OVERGENERATE_TOTAL
        return 1


@dataclass(frozen=True)
class GeneratedQuestion:
    """One raw backend candidate, before it is tied to its source span."""

    question: str
    origin: Origin
    score: float


@dataclass(frozen=True)
class QuestionCandidate:
    question: str
    origin: Origin
    score: float
    span: AnswerSpanCandidate

    @property
    def target_label(self):
        return self.span.target_label


@dataclass(frozen=True)
class AnswerPrediction:
    answerable: bool
    start: int | None = None
    end: int | None = None
    confidence: float = 0.0

    def __post_init__(self):
        has_range = self.start is not None and self.end is not None
        if self.answerable != has_range:
            raise ValueError(
                "predicted range must be present exactly when answerable"
            )
