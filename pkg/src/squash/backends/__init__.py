"""Pluggable question-generation and question-answering backends."""

from .base import AnswererBackend, GeneratorBackend, generate_candidates
from .http import HttpBackend
from .mock import MockAnswerer, MockClassifier, MockGenerator
from .types import (
    AnswerPrediction,
    DecodePolicy,
    GeneratedQuestion,
    GenerationRequest,
    Origin,
    OVERGENERATE_BEAM,
    OVERGENERATE_SAMPLED,
    OVERGENERATE_TOTAL,
    QuestionCandidate,
)

__all__ = [
    "AnswererBackend",
    "AnswerPrediction",
    "DecodePolicy",
    "GeneratedQuestion",
    "GenerationRequest",
    "GeneratorBackend",
    "HttpBackend",
    "MockAnswerer",
    "MockClassifier",
    "MockGenerator",
    "Origin",
    "OVERGENERATE_BEAM",
    "OVERGENERATE_SAMPLED",
    "OVERGENERATE_TOTAL",
    "QuestionCandidate",
    "generate_candidates",
]
