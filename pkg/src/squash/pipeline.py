"""End-to-end orchestration.

One paragraph at a time: span selection -> question generation ->
deduplication -> answering -> filtering (with fallback) -> hierarchy ->
budget. Paragraphs run on a bounded worker pool; results always appear in
input order, and with mock backends the output bytes are a pure function
of (document, config, seed) regardless of worker count.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import __version__
from .backends.base import generate_candidates
from .backends.http import HttpBackend
from .backends.mock import MockAnswerer, MockGenerator
from .backends.types import DecodePolicy
from .budget import BudgetConfig, apply_budget
from .errors import ConfigError, InvalidInputError, PipelineError, SquashError
from .filtering import FilterConfig, dedup_indices, filter_with_fallback
from .hierarchy import QAForest, build_forest
from .span_selection import select_spans
from .text_analysis import Document, document_from_paragraph_texts, segment

BACKEND_URL_ENV = "SQUASH_BACKEND_URL"
DATA_DIR_ENV = "SQUASH_DATA_DIR"


@dataclass(frozen=True)
class PipelineConfig:
    backend: str = "mock"  # "mock" or a backend base URL
    policy: DecodePolicy = DecodePolicy.OVERGENERATE
    k: int = 10
    p: float = 0.9
    filter: FilterConfig = field(default_factory=FilterConfig)
    budget: BudgetConfig = field(default_factory=BudgetConfig)
    max_workers: int = 4
    seed: int = 0
    max_paragraph_chars: int = 2000

    def __post_init__(self):
        if self.max_workers < 1:
            raise ConfigError(f"max_workers must be >= 1, got {self.max_workers}")
        if self.max_paragraph_chars < 1:
            raise ConfigError(
                f"max_paragraph_chars must be >= 1, got {self.max_paragraph_chars}"
            )

    def to_dict(self):
        return {
            "backend": self.backend,
            "policy": self.policy.value,
            "k": self.k,
            "p": self.p,
            "filter": self.filter.to_dict(),
            "budget": self.budget.to_dict(),
            "max_workers": self.max_workers,
            "seed": self.seed,
            "max_paragraph_chars": self.max_paragraph_chars,
        }

    def snapshot(self):
        """Config as recorded in run output: worker count is an execution
        detail and must not change output bytes."""
        data = self.to_dict()
        data.pop("max_workers")
        return data

    @classmethod
    def from_dict(cls, data):
        kwargs = dict(data)
        if "policy" in kwargs:
            kwargs["policy"] = DecodePolicy(kwargs["policy"])
        if "filter" in kwargs:
            kwargs["filter"] = FilterConfig.from_dict(kwargs["filter"])
        if "budget" in kwargs:
            kwargs["budget"] = BudgetConfig.from_dict(kwargs["budget"])
        return cls(**kwargs)


def resolve_backends(config):
    """(generator, answerer) for a config, honoring SQUASH_BACKEND_URL."""
    backend = config.backend
    if backend == "mock":
        backend = os.environ.get(BACKEND_URL_ENV, "mock")
    if backend == "mock":
        return MockGenerator(seed=config.seed), MockAnswerer()
    client = HttpBackend(backend)
    return client, client


def prepare_document(raw_text=None, paragraphs=None, doc_id="doc", title=None,
                     max_paragraph_chars=2000):
    """Build a Document from raw text or pre-split paragraphs, splitting
    over-long paragraphs on sentence boundaries."""
    if raw_text is not None:
        doc = segment(raw_text, doc_id=doc_id, title=title)
    elif paragraphs is not None:
        doc = document_from_paragraph_texts(paragraphs, doc_id=doc_id, title=title)
    else:
        raise InvalidInputError("no document text given")
    return _split_long_paragraphs(doc, max_paragraph_chars)


def _split_long_paragraphs(doc, max_chars):
    texts = []
    for para in doc.paragraphs:
        if len(para.text) <= max_chars:
            texts.append(para.text)
            continue
        chunk_start = None
        chunk_end = None
        for start, end in para.sentences:
            if chunk_start is None:
                chunk_start, chunk_end = start, end
            elif end - chunk_start > max_chars:
                texts.append(para.text[chunk_start:chunk_end])
                chunk_start, chunk_end = start, end
            else:
                chunk_end = end
        if chunk_start is not None:
            texts.append(para.text[chunk_start:chunk_end])
    return document_from_paragraph_texts(
        texts, doc_id=doc.doc_id, title=doc.title
    )


@dataclass
class SquashOutput:
    document_id: str
    document: Document
    forests: list  # one QAForest per paragraph, in order
    config: PipelineConfig
    version: str = __version__

    def to_dict(self):
        paragraphs = []
        for para, forest in zip(self.document.paragraphs, self.forests):
            paragraphs.append(
                {
                    "index": para.index,
                    "text": para.text,
                    "trees": [
                        {
                            "root": _pair_dict(tree.root),
                            "children": [_pair_dict(c) for c in tree.children],
                        }
                        for tree in forest.trees
                    ],
                    "orphans": [_pair_dict(o) for o in forest.orphans],
                    "metadata": forest.metadata,
                }
            )
        return {
            "document_id": self.document_id,
            "paragraphs": paragraphs,
            "config": self.config.snapshot(),
            "version": self.version,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


def _pair_dict(pair):
    return {
        "question": pair.question,
        "answer": {
            "start": pair.answer_start,
            "end": pair.answer_end,
            "text": pair.answer_text,
        },
        "score": pair.score,
    }


def squash_paragraph(paragraph, generator, answerer, config):
    """Run the full pipeline for one paragraph, returning a pre-budget forest."""
    spans = select_spans(paragraph)
    candidates = []
    for span in spans:
        candidates.extend(
            generate_candidates(
                generator, paragraph.text, span, config.policy, config.k, config.p
            )
        )

    deduped = [candidates[i] for i in dedup_indices(candidates, config.filter)]
    if hasattr(answerer, "answer_batch"):
        answers = answerer.answer_batch(
            paragraph.text, [c.question for c in deduped]
        )
    else:
        answers = [answerer.answer(paragraph.text, c.question) for c in deduped]

    pairs, meta = filter_with_fallback(paragraph, deduped, answers, config.filter)
    counts = {"spans": len(spans), "candidates": len(candidates)}
    stage_counts = dict(meta.counts)
    stage_counts.pop("candidates", None)  # candidates here means pre-dedup
    counts.update(stage_counts)
    metadata = {
        "counts": counts,
        "relaxation_stages": meta.relaxation_stages,
        "fallback_exhausted": meta.fallback_exhausted,
        "unanswerable_rate": meta.unanswerable_rate,
    }
    return build_forest(pairs, paragraph.index, metadata)


def squash_forests(document, config, generator=None, answerer=None):
    """Pre-budget forests for every paragraph, in input order.

    A paragraph whose backend calls fail yields an empty flagged forest;
    the run only errors when every paragraph failed that way.
    """
    if generator is None or answerer is None:
        generator, answerer = resolve_backends(config)

    def run_one(paragraph):
        try:
            return squash_paragraph(paragraph, generator, answerer, config)
        except SquashError as exc:
            return QAForest(
                paragraph_index=paragraph.index,
                metadata={"error": f"{type(exc).__name__}: {exc}"},
            )

    paragraphs = document.paragraphs
    if config.max_workers == 1 or len(paragraphs) <= 1:
        forests = [run_one(p) for p in paragraphs]
    else:
        with ThreadPoolExecutor(max_workers=config.max_workers) as pool:
            forests = list(pool.map(run_one, paragraphs))

    if paragraphs and all("error" in f.metadata for f in forests):
        raise PipelineError(
            "all paragraphs failed: " + forests[0].metadata["error"]
        )
    return forests


def assemble_output(document, forests, config):
    budgeted = [apply_budget(f, config.budget) for f in forests]
    return SquashOutput(
        document_id=document.doc_id,
        document=document,
        forests=budgeted,
        config=config,
    )


def squash(document, config, generator=None, answerer=None):
    """SQUASH a whole document into budgeted QA forests."""
    forests = squash_forests(document, config, generator, answerer)
    return assemble_output(document, forests, config)
