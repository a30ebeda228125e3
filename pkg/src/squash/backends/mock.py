"""Deterministic built-in backends.

These let the whole pipeline run end to end with no model process: a
template question generator and a lexical-overlap answerer. Both are pure
functions of their inputs given the configured seed, so repeated runs are
byte-identical.

Every template below is built so that the finished question classifies back
to its requested specificity label under the rule engine, and so that its
content words all come from the source paragraph.
"""

from __future__ import annotations

import random
from collections import Counter
from functools import lru_cache

from ..errors import InvalidInputError
from ..taxonomy import HeuristicFallback, SpecificityLabel
from ..text_analysis import (
    content_tokens,
    is_numeric_token,
    normalize_tokens,
    split_sentences,
    tokenize_with_offsets,
)
from .types import (
    AnswerPrediction,
    DecodePolicy,
    GeneratedQuestion,
    Origin,
    OVERGENERATE_BEAM,
    OVERGENERATE_SAMPLED,
)

MockClassifier = HeuristicFallback


def _slug(text, max_tokens):
    """First distinct content tokens of a span, joined for templating."""
    seen = []
    for tok in content_tokens(text):
        if tok not in seen:
            seen.append(tok)
        if len(seen) == max_tokens:
            break
    if not seen:
        seen = normalize_tokens(text)[:2] or ["it"]
    return " ".join(seen)


def _general_pool(span_text):
    s = _slug(span_text, 4)
    short = _slug(span_text, 2)
    return [
        f"why did {s}?",
        f"what happened after {s}?",
        f"what led to {s}?",
        f"what was the cause of {s}?",
        f"what happened before {s}?",
        f"what was the reason for {s}?",
        f"what was the purpose of {s}?",
        f"why did {short}?",
        f"what led to {short}?",
        f"what happened after {short}?",
    ]


def _sentence_specific_pool(span_text):
    s2 = _slug(span_text, 2)
    s1 = _slug(span_text, 1)
    return [
        f"who was {s1}?",
        f"when did {s2}?",
        f"where did {s2}?",
        f"how many {s1} were there?",
        f"when was {s1}?",
        f"where was {s1}?",
        f"how long did {s2}?",
        f"who did {s2}?",
    ]


def _entity_pool(span_text):
    e = _slug(span_text, 4)
    return [
        f"who is {e}?",
        f"who was {e}?",
        f"where is {e}?",
        f"where was {e}?",
        f"when was {e} there?",
    ]


def _numeric_pool(number_text, context_token):
    n = _slug(number_text, 2)
    c = context_token
    return [
        f"when was {n}?",
        f"how many {c} were there?",
        f"how long was {n}?",
        f"when did {c} happen?",
        f"where did {c} happen?",
    ]


class MockGenerator:
    """Template-table question generator with seeded sampling."""

    def __init__(self, seed=0):
        self.seed = seed

    def _pool(self, request):
        span_text = request.paragraph[request.start:request.end]
        if request.label == SpecificityLabel.GENERAL:
            return _general_pool(span_text)
        raw = span_text.split()
        if raw and all(is_numeric_token(t.strip(".,;:!?()")) for t in raw):
            return _numeric_pool(span_text, self._numeric_context(request, span_text))
        if len(raw) <= 4:
            return _entity_pool(span_text)
        return _sentence_specific_pool(span_text)

    def _numeric_context(self, request, span_text):
        # a nearby content word makes "how many X" questions about the
        # quantity's subject rather than the bare number
        for start, end in split_sentences(request.paragraph):
            if start <= request.start and request.end <= end:
                span_tokens = set(normalize_tokens(span_text))
                for tok in content_tokens(request.paragraph[start:end]):
                    if tok not in span_tokens:
                        return tok
                break
        return _slug(span_text, 1)

    def generate(self, request):
        if not (0 <= request.start < request.end <= len(request.paragraph)):
            raise InvalidInputError(
                f"span {request.start}:{request.end} outside paragraph"
            )
        if request.label not in (SpecificityLabel.GENERAL, SpecificityLabel.SPECIFIC):
            raise InvalidInputError(
                f"mock generator cannot target label {request.label}"
            )
        pool = self._pool(request)
        rng = random.Random(
            f"{self.seed}|{request.start}|{request.end}|{request.label.value}"
            f"|{request.policy.value}|{request.k}|{request.p}"
        )
        if request.policy == DecodePolicy.SINGLE:
            question = rng.choice(pool)
            score = -(0.4 + rng.uniform(0.0, 1.0))
            return [GeneratedQuestion(question, Origin.SAMPLED, score)]

        out = []
        for rank in range(OVERGENERATE_BEAM):
            score = -(0.2 + 0.35 * rank + rng.uniform(0.0, 0.05))
            out.append(GeneratedQuestion(pool[rank % len(pool)], Origin.BEAM, score))
        for _ in range(OVERGENERATE_SAMPLED):
            # sampling with replacement: duplicates (incl. of beams) happen
            question = pool[rng.randrange(len(pool))]
            score = -(0.6 + rng.uniform(0.0, 2.4))
            out.append(GeneratedQuestion(question, Origin.SAMPLED, score))
        return out


@lru_cache(maxsize=64)
def _sentence_token_index(paragraph):
    """Per sentence: list of (normalized token, char start, char end)."""
    index = []
    for sstart, send in split_sentences(paragraph):
        toks = []
        for surface, tstart, tend in tokenize_with_offsets(paragraph[sstart:send]):
            norm = normalize_tokens(surface)
            if len(norm) == 1:
                toks.append((norm[0], sstart + tstart, sstart + tend))
        index.append(toks)
    return index


class MockAnswerer:
    """Lexical-overlap extractive answerer.

    Picks the sentence sharing the most content words with the question,
    then the contiguous token window inside it that maximizes token F1
    against the question's content words. Zero overlap anywhere means the
    question is unanswerable.
    """

    def answer(self, paragraph, question):
        if not paragraph or not paragraph.strip():
            raise InvalidInputError("cannot answer against an empty paragraph")

        q_tokens = Counter(content_tokens(question))
        if not q_tokens:
            return AnswerPrediction(answerable=False)

        sentences = _sentence_token_index(paragraph)
        best_si, best_overlap = None, 0
        for si, toks in enumerate(sentences):
            counts = Counter(t[0] for t in toks)
            shared = sum((counts & q_tokens).values())
            if shared > best_overlap:
                best_si, best_overlap = si, shared
        if best_si is None:
            return AnswerPrediction(answerable=False)

        toks = sentences[best_si]
        n_q = sum(q_tokens.values())
        match_pos = [i for i, t in enumerate(toks) if q_tokens.get(t[0], 0) > 0]
        best = None  # (f1, start_idx, end_idx)
        for a in match_pos:
            for b in match_pos:
                if b < a:
                    continue
                window = Counter(t[0] for t in toks[a:b + 1])
                shared = sum((window & q_tokens).values())
                if shared == 0:
                    continue
                precision = shared / (b - a + 1)
                recall = shared / n_q
                f1 = 2 * precision * recall / (precision + recall)
                if best is None or f1 > best[0]:
                    best = (f1, a, b)
        f1, a, b = best
        return AnswerPrediction(
            answerable=True,
            start=toks[a][1],
            end=toks[b][2],
            confidence=f1,
        )

    def answer_batch(self, paragraph, questions):
        return [self.answer(paragraph, q) for q in questions]
