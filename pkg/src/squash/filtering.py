"""Multi-stage question filtering.

Candidates flow through: duplicate/generic removal -> irrelevant and
repeated-entity removal -> unanswerable removal and answer-overlap
thresholds -> per-span most-probable selection. A fallback mechanism
relaxes stages in a fixed order when a paragraph ends up with no GENERAL
pair; removal of unanswerable candidates is never relaxed.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .backends.types import AnswerPrediction, Origin
from .errors import ConfigError, InvalidInputError
from .overlap import overlap
from .span_selection import AnswerSpanCandidate, SpanKind, span_sort_key
from .taxonomy import SpecificityLabel
from .text_analysis import content_tokens, normalize_tokens

DEFAULT_BLACKLIST = (
    "what happened in this article?",
    "what is this article about?",
    "what happened in this story?",
    "what is this story about?",
    "where was he born?",
    "where was she born?",
)


@dataclass(frozen=True)
class FilterConfig:
    general_sentence_min_recall: float = 0.3
    specific_entity_min_recall: float = 0.8
    specific_sentence_min_precision: float = 1.0
    specific_sentence_top_n: int = 10
    generic_blacklist: tuple = DEFAULT_BLACKLIST
    fallback_enabled: bool = True
    score_mode: str = "raw"  # raw | per_token

    def __post_init__(self):
        for name in (
            "general_sentence_min_recall",
            "specific_entity_min_recall",
            "specific_sentence_min_precision",
        ):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must be in [0, 1], got {value}")
        if self.specific_sentence_top_n < 1:
            raise ConfigError(
                f"specific_sentence_top_n must be >= 1, got "
                f"{self.specific_sentence_top_n}"
            )
        if self.score_mode not in ("raw", "per_token"):
            raise ConfigError(f"unknown score_mode {self.score_mode!r}")

    def to_dict(self):
        return {
            "general_sentence_min_recall": self.general_sentence_min_recall,
            "specific_entity_min_recall": self.specific_entity_min_recall,
            "specific_sentence_min_precision": self.specific_sentence_min_precision,
            "specific_sentence_top_n": self.specific_sentence_top_n,
            "generic_blacklist": list(self.generic_blacklist),
            "fallback_enabled": self.fallback_enabled,
            "score_mode": self.score_mode,
        }

    @classmethod
    def from_dict(cls, data):
        kwargs = dict(data)
        if "generic_blacklist" in kwargs:
            kwargs["generic_blacklist"] = tuple(kwargs["generic_blacklist"])
        return cls(**kwargs)


@dataclass(frozen=True)
class QAPair:
    question: str
    specificity: SpecificityLabel
    span: AnswerSpanCandidate
    prediction: AnswerPrediction
    score: float
    origin: Origin
    answer_text: str

    # the span shown to users is always the predicted one
    @property
    def answer_start(self):
        return self.prediction.start

    @property
    def answer_end(self):
        return self.prediction.end


@dataclass
class FilterMetadata:
    relaxation_stages: list = field(default_factory=list)
    fallback_exhausted: bool = False
    counts: dict = field(default_factory=dict)
    unanswerable_rate: float | None = None

    def to_dict(self):
        return {
            "relaxation_stages": list(self.relaxation_stages),
            "fallback_exhausted": self.fallback_exhausted,
            "counts": dict(self.counts),
            "unanswerable_rate": self.unanswerable_rate,
        }


def _normalized_question(question):
    return " ".join(normalize_tokens(question))


def effective_score(question, score, score_mode):
    if score_mode == "per_token":
        return score / max(1, len(normalize_tokens(question)))
    return score


def dedup_indices(candidates, config=None):
    """Indices surviving blacklist + duplicate removal, in input order.

    Duplicates are exact matches after token normalization; the
    highest-scoring instance of each group is kept at the position where
    the group first appeared.
    """
    config = config or FilterConfig()
    blacklist = {_normalized_question(p) for p in config.generic_blacklist}

    first_seen = {}
    best = {}
    for i, cand in enumerate(candidates):
        key = _normalized_question(cand.question)
        if key in blacklist:
            continue
        if key not in first_seen:
            first_seen[key] = i
            best[key] = i
        else:
            j = best[key]
            cur, prev = candidates[i], candidates[j]
            cur_rank = (
                effective_score(cur.question, cur.score, config.score_mode),
                1 if cur.origin == Origin.BEAM else 0,
                -cur.span.start,
                -cur.span.end,
            )
            prev_rank = (
                effective_score(prev.question, prev.score, config.score_mode),
                1 if prev.origin == Origin.BEAM else 0,
                -prev.span.start,
                -prev.span.end,
            )
            if cur_rank > prev_rank:
                best[key] = i
    order = sorted(first_seen, key=first_seen.get)
    return [best[key] for key in order]


def dedup(candidates, config=None):
    return [candidates[i] for i in dedup_indices(candidates, config)]


def irrelevant_reason(question, paragraph_counts):
    """Why a question should be dropped as irrelevant, or None."""
    q_content = content_tokens(question)
    for tok, count in Counter(q_content).items():
        if paragraph_counts.get(tok, 0) == 0:
            return f"token {tok!r} not in paragraph"
        if count >= 2:
            return f"token {tok!r} repeated in question"
    return None


def filter_irrelevant_indices(candidates, paragraph):
    counts = Counter(normalize_tokens(paragraph.text))
    return [
        i
        for i, cand in enumerate(candidates)
        if irrelevant_reason(cand.question, counts) is None
    ]


def filter_irrelevant(candidates, paragraph):
    """Drop candidates naming things the paragraph does not, or repeating
    a content word within the question."""
    keep = set(filter_irrelevant_indices(candidates, paragraph))
    return [c for i, c in enumerate(candidates) if i in keep]


def _threshold_ok(pair_kind, label, pred_text, source_text, config):
    if label == SpecificityLabel.GENERAL and pair_kind == SpanKind.SENTENCE:
        return overlap(pred_text, source_text).recall >= config.general_sentence_min_recall
    if label == SpecificityLabel.SPECIFIC and pair_kind in (
        SpanKind.ENTITY,
        SpanKind.NUMERIC,
    ):
        return overlap(pred_text, source_text).recall >= config.specific_entity_min_recall
    if label == SpecificityLabel.SPECIFIC and pair_kind == SpanKind.SENTENCE:
        return (
            overlap(pred_text, source_text).precision
            >= config.specific_sentence_min_precision
        )
    return True


def filter_by_answers(paragraph_text, candidates, answers, config,
                      enforce_thresholds=True):
    """Unanswerable removal plus answer-overlap thresholds.

    Survivors become QAPairs whose displayed answer is the predicted span.
    """
    if len(candidates) != len(answers):
        raise InvalidInputError(
            f"{len(candidates)} candidates but {len(answers)} answer predictions"
        )
    pairs = []
    for cand, pred in zip(candidates, answers):
        if not pred.answerable:
            continue
        pred_text = paragraph_text[pred.start:pred.end]
        source_text = paragraph_text[cand.span.start:cand.span.end]
        if enforce_thresholds and not _threshold_ok(
            cand.span.kind, cand.target_label, pred_text, source_text, config
        ):
            continue
        pairs.append(
            QAPair(
                question=cand.question,
                specificity=cand.target_label,
                span=cand.span,
                prediction=pred,
                score=cand.score,
                origin=cand.origin,
                answer_text=pred_text,
            )
        )
    return pairs


def select_per_span(pairs, config):
    """Most probable candidate per answer span.

    SPECIFIC questions from sentence spans keep the top N instead of one,
    since a sentence can hold several question-worthy facts. Ties break
    toward BEAM origin, then lexicographic question text.
    """
    groups = {}
    for pair in pairs:
        groups.setdefault(pair.span, []).append(pair)

    selected = []
    for span in sorted(groups, key=span_sort_key):
        members = sorted(
            groups[span],
            key=lambda p: (
                -effective_score(p.question, p.score, config.score_mode),
                0 if p.origin == Origin.BEAM else 1,
                p.question,
            ),
        )
        if (
            span.kind == SpanKind.SENTENCE
            and span.target_label == SpecificityLabel.SPECIFIC
        ):
            keep = config.specific_sentence_top_n
        else:
            keep = 1
        selected.extend(members[:keep])
    return selected


def _run_stack(paragraph, candidates, answers, config, *, relevance, thresholds,
               counts):
    kept = dedup_indices(candidates, config)
    counts["after_dedup"] = len(kept)
    if relevance:
        para_counts = Counter(normalize_tokens(paragraph.text))
        kept = [
            i
            for i in kept
            if irrelevant_reason(candidates[i].question, para_counts) is None
        ]
    counts["after_relevance"] = len(kept)
    sub_candidates = [candidates[i] for i in kept]
    sub_answers = [answers[i] for i in kept]
    counts["answerable"] = sum(1 for a in sub_answers if a.answerable)
    pairs = filter_by_answers(
        paragraph.text, sub_candidates, sub_answers, config,
        enforce_thresholds=thresholds,
    )
    counts["after_thresholds"] = len(pairs)
    selected = select_per_span(pairs, config)
    counts["selected"] = len(selected)
    return selected


def filter_with_fallback(paragraph, candidates, answers, config):
    """Full filter stack with staged relaxation.

    When no GENERAL pair survives, stage 1 drops the overlap thresholds and
    stage 2 additionally drops the relevance filter. Unanswerable removal
    always applies. Returns (pairs, FilterMetadata).
    """
    if len(candidates) != len(answers):
        raise InvalidInputError(
            f"{len(candidates)} candidates but {len(answers)} answer predictions"
        )
    meta = FilterMetadata()
    meta.counts["candidates"] = len(candidates)

    stages = [
        ((), dict(relevance=True, thresholds=True)),
        (("thresholds",), dict(relevance=True, thresholds=False)),
        (("thresholds", "relevance"), dict(relevance=False, thresholds=False)),
    ]
    if not config.fallback_enabled:
        stages = stages[:1]

    pairs = []
    for relaxed, flags in stages:
        counts = {}
        pairs = _run_stack(paragraph, candidates, answers, config,
                           counts=counts, **flags)
        meta.relaxation_stages = list(relaxed)
        meta.counts.update(counts)
        if any(p.specificity == SpecificityLabel.GENERAL for p in pairs):
            break
    else:
        meta.fallback_exhausted = bool(config.fallback_enabled)

    deduped = meta.counts.get("after_dedup", 0)
    if deduped:
        unanswerable = deduped - sum(
            1 for i in dedup_indices(candidates, config) if answers[i].answerable
        )
        meta.unanswerable_rate = unanswerable / deduped
    meta.counts["pairs"] = len(pairs)
    return pairs, meta
