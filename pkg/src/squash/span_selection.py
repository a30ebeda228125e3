"""Answer span selection.

Every sentence becomes two candidate spans (one aimed at a GENERAL
question, one at a SPECIFIC question); every entity/numeric mention becomes
one SPECIFIC candidate. YESNO is never a generation target.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import InvalidInputError
from .taxonomy import SpecificityLabel
from .text_analysis import normalize_tokens


class SpanKind(str, Enum):
    SENTENCE = "SENTENCE"
    ENTITY = "ENTITY"
    NUMERIC = "NUMERIC"


@dataclass(frozen=True)
class AnswerSpanCandidate:
    paragraph_index: int
    start: int
    end: int
    kind: SpanKind
    target_label: SpecificityLabel
    sentence_index: int

    def text(self, paragraph_text):
        return paragraph_text[self.start:self.end]


def span_sort_key(span):
    # earliest start first; longer span first at equal starts; GENERAL
    # before SPECIFIC on identical ranges
    return (
        span.start,
        -span.end,
        0 if span.target_label == SpecificityLabel.GENERAL else 1,
    )


def select_spans(paragraph):
    """All (answer span, target label) pairs for one paragraph.

    Mentions whose range coincides with a whole sentence are deduplicated
    against that sentence's SPECIFIC candidate.
    """
    if not paragraph.sentences:
        raise InvalidInputError(
            f"paragraph {paragraph.index} has no sentences"
        )

    candidates = []
    for si, (start, end) in enumerate(paragraph.sentences):
        for label in (SpecificityLabel.GENERAL, SpecificityLabel.SPECIFIC):
            candidates.append(
                AnswerSpanCandidate(
                    paragraph_index=paragraph.index,
                    start=start,
                    end=end,
                    kind=SpanKind.SENTENCE,
                    target_label=label,
                    sentence_index=si,
                )
            )

    for mention in paragraph.mentions:
        si = _containing_sentence(paragraph, mention)
        # a mention spanning its whole sentence duplicates the sentence's
        # SPECIFIC candidate
        if normalize_tokens(mention.text) == normalize_tokens(
            paragraph.sentence_text(si)
        ):
            continue
        candidates.append(
            AnswerSpanCandidate(
                paragraph_index=paragraph.index,
                start=mention.start,
                end=mention.end,
                kind=SpanKind(mention.kind.value),
                target_label=SpecificityLabel.SPECIFIC,
                sentence_index=si,
            )
        )

    candidates.sort(key=span_sort_key)
    return candidates


def _containing_sentence(paragraph, mention):
    for si, (start, end) in enumerate(paragraph.sentences):
        if mention.start >= start and mention.end <= end:
            return si
    raise InvalidInputError(
        f"mention {mention.text!r} at {mention.start}:{mention.end} lies "
        f"outside every sentence of paragraph {paragraph.index}"
    )
