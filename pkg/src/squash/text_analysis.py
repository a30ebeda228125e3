"""Deterministic document structure extraction.

Paragraph and sentence segmentation, entity/numeric mention detection and
token normalization. Everything here is pure and offset-faithful: any stored
range sliced back out of the paragraph text reproduces the stored surface.
All offsets are Unicode scalar positions.
"""

from __future__ import annotations

import re
import string
from dataclasses import dataclass, replace
from enum import Enum

from .errors import InvalidInputError

ARTICLES = {"a", "an", "the"}

# Tokens that belong to question scaffolding rather than content. Used when
# deciding whether a question mentions something absent from its paragraph,
# and by the mock backends when assembling template questions.
FUNCTION_WORDS = {
    # wh words
    "who", "whom", "whose", "what", "which", "when", "where", "why", "how",
    # auxiliaries and modals
    "is", "are", "was", "were", "am", "be", "been", "being",
    "do", "does", "did", "done",
    "has", "have", "had", "having",
    "can", "could", "will", "would", "shall", "should", "may", "might", "must",
    # pronouns and demonstratives; "us" is deliberately absent because it
    # is indistinguishable from a normalized "US" entity token
    "i", "you", "your", "yours", "he", "him", "his", "she", "her", "hers",
    "it", "its", "we", "our", "ours", "they", "them", "their", "theirs",
    "me", "my", "mine", "this", "that", "these", "those", "there", "here",
    # prepositions, conjunctions, particles
    "of", "in", "on", "at", "to", "for", "with", "by", "from", "about",
    "after", "before", "during", "since", "until", "while", "between",
    "over", "under", "into", "through",
    "and", "or", "but", "not", "no", "yes", "if", "as", "so", "than", "then",
    # question-template vocabulary
    "happen", "happened", "happens", "cause", "caused", "reason", "purpose",
    "led", "lead", "many", "long", "much",
}

NUMBER_WORDS = {
    "zero", "one", "two", "three", "four", "five", "six", "seven", "eight",
    "nine", "ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen",
    "sixteen", "seventeen", "eighteen", "nineteen", "twenty", "thirty",
    "forty", "fifty", "sixty", "seventy", "eighty", "ninety",
    "hundred", "thousand", "million", "billion",
}

# Words whose trailing period does not end a sentence.
ABBREVIATIONS = {
    "mr", "mrs", "ms", "dr", "prof", "rev", "gen", "col", "lt", "capt",
    "sgt", "sr", "jr", "st", "mt", "vs", "etc", "inc", "ltd", "co", "corp",
    "no", "fig", "vol", "approx", "dept", "est", "u.s", "u.k", "u.n",
    "e.g", "i.e", "a.m", "p.m",
}

_NUMERIC_RE = re.compile(r"\d+(?:[.,:]\d+)*")
_PUNCT_TABLE = str.maketrans("", "", string.punctuation)


class MentionKind(str, Enum):
    ENTITY = "ENTITY"
    NUMERIC = "NUMERIC"


@dataclass(frozen=True)
class Mention:
    start: int
    end: int
    kind: MentionKind
    text: str


@dataclass(frozen=True)
class Paragraph:
    index: int
    text: str
    sentences: tuple[tuple[int, int], ...]
    mentions: tuple[Mention, ...] = ()

    def sentence_text(self, i):
        start, end = self.sentences[i]
        return self.text[start:end]


@dataclass(frozen=True)
class Document:
    doc_id: str
    title: str | None
    paragraphs: tuple[Paragraph, ...]


def normalize_tokens(text):
    """Lowercase, strip punctuation, drop articles, split on whitespace."""
    lowered = text.lower().translate(_PUNCT_TABLE)
    return [tok for tok in lowered.split() if tok not in ARTICLES]


def content_tokens(text):
    """Normalized tokens minus question scaffolding words."""
    return [tok for tok in normalize_tokens(text) if tok not in FUNCTION_WORDS]


def is_numeric_token(token):
    """Digit runs (incl. separators) and spelled-out number words."""
    if _NUMERIC_RE.fullmatch(token):
        return True
    return token.lower() in NUMBER_WORDS


def tokenize_with_offsets(text):
    """Whitespace tokens with surrounding punctuation stripped.

    Returns (surface, start, end) triples where start/end delimit the
    stripped core, so text[start:end] == surface.
    """
    out = []
    for match in re.finditer(r"\S+", text):
        start, end = match.start(), match.end()
        while start < end and text[start] in string.punctuation:
            start += 1
        while end > start and text[end - 1] in string.punctuation:
            end -= 1
        if end > start:
            out.append((text[start:end], start, end))
    return out


def _is_abbreviation(text, dot_pos):
    """True when the period at dot_pos ends an abbreviation or initial."""
    start = dot_pos
    while start > 0 and not text[start - 1].isspace():
        start -= 1
    word = text[start:dot_pos].strip(string.punctuation.replace(".", ""))
    word = word.rstrip(".")
    if not word:
        return False
    core = word.lstrip(".").lower()
    if core in ABBREVIATIONS:
        return True
    # single capital letter: a personal initial ("Harold B. and Agnes R.")
    if len(core) == 1 and word[-1].isupper():
        return True
    return False


def split_sentences(text):
    """Rule-based sentence ranges within a single paragraph.

    Splits after runs of .!? followed by whitespace and a capital letter
    (or opening quote + capital), except after known abbreviations.
    Ranges are trimmed of surrounding whitespace.
    """
    boundaries = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch in ".!?":
            j = i
            while j + 1 < n and text[j + 1] in ".!?\"'”’)":
                j += 1
            k = j + 1
            if k < n and text[k].isspace():
                m = k
                while m < n and text[m].isspace():
                    m += 1
                if m < n:
                    nxt = text[m]
                    if nxt in "\"'“‘(":
                        nxt = text[m + 1] if m + 1 < n else ""
                    if nxt and (nxt.isupper() or nxt.isdigit()):
                        if ch != "." or not _is_abbreviation(text, i):
                            boundaries.append(j + 1)
            i = j + 1
        else:
            i += 1

    ranges = []
    prev = 0
    for b in boundaries + [n]:
        start, end = prev, b
        while start < end and text[start].isspace():
            start += 1
        while end > start and text[end - 1].isspace():
            end -= 1
        if end > start:
            ranges.append((start, end))
        prev = b
    return ranges


def detect_mentions(paragraph):
    """Entity and numeric mentions inside a segmented paragraph.

    Numerics: digit tokens and spelled-out number words. Entities: maximal
    runs of capitalized tokens within one sentence; a run's leading token at
    sentence start only counts when the same token appears capitalized at a
    non-initial position elsewhere in the paragraph.
    """
    text = paragraph.text
    tokens = tokenize_with_offsets(text)

    # token index -> sentence index; tokens outside any sentence are skipped
    sent_of = {}
    for ti, (_, tstart, tend) in enumerate(tokens):
        for si, (sstart, send) in enumerate(paragraph.sentences):
            if tstart >= sstart and tend <= send:
                sent_of[ti] = si
                break

    sentence_initial = set()
    seen_sentences = set()
    for ti in range(len(tokens)):
        si = sent_of.get(ti)
        if si is not None and si not in seen_sentences:
            sentence_initial.add(ti)
            seen_sentences.add(si)

    def is_capitalized(surface):
        return (
            surface[0].isupper()
            and any(c.isalpha() for c in surface)
            and surface.lower() != "i"
            and not is_numeric_token(surface)
        )

    corroborated = set()
    for ti, (surface, _, _) in enumerate(tokens):
        if ti not in sentence_initial and is_capitalized(surface):
            corroborated.add(surface)

    mentions = {}

    def add(start, end, kind):
        key = (start, end)
        if key not in mentions:
            mentions[key] = Mention(start, end, kind, text[start:end])

    for ti, (surface, tstart, tend) in enumerate(tokens):
        if ti in sent_of and is_numeric_token(surface):
            add(tstart, tend, MentionKind.NUMERIC)

    run = []
    prev_ti = None

    def flush(run):
        if not run:
            return
        # a lone sentence-opening capital is only a name if the same word
        # shows up capitalized mid-sentence somewhere else
        if len(run) == 1:
            ti, tok = run[0]
            if ti in sentence_initial and tok[0] not in corroborated:
                return
        start = run[0][1][1]
        end = run[-1][1][2]
        add(start, end, MentionKind.ENTITY)

    for ti, tok in enumerate(tokens):
        surface = tok[0]
        in_sentence = ti in sent_of
        contiguous = (
            run
            and prev_ti == ti - 1
            and sent_of.get(ti) == sent_of.get(run[-1][0])
        )
        if in_sentence and is_capitalized(surface):
            if not contiguous:
                flush(run)
                run = []
            run.append((ti, tok))
            prev_ti = ti
        else:
            flush(run)
            run = []
            prev_ti = None
    flush(run)

    return sorted(mentions.values(), key=lambda m: (m.start, m.end))


def segment(raw_text, doc_id="doc", title=None):
    """Split raw text into a Document of paragraphs, sentences and mentions.

    Paragraphs are blank-line separated blocks; per-paragraph sentence
    ranges come from split_sentences and mentions from detect_mentions.
    """
    if not raw_text or not raw_text.strip():
        raise InvalidInputError("document text is empty")

    blocks = [b.strip() for b in re.split(r"\n\s*\n", raw_text)]
    blocks = [b for b in blocks if b]

    paragraphs = []
    for idx, block in enumerate(blocks):
        para = Paragraph(
            index=idx,
            text=block,
            sentences=tuple(split_sentences(block)),
        )
        para = replace(para, mentions=tuple(detect_mentions(para)))
        paragraphs.append(para)
    return Document(doc_id=doc_id, title=title, paragraphs=tuple(paragraphs))


def document_from_paragraph_texts(texts, doc_id="doc", title=None):
    """Build a Document from pre-split paragraph strings (JSON input path)."""
    cleaned = [t.strip() for t in texts if t and t.strip()]
    if not cleaned:
        raise InvalidInputError("document has no non-empty paragraphs")
    paragraphs = []
    for idx, block in enumerate(cleaned):
        para = Paragraph(idx, block, tuple(split_sentences(block)))
        para = replace(para, mentions=tuple(detect_mentions(para)))
        paragraphs.append(para)
    return Document(doc_id=doc_id, title=title, paragraphs=tuple(paragraphs))
