"""Reading-comprehension dataset ingestion.

Extracts (question, gold answer) pairs from SQuAD/QuAC/CoQA-style JSON,
drops unanswerable questions and answers that cross paragraph boundaries,
downsamples over-duplicated questions to at most ten occurrences, and
labels every surviving question with the specificity classifier.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass

from .errors import ParseError
from .taxonomy import SpecificityLabel, classify_batch, rule_coverage_stats
from .text_analysis import normalize_tokens

DUPLICATE_LIMIT = 10

FORMATS = ("squad", "quac", "coqa")


@dataclass(frozen=True)
class CorpusEntry:
    question: str
    answer_text: str
    answer_start: int | None
    label: SpecificityLabel
    source: str  # "rule" | "fallback"


def _extract_squad_like(data, fmt):
    """SQuAD 2.0 and QuAC share the {data -> paragraphs -> qas} shape."""
    items = []
    for ai, article in enumerate(data.get("data", [])):
        for pi, paragraph in enumerate(article.get("paragraphs", [])):
            try:
                context = paragraph["context"]
                qas = paragraph["qas"]
            except (KeyError, TypeError) as exc:
                raise ParseError(
                    f"{fmt}: article {ai} paragraph {pi} missing context/qas: {exc}"
                ) from exc
            for qi, qa in enumerate(qas):
                try:
                    question = qa["question"]
                    answers = qa.get("answers", [])
                    impossible = qa.get("is_impossible", False)
                except TypeError as exc:
                    raise ParseError(
                        f"{fmt}: article {ai} paragraph {pi} qa {qi} malformed: {exc}"
                    ) from exc
                if impossible or not answers:
                    continue
                text = answers[0].get("text", "")
                if not text or text == "CANNOTANSWER":
                    continue
                start = answers[0].get("answer_start")
                if start is not None and start + len(text) > len(context):
                    # answer runs past its paragraph
                    continue
                items.append((question, text, start))
    return items


def _extract_coqa(data):
    items = []
    for di, entry in enumerate(data.get("data", [])):
        try:
            story = entry["story"]
            questions = entry["questions"]
            answers = entry["answers"]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"coqa: entry {di} malformed: {exc}") from exc
        for qa, ans in zip(questions, answers):
            question = qa.get("input_text", "")
            span_start = ans.get("span_start", -1)
            span_end = ans.get("span_end", -1)
            if span_start < 0 or span_end <= span_start:
                continue
            if ans.get("input_text", "").strip().lower() == "unknown":
                continue
            # prefer the extractive evidence span over the free-form answer
            evidence = story[span_start:span_end]
            if "\n\n" in evidence:
                # evidence crosses a paragraph boundary
                continue
            items.append((question, evidence, span_start))
    return items


def downsample_duplicates(items, limit=DUPLICATE_LIMIT):
    """Keep at most `limit` occurrences of each normalized question."""
    seen = Counter()
    kept = []
    for item in items:
        key = " ".join(normalize_tokens(item[0]))
        if seen[key] >= limit:
            continue
        seen[key] += 1
        kept.append(item)
    return kept


def ingest_rc_dataset(path, fmt="squad", fallback=None):
    """Parse a dataset file into a labeled question corpus."""
    if fmt not in FORMATS:
        raise ParseError(f"unknown dataset format {fmt!r}; expected one of {FORMATS}")
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: top level must be a JSON object")

    if fmt == "coqa":
        items = _extract_coqa(data)
    else:
        items = _extract_squad_like(data, fmt)

    items = downsample_duplicates(items)
    questions = [item[0] for item in items]
    classifications = classify_batch(questions, fallback)
    return [
        CorpusEntry(
            question=question,
            answer_text=answer,
            answer_start=start,
            label=cls.label,
            source=cls.source,
        )
        for (question, answer, start), cls in zip(items, classifications)
    ]


def corpus_stats(corpus):
    """Distribution report over a labeled corpus, percentages included."""
    stats = rule_coverage_stats(corpus)
    report = stats.to_dict()
    report["label_percent"] = {
        k: round(100.0 * v, 1) for k, v in stats.label_fractions().items()
    }
    report["source_percent"] = {
        k: round(100.0 * v, 1) for k, v in stats.source_fractions().items()
    }
    return report


def stats_to_csv(report):
    lines = ["kind,key,count,percent"]
    for key, count in report["by_label"].items():
        lines.append(f"label,{key},{count},{report['label_percent'][key]}")
    for key, count in report["by_source"].items():
        lines.append(f"source,{key},{count},{report['source_percent'][key]}")
    return "\n".join(lines) + "\n"
