"""Question specificity classification.

Maps questions onto GENERAL / SPECIFIC / YESNO via surface templates over
the thirteen conceptual question categories, with a pluggable statistical
fallback for questions no template covers. Rule matching is a pure function
of the token annotation: same question text, same result.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass
from enum import Enum
from typing import Protocol, runtime_checkable

from .errors import BackendError, InvalidInputError
from .text_analysis import NUMBER_WORDS, is_numeric_token


class SpecificityLabel(str, Enum):
    GENERAL = "GENERAL"
    SPECIFIC = "SPECIFIC"
    YESNO = "YESNO"


class ConceptualCategory(str, Enum):
    CAUSAL_ANTECEDENT = "CausalAntecedent"
    GOAL_ORIENTED = "GoalOriented"
    ENABLEMENT = "Enablement"
    CAUSAL_CONSEQUENT = "CausalConsequent"
    EXPECTATIONAL = "Expectational"
    INSTRUMENTAL = "Instrumental"
    JUDGEMENTAL = "Judgemental"
    CONCEPT_COMPLETION = "ConceptCompletion"
    FEATURE_SPECIFICATION = "FeatureSpecification"
    QUANTIFICATION = "Quantification"
    VERIFICATION = "Verification"
    DISJUNCTIVE = "Disjunctive"
    REQUEST = "Request"


# Which labels each category may carry. Request never maps to a label and
# never appears in classifier output.
CATEGORY_LABELS = {
    ConceptualCategory.CAUSAL_ANTECEDENT: {SpecificityLabel.GENERAL},
    ConceptualCategory.GOAL_ORIENTED: {SpecificityLabel.GENERAL},
    ConceptualCategory.ENABLEMENT: {SpecificityLabel.GENERAL},
    ConceptualCategory.CAUSAL_CONSEQUENT: {SpecificityLabel.GENERAL},
    ConceptualCategory.EXPECTATIONAL: {SpecificityLabel.GENERAL},
    ConceptualCategory.INSTRUMENTAL: {SpecificityLabel.GENERAL},
    ConceptualCategory.JUDGEMENTAL: {SpecificityLabel.GENERAL},
    ConceptualCategory.CONCEPT_COMPLETION: {
        SpecificityLabel.GENERAL,
        SpecificityLabel.SPECIFIC,
    },
    ConceptualCategory.FEATURE_SPECIFICATION: {
        SpecificityLabel.GENERAL,
        SpecificityLabel.SPECIFIC,
    },
    ConceptualCategory.QUANTIFICATION: {SpecificityLabel.SPECIFIC},
    ConceptualCategory.VERIFICATION: {SpecificityLabel.YESNO},
    ConceptualCategory.DISJUNCTIVE: {SpecificityLabel.YESNO},
    ConceptualCategory.REQUEST: set(),
}


class PosTag(str, Enum):
    VERB = "VERB"
    WH = "WH"
    PRONOUN = "PRONOUN"
    NUMBERWORD = "NUMBERWORD"
    OTHER = "OTHER"


WH_WORDS = {"who", "whom", "whose", "what", "which", "when", "where", "why", "how"}

VERB_WORDS = {
    # auxiliaries and modals
    "is", "are", "was", "were", "am", "be", "been", "being",
    "do", "does", "did", "done",
    "has", "have", "had", "having",
    "can", "could", "will", "would", "shall", "should", "may", "might",
    "must", "ought",
    # frequent bare verbs that open yes-no style questions
    "go", "goes", "went", "gone", "get", "gets", "got",
    "make", "makes", "made", "take", "takes", "took",
    "come", "comes", "came", "become", "becomes", "became",
    "happen", "happens", "happened",
}

PRONOUN_WORDS = {
    "i", "you", "your", "yours", "he", "him", "his", "she", "her", "hers",
    "it", "its", "we", "us", "our", "ours", "they", "them", "their",
    "theirs", "me", "my", "mine",
}

# Guards the Quantification boundary: "how" followed by one of these is a
# quantity question, not an Instrumental one.
QUANTITY_WORDS = {"many", "long", "much", "old", "far", "often", "big", "tall"}

_STRIP = string.punctuation + "“”‘’"


@dataclass(frozen=True)
class TokenAnnotation:
    text: str
    tag: PosTag
    position: int


@dataclass(frozen=True)
class RuleMatch:
    category: ConceptualCategory
    label: SpecificityLabel
    template_id: str


@dataclass(frozen=True)
class Rule:
    template_id: str
    category: ConceptualCategory
    label: SpecificityLabel
    kind: str  # prefix | contains | how_verb | first_verb
    pattern: str = ""


def tag_token(token):
    if token in WH_WORDS:
        return PosTag.WH
    if token in VERB_WORDS:
        return PosTag.VERB
    if token in PRONOUN_WORDS:
        return PosTag.PRONOUN
    if is_numeric_token(token) or token in NUMBER_WORDS:
        return PosTag.NUMBERWORD
    return PosTag.OTHER


def annotate(question):
    """Lowercased, punctuation-stripped tokens with coarse POS tags."""
    tokens = []
    for raw in question.lower().split():
        tok = raw.strip(_STRIP)
        if tok:
            tokens.append(tok)
    return [TokenAnnotation(tok, tag_token(tok), i) for i, tok in enumerate(tokens)]


# Priority order: most specific surface patterns first. Quantification must
# precede the Instrumental "how" rule so "how many/long" never turns GENERAL.
DEFAULT_RULES = (
    Rule("quantity_how_many", ConceptualCategory.QUANTIFICATION,
         SpecificityLabel.SPECIFIC, "prefix", "how many"),
    Rule("quantity_how_long", ConceptualCategory.QUANTIFICATION,
         SpecificityLabel.SPECIFIC, "prefix", "how long"),
    Rule("causal_why", ConceptualCategory.CAUSAL_ANTECEDENT,
         SpecificityLabel.GENERAL, "prefix", "why"),
    Rule("consequent_what_happened_after", ConceptualCategory.CAUSAL_CONSEQUENT,
         SpecificityLabel.GENERAL, "prefix", "what happened after"),
    Rule("antecedent_what_happened_before", ConceptualCategory.CAUSAL_ANTECEDENT,
         SpecificityLabel.GENERAL, "prefix", "what happened before"),
    Rule("antecedent_what_was_the_cause", ConceptualCategory.CAUSAL_ANTECEDENT,
         SpecificityLabel.GENERAL, "prefix", "what was the cause"),
    Rule("antecedent_what_was_the_reason", ConceptualCategory.CAUSAL_ANTECEDENT,
         SpecificityLabel.GENERAL, "prefix", "what was the reason"),
    Rule("goal_what_was_the_purpose", ConceptualCategory.GOAL_ORIENTED,
         SpecificityLabel.GENERAL, "prefix", "what was the purpose"),
    Rule("enablement_what_led_to", ConceptualCategory.ENABLEMENT,
         SpecificityLabel.GENERAL, "prefix", "what led to"),
    Rule("instrumental_how_verb", ConceptualCategory.INSTRUMENTAL,
         SpecificityLabel.GENERAL, "how_verb"),
    Rule("judgemental_you", ConceptualCategory.JUDGEMENTAL,
         SpecificityLabel.GENERAL, "contains", "you"),
    Rule("judgemental_your", ConceptualCategory.JUDGEMENTAL,
         SpecificityLabel.GENERAL, "contains", "your"),
    Rule("completion_where", ConceptualCategory.CONCEPT_COMPLETION,
         SpecificityLabel.SPECIFIC, "prefix", "where"),
    Rule("completion_when", ConceptualCategory.CONCEPT_COMPLETION,
         SpecificityLabel.SPECIFIC, "prefix", "when"),
    Rule("completion_who", ConceptualCategory.CONCEPT_COMPLETION,
         SpecificityLabel.SPECIFIC, "prefix", "who"),
    Rule("verification_first_verb", ConceptualCategory.VERIFICATION,
         SpecificityLabel.YESNO, "first_verb"),
)


def _rule_fires(rule, annotations):
    tokens = [a.text for a in annotations]
    if rule.kind == "prefix":
        pattern = rule.pattern.split()
        return tokens[: len(pattern)] == pattern
    if rule.kind == "contains":
        return rule.pattern in tokens
    if rule.kind == "how_verb":
        return (
            tokens[0] == "how"
            and len(annotations) > 1
            and annotations[1].tag == PosTag.VERB
            and tokens[1] not in QUANTITY_WORDS
        )
    if rule.kind == "first_verb":
        return annotations[0].tag == PosTag.VERB
    raise InvalidInputError(f"unknown rule kind: {rule.kind!r}")


def classify_by_rules(question, rules=DEFAULT_RULES):
    """First matching template in priority order, or None.

    Accepts a question string or a pre-annotated token list.
    """
    if isinstance(question, str):
        annotations = annotate(question)
    else:
        annotations = list(question)
    if not annotations:
        raise InvalidInputError("cannot classify an empty question")
    for rule in rules:
        if _rule_fires(rule, annotations):
            return RuleMatch(rule.category, rule.label, rule.template_id)
    return None


@runtime_checkable
class FallbackClassifier(Protocol):
    def classify(self, questions):
        """Batch of question strings -> batch of SpecificityLabel."""
        ...


class HeuristicFallback:
    """Cheap stand-in for a trained classifier.

    SPECIFIC when the question contains who/when/where/which, a
    "how many"/"how long" bigram, or a number word; GENERAL otherwise.
    """

    SPECIFIC_WH = {"who", "when", "where", "which"}

    def classify(self, questions):
        labels = []
        for q in questions:
            tokens = [a.text for a in annotate(q)]
            specific = any(t in self.SPECIFIC_WH for t in tokens)
            if not specific:
                for i, t in enumerate(tokens[:-1]):
                    if t == "how" and tokens[i + 1] in {"many", "long"}:
                        specific = True
                        break
            if not specific:
                specific = any(
                    tag_token(t) == PosTag.NUMBERWORD for t in tokens
                )
            labels.append(
                SpecificityLabel.SPECIFIC if specific else SpecificityLabel.GENERAL
            )
        return labels


@dataclass(frozen=True)
class Classification:
    label: SpecificityLabel
    source: str  # "rule" | "fallback"
    match: RuleMatch | None = None


def classify_question(question, fallback=None, rules=DEFAULT_RULES):
    """Rule label when a template fires, otherwise the fallback's label."""
    match = classify_by_rules(question, rules)
    if match is not None:
        return Classification(match.label, "rule", match)
    fallback = fallback if fallback is not None else HeuristicFallback()
    try:
        labels = fallback.classify([question])
    except Exception as exc:  # backend failures carry the question along
        raise BackendError(
            f"fallback classifier failed on question {question!r}: {exc}"
        ) from exc
    return Classification(SpecificityLabel(labels[0]), "fallback", None)


def classify(question, fallback=None, rules=DEFAULT_RULES):
    return classify_question(question, fallback, rules).label


def classify_batch(questions, fallback=None, rules=DEFAULT_RULES):
    """Classify many questions, calling the fallback once for the remainder."""
    results = []
    pending = []
    for i, q in enumerate(questions):
        match = classify_by_rules(q, rules)
        if match is not None:
            results.append(Classification(match.label, "rule", match))
        else:
            results.append(None)
            pending.append(i)
    if pending:
        fallback = fallback if fallback is not None else HeuristicFallback()
        try:
            labels = fallback.classify([questions[i] for i in pending])
        except Exception as exc:
            raise BackendError(
                f"fallback classifier failed on {len(pending)} questions "
                f"(first: {questions[pending[0]]!r}): {exc}"
            ) from exc
        for i, label in zip(pending, labels):
            results[i] = Classification(SpecificityLabel(label), "fallback", None)
    return results


@dataclass(frozen=True)
class LabeledQuestion:
    question: str
    label: SpecificityLabel
    source: str  # "rule" | "hand" | "fallback"


@dataclass(frozen=True)
class CoverageStats:
    total: int
    by_source: dict
    by_label: dict

    def source_fractions(self):
        if self.total == 0:
            return {k: 0.0 for k in self.by_source}
        return {k: v / self.total for k, v in self.by_source.items()}

    def label_fractions(self):
        if self.total == 0:
            return {k: 0.0 for k in self.by_label}
        return {k: v / self.total for k, v in self.by_label.items()}

    def to_dict(self):
        return {
            "total": self.total,
            "by_source": dict(self.by_source),
            "by_label": dict(self.by_label),
            "source_fractions": self.source_fractions(),
            "label_fractions": self.label_fractions(),
        }


def rule_coverage_stats(corpus):
    """Per-source and per-label counts over a labeled question corpus."""
    by_source = {"rule": 0, "hand": 0, "fallback": 0}
    by_label = {label.value: 0 for label in SpecificityLabel}
    total = 0
    for item in corpus:
        total += 1
        by_source[item.source] = by_source.get(item.source, 0) + 1
        key = SpecificityLabel(item.label).value
        by_label[key] += 1
    return CoverageStats(total, by_source, by_label)


def rules_to_config(rules=DEFAULT_RULES):
    return [
        {
            "template_id": r.template_id,
            "category": r.category.value,
            "label": r.label.value,
            "kind": r.kind,
            "pattern": r.pattern,
        }
        for r in rules
    ]


def rules_from_config(entries):
    return tuple(
        Rule(
            template_id=e["template_id"],
            category=ConceptualCategory(e["category"]),
            label=SpecificityLabel(e["label"]),
            kind=e["kind"],
            pattern=e.get("pattern", ""),
        )
        for e in entries
    )


def save_rule_table(path, rules=DEFAULT_RULES):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(rules_to_config(rules), f, indent=2)
        f.write("\n")


def load_rule_table(path):
    with open(path, encoding="utf-8") as f:
        return rules_from_config(json.load(f))
