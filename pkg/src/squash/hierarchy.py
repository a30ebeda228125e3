"""Arrange surviving QA pairs into per-paragraph trees.

Each SPECIFIC pair is attached to the GENERAL pair whose predicted answer
its own predicted answer overlaps most (word-level precision). With zero
overlap everywhere it goes to the closest GENERAL answer that starts
before it, since readers encounter GENERAL questions first; failing that,
to the paragraph's first GENERAL pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .overlap import overlap
from .taxonomy import SpecificityLabel


@dataclass
class QATree:
    root: "QAPair"
    children: list = field(default_factory=list)


@dataclass
class QAForest:
    paragraph_index: int
    trees: list = field(default_factory=list)
    orphans: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def all_pairs(self):
        out = []
        for tree in self.trees:
            out.append(tree.root)
            out.extend(tree.children)
        out.extend(self.orphans)
        return out


def _pair_order(pair):
    return (pair.answer_start, pair.question)


def choose_parent(specific, generals):
    """Index of the GENERAL pair a SPECIFIC pair attaches to.

    generals must be sorted by (answer start, question text). Ties in the
    precision argmax resolve to the earlier general answer.
    """
    best_i, best_precision = None, 0.0
    for i, g in enumerate(generals):
        precision = overlap(specific.answer_text, g.answer_text).precision
        if precision > best_precision:
            best_i, best_precision = i, precision
    if best_i is not None:
        return best_i

    preceding = None
    for i, g in enumerate(generals):
        if g.answer_start < specific.answer_start:
            if (
                preceding is None
                or g.answer_start > generals[preceding].answer_start
            ):
                preceding = i
    if preceding is not None:
        return preceding
    return 0


def build_forest(pairs, paragraph_index=None, metadata=None):
    """Group one paragraph's pairs into GENERAL-rooted trees.

    With no GENERAL pair at all, every SPECIFIC pair becomes an orphan and
    the forest is flagged.
    """
    pairs = list(pairs)
    if paragraph_index is None:
        paragraph_index = pairs[0].span.paragraph_index if pairs else 0

    generals = sorted(
        (p for p in pairs if p.specificity == SpecificityLabel.GENERAL),
        key=_pair_order,
    )
    specifics = sorted(
        (p for p in pairs if p.specificity != SpecificityLabel.GENERAL),
        key=_pair_order,
    )

    forest = QAForest(paragraph_index=paragraph_index, metadata=metadata or {})
    if not generals:
        forest.orphans = specifics
        if specifics:
            forest.metadata.setdefault("no_general_roots", True)
        return forest

    forest.trees = [QATree(root=g) for g in generals]
    for s in specifics:
        forest.trees[choose_parent(s, generals)].children.append(s)
    for tree in forest.trees:
        tree.children.sort(key=_pair_order)
    return forest
