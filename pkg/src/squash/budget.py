"""User-controlled QA budget.

Keeps configurable fractions of GENERAL and SPECIFIC pairs so readers can
trade coverage for brevity. Budgeting happens after hierarchy construction,
which keeps interactive refiltering cheap: children of removed roots are
re-attached to the surviving roots with the normal parent-assignment rules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConfigError
from .hierarchy import QAForest, QATree, choose_parent, _pair_order


@dataclass(frozen=True)
class BudgetConfig:
    general_fraction: float = 1.0
    specific_fraction: float = 1.0

    def __post_init__(self):
        for name in ("general_fraction", "specific_fraction"):
            value = getattr(self, name)
            if not 0.0 < value <= 1.0:
                raise ConfigError(f"{name} must be in (0, 1], got {value}")

    def to_dict(self):
        return {
            "general_fraction": self.general_fraction,
            "specific_fraction": self.specific_fraction,
        }

    @classmethod
    def from_dict(cls, data):
        return cls(**data)


def _keep_count(fraction, n):
    if n == 0:
        return 0
    # ceiling, with a guard against float noise in fraction * n
    return min(n, math.ceil(fraction * n - 1e-9))


def _top_by_score(pairs, count):
    ranked = sorted(pairs, key=lambda p: (-p.score, p.question))
    return set(id(p) for p in ranked[:count])


def apply_budget(forest, config):
    """Retain the top-scoring fractions of roots and children.

    Fractions of 1.0 leave the forest unchanged. The partition invariant is
    preserved for every SPECIFIC pair that survives: each lives in exactly
    one surviving tree (or the orphan list when no roots exist).
    """
    roots = [tree.root for tree in forest.trees]
    keep_roots = _top_by_score(roots, _keep_count(config.general_fraction, len(roots)))

    kept_trees = []
    displaced = []
    for tree in forest.trees:
        if id(tree.root) in keep_roots:
            kept_trees.append(QATree(root=tree.root, children=list(tree.children)))
        else:
            displaced.extend(tree.children)

    if displaced and kept_trees:
        generals = [t.root for t in kept_trees]  # sorted order preserved
        for s in displaced:
            kept_trees[choose_parent(s, generals)].children.append(s)

    for tree in kept_trees:
        keep = _top_by_score(
            tree.children, _keep_count(config.specific_fraction, len(tree.children))
        )
        tree.children = sorted(
            (c for c in tree.children if id(c) in keep), key=_pair_order
        )

    orphans = forest.orphans
    keep_orphans = _top_by_score(
        orphans, _keep_count(config.specific_fraction, len(orphans))
    )
    orphans = sorted((o for o in orphans if id(o) in keep_orphans), key=_pair_order)

    return QAForest(
        paragraph_index=forest.paragraph_index,
        trees=kept_trees,
        orphans=orphans,
        metadata=dict(forest.metadata),
    )
