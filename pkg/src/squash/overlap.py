"""Word-level precision/recall between two text spans.

The single similarity signal used by both the question filter and the
hierarchy grouping step. Tokens are compared as multisets after
normalization, so repeated words cannot inflate the overlap.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .text_analysis import normalize_tokens


@dataclass(frozen=True)
class OverlapScore:
    precision: float
    recall: float


def overlap(candidate, reference):
    """Multiset token overlap of candidate against reference.

    precision = |intersection| / |candidate tokens|
    recall    = |intersection| / |reference tokens|

    Either side normalizing to an empty token list yields (0, 0).
    """
    cand = Counter(normalize_tokens(candidate))
    ref = Counter(normalize_tokens(reference))
    n_cand = sum(cand.values())
    n_ref = sum(ref.values())
    if n_cand == 0 or n_ref == 0:
        return OverlapScore(0.0, 0.0)
    common = sum((cand & ref).values())
    return OverlapScore(common / n_cand, common / n_ref)
