import pytest

from squash.errors import InvalidInputError
from squash.span_selection import SpanKind, select_spans
from squash.taxonomy import SpecificityLabel
from squash.text_analysis import Paragraph, segment


def para(text):
    return segment(text).paragraphs[0]


class TestSelectSpans:
    def test_count_formula(self):
        # 3 sentences, 2 entities, 1 numeric -> 2*3 + 3 = 9 candidates
        p = para(
            "The crew met Varga at the dock in 1911. "
            "Supplies reached the Petrel a week later. "
            "Nothing else arrived that month."
        )
        entities = [m for m in p.mentions if m.kind.value == "ENTITY"]
        numerics = [m for m in p.mentions if m.kind.value == "NUMERIC"]
        assert (len(entities), len(numerics)) == (2, 1)
        spans = select_spans(p)
        assert len(spans) == 2 * len(p.sentences) + len(p.mentions) == 9

    def test_single_sentence_no_mentions(self):
        p = para("nothing capital happened here.")
        spans = select_spans(p)
        assert len(spans) == 2
        labels = [s.target_label for s in spans]
        assert labels == [SpecificityLabel.GENERAL, SpecificityLabel.SPECIFIC]
        assert all(s.kind == SpanKind.SENTENCE for s in spans)

    def test_every_sentence_has_both_targets(self, article_doc):
        for p in article_doc.paragraphs:
            spans = select_spans(p)
            for si, (start, end) in enumerate(p.sentences):
                sentence_spans = [
                    s for s in spans
                    if s.kind == SpanKind.SENTENCE and (s.start, s.end) == (start, end)
                ]
                assert [s.target_label for s in sentence_spans] == [
                    SpecificityLabel.GENERAL,
                    SpecificityLabel.SPECIFIC,
                ]

    def test_mentions_are_specific_only(self, article_doc):
        for p in article_doc.paragraphs:
            for s in select_spans(p):
                if s.kind != SpanKind.SENTENCE:
                    assert s.target_label == SpecificityLabel.SPECIFIC

    def test_never_yesno(self, article_doc):
        for p in article_doc.paragraphs:
            for s in select_spans(p):
                assert s.target_label != SpecificityLabel.YESNO

    def test_ranges_come_from_segmentation(self, article_doc):
        for p in article_doc.paragraphs:
            known = set(p.sentences) | {(m.start, m.end) for m in p.mentions}
            for s in select_spans(p):
                assert (s.start, s.end) in known

    def test_ordering_and_determinism(self, article_doc):
        for p in article_doc.paragraphs:
            spans = select_spans(p)
            assert spans == select_spans(p)
            starts = [s.start for s in spans]
            assert starts == sorted(starts)

    def test_mention_covering_sentence_deduplicated(self):
        p = para("Other words sit here. Fort Halloway. More words sit here.")
        # middle sentence is exactly an entity mention (modulo the period)
        covering = [m for m in p.mentions if m.text == "Fort Halloway"]
        assert covering, "fixture should contain a sentence-covering mention"
        spans = select_spans(p)
        assert len(spans) == 2 * len(p.sentences) + len(p.mentions) - len(covering)
        mention_kinds = [
            s.kind for s in spans
            if s.start == covering[0].start and s.kind != SpanKind.SENTENCE
        ]
        assert mention_kinds == []

    def test_zero_sentences_rejected(self):
        empty = Paragraph(index=0, text="", sentences=())
        with pytest.raises(InvalidInputError):
            select_spans(empty)
