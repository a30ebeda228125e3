import json
import subprocess
import sys

import pytest

from squash.backends.types import DecodePolicy
from squash.budget import BudgetConfig
from squash.errors import PipelineError
from squash.filtering import FilterConfig
from squash.hierarchy import QAForest
from squash.pipeline import (
    PipelineConfig,
    prepare_document,
    squash,
    squash_forests,
    squash_paragraph,
)
from squash.taxonomy import SpecificityLabel


@pytest.fixture(scope="module")
def fixture_doc(article_text):
    return prepare_document(raw_text=article_text, doc_id="article")


def config(**kwargs):
    return PipelineConfig(seed=7, max_workers=1, **kwargs)


class TestSquash:
    def test_matches_frozen_golden_output(self, fixture_doc, fixtures_dir):
        golden = (fixtures_dir / "golden_squash_output.json").read_text(
            encoding="utf-8"
        )
        assert squash(fixture_doc, config()).to_json() == golden

    def test_three_runs_byte_identical(self, fixture_doc):
        runs = {squash(fixture_doc, config()).to_json() for _ in range(3)}
        assert len(runs) == 1

    def test_worker_count_does_not_change_bytes(self, fixture_doc):
        one = squash(fixture_doc, PipelineConfig(seed=7, max_workers=1)).to_json()
        four = squash(fixture_doc, PipelineConfig(seed=7, max_workers=4)).to_json()
        assert one == four

    def test_seed_changes_output(self, fixture_doc):
        a = squash(fixture_doc, config()).to_json()
        b = squash(fixture_doc, PipelineConfig(seed=8, max_workers=1)).to_json()
        assert a != b

    def test_forests_in_input_order(self, fixture_doc):
        out = squash(fixture_doc, PipelineConfig(seed=7, max_workers=4))
        assert [f.paragraph_index for f in out.forests] == [0, 1, 2]
        d = out.to_dict()
        assert [p["index"] for p in d["paragraphs"]] == [0, 1, 2]
        assert len(d["paragraphs"]) == len(fixture_doc.paragraphs)

    def test_single_sentence_document(self):
        doc = prepare_document(raw_text="Wrens nested in the old tower.")
        out = squash(doc, config())
        forest = out.forests[0]
        assert len(forest.trees) <= 1
        for tree in forest.trees:
            assert tree.root.specificity == SpecificityLabel.GENERAL

    def test_counts_telescope(self, fixture_doc):
        out = squash(fixture_doc, config())
        for para in out.to_dict()["paragraphs"]:
            c = para["metadata"]["counts"]
            assert c["after_dedup"] <= c["candidates"]
            assert c["after_relevance"] <= c["after_dedup"]
            assert c["answerable"] <= c["after_relevance"]
            assert c["after_thresholds"] <= c["answerable"]
            assert c["selected"] <= c["after_thresholds"]
            assert c["pairs"] == c["selected"]

    def test_output_schema_keys(self, fixture_doc):
        d = squash(fixture_doc, config()).to_dict()
        assert set(d) == {"document_id", "paragraphs", "config", "version"}
        para = d["paragraphs"][0]
        assert set(para) == {"index", "text", "trees", "orphans", "metadata"}
        node = para["trees"][0]["root"]
        assert set(node) == {"question", "answer", "score"}
        assert set(node["answer"]) == {"start", "end", "text"}
        # answer text round-trips through the stored offsets
        ans = node["answer"]
        assert para["text"][ans["start"]:ans["end"]] == ans["text"]

    def test_single_policy_generates_one_candidate_per_span(self, fixture_doc):
        out = squash(fixture_doc, config(policy=DecodePolicy.SINGLE))
        for para in out.to_dict()["paragraphs"]:
            c = para["metadata"]["counts"]
            assert c["candidates"] == c["spans"]

    def test_budget_flows_through(self, fixture_doc):
        full = squash(fixture_doc, config())
        halved = squash(
            fixture_doc,
            config(budget=BudgetConfig(general_fraction=0.34, specific_fraction=1.0)),
        )
        for f_all, f_half in zip(full.forests, halved.forests):
            import math
            assert len(f_half.trees) == math.ceil(0.34 * len(f_all.trees))


class TestFailureHandling:
    class ExplodingAnswerer:
        def answer(self, paragraph, question):
            from squash.errors import TransportError

            raise TransportError("backend gone", attempts=3)

    def test_single_paragraph_failure_flagged(self, fixture_doc):
        from squash.backends.mock import MockAnswerer, MockGenerator

        class FlakyAnswerer:
            def __init__(self):
                self.inner = MockAnswerer()

            def answer(self, paragraph, question):
                if paragraph.startswith("The crossing"):
                    from squash.errors import TransportError

                    raise TransportError("backend gone", attempts=3)
                return self.inner.answer(paragraph, question)

        forests = squash_forests(
            fixture_doc, config(), MockGenerator(seed=7), FlakyAnswerer()
        )
        assert "error" in forests[1].metadata
        assert forests[1].trees == [] and forests[1].orphans == []
        assert "error" not in forests[0].metadata

    def test_all_paragraphs_failing_is_run_error(self, fixture_doc):
        from squash.backends.mock import MockGenerator

        with pytest.raises(PipelineError):
            squash_forests(
                fixture_doc, config(), MockGenerator(seed=7), self.ExplodingAnswerer()
            )


class TestPrepareDocument:
    def test_long_paragraph_split_on_sentence_boundary(self):
        sentences = [f"Sentence number {i} sits in the block." for i in range(30)]
        text = " ".join(sentences)
        doc = prepare_document(raw_text=text, max_paragraph_chars=200)
        assert len(doc.paragraphs) > 1
        for para in doc.paragraphs:
            # no sentence was cut in half
            assert para.text.endswith(".")

    def test_json_paragraph_input(self):
        doc = prepare_document(paragraphs=["First block.", "Second block."])
        assert len(doc.paragraphs) == 2


class TestCli:
    def run_cli(self, *args):
        return subprocess.run(
            [sys.executable, "-m", "squash.cli", *args],
            capture_output=True, text=True, timeout=120,
        )

    def test_run_matches_golden(self, fixtures_dir, tmp_path):
        out_path = tmp_path / "out.json"
        proc = self.run_cli(
            "run", "--input", str(fixtures_dir / "article.txt"),
            "--backend", "mock", "--seed", "7", "--workers", "1",
            "--out", str(out_path),
        )
        assert proc.returncode == 0, proc.stderr
        golden = (fixtures_dir / "golden_squash_output.json").read_text(
            encoding="utf-8"
        )
        assert out_path.read_text(encoding="utf-8") == golden

    def test_run_budget_flags(self, fixtures_dir):
        proc = self.run_cli(
            "run", "--input", str(fixtures_dir / "article.txt"),
            "--seed", "7", "--general-fraction", "0.3",
        )
        assert proc.returncode == 0, proc.stderr
        data = json.loads(proc.stdout)
        assert data["config"]["budget"]["general_fraction"] == 0.3
        # every fixture paragraph yields 3 roots; ceil(0.3 * 3) == 1
        assert all(len(p["trees"]) == 1 for p in data["paragraphs"])

    def test_classify_command(self, tmp_path):
        qfile = tmp_path / "questions.txt"
        qfile.write_text(
            "Why did the dam fail?\nHow many turbines were lost?\n",
            encoding="utf-8",
        )
        proc = self.run_cli("classify", "--input", str(qfile))
        assert proc.returncode == 0, proc.stderr
        lines = proc.stdout.strip().splitlines()
        assert lines[0].startswith("GENERAL\trule\t")
        assert lines[1].startswith("SPECIFIC\trule\t")

    def test_stats_command(self, fixtures_dir):
        proc = self.run_cli(
            "stats", "--input", str(fixtures_dir / "squad_small.json"),
            "--format", "squad",
        )
        assert proc.returncode == 0, proc.stderr
        report = json.loads(proc.stdout)
        assert report["total"] == 9

    def test_missing_file_is_clean_error(self, tmp_path):
        proc = self.run_cli("stats", "--input", str(tmp_path / "nope.json"))
        assert proc.returncode != 0
