"""JSONL round trips, sidecars, and input validation."""

import json

import pytest

from dapo import dataset_io
from dapo.errors import DataError
from dapo.negatives import build_examples
from dapo.scoring import ScoreConfig, score_examples
from dapo.specificity import TokenSpecificity

from conftest import distinct_dialogue, make_dialogue


class TestDialogueIO:
    def test_round_trip(self, tmp_path, small_corpus):
        path = tmp_path / "d.jsonl"
        dataset_io.save_dialogues(small_corpus, path)
        loaded = dataset_io.load_dialogues(path)
        assert [d.id for d in loaded] == [d.id for d in small_corpus]
        assert [[u.tokens for u in d.utterances] for d in loaded] == \
            [[u.tokens for u in d.utterances] for d in small_corpus]

    def test_save_is_deterministic(self, tmp_path, small_corpus):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        dataset_io.save_dialogues(small_corpus, a)
        dataset_io.save_dialogues(small_corpus, b)
        assert a.read_bytes() == b.read_bytes()

    def test_unicode_preserved(self, tmp_path):
        d = make_dialogue("u", ["café naïve — über"])
        path = tmp_path / "d.jsonl"
        dataset_io.save_dialogues([d], path)
        loaded = dataset_io.load_dialogues(path)
        assert loaded[0].utterances[0].text == d.utterances[0].text


class TestExampleIO:
    def scored(self):
        corpus = [distinct_dialogue(f"d{i}", 3) for i in range(4)]
        examples = build_examples(corpus, seed=1)
        table = TokenSpecificity(n=1).fit(corpus)
        return score_examples(examples, table, ScoreConfig(n=1))

    def test_round_trip_with_scores(self, tmp_path):
        examples = self.scored()
        path = tmp_path / "ex.jsonl"
        dataset_io.save_examples(examples, path)
        loaded = dataset_io.load_examples(path)
        assert [(e.id, e.kind, e.score) for e in loaded] == \
            [(e.id, e.kind, e.score) for e in examples]

    def test_unscored_round_trip(self, tmp_path):
        corpus = [distinct_dialogue("d", 3)]
        examples = build_examples(corpus, seed=0)
        path = tmp_path / "ex.jsonl"
        dataset_io.save_examples(examples, path)
        assert json.loads(path.read_text().splitlines()[0])["score"] is None
        assert all(e.score is None for e in dataset_io.load_examples(path))

    def test_bad_kind_rejected(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        record = {"id": "x", "source_id": "s", "kind": "mystery",
                  "score": 0.5, "utterances": [{"speaker": "a", "text": "hi"}]}
        path.write_text(json.dumps(record) + "\n")
        with pytest.raises(DataError, match="line 1"):
            dataset_io.load_examples(path)

    def test_out_of_range_score_rejected(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        record = {"id": "x", "source_id": "s", "kind": "positive",
                  "score": 1.5, "utterances": [{"speaker": "a", "text": "hi"}]}
        path.write_text(json.dumps(record) + "\n")
        with pytest.raises(DataError, match="score"):
            dataset_io.load_examples(path)


class TestRankingTaskIO:
    def test_load_tasks(self, tmp_path):
        record = {"id": "t1",
                  "history": [{"speaker": "a", "text": "How are you?"}],
                  "candidates": ["Fine, thanks!", "Purple monkeys."],
                  "gold": 0}
        path = tmp_path / "tasks.jsonl"
        path.write_text(json.dumps(record) + "\n")
        tasks = dataset_io.load_ranking_tasks(path)
        assert len(tasks) == 1
        assert tasks[0].gold_index == 0
        assert tasks[0].candidates[0].text_a == ["how", "are", "you", "?"]
        assert tasks[0].candidates[1].text_b == ["purple", "monkeys", "."]

    def test_missing_field_names_line(self, tmp_path):
        path = tmp_path / "tasks.jsonl"
        path.write_text(json.dumps({"id": "t", "candidates": []}) + "\n")
        with pytest.raises(DataError, match="line 1"):
            dataset_io.load_ranking_tasks(path)


class TestSidecarAndChecksum:
    def test_sidecar_written_next_to_artifact(self, tmp_path):
        out = tmp_path / "data.jsonl"
        out.write_text("{}\n")
        sidecar = dataset_io.write_sidecar(out, {"seed": 42, "command": "x"})
        assert sidecar.name == "data.jsonl.meta.json"
        assert json.loads(sidecar.read_text())["seed"] == 42

    def test_checksum_tracks_content(self, tmp_path):
        f = tmp_path / "f.txt"
        f.write_text("abc")
        first = dataset_io.file_checksum(f)
        assert first.startswith("sha256:")
        f.write_text("abd")
        assert dataset_io.file_checksum(f) != first

    def test_read_floats(self, tmp_path):
        f = tmp_path / "vals.txt"
        f.write_text("0.5\n\n1.0\n-2.25\n")
        assert dataset_io.read_floats(f) == [0.5, 1.0, -2.25]
        f.write_text("0.5\noops\n")
        with pytest.raises(DataError, match="line 2"):
            dataset_io.read_floats(f)
