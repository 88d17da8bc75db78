"""File formats: dialogue and example JSONL, metadata sidecars, checksums.

All records are UTF-8, one JSON object per line, written with a fixed field
order so identical data produces identical bytes.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Iterable, Iterator

from .dialogues import Dialogue, Utterance, parse_dialogues
from .errors import DataError
from .negatives import KINDS, Example


def load_dialogues(path) -> list[Dialogue]:
    with open(path, encoding="utf-8") as fh:
        return parse_dialogues(fh)


def save_dialogues(dialogues: Iterable[Dialogue], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for d in dialogues:
            record = {
                "id": d.id,
                "source": d.source,
                "utterances": [{"speaker": u.speaker, "text": u.text}
                               for u in d.utterances],
            }
            fh.write(json.dumps(record, ensure_ascii=False))
            fh.write("\n")


def example_to_record(e: Example) -> dict:
    return {
        "id": e.id,
        "source_id": e.source_id,
        "kind": e.kind,
        "score": e.score,
        "utterances": [{"speaker": u.speaker, "text": u.text}
                       for u in e.utterances],
    }


def save_examples(examples: Iterable[Example], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for e in examples:
            fh.write(json.dumps(example_to_record(e), ensure_ascii=False))
            fh.write("\n")


def iter_examples(path) -> Iterator[Example]:
    """Stream examples from a JSONL file, one record at a time."""
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
            yield _example_from_record(record, lineno)


def load_examples(path) -> list[Example]:
    return list(iter_examples(path))


def _example_from_record(record: object, lineno: int) -> Example:
    if not isinstance(record, dict):
        raise DataError(f"line {lineno}: record is not an object")
    for key in ("id", "source_id", "kind", "utterances"):
        if key not in record:
            raise DataError(f"line {lineno}: missing field {key!r}")
    if record["kind"] not in KINDS:
        raise DataError(f"line {lineno}: unknown kind {record['kind']!r}")
    score = record.get("score")
    if score is not None:
        score = float(score)
        if not 0.0 <= score <= 1.0:
            raise DataError(f"line {lineno}: score {score!r} outside [0, 1]")
    utterances = []
    for pos, u in enumerate(record["utterances"]):
        if not isinstance(u, dict) or "speaker" not in u or "text" not in u:
            raise DataError(
                f"line {lineno}: utterance {pos} must have 'speaker' and 'text'"
            )
        utterances.append(Utterance.build(str(u["speaker"]), str(u["text"])))
    return Example(id=str(record["id"]), source_id=str(record["source_id"]),
                   kind=str(record["kind"]), utterances=utterances, score=score)


def load_ranking_tasks(path) -> list["RankingTask"]:
    """Ranking tasks as JSONL: ``{"id": str, "history": [{"speaker",
    "text"}, ...], "candidates": [str, ...], "gold": int}``.

    Each candidate becomes a (history | candidate) paired input.
    """
    from .scorer import RankingTask, pair_from_history_candidate
    from .dialogues import tokenize

    tasks = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
            for key in ("id", "history", "candidates", "gold"):
                if key not in record:
                    raise DataError(f"line {lineno}: missing field {key!r}")
            history = []
            for pos, u in enumerate(record["history"]):
                if isinstance(u, dict):
                    if "text" not in u:
                        raise DataError(
                            f"line {lineno}: history utterance {pos} missing 'text'"
                        )
                    history.append(Utterance.build(str(u.get("speaker", "")),
                                                   str(u["text"])))
                else:
                    history.append(Utterance.build("", str(u)))
            candidates = [pair_from_history_candidate(history, tokenize(str(c)))
                          for c in record["candidates"]]
            try:
                tasks.append(RankingTask(group_id=str(record["id"]),
                                         candidates=candidates,
                                         gold_index=int(record["gold"])))
            except DataError as exc:
                raise DataError(f"line {lineno}: {exc}") from exc
    return tasks


def file_checksum(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return f"sha256:{digest.hexdigest()}"


def write_sidecar(out_path, config: dict) -> Path:
    """Record a run's full configuration next to its artifact."""
    sidecar = Path(f"{out_path}.meta.json")
    with open(sidecar, "w", encoding="utf-8") as fh:
        json.dump(config, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return sidecar


def read_floats(path) -> list[float]:
    """One float per non-empty line."""
    values = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                values.append(float(line))
            except ValueError as exc:
                raise DataError(f"line {lineno}: not a number: {line!r}") from exc
    return values
