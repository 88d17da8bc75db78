"""Dialogue records: tokenization, parsing, and sliding-window segmentation.

A dialogue is an ordered list of speaker-tagged utterances. Long dialogues
are cut into overlapping segments of at most ``window`` utterances so that
every emitted dialogue stays short enough for downstream scoring.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import ConfigError, DataError

MAX_UTTERANCES = 10
DEFAULT_STRIDE = 5


def tokenize(text: str) -> list[str]:
    """Lowercase and split ``text`` into word and punctuation-run tokens.

    Splits on whitespace; within each chunk, every maximal run of
    non-alphanumeric characters becomes its own token, so "Hello, you?"
    yields ["hello", ",", "you", "?"]. Deterministic; empty input gives [].
    """
    tokens: list[str] = []
    for chunk in text.lower().split():
        run_start = 0
        run_is_word = chunk[0].isalnum()
        for i, ch in enumerate(chunk):
            if ch.isalnum() != run_is_word:
                tokens.append(chunk[run_start:i])
                run_start = i
                run_is_word = not run_is_word
        tokens.append(chunk[run_start:])
    return tokens


@dataclass
class Utterance:
    speaker: str
    text: str
    tokens: list[str]

    @classmethod
    def build(cls, speaker: str, text: str) -> "Utterance":
        return cls(speaker=speaker, text=text, tokens=tokenize(text))


@dataclass
class Dialogue:
    """An ordered utterance sequence with provenance.

    ``origin_span`` is set only on segments derived from a longer parent
    dialogue and records (parent id, start index, end index).
    """

    id: str
    source: str
    utterances: list[Utterance] = field(default_factory=list)
    origin_span: tuple[str, int, int] | None = None

    def __len__(self) -> int:
        return len(self.utterances)


def parse_dialogues(lines: Iterable[str]) -> list[Dialogue]:
    """Parse line-delimited JSON dialogue records.

    Each line must be ``{"id": str, "source": str, "utterances":
    [{"speaker": str, "text": str}, ...]}``. Raises :class:`DataError`
    naming the offending line on malformed records or duplicate ids.
    """
    dialogues: list[Dialogue] = []
    seen_ids: set[str] = set()
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataError(f"line {lineno}: invalid JSON ({exc.msg})") from exc
        dialogue = _dialogue_from_record(record, lineno)
        if dialogue.id in seen_ids:
            raise DataError(f"line {lineno}: duplicate dialogue id {dialogue.id!r}")
        seen_ids.add(dialogue.id)
        dialogues.append(dialogue)
    return dialogues


def _dialogue_from_record(record: object, lineno: int) -> Dialogue:
    if not isinstance(record, dict):
        raise DataError(f"line {lineno}: record is not an object")
    for key in ("id", "source", "utterances"):
        if key not in record:
            raise DataError(f"line {lineno}: missing field {key!r}")
    if not isinstance(record["utterances"], list) or not record["utterances"]:
        raise DataError(f"line {lineno}: 'utterances' must be a non-empty list")
    utterances = []
    for pos, u in enumerate(record["utterances"]):
        if not isinstance(u, dict) or "speaker" not in u or "text" not in u:
            raise DataError(
                f"line {lineno}: utterance {pos} must have 'speaker' and 'text'"
            )
        utterances.append(Utterance.build(str(u["speaker"]), str(u["text"])))
    return Dialogue(id=str(record["id"]), source=str(record["source"]),
                    utterances=utterances)


def segment_dialogue(d: Dialogue, window: int = MAX_UTTERANCES,
                     stride: int = DEFAULT_STRIDE) -> list[Dialogue]:
    """Split ``d`` into overlapping windows of at most ``window`` utterances.

    Dialogues already within the window are returned unchanged. Otherwise
    windows start at 0, stride, 2*stride, ...; a window that would overrun
    the end is replaced by the right-aligned window, and duplicate spans are
    dropped. Every utterance of ``d`` lands in at least one segment.
    """
    if window < 2:
        raise ConfigError(f"window must be >= 2, got {window}")
    if not 1 <= stride <= window:
        raise ConfigError(f"stride must be in [1, window], got {stride}")
    n = len(d)
    if n <= window:
        return [d]

    spans: list[tuple[int, int]] = []
    start = 0
    while start < n:
        end = start + window
        if end > n:
            start, end = n - window, n
        if (start, end) not in spans:
            spans.append((start, end))
        if end == n:
            break
        start += stride

    segments = []
    for start, end in spans:
        segments.append(Dialogue(
            id=f"{d.id}@{start}:{end}",
            source=d.source,
            utterances=d.utterances[start:end],
            origin_span=(d.id, start, end),
        ))
    return segments


def segment_corpus(dialogues: Iterable[Dialogue], window: int = MAX_UTTERANCES,
                   stride: int = DEFAULT_STRIDE) -> Iterator[Dialogue]:
    """Segment every dialogue, preserving input order."""
    for d in dialogues:
        yield from segment_dialogue(d, window=window, stride=stride)
