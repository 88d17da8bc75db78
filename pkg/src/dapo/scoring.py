"""Final example scores, corpus splitting, and corpus statistics.

The score law: negatives get exactly 0.0; positives get their token
specificity (or exactly 1.0 when the specificity factor is ablated).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .errors import CannotSplitError, ConfigError, DataError
from .negatives import KIND_POSITIVE, Example
from .specificity import TokenSpecificity


@dataclass
class ScoreConfig:
    """n-gram order for specificity plus the ablation switch."""

    n: int = 3
    ablate_ts: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError(f"n-gram order must be >= 1, got {self.n}")


def score_example(e: Example, table: TokenSpecificity,
                  cfg: ScoreConfig | None = None) -> float:
    """Assign and return the example's score.

    Negatives score 0.0. Positives score their specificity under ``table``,
    or exactly 1.0 with ``ablate_ts``.
    """
    cfg = cfg or ScoreConfig()
    if table.n != cfg.n:
        raise ConfigError(f"table order {table.n} != configured order {cfg.n}")
    if e.kind != KIND_POSITIVE:
        e.score = 0.0
    elif cfg.ablate_ts:
        e.score = 1.0
    else:
        e.score = table.specificity(e)
    return e.score


def score_examples(examples: list[Example], table: TokenSpecificity,
                   cfg: ScoreConfig | None = None,
                   jobs: int = 1) -> list[Example]:
    """Score every example in place; order preserved."""
    cfg = cfg or ScoreConfig()
    if jobs > 1:
        from .parallel import map_slices
        scored = map_slices(_score_slice, examples, jobs, extra=(table, cfg))
        for e, s in zip(examples, scored):
            e.score = s.score
        return examples
    return _score_slice(examples, table, cfg)


def _score_slice(examples: list[Example], table: TokenSpecificity,
                 cfg: ScoreConfig) -> list[Example]:
    for e in examples:
        score_example(e, table, cfg)
    return examples


def split_corpus(examples: list[Example], ratio: float,
                 rng: random.Random) -> tuple[list[Example], list[Example]]:
    """Split into (train, dev) by source-dialogue group.

    A positive and its negatives share a source id and always land on the
    same side. Groups are shuffled by ``rng`` and the first
    round(ratio * n_groups) of them (half-up) form the train side.
    """
    if not 0 < ratio < 1:
        raise CannotSplitError(
            f"ratio must be strictly inside (0, 1), got {ratio}"
        )
    group_order: list[str] = []
    seen: set[str] = set()
    for e in examples:
        if e.source_id not in seen:
            seen.add(e.source_id)
            group_order.append(e.source_id)
    if len(group_order) < 2:
        raise CannotSplitError(
            f"need at least 2 source groups, got {len(group_order)}"
        )
    shuffled = list(group_order)
    rng.shuffle(shuffled)
    n_train = int(math.floor(ratio * len(shuffled) + 0.5))
    train_groups = set(shuffled[:n_train])
    train = [e for e in examples if e.source_id in train_groups]
    dev = [e for e in examples if e.source_id not in train_groups]
    return train, dev


@dataclass
class StatsReport:
    """Corpus size and shape summary: the five headline statistics."""

    all_examples: int
    positive_examples: int
    negative_examples: int
    avg_utterances_per_example: float
    avg_tokens_per_example: float

    def to_dict(self) -> dict:
        return {
            "all_examples": self.all_examples,
            "positive_examples": self.positive_examples,
            "negative_examples": self.negative_examples,
            "avg_utterances_per_example": self.avg_utterances_per_example,
            "avg_tokens_per_example": self.avg_tokens_per_example,
        }

    def format_table(self) -> str:
        rows = [
            ("# of all examples", f"{self.all_examples}"),
            ("# of positive examples", f"{self.positive_examples}"),
            ("# of negative examples", f"{self.negative_examples}"),
            ("avg # utterances per example",
             f"{self.avg_utterances_per_example:.2f}"),
            ("avg # tokens per example",
             f"{self.avg_tokens_per_example:.2f}"),
        ]
        width = max(len(label) for label, _ in rows)
        return "\n".join(f"{label:<{width}}  {value}" for label, value in rows)


def corpus_stats(examples: list[Example]) -> StatsReport:
    """Exact counts plus average utterances and tokens per example."""
    if not examples:
        raise DataError("cannot summarize an empty example list")
    n_pos = sum(1 for e in examples if e.kind == KIND_POSITIVE)
    total_utts = sum(len(e.utterances) for e in examples)
    total_tokens = sum(len(u.tokens) for e in examples for u in e.utterances)
    n = len(examples)
    return StatsReport(
        all_examples=n,
        positive_examples=n_pos,
        negative_examples=n - n_pos,
        avg_utterances_per_example=total_utts / n,
        avg_tokens_per_example=total_tokens / n,
    )
