"""Evaluation metrics: correlation with significance, ranking quality,
and score-distribution histograms.

Pearson significance uses the two-sided t-statistic
``t = r * sqrt((n - 2) / (1 - r^2))`` against Student-t with n-2 degrees of
freedom; Spearman is Pearson over average ranks (ties get the mean rank)
with the same t-approximation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import stats

from .errors import ConfigError, DataError, UndefinedCorrelationError
from .scorer import RankingTask


@dataclass
class EvalReport:
    """Metric values keyed by name, with p-values where defined."""

    metrics: dict[str, float] = field(default_factory=dict)
    p_values: dict[str, float] = field(default_factory=dict)
    sample_size: int = 0

    def to_records(self) -> list[dict]:
        records = []
        for name, value in self.metrics.items():
            rec = {"metric": name, "value": value, "n": self.sample_size}
            if name in self.p_values:
                rec["p_value"] = self.p_values[name]
            records.append(rec)
        return records

    def to_jsonl(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for rec in self.to_records():
                fh.write(json.dumps(rec, sort_keys=True))
                fh.write("\n")

    def format_table(self) -> str:
        width = max(len(name) for name in self.metrics) if self.metrics else 6
        lines = [f"{'metric':<{width}}  {'value':>10}  {'p_value':>10}  n"]
        for name, value in self.metrics.items():
            p = self.p_values.get(name)
            p_text = f"{p:>10.4g}" if p is not None else f"{'-':>10}"
            lines.append(
                f"{name:<{width}}  {value:>10.6f}  {p_text}  {self.sample_size}"
            )
        return "\n".join(lines)


def _check_pair(x: Sequence[float], y: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DataError(f"need equal-length vectors, got {x.shape} and {y.shape}")
    if x.size < 3:
        raise UndefinedCorrelationError(f"need >= 3 points, got {x.size}")
    return x, y


def _t_p_value(r: float, n: int) -> float:
    if 1.0 - r * r <= 0.0:
        return 0.0
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    return float(2.0 * stats.t.sf(abs(t), n - 2))


def pearson_corr(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Sample Pearson r with a two-sided p-value."""
    x, y = _check_pair(x, y)
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelationError("correlation undefined for a constant vector")
    r = float(dx @ dy) / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    return r, _t_p_value(r, x.size)


def average_ranks(values: Sequence[float]) -> np.ndarray:
    """1-based ranks; tied values share the mean of their positions."""
    values = np.asarray(values, dtype=float)
    order = np.argsort(values, kind="stable")
    ranks = np.empty(values.size, dtype=float)
    i = 0
    while i < values.size:
        j = i
        while j + 1 < values.size and values[order[j + 1]] == values[order[i]]:
            j += 1
        ranks[order[i:j + 1]] = (i + j) / 2.0 + 1.0
        i = j + 1
    return ranks


def spearman_corr(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Pearson correlation of average ranks, p-value via the same t-statistic."""
    x, y = _check_pair(x, y)
    return pearson_corr(average_ranks(x), average_ranks(y))


def ranking_metrics(tasks: Sequence[RankingTask],
                    orderings: Sequence[Sequence[int]]) -> EvalReport:
    """R@1, R@2, mean reciprocal rank, and accuracy over ranked tasks.

    ``orderings[i]`` lists candidate indices of ``tasks[i]`` best-first.
    """
    if len(tasks) != len(orderings):
        raise DataError(
            f"{len(tasks)} tasks but {len(orderings)} orderings"
        )
    if not tasks:
        raise DataError("no ranking tasks given")
    hits1 = hits2 = 0
    reciprocal_sum = 0.0
    for task, ordering in zip(tasks, orderings):
        if sorted(ordering) != list(range(len(task.candidates))):
            raise DataError(
                f"task {task.group_id!r}: ordering is not a permutation "
                f"of its candidates"
            )
        rank = list(ordering).index(task.gold_index) + 1
        hits1 += rank <= 1
        hits2 += rank <= 2
        reciprocal_sum += 1.0 / rank
    n = len(tasks)
    r1 = hits1 / n
    return EvalReport(
        metrics={"r_at_1": r1, "r_at_2": hits2 / n,
                 "mrr": reciprocal_sum / n, "accuracy": r1},
        sample_size=n,
    )


def correlation_report(predictions: Sequence[float],
                       judgments: Sequence[float]) -> EvalReport:
    """Pearson and Spearman of predictions against human judgments."""
    pr, pp = pearson_corr(predictions, judgments)
    sr, sp = spearman_corr(predictions, judgments)
    return EvalReport(
        metrics={"pearson": pr, "spearman": sr},
        p_values={"pearson": pp, "spearman": sp},
        sample_size=len(list(predictions)),
    )


@dataclass
class Histogram:
    """Uniform-bin histogram over [0, 1] with distribution moments."""

    edges: list[float]
    counts: list[int]
    mean: float
    std: float

    def to_csv(self, path) -> None:
        """Two columns: upper bin edge, count."""
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("bin_upper_edge,count\n")
            for edge, count in zip(self.edges[1:], self.counts):
                fh.write(f"{edge!r},{count}\n")


def score_histogram(values: Sequence[float], bins: int) -> Histogram:
    """Histogram of scores in [0, 1] with ``bins`` uniform bins.

    Bins are half-open on the right except the last, which includes 1.0.
    Raises :class:`DataError` naming the index of any out-of-range value.
    """
    if bins < 1:
        raise ConfigError(f"bins must be >= 1, got {bins}")
    counts = [0] * bins
    values = list(values)
    for i, v in enumerate(values):
        if not 0.0 <= v <= 1.0:
            raise DataError(f"value at index {i} outside [0, 1]: {v!r}")
        counts[min(int(v * bins), bins - 1)] += 1
    arr = np.asarray(values, dtype=float)
    return Histogram(
        edges=[b / bins for b in range(bins + 1)],
        counts=counts,
        mean=float(arr.mean()) if arr.size else 0.0,
        std=float(arr.std()) if arr.size else 0.0,
    )
