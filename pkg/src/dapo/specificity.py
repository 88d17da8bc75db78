"""Token specificity from n-gram inverse document frequency.

The rarity of an n-gram over a dialogue collection of size D is
``idf(ng) = log(D / doc_freq(ng))``; min-max normalizing over all observed
n-grams gives ``nidf`` in [0, 1]. An example's specificity is the
occurrence-weighted mean nidf of its n-grams, again in [0, 1].

:class:`TokenSpecificity` follows the scikit-learn estimator protocol:
``fit`` counts document frequencies over the original (unsegmented)
dialogue collection, ``transform`` maps examples to specificity values.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Iterable, Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .dialogues import Dialogue, Utterance
from .errors import ConfigError, DataError, EmptyTableError
from .validation import check_fitted

NgramKey = tuple[str, ...]


def extract_ngrams(utterances: Sequence[Utterance], n: int) -> Counter:
    """Count n-grams within each utterance's token list.

    Windows never cross utterance boundaries; utterances shorter than ``n``
    contribute nothing. Multiplicity is the total occurrence count.
    """
    if n < 1:
        raise ConfigError(f"n-gram order must be >= 1, got {n}")
    counts: Counter = Counter()
    for u in utterances:
        tokens = u.tokens
        for i in range(len(tokens) - n + 1):
            counts[tuple(tokens[i:i + n])] += 1
    return counts


class TokenSpecificity(BaseEstimator, TransformerMixin):
    """n-gram document-frequency table with normalized-IDF lookups.

    Parameters
    ----------
    n : n-gram order (3 by default).

    Fitted attributes
    -----------------
    num_docs_ : number of dialogues the table was built over.
    doc_freq_ : dict mapping n-gram tuples to the number of dialogues
        containing them.
    min_idf_, max_idf_ : natural-log IDF extremes over stored n-grams,
        fixing the normalization.
    """

    def __init__(self, n: int = 3):
        self.n = n

    def fit(self, dialogues: Sequence[Dialogue], y=None,
            jobs: int = 1) -> "TokenSpecificity":
        if self.n < 1:
            raise ConfigError(f"n-gram order must be >= 1, got {self.n}")
        dialogues = list(dialogues)
        if not dialogues:
            raise DataError("cannot build a frequency table from zero dialogues")

        if jobs > 1:
            from .parallel import run_slices
            partials = run_slices(_doc_freq_for_slice, dialogues, jobs,
                                  extra=(self.n,))
            doc_freq: Counter = Counter()
            for part in partials:
                doc_freq.update(part)
        else:
            doc_freq = _doc_freq_for_slice(dialogues, self.n)

        if not doc_freq:
            raise EmptyTableError(
                f"no {self.n}-gram occurs in any of {len(dialogues)} dialogues"
            )
        self.num_docs_ = len(dialogues)
        self.doc_freq_ = dict(doc_freq)
        max_count = max(doc_freq.values())
        min_count = min(doc_freq.values())
        self.min_idf_ = math.log(self.num_docs_ / max_count)
        self.max_idf_ = math.log(self.num_docs_ / min_count)
        return self

    def idf(self, ngram: NgramKey) -> float:
        check_fitted(self, "doc_freq_")
        count = self.doc_freq_.get(tuple(ngram))
        if count is None:
            raise KeyError(f"n-gram not in table: {ngram!r}")
        return math.log(self.num_docs_ / count)

    def nidf(self, ngram: NgramKey) -> float:
        """Min-max normalized IDF in [0, 1].

        Unseen n-grams count as maximally rare (1.0). A degenerate table
        whose stored IDFs are all equal carries no specificity signal, so
        every stored key maps to 0.0.
        """
        check_fitted(self, "doc_freq_")
        count = self.doc_freq_.get(tuple(ngram))
        if count is None:
            return 1.0
        spread = self.max_idf_ - self.min_idf_
        if spread <= 0.0:
            return 0.0
        idf = math.log(self.num_docs_ / count)
        return (idf - self.min_idf_) / spread

    def specificity(self, example) -> float:
        """Occurrence-weighted mean nidf of the example's n-grams.

        ``example`` is anything with an ``utterances`` attribute. Returns
        0.0 when the example contains no n-gram of order ``n``.
        """
        check_fitted(self, "doc_freq_")
        counts = extract_ngrams(example.utterances, self.n)
        total = sum(counts.values())
        if total == 0:
            return 0.0
        return sum(self.nidf(ng) * c for ng, c in counts.items()) / total

    def transform(self, examples: Iterable) -> np.ndarray:
        """Specificity value per example, as a float array."""
        return np.array([self.specificity(e) for e in examples], dtype=float)

    # -- persistence ---------------------------------------------------

    def save(self, path) -> None:
        """Write the table as sorted tab-separated text.

        Line 1: ``n=<n>\\tD=<num_docs>``. Line 2: the IDF extremes at full
        precision. Then one ``<tok1 ... tokn>\\t<count>`` row per n-gram in
        lexicographic key order, so equal tables are byte-identical.
        """
        check_fitted(self, "doc_freq_")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"n={self.n}\tD={self.num_docs_}\n")
            fh.write(f"min_idf={self.min_idf_!r}\tmax_idf={self.max_idf_!r}\n")
            for key in sorted(self.doc_freq_):
                fh.write(f"{' '.join(key)}\t{self.doc_freq_[key]}\n")

    @classmethod
    def load(cls, path) -> "TokenSpecificity":
        with open(path, encoding="utf-8") as fh:
            header = fh.readline().rstrip("\n")
            extremes = fh.readline().rstrip("\n")
            try:
                n_part, d_part = header.split("\t")
                n = int(n_part.removeprefix("n="))
                num_docs = int(d_part.removeprefix("D="))
                min_part, max_part = extremes.split("\t")
                min_idf = float(min_part.removeprefix("min_idf="))
                max_idf = float(max_part.removeprefix("max_idf="))
            except ValueError as exc:
                raise DataError(f"malformed table header in {path}") from exc
            doc_freq: dict[NgramKey, int] = {}
            for lineno, line in enumerate(fh, start=3):
                line = line.rstrip("\n")
                if not line:
                    continue
                try:
                    key_part, count_part = line.split("\t")
                    doc_freq[tuple(key_part.split(" "))] = int(count_part)
                except ValueError as exc:
                    raise DataError(f"line {lineno}: malformed table row") from exc
        table = cls(n=n)
        table.num_docs_ = num_docs
        table.doc_freq_ = doc_freq
        table.min_idf_ = min_idf
        table.max_idf_ = max_idf
        return table


def _doc_freq_for_slice(dialogues: list[Dialogue], n: int) -> Counter:
    doc_freq: Counter = Counter()
    for d in dialogues:
        doc_freq.update(set(extract_ngrams(d.utterances, n)))
    return doc_freq
