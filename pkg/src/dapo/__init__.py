"""Dialogue corpus engine and regression-scorer toolkit.

Builds coherence-scored dialogue corpora (positives weighted by n-gram
token specificity, perturbed negatives scored zero), trains a hashed
bag-of-n-grams sigmoid regressor on them, and evaluates with ranking and
correlation metrics.
"""

from .dialogues import (Dialogue, Utterance, parse_dialogues,
                        segment_corpus, segment_dialogue, tokenize)
from .errors import (CannotPerturbError, CannotSplitError, ConfigError,
                     DapoError, DataError, EmptyTableError, TrainingError,
                     UndefinedCorrelationError)
from .metrics import (EvalReport, Histogram, correlation_report,
                      pearson_corr, ranking_metrics, score_histogram,
                      spearman_corr)
from .negatives import Example, build_examples, gen_ui, gen_uo, gen_ur
from .scorer import (BOUNDARY_TOKEN, HashedLinearScorer, PairedInput,
                     RankingTask, featurize, mse_loss, pair_from_dialogue,
                     pair_from_history_candidate, pair_from_question_option,
                     rank_candidates)
from .scoring import (ScoreConfig, StatsReport, corpus_stats, score_example,
                      score_examples, split_corpus)
from .seeding import derive_seed, make_rng
from .specificity import TokenSpecificity, extract_ngrams

__version__ = "0.1.0"

__all__ = [
    "BOUNDARY_TOKEN",
    "CannotPerturbError",
    "CannotSplitError",
    "ConfigError",
    "DapoError",
    "DataError",
    "Dialogue",
    "EmptyTableError",
    "EvalReport",
    "Example",
    "HashedLinearScorer",
    "Histogram",
    "PairedInput",
    "RankingTask",
    "ScoreConfig",
    "StatsReport",
    "TokenSpecificity",
    "TrainingError",
    "UndefinedCorrelationError",
    "Utterance",
    "build_examples",
    "corpus_stats",
    "correlation_report",
    "derive_seed",
    "extract_ngrams",
    "featurize",
    "gen_ui",
    "gen_uo",
    "gen_ur",
    "make_rng",
    "mse_loss",
    "pair_from_dialogue",
    "pair_from_history_candidate",
    "pair_from_question_option",
    "parse_dialogues",
    "pearson_corr",
    "rank_candidates",
    "ranking_metrics",
    "score_example",
    "score_examples",
    "score_histogram",
    "segment_corpus",
    "segment_dialogue",
    "spearman_corr",
    "split_corpus",
    "tokenize",
    "__version__",
]
