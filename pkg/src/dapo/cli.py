"""Command-line pipeline: build, nidf, score, split, stats, train, predict,
eval-rank, eval-corr, dist.

Every artifact-producing run writes a ``<out>.meta.json`` sidecar recording
the full configuration, including seeds, so datasets can be rebuilt
byte-for-byte. Verbosity is controlled by the ``DAPO_LOG`` environment
variable (DEBUG, INFO, WARNING, ...). Exit codes: 0 success, 1 usage error,
2 data error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import __version__, dataset_io
from .dialogues import segment_corpus
from .errors import ConfigError, DapoError
from .metrics import correlation_report, ranking_metrics, score_histogram
from .negatives import NEGATIVE_KINDS, build_examples
from .scorer import HashedLinearScorer, pair_from_dialogue, rank_candidates
from .scoring import ScoreConfig, corpus_stats, score_examples, split_corpus
from .seeding import RNG_ALGORITHM, derive_seed, make_rng
from .specificity import TokenSpecificity

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage problems; this pipeline reserves 2 for
    data errors, so usage problems exit 1 instead."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _sidecar_config(command: str, args: argparse.Namespace,
                    extra: dict | None = None) -> dict:
    config = {k: v for k, v in vars(args).items() if k != "func"}
    config.update({"command": command, "version": __version__,
                   "rng": RNG_ALGORITHM})
    if extra:
        config.update(extra)
    return config


def cmd_build(args) -> int:
    dialogues = dataset_io.load_dialogues(args.input)
    segments = list(segment_corpus(dialogues, window=args.window,
                                   stride=args.stride))
    examples = build_examples(segments, seed=args.seed, jobs=args.jobs)
    dataset_io.save_examples(examples, args.out)
    dataset_io.write_sidecar(args.out, _sidecar_config("build", args))
    logger.info("wrote %d examples from %d dialogues (%d segments)",
                len(examples), len(dialogues), len(segments))
    return EXIT_OK


def cmd_nidf(args) -> int:
    dialogues = dataset_io.load_dialogues(args.input)
    table = TokenSpecificity(n=args.n).fit(dialogues, jobs=args.jobs)
    table.save(args.out)
    dataset_io.write_sidecar(args.out, _sidecar_config(
        "nidf", args, {"num_docs": table.num_docs_,
                       "distinct_ngrams": len(table.doc_freq_)}))
    return EXIT_OK


def cmd_score(args) -> int:
    examples = dataset_io.load_examples(args.examples)
    table = TokenSpecificity.load(args.nidf)
    cfg = ScoreConfig(n=args.n, ablate_ts=args.ablate_ts)
    score_examples(examples, table, cfg, jobs=args.jobs)
    dataset_io.save_examples(examples, args.out)
    # Scoring draws no randomness; seed recorded as null for provenance.
    dataset_io.write_sidecar(args.out, _sidecar_config(
        "score", args, {"nidf_checksum": dataset_io.file_checksum(args.nidf),
                        "seed": None}))
    return EXIT_OK


def cmd_split(args) -> int:
    examples = dataset_io.load_examples(args.examples)
    rng = make_rng(derive_seed(args.seed, "split"))
    train, dev = split_corpus(examples, args.ratio, rng)
    dataset_io.save_examples(train, args.train_out)
    dataset_io.save_examples(dev, args.dev_out)
    for out in (args.train_out, args.dev_out):
        dataset_io.write_sidecar(out, _sidecar_config("split", args))
    logger.info("split %d examples into %d train / %d dev",
                len(examples), len(train), len(dev))
    return EXIT_OK


def cmd_stats(args) -> int:
    report = corpus_stats(dataset_io.load_examples(args.examples))
    print(report.format_table())
    if args.out:
        import json
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        dataset_io.write_sidecar(args.out, _sidecar_config("stats", args))
    return EXIT_OK


def _scored_pairs(path):
    pairs, targets = [], []
    for e in dataset_io.iter_examples(path):
        if e.score is None:
            raise DapoError(
                f"example {e.id!r} has no score; run the score command first"
            )
        pairs.append(pair_from_dialogue(e.utterances))
        targets.append(e.score)
    return pairs, targets


def cmd_train(args) -> int:
    pairs, targets = _scored_pairs(args.train)
    dev_pairs = dev_targets = None
    if args.dev:
        dev_pairs, dev_targets = _scored_pairs(args.dev)
    model = HashedLinearScorer(
        dim=args.dim, hash_seed=args.hash_seed,
        learning_rate=args.learning_rate, batch_size=args.batch_size,
        epochs=args.epochs, optimizer=args.optimizer,
        seed=derive_seed(args.seed, "train"),
    )
    model.fit(pairs, targets, dev_pairs, dev_targets)
    model.save(args.out)
    dataset_io.write_sidecar(args.out, _sidecar_config(
        "train", args, {"dev_mse_trace": model.dev_mse_trace_,
                        "best_epoch": model.best_epoch_}))
    logger.info("best dev MSE %.6f at epoch %d",
                min(model.dev_mse_trace_), model.best_epoch_)
    return EXIT_OK


def cmd_predict(args) -> int:
    model = HashedLinearScorer.load(args.model)
    with open(args.out, "w", encoding="utf-8") as fh:
        for e in dataset_io.iter_examples(args.examples):
            fh.write(f"{model.predict_one(pair_from_dialogue(e.utterances))!r}\n")
    dataset_io.write_sidecar(args.out, _sidecar_config("predict", args))
    return EXIT_OK


def cmd_eval_rank(args) -> int:
    model = HashedLinearScorer.load(args.model)
    tasks = dataset_io.load_ranking_tasks(args.tasks)
    orderings = [rank_candidates(model, t) for t in tasks]
    report = ranking_metrics(tasks, orderings)
    print(report.format_table())
    if args.out:
        report.to_jsonl(args.out)
        dataset_io.write_sidecar(args.out, _sidecar_config("eval-rank", args))
    return EXIT_OK


def cmd_eval_corr(args) -> int:
    predictions = dataset_io.read_floats(args.pred)
    judgments = dataset_io.read_floats(args.gold)
    report = correlation_report(predictions, judgments)
    print(report.format_table())
    if args.out:
        report.to_jsonl(args.out)
        dataset_io.write_sidecar(args.out, _sidecar_config("eval-corr", args))
    return EXIT_OK


def _kind_selected(kind_filter: str, kind: str) -> bool:
    if kind_filter == "all":
        return True
    if kind_filter == "negative":
        return kind in NEGATIVE_KINDS
    return kind == kind_filter


def cmd_dist(args) -> int:
    values = []
    for e in dataset_io.iter_examples(args.examples):
        if not _kind_selected(args.kind, e.kind):
            continue
        if e.score is None:
            raise DapoError(
                f"example {e.id!r} has no score; run the score command first"
            )
        values.append(e.score)
    hist = score_histogram(values, bins=args.bins)
    hist.to_csv(args.out)
    dataset_io.write_sidecar(args.out, _sidecar_config(
        "dist", args, {"mean": hist.mean, "std": hist.std,
                       "sample_size": len(values)}))
    print(f"n={len(values)} mean={hist.mean:.6f} std={hist.std:.6f}")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="dapo", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="positives + perturbed negatives "
                                     "from a dialogue file")
    p.add_argument("--input", required=True, help="dialogue JSONL")
    p.add_argument("--out", required=True, help="output example JSONL")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--window", type=int, default=10,
                   help="max utterances per segment")
    p.add_argument("--stride", type=int, default=5)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("nidf", help="n-gram document-frequency table "
                                    "over the original dialogues")
    p.add_argument("--input", required=True, help="dialogue JSONL")
    p.add_argument("--out", required=True, help="output table (TSV)")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_nidf)

    p = sub.add_parser("score", help="assign final scores to examples")
    p.add_argument("--examples", required=True)
    p.add_argument("--nidf", required=True, help="frequency table path")
    p.add_argument("--out", required=True)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--ablate-ts", action="store_true",
                   help="drop the specificity factor: positives score 1.0")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("split", help="group-aware train/dev split")
    p.add_argument("--examples", required=True)
    p.add_argument("--ratio", type=float, default=0.9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--train-out", required=True)
    p.add_argument("--dev-out", required=True)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("stats", help="corpus summary statistics")
    p.add_argument("--examples", required=True)
    p.add_argument("--out", help="also write the report as JSON")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("train", help="fit the regression scorer "
                                     "on scored examples")
    p.add_argument("--train", required=True, help="scored example JSONL")
    p.add_argument("--dev", help="scored example JSONL for model selection")
    p.add_argument("--out", required=True, help="model file")
    p.add_argument("--dim", type=int, default=2 ** 18)
    p.add_argument("--hash-seed", type=int, default=0)
    p.add_argument("--learning-rate", type=float, default=1e-5)
    p.add_argument("--batch-size", type=int, default=10)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--optimizer", choices=("sgd", "adam"), default="sgd")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="score examples with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--examples", required=True)
    p.add_argument("--out", required=True, help="one prediction per line")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("eval-rank", help="candidate-ranking metrics "
                                         "(R@1, R@2, MRR, accuracy)")
    p.add_argument("--model", required=True)
    p.add_argument("--tasks", required=True, help="ranking task JSONL")
    p.add_argument("--out", help="also write the report as JSONL")
    p.set_defaults(func=cmd_eval_rank)

    p = sub.add_parser("eval-corr", help="correlation of predictions "
                                         "against gold judgments")
    p.add_argument("--pred", required=True, help="one float per line")
    p.add_argument("--gold", required=True, help="one float per line")
    p.add_argument("--out", help="also write the report as JSONL")
    p.set_defaults(func=cmd_eval_corr)

    p = sub.add_parser("dist", help="histogram of example scores")
    p.add_argument("--examples", required=True, help="scored example JSONL")
    p.add_argument("--bins", type=int, default=20)
    p.add_argument("--kind", choices=("positive", "negative", "all"),
                   default="positive")
    p.add_argument("--out", required=True, help="CSV: bin_upper_edge,count")
    p.set_defaults(func=cmd_dist)

    return parser


def main(argv: list[str] | None = None) -> int:
    level = os.environ.get("DAPO_LOG", "WARNING").upper()
    if level not in ("CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG"):
        level = "WARNING"
    logging.basicConfig(level=level,
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse help/version/usage paths
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"dapo: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DapoError, OSError) as exc:
        print(f"dapo: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
