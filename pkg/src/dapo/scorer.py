"""Hashed bag-of-n-gram regression scorer.

A deliberately small stand-in for a large pre-trained encoder: unigram and
bigram features of a (textA, textB) token pair are hashed into a fixed-size
space, a single linear unit maps them to a real value, and a sigmoid squashes
it into (0, 1). Training minimizes mean squared error against target scores
with mini-batch SGD (or Adam), shuffling per epoch from a seed.

Task framings share one model:

* question answering  -- textA = dialogue, textB = question + option;
* response selection  -- textA = history, textB = candidate response;
* whole-dialogue quality -- textA = dialogue, textB absent.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin

from .dialogues import Utterance
from .errors import ConfigError, DataError, TrainingError
from .validation import check_fitted, check_power_of_two, check_unit_interval

#: Token inserted between utterances when a dialogue becomes one flat text.
BOUNDARY_TOKEN = "<eou>"

#: |z| beyond this saturates sigmoid to exactly 0/1 in float64; clamping
#: keeps predictions strictly inside (0, 1).
_Z_CLAMP = 36.0

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U64 = 0xFFFFFFFFFFFFFFFF


def fnv1a_64(data: bytes, basis: int = _FNV_OFFSET) -> int:
    """FNV-1a 64-bit hash of ``data``."""
    h = basis
    for byte in data:
        h = ((h ^ byte) * _FNV_PRIME) & _U64
    return h


@dataclass
class PairedInput:
    """The two text slots of the scorer; ``text_b`` is optional."""

    text_a: list[str]
    text_b: list[str] | None = None


@dataclass
class RankingTask:
    """Candidates for one selection decision, with the gold position."""

    group_id: str
    candidates: list[PairedInput]
    gold_index: int

    def __post_init__(self):
        if len(self.candidates) < 2:
            raise DataError(f"task {self.group_id!r}: need >= 2 candidates")
        if not 0 <= self.gold_index < len(self.candidates):
            raise DataError(f"task {self.group_id!r}: gold index out of range")


def pair_from_dialogue(utterances: list[Utterance]) -> PairedInput:
    """Whole-dialogue framing: utterances joined into textA, textB empty."""
    tokens: list[str] = []
    for i, u in enumerate(utterances):
        if i:
            tokens.append(BOUNDARY_TOKEN)
        tokens.extend(u.tokens)
    return PairedInput(text_a=tokens, text_b=None)


def pair_from_history_candidate(history: list[Utterance],
                                candidate: list[str]) -> PairedInput:
    """Response-selection framing: history is textA, the candidate textB."""
    return PairedInput(text_a=pair_from_dialogue(history).text_a,
                       text_b=list(candidate))


def pair_from_question_option(dialogue: list[Utterance], question: list[str],
                              option: list[str]) -> PairedInput:
    """Question-answering framing: dialogue is textA, question+option textB."""
    return PairedInput(text_a=pair_from_dialogue(dialogue).text_a,
                       text_b=list(question) + list(option))


def featurize(pair: PairedInput, dim: int, hash_seed: int = 0) -> dict[int, float]:
    """Hash unigrams and bigrams of both slots into a sparse vector.

    Feature strings are namespaced ("A|..." / "B|...") so the two slots never
    share weights; indices come from FNV-1a-64 of the UTF-8 bytes (the basis
    is XORed with ``hash_seed``), values are occurrence counts normalized by
    the total feature count.
    """
    check_power_of_two(dim, "dim")
    basis = _FNV_OFFSET ^ (hash_seed & _U64)
    counts: dict[int, int] = {}
    total = 0
    for namespace, tokens in (("A", pair.text_a), ("B", pair.text_b or [])):
        keys = [f"{namespace}|{t}" for t in tokens]
        keys.extend(f"{namespace}|{tokens[i]} {tokens[i + 1]}"
                    for i in range(len(tokens) - 1))
        for key in keys:
            idx = fnv1a_64(key.encode("utf-8"), basis) % dim
            counts[idx] = counts.get(idx, 0) + 1
            total += 1
    if total == 0:
        return {}
    return {idx: c / total for idx, c in counts.items()}


def sigmoid(z: float) -> float:
    z = max(-_Z_CLAMP, min(_Z_CLAMP, z))
    return 1.0 / (1.0 + math.exp(-z))


def mse_loss(predictions, targets) -> float:
    """Mean of squared differences."""
    if len(predictions) != len(targets):
        raise DataError(
            f"length mismatch: {len(predictions)} predictions, "
            f"{len(targets)} targets"
        )
    if len(predictions) == 0:
        raise DataError("cannot compute a loss over zero pairs")
    return float(np.mean((np.asarray(predictions, dtype=float)
                          - np.asarray(targets, dtype=float)) ** 2))


class HashedLinearScorer(BaseEstimator, RegressorMixin):
    """Linear model over hashed pair features with a sigmoid output head.

    Parameters mirror the training setup: learning rate, mini-batch size,
    epoch count, optimizer ("sgd" or "adam" with beta1=0.9, beta2=0.999,
    eps=1e-8, no weight decay), and the shuffling seed.

    Fitted attributes: ``weights_`` (dense, length ``dim``), ``bias_``,
    ``dev_mse_trace_`` (per-epoch dev loss), ``best_epoch_``.
    """

    ADAM_BETA1 = 0.9
    ADAM_BETA2 = 0.999
    ADAM_EPS = 1e-8

    def __init__(self, dim: int = 2 ** 18, hash_seed: int = 0,
                 learning_rate: float = 1e-5, batch_size: int = 10,
                 epochs: int = 5, optimizer: str = "sgd", seed: int = 0):
        self.dim = dim
        self.hash_seed = hash_seed
        self.learning_rate = learning_rate
        self.batch_size = batch_size
        self.epochs = epochs
        self.optimizer = optimizer
        self.seed = seed

    def _check_params(self):
        check_power_of_two(self.dim, "dim")
        if self.learning_rate <= 0:
            raise ConfigError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.optimizer not in ("sgd", "adam"):
            raise ConfigError(f"unknown optimizer {self.optimizer!r}")

    # -- inference -----------------------------------------------------

    def _raw(self, features: dict[int, float]) -> float:
        z = self.bias_ + sum(self.weights_[i] * v for i, v in features.items())
        if not math.isfinite(z):
            raise TrainingError(f"non-finite pre-activation {z!r}")
        return z

    def predict_one(self, pair: PairedInput) -> float:
        """Sigmoid of the linear response; always strictly inside (0, 1)."""
        check_fitted(self, "weights_", "bias_")
        return sigmoid(self._raw(featurize(pair, self.dim, self.hash_seed)))

    def predict(self, pairs) -> np.ndarray:
        return np.array([self.predict_one(p) for p in pairs], dtype=float)

    # -- training ------------------------------------------------------

    def fit(self, pairs, targets, dev_pairs=None, dev_targets=None
            ) -> "HashedLinearScorer":
        """Mini-batch gradient descent on the sigmoid + MSE head.

        The batch gradient is analytic: d/dz of (sigmoid(z) - y)^2 is
        2 (s - y) s (1 - s). Epoch order is shuffled from ``seed``; the
        returned parameters are those of the epoch with the lowest dev MSE
        (train MSE when no dev set is given).
        """
        self._check_params()
        pairs = list(pairs)
        targets = [float(t) for t in targets]
        if not pairs:
            raise DataError("empty training set")
        if len(pairs) != len(targets):
            raise DataError(
                f"length mismatch: {len(pairs)} pairs, {len(targets)} targets"
            )
        check_unit_interval(targets, "targets")
        feats = [featurize(p, self.dim, self.hash_seed) for p in pairs]
        if dev_pairs is None:
            dev_feats, dev_targets = feats, targets
        else:
            dev_targets = [float(t) for t in dev_targets]
            check_unit_interval(dev_targets, "dev_targets")
            dev_feats = [featurize(p, self.dim, self.hash_seed)
                         for p in dev_pairs]

        self.weights_ = np.zeros(self.dim, dtype=float)
        self.bias_ = 0.0
        rng = random.Random(self.seed)
        state = _AdamState(self.dim) if self.optimizer == "adam" else None

        best_mse = math.inf
        best = (self.weights_.copy(), self.bias_)
        trace: list[float] = []
        order = list(range(len(pairs)))
        for epoch in range(self.epochs):
            rng.shuffle(order)
            for batch_no, start in enumerate(range(0, len(order), self.batch_size)):
                batch = order[start:start + self.batch_size]
                self._step(batch, feats, targets, state, epoch, batch_no)
            dev_mse = mse_loss([sigmoid(self._raw(f)) for f in dev_feats],
                               dev_targets)
            trace.append(dev_mse)
            if dev_mse < best_mse:
                best_mse = dev_mse
                best = (self.weights_.copy(), self.bias_)

        self.weights_, self.bias_ = best
        self.dev_mse_trace_ = trace
        self.best_epoch_ = int(np.argmin(trace)) if trace else -1
        return self

    def _step(self, batch: list[int], feats: list[dict[int, float]],
              targets: list[float], state: "_AdamState | None",
              epoch: int, batch_no: int) -> None:
        b = len(batch)
        grad: dict[int, float] = {}
        grad_bias = 0.0
        batch_loss = 0.0
        for idx in batch:
            s = sigmoid(self._raw(feats[idx]))
            err = s - targets[idx]
            batch_loss += err * err
            dz = 2.0 * err * s * (1.0 - s) / b
            grad_bias += dz
            for i, v in feats[idx].items():
                grad[i] = grad.get(i, 0.0) + dz * v
        if not math.isfinite(batch_loss):
            raise TrainingError(
                f"non-finite loss at epoch {epoch}, batch {batch_no}"
            )
        if state is None:
            lr = self.learning_rate
            for i, g in grad.items():
                self.weights_[i] -= lr * g
            self.bias_ -= lr * grad_bias
        else:
            self.bias_ = state.update(self.weights_, self.bias_, grad,
                                      grad_bias, self.learning_rate)

    # -- persistence ---------------------------------------------------

    def save(self, path) -> None:
        """Versioned model file: one JSON header line, then raw float64
        weight bytes (little-endian). Round-trips bit-exactly."""
        check_fitted(self, "weights_", "bias_")
        header = {
            "format": "dapo-scorer",
            "version": 1,
            "dim": self.dim,
            "hash_seed": self.hash_seed,
            "bias": self.bias_,
            "optimizer": {
                "name": self.optimizer,
                "learning_rate": self.learning_rate,
                "batch_size": self.batch_size,
                "epochs": self.epochs,
                "seed": self.seed,
            },
        }
        with open(path, "wb") as fh:
            fh.write(json.dumps(header, sort_keys=True).encode("utf-8"))
            fh.write(b"\n")
            fh.write(self.weights_.astype("<f8").tobytes())

    @classmethod
    def load(cls, path) -> "HashedLinearScorer":
        with open(path, "rb") as fh:
            header_line = fh.readline()
            try:
                header = json.loads(header_line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{path}: malformed model header") from exc
            if header.get("format") != "dapo-scorer" or header.get("version") != 1:
                raise DataError(f"{path}: not a version-1 scorer model file")
            opt = header["optimizer"]
            model = cls(dim=header["dim"], hash_seed=header["hash_seed"],
                        learning_rate=opt["learning_rate"],
                        batch_size=opt["batch_size"], epochs=opt["epochs"],
                        optimizer=opt["name"], seed=opt["seed"])
            blob = fh.read()
        weights = np.frombuffer(blob, dtype="<f8")
        if weights.shape[0] != model.dim:
            raise DataError(
                f"{path}: expected {model.dim} weights, found {weights.shape[0]}"
            )
        model.weights_ = weights.astype(float)
        model.bias_ = float(header["bias"])
        return model


class _AdamState:
    """First/second moment accumulators for dense Adam updates."""

    def __init__(self, dim: int):
        self.m = np.zeros(dim + 1, dtype=float)
        self.v = np.zeros(dim + 1, dtype=float)
        self.t = 0

    def update(self, weights: np.ndarray, bias: float, grad: dict[int, float],
               grad_bias: float, lr: float) -> float:
        dense = np.zeros(weights.shape[0] + 1, dtype=float)
        if grad:
            idx = np.fromiter(grad.keys(), dtype=np.int64, count=len(grad))
            val = np.fromiter(grad.values(), dtype=float, count=len(grad))
            dense[idx] = val
        dense[-1] = grad_bias
        self.t += 1
        b1, b2 = HashedLinearScorer.ADAM_BETA1, HashedLinearScorer.ADAM_BETA2
        self.m = b1 * self.m + (1 - b1) * dense
        self.v = b2 * self.v + (1 - b2) * dense * dense
        m_hat = self.m / (1 - b1 ** self.t)
        v_hat = self.v / (1 - b2 ** self.t)
        step = lr * m_hat / (np.sqrt(v_hat) + HashedLinearScorer.ADAM_EPS)
        weights -= step[:-1]
        return bias - step[-1]


def rank_candidates(model: HashedLinearScorer, task: RankingTask) -> list[int]:
    """Candidate indices sorted by predicted score, highest first.

    Ties break toward the lower candidate index, keeping rank metrics
    deterministic.
    """
    scores = [model.predict_one(c) for c in task.candidates]
    return sorted(range(len(scores)), key=lambda i: (-scores[i], i))
