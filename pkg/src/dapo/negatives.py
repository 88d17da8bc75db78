"""Coherence-breaking negative examples.

Three perturbations of a positive dialogue, each yielding one negative:

* ``uo`` -- utterances permuted into a random non-identity order;
* ``ui`` -- one utterance removed and re-inserted at a different position;
* ``ur`` -- one utterance replaced by one drawn from another dialogue.

Every generator rejects outputs whose token sequences equal the source's
(bounded rejection sampling, then a systematic fallback scan), so a negative
never coincides with its positive even when utterances repeat.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field

from .dialogues import Dialogue, Utterance
from .errors import CannotPerturbError
from .seeding import derive_seed, make_rng

logger = logging.getLogger(__name__)

KIND_POSITIVE = "positive"
NEGATIVE_KINDS = ("uo", "ui", "ur")
KINDS = (KIND_POSITIVE, *NEGATIVE_KINDS)

_MAX_REDRAWS = 32


@dataclass
class Example:
    """A positive or perturbed dialogue carrying an optional score in [0,1]."""

    id: str
    source_id: str
    kind: str
    utterances: list[Utterance] = field(default_factory=list)
    score: float | None = None


def _token_seqs(utterances: list[Utterance]) -> list[tuple[str, ...]]:
    return [tuple(u.tokens) for u in utterances]


def _differs(candidate: list[Utterance], original: list[Utterance]) -> bool:
    return _token_seqs(candidate) != _token_seqs(original)


def gen_uo(d: Dialogue, rng: random.Random) -> Example:
    """Negative by random reordering: a uniformly drawn permutation of the
    utterances, redrawn while it reproduces the original sequence."""
    n = len(d)
    if n < 2:
        raise CannotPerturbError(f"dialogue {d.id!r}: no non-identity permutation")
    for _ in range(_MAX_REDRAWS):
        order = list(range(n))
        rng.shuffle(order)
        shuffled = [d.utterances[i] for i in order]
        if _differs(shuffled, d.utterances):
            return Example(id=f"{d.id}#uo", source_id=d.id, kind="uo",
                           utterances=shuffled)
    # All draws collided with the original (heavily repeated utterances):
    # swap the first pair of content-distinct positions.
    for i in range(n - 1):
        for j in range(i + 1, n):
            if tuple(d.utterances[i].tokens) != tuple(d.utterances[j].tokens):
                swapped = list(d.utterances)
                swapped[i], swapped[j] = swapped[j], swapped[i]
                return Example(id=f"{d.id}#uo", source_id=d.id, kind="uo",
                               utterances=swapped)
    raise CannotPerturbError(
        f"dialogue {d.id!r}: all utterances identical, no distinct reordering"
    )


def _reinserted(utterances: list[Utterance], take: int, put: int) -> list[Utterance]:
    moved = list(utterances)
    u = moved.pop(take)
    moved.insert(put, u)
    return moved


def gen_ui(d: Dialogue, rng: random.Random) -> Example:
    """Negative by re-insertion: one utterance (uniform) moves to a uniform
    position other than its own."""
    n = len(d)
    if n < 2:
        raise CannotPerturbError(f"dialogue {d.id!r}: nothing to re-insert")
    for _ in range(_MAX_REDRAWS):
        take = rng.randrange(n)
        put = rng.randrange(n - 1)
        if put >= take:
            put += 1
        moved = _reinserted(d.utterances, take, put)
        if _differs(moved, d.utterances):
            return Example(id=f"{d.id}#ui", source_id=d.id, kind="ui",
                           utterances=moved)
    for take in range(n):
        for put in range(n):
            if put == take:
                continue
            moved = _reinserted(d.utterances, take, put)
            if _differs(moved, d.utterances):
                return Example(id=f"{d.id}#ui", source_id=d.id, kind="ui",
                               utterances=moved)
    raise CannotPerturbError(
        f"dialogue {d.id!r}: every re-insertion reproduces the original"
    )


def gen_ur(d: Dialogue, pool: list[Dialogue], rng: random.Random) -> Example:
    """Negative by replacement: one position (uniform) is overwritten with an
    utterance drawn uniformly from a uniformly chosen other dialogue."""
    others = [p for p in pool if p.id != d.id and len(p.utterances) > 0]
    if not others:
        raise CannotPerturbError(
            f"dialogue {d.id!r}: no other dialogue available for replacement"
        )
    n = len(d)
    for _ in range(_MAX_REDRAWS):
        pos = rng.randrange(n)
        donor = others[rng.randrange(len(others))]
        replacement = donor.utterances[rng.randrange(len(donor.utterances))]
        if tuple(replacement.tokens) != tuple(d.utterances[pos].tokens):
            replaced = list(d.utterances)
            replaced[pos] = replacement
            return Example(id=f"{d.id}#ur", source_id=d.id, kind="ur",
                           utterances=replaced)
    for donor in others:
        for replacement in donor.utterances:
            for pos in range(n):
                if tuple(replacement.tokens) != tuple(d.utterances[pos].tokens):
                    replaced = list(d.utterances)
                    replaced[pos] = replacement
                    return Example(id=f"{d.id}#ur", source_id=d.id, kind="ur",
                                   utterances=replaced)
    raise CannotPerturbError(
        f"dialogue {d.id!r}: pool holds no utterance differing from the original"
    )


def examples_for_dialogue(d: Dialogue, pool: list[Dialogue],
                          seed: int) -> list[Example]:
    """Positive plus the three negatives for one dialogue.

    The generator is seeded per dialogue (from the global seed and the
    dialogue id), so output is identical no matter how dialogues are batched
    across workers. Dialogues too short or too uniform to perturb emit
    what they can, with a warning per skipped negative.
    """
    out = [Example(id=f"{d.id}#pos", source_id=d.id, kind=KIND_POSITIVE,
                   utterances=list(d.utterances))]
    if len(d) < 2:
        logger.warning("dialogue %r has fewer than 2 utterances; "
                       "emitting positive only", d.id)
        return out
    rng = make_rng(derive_seed(seed, d.id))
    for kind, gen in (("uo", gen_uo), ("ui", gen_ui)):
        try:
            out.append(gen(d, rng))
        except CannotPerturbError as exc:
            logger.warning("skipping %s negative: %s", kind, exc)
    try:
        out.append(gen_ur(d, pool, rng))
    except CannotPerturbError as exc:
        logger.warning("skipping ur negative: %s", exc)
    return out


def build_examples(corpus: list[Dialogue], seed: int,
                   jobs: int = 1) -> list[Example]:
    """One positive and (where possible) three negatives per dialogue.

    Output order follows corpus order: positive, uo, ui, ur per dialogue.
    """
    if jobs > 1:
        from .parallel import map_slices
        return map_slices(_examples_for_slice, corpus, jobs,
                          extra=(corpus, seed))
    return _examples_for_slice(corpus, corpus, seed)


def _examples_for_slice(dialogues: list[Dialogue], pool: list[Dialogue],
                        seed: int) -> list[Example]:
    out: list[Example] = []
    for d in dialogues:
        out.extend(examples_for_dialogue(d, pool, seed))
    return out
