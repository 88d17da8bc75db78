"""Shared builders for dialogue fixtures, plus the acceptance summary hook."""

import random

import pytest

from dapo.dialogues import Dialogue, Utterance

_criterion_lines = []


def record_criterion(line):
    """Collect acceptance pass/fail lines for the end-of-run summary."""
    _criterion_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if _criterion_lines:
        terminalreporter.section("acceptance criteria")
        for line in _criterion_lines:
            terminalreporter.write_line(line)


def make_dialogue(dialogue_id, texts, source="test"):
    return Dialogue(
        id=dialogue_id,
        source=source,
        utterances=[Utterance.build("a" if i % 2 == 0 else "b", t)
                    for i, t in enumerate(texts)],
    )


def distinct_dialogue(dialogue_id, length):
    """A dialogue whose utterances are pairwise token-distinct."""
    return make_dialogue(dialogue_id,
                         [f"utterance number {i} of {dialogue_id}"
                          for i in range(length)])


# -- synthetic conversational corpus ------------------------------------
#
# Template-heavy dialogue: formulaic openers/closers plus topic slots
# filled from a Zipf-weighted vocabulary, mimicking the mix of stock
# phrases and specific content in real chit-chat data.

_OPENERS = ["hi how are you doing", "hello there good to see you",
            "good morning", "hey what is up", "hi nice to meet you"]
_CLOSERS = ["see you later", "have a nice day", "thank you so much",
            "talk to you soon", "take care bye"]
_TEMPLATES = ["i really like {} a lot", "do you enjoy {} too",
              "what do you think about {}", "my favorite {} is great",
              "i went to the {} yesterday", "that {} sounds interesting",
              "we should try {} sometime", "tell me more about {}",
              "i have never seen {} before", "the {} was amazing"]


def synthetic_corpus(n_dialogues, seed, vocab_size=800):
    rng = random.Random(seed)
    vocab = [f"w{i}" for i in range(vocab_size)]
    weights = [1.0 / (i + 1) ** 1.2 for i in range(vocab_size)]
    dialogues = []
    for i in range(n_dialogues):
        n = rng.randint(4, 10)
        texts = [rng.choice(_OPENERS)]
        for _ in range(n - 2):
            if rng.random() < 0.7:
                filler = " ".join(rng.choices(vocab, weights=weights,
                                              k=rng.randint(1, 2)))
                texts.append(rng.choice(_TEMPLATES).format(filler))
            else:
                texts.append(" ".join(rng.choices(vocab, weights=weights,
                                                  k=rng.randint(3, 8))))
        texts.append(rng.choice(_CLOSERS))
        dialogues.append(make_dialogue(f"s{i}", texts, source="synthetic"))
    return dialogues


@pytest.fixture
def small_corpus():
    """Five dialogues of 4 distinct utterances each."""
    return [distinct_dialogue(f"d{i}", 4) for i in range(5)]
