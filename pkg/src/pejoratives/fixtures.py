"""Deterministic synthetic fixtures.

These corpora keep the statistics and pipeline tests hermetic: no released
tweet data ships with the repo.  Every generated tweet embeds exactly one
lexicon headword occurrence (inflected in half the cases), and the generators
assert that the matcher finds precisely that occurrence, so fixture texts can
never drift away from the matcher contract.
"""

from __future__ import annotations

import random

import numpy as np

from .corpus import AnnotatedTweet, Corpus
from .embeddings import EmbeddingRecord, anchor_id, occurrence_id
from .lexicon import Lexicon, default_lexicon
from .matcher import find_matches

# Inflected surface per headword, exercising the -e/-i/-che/-ghe suffix rules.
INFLECTIONS = {
    "acida": "acide", "asina": "asine", "balena": "balene", "bambola": "bambole",
    "cagna": "cagne", "cavalla": "cavalle", "civetta": "civette", "cesso": "cessi",
    "contadina": "contadine", "cortigiana": "cortigiane", "cozza": "cozze",
    "femminista": "femministe", "fogna": "fogne", "gallina": "galline",
    "grezza": "grezze", "lesbica": "lesbiche", "lurida": "luride",
    "maiala": "maiale", "mucca": "mucche", "oca": "oche", "pecora": "pecore",
    "strega": "streghe", "vacca": "vacche", "zingara": "zingare",
}

FILLERS = (
    "oggi", "davvero", "proprio", "allora", "quindi", "comunque",
    "stasera", "ancora", "magari", "intanto",
)

# Context cues for the pipeline corpus; none of these is an anchor, and the
# generator asserts none of them matches a headword.
CUE_PEJ = ("pessima", "orrenda", "vergognosa", "penosa")
CUE_NEU = ("serena", "gentile", "brillante", "simpatica")


def _assert_single_match(text: str, headword: str, lexicon: Lexicon) -> None:
    spans = find_matches(text, lexicon)
    assert [s.headword for s in spans] == [headword], (text, [s.headword for s in spans])


def _tweet_text(rng: random.Random, form: str) -> str:
    f1, f2 = rng.choice(FILLERS), rng.choice(FILLERS)
    return f"{f1} sei una {form} {f2}"


def table3_corpus(lexicon: Lexicon | None = None, check: bool = True) -> Corpus:
    """1,200 dual-label tweets whose cell counts mirror the published corpus
    summary: train (363, 6, 172, 563), test (28, 0, 18, 50)."""
    lexicon = lexicon or default_lexicon()
    cells = [
        ("train", True, True, 363),
        ("train", True, False, 6),
        ("train", False, True, 172),
        ("train", False, False, 563),
        ("test", True, True, 28),
        ("test", True, False, 0),
        ("test", False, True, 18),
        ("test", False, False, 50),
    ]
    rng = random.Random(20240)
    headwords = list(lexicon.headwords)
    tweets = []
    i = 0
    for split, misogynous, pejorative, count in cells:
        for _ in range(count):
            headword = headwords[i % len(headwords)]
            form = INFLECTIONS[headword] if i % 2 else headword
            text = _tweet_text(rng, form)
            if check:
                _assert_single_match(text, headword, lexicon)
            tweets.append(
                AnnotatedTweet(
                    id=f"t{i:04d}",
                    text=text,
                    target_word=headword,
                    pejorative=pejorative,
                    misogynous=misogynous,
                    split=split,
                )
            )
            i += 1
    return Corpus(tuple(tweets), "pejorativity")


def separable_corpus(n: int = 20) -> Corpus:
    """Linearly separable toy corpus: one marker token decides both labels."""
    tweets = []
    for i in range(n):
        positive = i % 2 == 0
        marker = "malissimo" if positive else "benissimo"
        tweets.append(
            AnnotatedTweet(
                id=f"s{i:02d}",
                text=f"giornata {i} davvero {marker} insomma",
                target_word=None,
                pejorative=positive,
                misogynous=positive,
                split="train" if i < n - 4 else "test",
            )
        )
    return Corpus(tuple(tweets), "pejorativity")


def pipeline_corpus(
    n: int = 400,
    seed: int = 7,
    cue_accuracy: float = 0.75,
    test_size: int = 100,
    lexicon: Lexicon | None = None,
    check: bool = True,
) -> Corpus:
    """Corpus where misogyny is exactly the pejorative use of an ambiguous word.

    Surface context carries only a noisy cue (correct with ``cue_accuracy``),
    so a text-only classifier tops out near the cue reliability while
    gold-connotation substitution makes the test split almost separable.
    """
    lexicon = lexicon or default_lexicon()
    rng = random.Random(seed)
    headwords = list(lexicon.headwords)
    tweets = []
    for i in range(n):
        headword = headwords[i % len(headwords)]
        form = INFLECTIONS[headword] if rng.random() < 0.5 else headword
        pejorative = rng.random() < 0.5
        cue_pool_is_pej = pejorative if rng.random() < cue_accuracy else not pejorative
        cue = rng.choice(CUE_PEJ if cue_pool_is_pej else CUE_NEU)
        f1, f2 = rng.choice(FILLERS), rng.choice(FILLERS)
        text = f"{f1} quella {form} mi sembra {cue} {f2}"
        if check:
            _assert_single_match(text, headword, lexicon)
        tweets.append(
            AnnotatedTweet(
                id=f"p{i:04d}",
                text=text,
                target_word=headword,
                pejorative=pejorative,
                misogynous=pejorative,
                split="train" if i < n - test_size else "test",
            )
        )
    return Corpus(tuple(tweets), "pejorativity")


GEOMETRY_HEADWORDS = ("balena", "acida")
_GEOMETRY_DIM = 8


def _unit(index: int) -> np.ndarray:
    v = np.zeros(_GEOMETRY_DIM)
    v[index] = 1.0
    return v


def geometry_fixture(lexicon: Lexicon | None = None) -> tuple[Corpus, list[EmbeddingRecord]]:
    """Corpus plus embeddings with a planted similarity pattern.

    Fine-tuned occurrence vectors lean toward the anchors of their gold
    connotation; pretrained vectors ignore the class, mimicking a model that
    has not yet learned the distinction.
    """
    lexicon = lexicon or default_lexicon()
    anchor_axes: dict[str, np.ndarray] = {}
    axis = 0
    for headword in GEOMETRY_HEADWORDS:
        entry = lexicon.get(headword)
        for anchor in entry.neutral_anchors + entry.pejorative_anchors:
            if anchor not in anchor_axes:
                anchor_axes[anchor] = _unit(axis)
                axis += 1

    tweets = []
    records: list[EmbeddingRecord] = []
    for anchor, vec in anchor_axes.items():
        for tag in ("pretrained", "finetuned"):
            records.append(EmbeddingRecord(anchor_id(anchor), "anchor", anchor, tag, tuple(vec)))

    rng = random.Random(99)
    i = 0
    for headword in GEOMETRY_HEADWORDS:
        entry = lexicon.get(headword)
        neutral_mix = np.mean([anchor_axes[a] for a in entry.neutral_anchors], axis=0)
        pejorative_mix = np.mean([anchor_axes[a] for a in entry.pejorative_anchors], axis=0)
        for pejorative in (True, False):
            for k in range(3):
                f1 = FILLERS[(i + k) % len(FILLERS)]
                text = f"{f1} sei una {headword} insomma"
                tweet = AnnotatedTweet(
                    id=f"g{i:02d}",
                    text=text,
                    target_word=headword,
                    pejorative=pejorative,
                    misogynous=pejorative,
                    split="train",
                )
                tweets.append(tweet)
                span = find_matches(text, lexicon, tweet_id=tweet.id)[0]
                assert span.headword == headword
                toward, away = (pejorative_mix, neutral_mix) if pejorative else (neutral_mix, pejorative_mix)
                jitter = np.array([rng.uniform(-0.02, 0.02) for _ in range(_GEOMETRY_DIM)])
                fine = 0.85 * toward + 0.15 * away + jitter
                pre = 0.5 * toward + 0.5 * away + jitter
                occ = occurrence_id(tweet.id, span)
                records.append(EmbeddingRecord(occ, "lexicon_occurrence", headword, "finetuned", tuple(fine)))
                records.append(EmbeddingRecord(occ, "lexicon_occurrence", headword, "pretrained", tuple(pre)))
                i += 1
    return Corpus(tuple(tweets), "pejorativity"), records
