"""Readers and writers for the toolkit's JSONL exchange formats.

Kept dependency-free on purpose: the adapter talks to the main toolkit only
through these files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class Tweet:
    id: str
    text: str
    target_word: str | None
    pejorative: bool | None
    misogynous: bool | None
    split: str


@dataclass(frozen=True)
class Span:
    tweet_id: str
    char_start: int
    char_end: int
    surface: str
    headword: str


def read_corpus(path: str | Path) -> list[Tweet]:
    tweets = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        obj = json.loads(line)
        tweets.append(
            Tweet(
                id=str(obj["id"]),
                text=obj["text"],
                target_word=obj.get("target_word"),
                pejorative=obj.get("pejorative"),
                misogynous=obj.get("misogynous"),
                split=obj.get("split", "train"),
            )
        )
    return tweets


def read_matches(path: str | Path) -> list[Span]:
    spans = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        obj = json.loads(line)
        spans.append(
            Span(
                tweet_id=str(obj["id"]),
                char_start=int(obj["char_start"]),
                char_end=int(obj["char_end"]),
                surface=obj["surface"],
                headword=obj["headword"],
            )
        )
    return spans


def read_lexicon_anchors(path: str | Path) -> dict[str, list[str]]:
    """headword -> all anchors, from the toolkit's TSV lexicon format."""
    lines = [ln for ln in Path(path).read_text(encoding="utf-8").splitlines() if ln.strip()]
    anchors: dict[str, list[str]] = {}
    for line in lines[1:]:  # skip header
        fields = line.split("\t")
        word, neutral, pejorative = fields[0], fields[3], fields[4]
        anchors[word] = [a for a in neutral.split("|") + pejorative.split("|") if a]
    return anchors


def write_jsonl(path: str | Path, objects) -> None:
    lines = [json.dumps(o, ensure_ascii=False) for o in objects]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def label_for_task(tweet: Tweet, task: str) -> bool:
    value = tweet.pejorative if task == "pej" else tweet.misogynous
    if value is None:
        raise ValueError(f"tweet {tweet.id!r} lacks the {task!r} label")
    return value
