"""Inject word-level connotation knowledge into tweet text.

Two strategies: append a compact Italian tag per matched headword
(" [SEP] {word}: peggiorativo|neutro"), or replace the matched surface with the
anchors of the assigned connotation.  Substitution inserts every anchor of the
connotation joined by spaces; a single-anchor mode exists for ablations.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

from .corpus import AnnotatedTweet, Corpus
from .lexicon import Connotation, Lexicon
from .matcher import MatchSpan

CONCAT_SEP = " [SEP] "
CONNOTATION_TAGS = {Connotation.PEJORATIVE: "peggiorativo", Connotation.NEUTRAL: "neutro"}
_CONCAT_TAG_RE = re.compile(r" \[SEP\] \S+: (?:peggiorativo|neutro)$")

STRATEGIES = ("concat", "subst")
SOURCES = ("gold", "predicted")


class EnrichmentError(ValueError):
    """Unassigned spans, unknown headwords, or incomplete coverage."""


@dataclass(frozen=True)
class ConnotationAssignment:
    """Per-span connotations for one tweet, tagged with their provenance."""

    tweet_id: str
    spans: dict[MatchSpan, Connotation]
    source: str = "gold"

    def __post_init__(self) -> None:
        if self.source not in SOURCES:
            raise EnrichmentError(f"unknown assignment source {self.source!r}")


@dataclass(frozen=True)
class EnrichedTweet:
    id: str
    text: str
    strategy: str  # "concat" | "subst" | "none"
    source: str
    original_text: str


def _check_assigned(tweet: AnnotatedTweet, spans: Sequence[MatchSpan], assignment: ConnotationAssignment) -> None:
    for span in spans:
        if span.tweet_id and span.tweet_id != tweet.id:
            raise EnrichmentError(f"span {span} does not belong to tweet {tweet.id!r}")
        if span not in assignment.spans:
            raise EnrichmentError(f"tweet {tweet.id!r}: span over {span.surface!r} has no assigned connotation")


def concat_enrich(
    tweet: AnnotatedTweet,
    spans: Sequence[MatchSpan],
    assignment: ConnotationAssignment,
) -> EnrichedTweet:
    """Append one connotation tag per span, in offset order, after the tweet."""
    if not spans:
        return EnrichedTweet(tweet.id, tweet.text, "none", assignment.source, tweet.text)
    _check_assigned(tweet, spans, assignment)
    pieces = [tweet.text]
    for span in sorted(spans, key=lambda s: s.char_start):
        tag = CONNOTATION_TAGS[assignment.spans[span]]
        pieces.append(f"{CONCAT_SEP}{span.headword}: {tag}")
    return EnrichedTweet(tweet.id, "".join(pieces), "concat", assignment.source, tweet.text)


def strip_concat_tags(text: str) -> str:
    """Remove trailing connotation tags, restoring the pre-enrichment text."""
    while True:
        stripped = _CONCAT_TAG_RE.sub("", text)
        if stripped == text:
            return text
        text = stripped


def subst_enrich(
    tweet: AnnotatedTweet,
    spans: Sequence[MatchSpan],
    assignment: ConnotationAssignment,
    lexicon: Lexicon,
    single_anchor: bool = False,
) -> EnrichedTweet:
    """Replace each matched surface with the anchors of its assigned connotation.

    Replacement runs right to left so earlier offsets stay valid; text outside
    the matched spans is untouched.
    """
    if not spans:
        return EnrichedTweet(tweet.id, tweet.text, "none", assignment.source, tweet.text)
    _check_assigned(tweet, spans, assignment)
    text = tweet.text
    for span in sorted(spans, key=lambda s: s.char_start, reverse=True):
        entry = lexicon.get(span.headword)  # raises UnknownWordError
        anchors = entry.anchors(assignment.spans[span])
        replacement = anchors[0] if single_anchor else " ".join(anchors)
        text = text[: span.char_start] + replacement + text[span.char_end :]
    return EnrichedTweet(tweet.id, text, "subst", assignment.source, tweet.text)


@dataclass(frozen=True)
class EnrichmentResult:
    corpus: Corpus
    records: dict[str, EnrichedTweet] = field(default_factory=dict)


def enrich_corpus(
    corpus: Corpus,
    spans_by_id: Mapping[str, Sequence[MatchSpan]],
    assignments: Mapping[str, ConnotationAssignment],
    strategy: str,
    lexicon: Lexicon | None = None,
    single_anchor: bool = False,
) -> EnrichmentResult:
    """Enrich every matched tweet; unmatched tweets pass through unchanged.

    Labels, ids, and split membership are preserved.  Raises EnrichmentError
    listing the matched tweets that lack an assignment.
    """
    if strategy not in STRATEGIES:
        raise EnrichmentError(f"unknown strategy {strategy!r}, expected one of {STRATEGIES}")
    if strategy == "subst" and lexicon is None:
        raise EnrichmentError("substitution needs the lexicon")
    matched = [t.id for t in corpus if spans_by_id.get(t.id)]
    missing = [tid for tid in matched if tid not in assignments]
    if missing:
        raise EnrichmentError(f"no connotation assignment for matched tweets: {missing}")
    run_source = next(iter(assignments.values())).source if assignments else "gold"

    new_tweets = []
    records: dict[str, EnrichedTweet] = {}
    for tweet in corpus:
        spans = list(spans_by_id.get(tweet.id, ()))
        if not spans:
            records[tweet.id] = EnrichedTweet(tweet.id, tweet.text, "none", run_source, tweet.text)
            new_tweets.append(tweet)
            continue
        assignment = assignments[tweet.id]
        if strategy == "concat":
            enriched = concat_enrich(tweet, spans, assignment)
        else:
            assert lexicon is not None
            enriched = subst_enrich(tweet, spans, assignment, lexicon, single_anchor=single_anchor)
        records[tweet.id] = enriched
        new_tweets.append(
            AnnotatedTweet(
                id=tweet.id,
                text=enriched.text,
                target_word=tweet.target_word,
                pejorative=tweet.pejorative,
                misogynous=tweet.misogynous,
                split=tweet.split,
            )
        )
    return EnrichmentResult(Corpus(tuple(new_tweets), corpus.schema), records)


def write_enriched(result: EnrichmentResult, path: str | Path) -> None:
    """Corpus JSONL plus strategy/source/original_text provenance fields."""
    path = Path(path)
    lines = []
    for tweet in result.corpus:
        record = result.records[tweet.id]
        obj = {
            "id": tweet.id,
            "text": tweet.text,
            "target_word": tweet.target_word,
            "pejorative": tweet.pejorative,
            "misogynous": tweet.misogynous,
            "split": tweet.split,
            "strategy": record.strategy,
            "source": record.source,
            "original_text": record.original_text,
        }
        lines.append(json.dumps(obj, ensure_ascii=False))
    path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
