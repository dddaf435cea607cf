"""Locate lexicon headwords in tweet text and align character spans to subword tokens.

Matching is token-based: the text is split into word tokens on Unicode
whitespace/punctuation boundaries, each token is lemmatized, and a token
matches a headword when the lemmas are equal or within a small edit distance
(typo tolerance).  Offsets are Unicode scalar positions into the original
string, so surfaces always reconstruct exactly via slicing.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from .lexicon import Lexicon

WORD_RE = re.compile(r"[^\W_]+", re.UNICODE)

# Fuzzy matching only fires on tokens at least this long, so short function
# words can never land within one edit of a headword.
MIN_FUZZY_TOKEN_LEN = 4

# Feminine/plural suffix rewrites, longest suffix first.  The -che/-ghe rules
# restore the hard consonant (oche -> oca, streghe -> strega); the bare -e/-i
# rules cover regular feminine and masculine plurals.
SUFFIX_RULES: tuple[tuple[str, str], ...] = (
    ("acce", "accia"),
    ("cie", "cia"),
    ("gie", "gia"),
    ("che", "ca"),
    ("ghe", "ga"),
    ("e", "a"),
    ("i", "o"),
)

# High-frequency Italian forms that are already lemmas and would be mangled by
# the suffix rules (class-III -e nouns, adverbs, function words).  Without the
# "cane" entry the blind -e -> -a rewrite would put it within one edit of
# "cagna" and every dog tweet would false-match.
INVARIANT_FORMS = frozenset(
    """
    cane carne gente mare sole sale amore cuore fiume mese paese nome cognome
    notte parte madre padre ponte monte morte mente sangue nave chiave croce
    voce legge neve pane pesce sede sete rete fame fine arte classe
    come dove sempre niente bene male insieme oltre inoltre forse quasi poi
    """.split()
)


class MatchError(ValueError):
    """Bad matcher configuration or unalignable span."""


@dataclass(frozen=True)
class LemmatizerConfig:
    mode: str = "suffix_rules"  # "suffix_rules" | "external_table"
    table_path: str | None = None

    def __post_init__(self) -> None:
        if self.mode not in ("suffix_rules", "external_table"):
            raise MatchError(f"unknown lemmatizer mode {self.mode!r}")
        if self.mode == "external_table" and not self.table_path:
            raise MatchError("external_table mode requires table_path")


@lru_cache(maxsize=8)
def _load_lemma_table(table_path: str) -> dict[str, str]:
    table: dict[str, str] = {}
    for i, line in enumerate(Path(table_path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise MatchError(f"{table_path}:{i}: expected form<TAB>lemma")
        table[fields[0].strip().lower()] = fields[1].strip().lower()
    return table


def _suffix_lemma(token: str) -> str:
    if token in INVARIANT_FORMS:
        return token
    for suffix, repl in SUFFIX_RULES:
        if token.endswith(suffix) and len(token) > len(suffix):
            return token[: -len(suffix)] + repl
    return token


def lemma(token: str, config: LemmatizerConfig | None = None) -> str:
    """Lowercase lemma of a single word token; unknown forms pass through."""
    config = config or LemmatizerConfig()
    token = token.lower()
    if config.mode == "external_table":
        assert config.table_path is not None
        return _load_lemma_table(config.table_path).get(token, token)
    return _suffix_lemma(token)


def levenshtein(s: str, t: str, limit: int | None = None) -> int:
    """Edit distance with an optional early-exit bound."""
    if s == t:
        return 0
    if limit is not None and abs(len(s) - len(t)) > limit:
        return limit + 1
    if len(s) < len(t):
        s, t = t, s
    prev = list(range(len(t) + 1))
    for i, cs in enumerate(s, start=1):
        cur = [i] + [0] * len(t)
        for j, ct in enumerate(t, start=1):
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (cs != ct))
        if limit is not None and min(cur) > limit:
            return limit + 1
        prev = cur
    return prev[-1]


@dataclass(frozen=True)
class MatchSpan:
    tweet_id: str
    char_start: int
    char_end: int
    surface: str
    headword: str


@dataclass(frozen=True)
class Tokenization:
    """Subword pieces with character offsets, as produced by an external tokenizer."""

    tokens: tuple[tuple[str, int, int], ...]

    def __post_init__(self) -> None:
        prev_end = -1
        for piece, start, end in self.tokens:
            if start >= end:
                raise MatchError(f"token {piece!r} has empty span [{start}, {end})")
            if start < prev_end:
                raise MatchError(f"token {piece!r} overlaps the previous token")
            prev_end = end


def tokenize_words(text: str) -> list[tuple[str, int, int]]:
    return [(m.group(0), m.start(), m.end()) for m in WORD_RE.finditer(text)]


def load_tokenizations(path: str | Path) -> dict[str, Tokenization]:
    """Read tokenization JSONL ({"id", "pieces": [[piece, start, end], ...]})
    as produced by the adapter or any external tokenizer."""
    out: dict[str, Tokenization] = {}
    for i, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MatchError(f"{path}:{i}: invalid JSON: {exc}") from exc
        record_id = str(obj.get("id", ""))
        if not record_id:
            raise MatchError(f"{path}:{i}: missing id")
        if record_id in out:
            raise MatchError(f"{path}:{i}: duplicate tokenization for id {record_id!r}")
        pieces = obj.get("pieces")
        if not isinstance(pieces, list):
            raise MatchError(f"{path}:{i}: pieces must be a list")
        out[record_id] = Tokenization(
            tokens=tuple((str(p), int(s), int(e)) for p, s, e in pieces)
        )
    return out


def find_matches(
    text: str,
    lexicon: Lexicon,
    config: LemmatizerConfig | None = None,
    max_edit: int = 1,
    tweet_id: str = "",
) -> list[MatchSpan]:
    """All headword occurrences in ``text`` as non-overlapping, sorted spans.

    A token matches headword h when lemma(token) == h, or when the token is at
    least MIN_FUZZY_TOKEN_LEN characters long and levenshtein(lemma, h) <=
    max_edit.  Exact lemma matches win; fuzzy ties break to the
    lexicographically first headword so output is deterministic.
    """
    config = config or LemmatizerConfig()
    spans: list[MatchSpan] = []
    for token, start, end in tokenize_words(text):
        lm = lemma(token, config)
        headword: str | None = None
        if lm in lexicon.entries:
            headword = lm
        elif max_edit > 0 and len(token) >= MIN_FUZZY_TOKEN_LEN:
            best: tuple[int, str] | None = None
            for h in lexicon.entries:
                d = levenshtein(lm, h, limit=max_edit)
                if d <= max_edit and (best is None or (d, h) < best):
                    best = (d, h)
            if best is not None:
                headword = best[1]
        if headword is not None:
            spans.append(MatchSpan(tweet_id, start, end, text[start:end], headword))
    return spans


def align_subword_span(span: MatchSpan, tokenization: Tokenization) -> tuple[int, int]:
    """Minimal contiguous token index range covering the span's characters.

    Raises MatchError when no token overlaps [char_start, char_end).
    """
    overlapping = [
        i
        for i, (_, start, end) in enumerate(tokenization.tokens)
        if start < span.char_end and end > span.char_start
    ]
    if not overlapping:
        raise MatchError(
            f"no token overlaps span [{span.char_start}, {span.char_end}) of tweet {span.tweet_id!r}"
        )
    return overlapping[0], overlapping[-1] + 1
