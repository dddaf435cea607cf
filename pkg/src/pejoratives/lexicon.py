"""Polysemic-epithet lexicon: headwords with their neutral and pejorative anchors.

Each headword is a feminine-singular lemma that carries one literal (neutral)
sense and one disparaging sense.  Anchors are unambiguous words or phrases that
pin down a single sense regardless of context; they drive the substitution
enrichment strategy and the embedding similarity analysis.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterator


class Connotation(str, Enum):
    NEUTRAL = "neutral"
    PEJORATIVE = "pejorative"


class LexiconError(ValueError):
    """Malformed lexicon file or hard invariant breach."""


class UnknownWordError(KeyError):
    """Queried word is not a lexicon headword."""


TSV_COLUMNS = ("word", "literal_gloss", "pejorative_gloss", "neutral_anchors", "pejorative_anchors")
ANCHOR_SEP = "|"

# Candidate words considered during lexicon construction but rejected because
# they showed a single connotation in use (only neutral or only disparaging),
# so there is nothing to disambiguate.  Kept for documentation; never headwords.
EXCLUDED_CANDIDATES = (
    "barile", "banco", "botte", "barbona", "facile", "gatta morta",
    "passeggiatrice", "porca", "principessa", "privilegiata", "psicopatica",
    "scrofa", "somara", "travestita",
)


@dataclass(frozen=True)
class LexiconEntry:
    word: str
    literal_gloss: str
    pejorative_gloss: str
    neutral_anchors: tuple[str, ...]
    pejorative_anchors: tuple[str, ...]

    def anchors(self, connotation: Connotation) -> tuple[str, ...]:
        if connotation is Connotation.NEUTRAL:
            return self.neutral_anchors
        return self.pejorative_anchors


@dataclass(frozen=True)
class Violation:
    """A lexicon consistency problem, reported as data rather than raised.

    severity "error" marks breaches a consumer should treat as fatal;
    "warning" marks entries that are intentionally kept faithful to the
    source table even though they bend the anchor-unambiguity rule
    (a headword that anchors its own neutral sense).
    """

    word: str
    code: str
    message: str
    severity: str = "error"


@dataclass(frozen=True)
class Lexicon:
    entries: dict[str, LexiconEntry] = field(default_factory=dict)

    def __contains__(self, word: str) -> bool:
        return word.lower() in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[LexiconEntry]:
        return iter(self.entries.values())

    def get(self, word: str) -> LexiconEntry:
        try:
            return self.entries[word.lower()]
        except KeyError:
            raise UnknownWordError(word) from None

    @property
    def headwords(self) -> tuple[str, ...]:
        return tuple(self.entries)


def _make_entry(row: dict[str, object], source: str) -> LexiconEntry:
    word = str(row.get("word", "")).strip()
    if not word:
        raise LexiconError(f"{source}: empty headword")
    if word != word.lower():
        raise LexiconError(f"{source}: headword {word!r} must be lowercase")
    if any(ch.isspace() for ch in word):
        raise LexiconError(f"{source}: headword {word!r} contains whitespace")

    def anchor_list(value: object) -> tuple[str, ...]:
        if isinstance(value, str):
            parts = [p.strip() for p in value.split(ANCHOR_SEP)]
        elif isinstance(value, (list, tuple)):
            parts = [str(p).strip() for p in value]
        else:
            raise LexiconError(f"{source}: bad anchor field {value!r}")
        return tuple(p for p in parts if p)

    neutral = anchor_list(row.get("neutral_anchors", ""))
    pejorative = anchor_list(row.get("pejorative_anchors", ""))
    if not neutral or not pejorative:
        raise LexiconError(f"{source}: {word!r} has an empty anchor list")
    if set(neutral) & set(pejorative):
        raise LexiconError(f"{source}: {word!r} shares anchors across connotations")
    return LexiconEntry(
        word=word,
        literal_gloss=str(row.get("literal_gloss", "")),
        pejorative_gloss=str(row.get("pejorative_gloss", "")),
        neutral_anchors=neutral,
        pejorative_anchors=pejorative,
    )


def _rows_from_tsv(text: str, source: str) -> list[dict[str, object]]:
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines:
        raise LexiconError(f"{source}: empty lexicon file")
    header = tuple(col.strip() for col in lines[0].split("\t"))
    if header != TSV_COLUMNS:
        raise LexiconError(f"{source}: bad header {header!r}, expected {TSV_COLUMNS!r}")
    rows = []
    for i, line in enumerate(lines[1:], start=2):
        fields = line.split("\t")
        if len(fields) != len(TSV_COLUMNS):
            raise LexiconError(f"{source}:{i}: expected {len(TSV_COLUMNS)} fields, got {len(fields)}")
        rows.append(dict(zip(TSV_COLUMNS, fields)))
    return rows


def _rows_from_json(text: str, source: str) -> list[dict[str, object]]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise LexiconError(f"{source}: invalid JSON: {exc}") from exc
    if not isinstance(data, list):
        raise LexiconError(f"{source}: JSON lexicon must be an array of objects")
    return data


def load_lexicon(path: str | Path) -> Lexicon:
    """Load a lexicon from a TSV or JSON file and enforce hard invariants.

    Hard failures: unparseable rows, duplicate headwords, empty anchor lists,
    anchors shared between the two connotations.  An anchor that equals its own
    headword loads fine and is surfaced by :func:`validate_lexicon` instead,
    because the bundled source table contains one such row.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if not text.strip():
        raise LexiconError(f"{path}: empty lexicon file")
    if path.suffix.lower() == ".json" or text.lstrip().startswith("["):
        rows = _rows_from_json(text, str(path))
    else:
        rows = _rows_from_tsv(text, str(path))
    entries: dict[str, LexiconEntry] = {}
    for row in rows:
        entry = _make_entry(row, str(path))
        if entry.word in entries:
            raise LexiconError(f"{path}: duplicate headword {entry.word!r}")
        entries[entry.word] = entry
    return Lexicon(entries=entries)


def save_lexicon(lexicon: Lexicon, path: str | Path) -> None:
    path = Path(path)
    if path.suffix.lower() == ".json":
        data = [
            {
                "word": e.word,
                "literal_gloss": e.literal_gloss,
                "pejorative_gloss": e.pejorative_gloss,
                "neutral_anchors": list(e.neutral_anchors),
                "pejorative_anchors": list(e.pejorative_anchors),
            }
            for e in lexicon
        ]
        path.write_text(json.dumps(data, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")
        return
    lines = ["\t".join(TSV_COLUMNS)]
    for e in lexicon:
        lines.append(
            "\t".join(
                (
                    e.word,
                    e.literal_gloss,
                    e.pejorative_gloss,
                    ANCHOR_SEP.join(e.neutral_anchors),
                    ANCHOR_SEP.join(e.pejorative_anchors),
                )
            )
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def bundled_lexicon_path() -> Path:
    return Path(resources.files("pejoratives").joinpath("data/lexicon.tsv"))  # type: ignore[arg-type]


def default_lexicon() -> Lexicon:
    return load_lexicon(bundled_lexicon_path())


def anchors_for(lexicon: Lexicon, word: str, connotation: Connotation) -> list[str]:
    """Anchor list for a headword, in lexicon-file order. Case-insensitive lookup."""
    return list(lexicon.get(word).anchors(connotation))


def validate_lexicon(lexicon: Lexicon) -> list[Violation]:
    """Check soft consistency rules; violations are returned, never raised."""
    violations: list[Violation] = []
    headwords = set(lexicon.entries)
    for entry in lexicon:
        for connotation, anchors in (
            (Connotation.NEUTRAL, entry.neutral_anchors),
            (Connotation.PEJORATIVE, entry.pejorative_anchors),
        ):
            if not anchors:
                violations.append(
                    Violation(entry.word, "empty-anchors", f"{entry.word}: no {connotation.value} anchors")
                )
            for anchor in anchors:
                if anchor == entry.word:
                    violations.append(
                        Violation(
                            entry.word,
                            "self-anchor",
                            f"{entry.word}: {connotation.value} anchor equals the headword",
                            severity="warning",
                        )
                    )
                elif anchor in headwords:
                    violations.append(
                        Violation(
                            entry.word,
                            "anchor-is-headword",
                            f"{entry.word}: anchor {anchor!r} is itself a headword",
                        )
                    )
        if set(entry.neutral_anchors) & set(entry.pejorative_anchors):
            violations.append(
                Violation(entry.word, "anchor-overlap", f"{entry.word}: anchors shared across connotations")
            )
    return violations
