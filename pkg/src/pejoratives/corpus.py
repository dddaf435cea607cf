"""Annotated tweet corpora: loading, statistics, agreement, and epithet subsets.

Two JSONL schemas are supported.  "pejorativity" records carry a word-level
pejorativity label and a sentence-level misogyny label for the same tweet;
"ami" records carry the misogyny label only.  Statistics reproduce the
corpus summary table (counts per misogyny x pejorativity x split cell), the
phi coefficient between the two binary labels, and Krippendorff's alpha over
annotator pilots.
"""

from __future__ import annotations

import csv
import json
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .lexicon import Lexicon, default_lexicon
from .matcher import LemmatizerConfig, find_matches

SPLITS = ("train", "test")
SCHEMAS = ("pejorativity", "ami")


class CorpusError(ValueError):
    """Parse failure or schema violation in corpus data."""


class DegenerateMarginalError(ValueError):
    """A contingency-table marginal is zero; phi is undefined."""


class AnnotationError(ValueError):
    """Annotation set violates the agreement preconditions."""


@dataclass(frozen=True)
class AnnotatedTweet:
    id: str
    text: str
    target_word: str | None = None
    pejorative: bool | None = None
    misogynous: bool | None = None
    split: str = "train"


@dataclass(frozen=True)
class Corpus:
    tweets: tuple[AnnotatedTweet, ...]
    schema: str = "pejorativity"

    def __len__(self) -> int:
        return len(self.tweets)

    def __iter__(self):
        return iter(self.tweets)

    def subset(self, split: str) -> "Corpus":
        return Corpus(tuple(t for t in self.tweets if t.split == split), self.schema)

    def by_id(self) -> dict[str, AnnotatedTweet]:
        return {t.id: t for t in self.tweets}


def _coerce_bool(value: object, field_name: str, record_id: str) -> bool | None:
    if value is None:
        return None
    if isinstance(value, bool):
        return value
    raise CorpusError(f"record {record_id!r}: {field_name} must be true/false/null, got {value!r}")


def load_corpus(path: str | Path, schema: str, lexicon: Lexicon | None = None) -> Corpus:
    """Load a JSONL corpus and enforce the declared schema's invariants.

    target_word, when present, must be a headword of ``lexicon`` (the bundled
    lexicon by default).
    """
    if schema not in SCHEMAS:
        raise CorpusError(f"unknown schema {schema!r}, expected one of {SCHEMAS}")
    if lexicon is None:
        lexicon = default_lexicon()
    path = Path(path)
    tweets: list[AnnotatedTweet] = []
    seen_ids: set[str] = set()
    for i, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise CorpusError(f"{path}:{i}: invalid JSON: {exc}") from exc
        if not isinstance(obj, dict):
            raise CorpusError(f"{path}:{i}: expected an object per line")
        tweet = _tweet_from_obj(obj, f"{path}:{i}", schema, lexicon)
        if tweet.id in seen_ids:
            raise CorpusError(f"{path}:{i}: duplicate id {tweet.id!r}")
        seen_ids.add(tweet.id)
        tweets.append(tweet)
    return Corpus(tuple(tweets), schema)


def _tweet_from_obj(obj: Mapping[str, object], source: str, schema: str, lexicon: Lexicon) -> AnnotatedTweet:
    record_id = str(obj.get("id", "")).strip()
    if not record_id:
        raise CorpusError(f"{source}: missing id")
    text = obj.get("text")
    if not isinstance(text, str) or not text:
        raise CorpusError(f"{source}: record {record_id!r} has empty text")
    split = obj.get("split", "train")
    if split not in SPLITS:
        raise CorpusError(f"{source}: record {record_id!r} has invalid split {split!r}")
    target_word = obj.get("target_word")
    if target_word is not None:
        target_word = str(target_word).lower()
        if target_word not in lexicon:
            raise CorpusError(f"{source}: record {record_id!r} target_word {target_word!r} is not a headword")
    pejorative = _coerce_bool(obj.get("pejorative"), "pejorative", record_id)
    misogynous = _coerce_bool(obj.get("misogynous"), "misogynous", record_id)
    if schema == "pejorativity":
        if pejorative is None or misogynous is None:
            raise CorpusError(f"{source}: record {record_id!r} must carry both labels under the pejorativity schema")
    else:
        if misogynous is None:
            raise CorpusError(f"{source}: record {record_id!r} must carry a misogynous label under the ami schema")
        if pejorative is not None:
            raise CorpusError(f"{source}: record {record_id!r} must not carry a pejorative label under the ami schema")
    return AnnotatedTweet(
        id=record_id,
        text=text,
        target_word=target_word,
        pejorative=pejorative,
        misogynous=misogynous,
        split=str(split),
    )


def save_corpus(corpus: Corpus, path: str | Path, extra: Mapping[str, Mapping[str, object]] | None = None) -> None:
    """Write corpus JSONL; ``extra`` maps tweet id to additional fields."""
    path = Path(path)
    lines = []
    for t in corpus:
        obj: dict[str, object] = {
            "id": t.id,
            "text": t.text,
            "target_word": t.target_word,
            "pejorative": t.pejorative,
            "misogynous": t.misogynous,
            "split": t.split,
        }
        if extra and t.id in extra:
            obj.update(extra[t.id])
        lines.append(json.dumps(obj, ensure_ascii=False))
    path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


# --- corpus statistics ------------------------------------------------------


@dataclass(frozen=True)
class CellCounts:
    train: int = 0
    test: int = 0

    @property
    def total(self) -> int:
        return self.train + self.test


@dataclass(frozen=True)
class StatsReport:
    """Counts per (misogynous, pejorative) cell, split by partition."""

    cells: dict[tuple[bool, bool], CellCounts]

    def cell(self, misogynous: bool, pejorative: bool) -> CellCounts:
        return self.cells.get((misogynous, pejorative), CellCounts())

    @property
    def total(self) -> int:
        return sum(c.total for c in self.cells.values())

    def class_total(self, misogynous: bool) -> int:
        return sum(c.total for (m, _), c in self.cells.items() if m == misogynous)

    def cell_tuple(self) -> tuple[int, int, int, int]:
        """(mis&pej, mis&!pej, !mis&pej, !mis&!pej) totals."""
        return (
            self.cell(True, True).total,
            self.cell(True, False).total,
            self.cell(False, True).total,
            self.cell(False, False).total,
        )

    def render_text(self) -> str:
        rows = [f"{'Class':<28}{'Train':>8}{'Test':>8}{'Total':>8}"]
        for mis in (True, False):
            label = "Misogynous" if mis else "Non-misogynous"
            train = sum(c.train for (m, _), c in self.cells.items() if m == mis)
            test = sum(c.test for (m, _), c in self.cells.items() if m == mis)
            rows.append(f"{label:<28}{train:>8}{test:>8}{train + test:>8}")
            for pej in (True, False):
                cell = self.cell(mis, pej)
                sub = "  pejorative" if pej else "  not pejorative"
                rows.append(f"{sub:<28}{cell.train:>8}{cell.test:>8}{cell.total:>8}")
        rows.append(f"{'Total':<28}{'':>8}{'':>8}{self.total:>8}")
        return "\n".join(rows)


def corpus_stats(corpus: Corpus) -> StatsReport:
    """Cell counts for a dual-label corpus; requires the pejorativity schema."""
    if corpus.schema != "pejorativity":
        raise CorpusError(f"corpus_stats requires the pejorativity schema, got {corpus.schema!r}")
    counts: dict[tuple[bool, bool], dict[str, int]] = defaultdict(lambda: {"train": 0, "test": 0})
    for t in corpus:
        assert t.misogynous is not None and t.pejorative is not None
        counts[(t.misogynous, t.pejorative)][t.split] += 1
    return StatsReport(
        cells={key: CellCounts(train=v["train"], test=v["test"]) for key, v in counts.items()}
    )


# --- phi coefficient --------------------------------------------------------


@dataclass(frozen=True)
class ContingencyTable:
    """2x2 table: a = mis&pej, b = mis&!pej, c = !mis&pej, d = !mis&!pej."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self) -> None:
        if min(self.a, self.b, self.c, self.d) < 0:
            raise ValueError("contingency counts must be non-negative")
        if self.a + self.b + self.c + self.d == 0:
            raise ValueError("contingency table is empty")

    @classmethod
    def from_stats(cls, report: StatsReport) -> "ContingencyTable":
        a, b, c, d = report.cell_tuple()
        return cls(a, b, c, d)


def phi_correlation(table: ContingencyTable) -> float:
    """Pearson correlation of two binary variables: (ad - bc) / sqrt of the
    four marginal products.  Undefined when any marginal is zero."""
    a, b, c, d = table.a, table.b, table.c, table.d
    marginals = (a + b, c + d, a + c, b + d)
    if any(m == 0 for m in marginals):
        raise DegenerateMarginalError(f"zero marginal in {table}")
    value = (a * d - b * c) / math.sqrt(math.prod(marginals))
    return max(-1.0, min(1.0, value))


# --- inter-annotator agreement ----------------------------------------------


@dataclass(frozen=True)
class AnnotationSet:
    """Partial annotator x item matrix of binary (nominal) labels."""

    items: tuple[str, ...]
    annotators: tuple[str, ...]
    labels: dict[tuple[str, str], int] = field(default_factory=dict)  # (annotator, item) -> label

    def validate(self) -> None:
        items = set(self.items)
        annotators = set(self.annotators)
        for (annotator, item) in self.labels:
            if annotator not in annotators:
                raise AnnotationError(f"label by undeclared annotator {annotator!r}")
            if item not in items:
                raise AnnotationError(f"label on undeclared item {item!r}")
        if len(self.annotators) < 2:
            raise AnnotationError("agreement needs at least two annotators")
        per_item = Counter(item for (_, item) in self.labels)
        if not any(n >= 2 for n in per_item.values()):
            raise AnnotationError("agreement needs at least one item labeled by two annotators")


def load_annotations(path: str | Path) -> dict[str, AnnotationSet]:
    """Read an annotation CSV (item_id,annotator_id,task,label) into per-task sets."""
    path = Path(path)
    by_task: dict[str, dict[tuple[str, str], int]] = defaultdict(dict)
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        expected = {"item_id", "annotator_id", "task", "label"}
        if reader.fieldnames is None or set(reader.fieldnames) != expected:
            raise AnnotationError(f"{path}: expected columns {sorted(expected)}")
        for i, row in enumerate(reader, start=2):
            task = row["task"]
            if task not in ("pejorative", "misogynous"):
                raise AnnotationError(f"{path}:{i}: unknown task {task!r}")
            if row["label"] not in ("0", "1"):
                raise AnnotationError(f"{path}:{i}: label must be 0 or 1")
            key = (row["annotator_id"], row["item_id"])
            if key in by_task[task]:
                raise AnnotationError(f"{path}:{i}: duplicate label for {key} on task {task}")
            by_task[task][key] = int(row["label"])
    out = {}
    for task, labels in by_task.items():
        items = tuple(sorted({item for (_, item) in labels}))
        annotators = tuple(sorted({a for (a, _) in labels}))
        out[task] = AnnotationSet(items=items, annotators=annotators, labels=labels)
    return out


def krippendorff_alpha(annotations: AnnotationSet) -> float:
    """Krippendorff's alpha with the nominal metric, coincidence-matrix form.

    Only items labeled by two or more annotators contribute.  Raises
    AnnotationError when the preconditions fail and when expected disagreement
    is zero (every pairable label is identical), where alpha is undefined.
    """
    annotations.validate()
    by_item: dict[str, list[int]] = defaultdict(list)
    for (_, item), label in annotations.labels.items():
        by_item[item].append(label)
    units = {item: values for item, values in by_item.items() if len(values) >= 2}
    n = sum(len(values) for values in units.values())
    if n == 0:
        raise AnnotationError("no pairable values")

    coincidence: Counter[tuple[int, int]] = Counter()
    for values in units.values():
        m = len(values)
        for i, vi in enumerate(values):
            for j, vj in enumerate(values):
                if i != j:
                    coincidence[(vi, vj)] += 1 / (m - 1)
    categories = sorted({v for values in units.values() for v in values})
    totals = {c: sum(coincidence[(c, k)] for k in categories) for c in categories}

    observed = sum(coincidence[(c, k)] for c in categories for k in categories if c != k) / n
    expected = sum(
        totals[c] * totals[k] for c in categories for k in categories if c != k
    ) / (n * (n - 1))
    if expected == 0:
        raise AnnotationError("expected disagreement is zero; alpha is undefined")
    return 1.0 - observed / expected


# --- epithet subsets ---------------------------------------------------------


def filter_epithet_subset(
    corpus: Corpus,
    lexicon: Lexicon,
    config: LemmatizerConfig | None = None,
    max_edit: int = 1,
) -> Corpus:
    """Tweets containing at least one matched headword; split membership kept."""
    keep = tuple(
        t for t in corpus if find_matches(t.text, lexicon, config, max_edit, tweet_id=t.id)
    )
    return Corpus(keep, corpus.schema)


def match_corpus(
    corpus: Corpus,
    lexicon: Lexicon,
    config: LemmatizerConfig | None = None,
    max_edit: int = 1,
) -> dict[str, list]:
    """Match spans for every tweet, keyed by tweet id (empty lists included)."""
    return {
        t.id: find_matches(t.text, lexicon, config, max_edit, tweet_id=t.id) for t in corpus
    }
