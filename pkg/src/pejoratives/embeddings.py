"""Cosine-similarity analysis between headword occurrences and anchor vectors.

Occurrence vectors are subword mean-pooled embeddings of matched headword
spans; anchor vectors are context-free reference embeddings of the anchor
words.  Both arrive through the embedding JSONL interface, tagged with the
model stage that produced them (pretrained vs fine-tuned).
"""

from __future__ import annotations

import json
import math
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .corpus import Corpus
from .lexicon import Connotation, Lexicon
from .matcher import LemmatizerConfig, MatchSpan, find_matches, lemma, tokenize_words

KINDS = ("lexicon_occurrence", "anchor")
MODEL_TAGS = ("pretrained", "finetuned")
SAMPLE_CLASSES = ("pejorative", "neutral")


class EmbeddingError(ValueError):
    """Malformed embedding records or incomplete coverage."""


@dataclass(frozen=True)
class EmbeddingRecord:
    id: str
    kind: str
    word: str
    model_tag: str
    vector: tuple[float, ...]


def occurrence_id(tweet_id: str, span: MatchSpan) -> str:
    return f"{tweet_id}:{span.char_start}-{span.char_end}"


def anchor_id(word: str) -> str:
    return f"anchor:{word}"


def load_embeddings(path: str | Path) -> list[EmbeddingRecord]:
    path = Path(path)
    records: list[EmbeddingRecord] = []
    dim: int | None = None
    for i, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise EmbeddingError(f"{path}:{i}: invalid JSON: {exc}") from exc
        if obj.get("kind") not in KINDS:
            raise EmbeddingError(f"{path}:{i}: unknown kind {obj.get('kind')!r}")
        if obj.get("model_tag") not in MODEL_TAGS:
            raise EmbeddingError(f"{path}:{i}: unknown model_tag {obj.get('model_tag')!r}")
        vector = obj.get("vector")
        if not isinstance(vector, list) or not vector:
            raise EmbeddingError(f"{path}:{i}: vector must be a non-empty list")
        values = tuple(float(v) for v in vector)
        if not all(math.isfinite(v) for v in values):
            raise EmbeddingError(f"{path}:{i}: non-finite vector component")
        if dim is None:
            dim = len(values)
        elif len(values) != dim:
            raise EmbeddingError(f"{path}:{i}: dimension {len(values)} != {dim}")
        records.append(
            EmbeddingRecord(
                id=str(obj.get("id", "")),
                kind=obj["kind"],
                word=str(obj.get("word", "")),
                model_tag=obj["model_tag"],
                vector=values,
            )
        )
    return records


def save_embeddings(records: Iterable[EmbeddingRecord], path: str | Path) -> None:
    lines = [
        json.dumps(
            {"id": r.id, "kind": r.kind, "word": r.word, "model_tag": r.model_tag,
             "vector": list(r.vector)},
            ensure_ascii=False,
        )
        for r in records
    ]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def mean_pool(vectors: Sequence[Sequence[float]]) -> np.ndarray:
    """Componentwise arithmetic mean of equally sized vectors."""
    if len(vectors) == 0:
        raise EmbeddingError("cannot pool an empty list")
    arr = [np.asarray(v, dtype=np.float64) for v in vectors]
    dims = {a.shape for a in arr}
    if len(dims) > 1:
        raise EmbeddingError(f"dimension mismatch in pooled vectors: {sorted(dims)}")
    return np.mean(arr, axis=0)


def cosine(u: Sequence[float], v: Sequence[float]) -> float:
    """Cosine similarity, clamped to [-1, 1] against rounding drift."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise EmbeddingError("cosine of a zero vector is undefined")
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))


@dataclass(frozen=True)
class SimilarityCell:
    headword: str
    anchor: str
    anchor_connotation: str
    sample_class: str  # "pejorative" | "neutral"
    model_tag: str
    mean: float
    std: float
    n: int


def _anchor_connotation(lexicon: Lexicon, headword: str, anchor: str) -> str:
    entry = lexicon.get(headword)
    if anchor in entry.pejorative_anchors:
        return Connotation.PEJORATIVE.value
    if anchor in entry.neutral_anchors:
        return Connotation.NEUTRAL.value
    raise EmbeddingError(f"{anchor!r} is not an anchor of {headword!r}")


def anchor_similarity_table(
    corpus: Corpus,
    lexicon: Lexicon,
    embeddings: Sequence[EmbeddingRecord],
    config: LemmatizerConfig | None = None,
    max_edit: int = 1,
) -> list[SimilarityCell]:
    """One cell per (headword, anchor, sample class, model stage).

    Sample class comes from the tweet's gold word-level label.  Raises
    EmbeddingError listing occurrences or anchors that lack a vector.
    """
    occ_vectors: dict[tuple[str, str], tuple[float, ...]] = {}
    anchor_vectors: dict[tuple[str, str], tuple[float, ...]] = {}
    for record in embeddings:
        key = (record.id, record.model_tag)
        if record.kind == "anchor":
            anchor_vectors[(record.word, record.model_tag)] = record.vector
        else:
            occ_vectors[key] = record.vector

    pairs: dict[tuple[str, str, str, str], list[float]] = defaultdict(list)
    missing: list[str] = []
    for tweet in corpus:
        if tweet.pejorative is None:
            continue
        sample_class = "pejorative" if tweet.pejorative else "neutral"
        spans = find_matches(tweet.text, lexicon, config, max_edit, tweet_id=tweet.id)
        for span in spans:
            occ_id = occurrence_id(tweet.id, span)
            entry = lexicon.get(span.headword)
            for tag in MODEL_TAGS:
                occ_vec = occ_vectors.get((occ_id, tag))
                if occ_vec is None:
                    missing.append(f"{occ_id}[{tag}]")
                    continue
                for anchor in entry.neutral_anchors + entry.pejorative_anchors:
                    anchor_vec = anchor_vectors.get((anchor, tag))
                    if anchor_vec is None:
                        missing.append(f"anchor:{anchor}[{tag}]")
                        continue
                    pairs[(span.headword, anchor, sample_class, tag)].append(
                        cosine(occ_vec, anchor_vec)
                    )
    if missing:
        raise EmbeddingError(f"missing embeddings: {sorted(set(missing))[:10]}")

    cells = []
    for (headword, anchor, sample_class, tag), values in sorted(pairs.items()):
        arr = np.asarray(values)
        cells.append(
            SimilarityCell(
                headword=headword,
                anchor=anchor,
                anchor_connotation=_anchor_connotation(lexicon, headword, anchor),
                sample_class=sample_class,
                model_tag=tag,
                mean=float(arr.mean()),
                std=float(arr.std()),
                n=len(values),
            )
        )
    return cells


def class_average_summary(cells: Sequence[SimilarityCell]) -> dict[tuple[str, str, str], float]:
    """Mean cosine per (model_tag, anchor connotation, sample class), weighted
    by each cell's pair count."""
    if not cells:
        raise EmbeddingError("no similarity cells to summarize")
    sums: dict[tuple[str, str, str], float] = defaultdict(float)
    counts: dict[tuple[str, str, str], int] = defaultdict(int)
    for cell in cells:
        key = (cell.model_tag, cell.anchor_connotation, cell.sample_class)
        sums[key] += cell.mean * cell.n
        counts[key] += cell.n
    return {key: sums[key] / counts[key] for key in sums}


def anchor_frequency(
    corpus: Corpus,
    lexicon: Lexicon,
    config: LemmatizerConfig | None = None,
) -> dict[str, int]:
    """Occurrence count of every anchor across the corpus texts.

    Anchors match on token lemmas; multi-word anchors require their token
    lemma sequence to appear contiguously.
    """
    anchors = sorted({a for e in lexicon for a in e.neutral_anchors + e.pejorative_anchors})
    anchor_lemmas = {a: tuple(lemma(tok, config) for tok, _, _ in tokenize_words(a)) for a in anchors}
    counts = {a: 0 for a in anchors}
    for tweet in corpus:
        token_lemmas = [lemma(tok, config) for tok, _, _ in tokenize_words(tweet.text)]
        for anchor, target in anchor_lemmas.items():
            k = len(target)
            if k == 0:
                continue
            for i in range(len(token_lemmas) - k + 1):
                if tuple(token_lemmas[i : i + k]) == target:
                    counts[anchor] += 1
    return counts


def similarity_csv(cells: Sequence[SimilarityCell]) -> str:
    import csv
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["headword", "anchor", "anchor_connotation", "sample_class", "model_tag", "mean", "std", "n"])
    for c in cells:
        writer.writerow(
            [c.headword, c.anchor, c.anchor_connotation, c.sample_class, c.model_tag,
             f"{c.mean:.4f}", f"{c.std:.4f}", c.n]
        )
    return buf.getvalue()


def similarity_wide_csv(cells: Sequence[SimilarityCell]) -> str:
    """One row per (headword, anchor), with mean/std columns per model stage
    and sample class, mirroring the comparison-table layout."""
    import csv
    import io

    combos = [(tag, cls) for tag in MODEL_TAGS for cls in SAMPLE_CLASSES]
    rows: dict[tuple[str, str], dict] = {}
    for c in cells:
        row = rows.setdefault(
            (c.headword, c.anchor), {"anchor_connotation": c.anchor_connotation}
        )
        row[(c.model_tag, c.sample_class)] = c

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = ["headword", "anchor", "anchor_connotation"]
    for tag, cls in combos:
        header += [f"{tag}_{cls}_mean", f"{tag}_{cls}_std"]
    writer.writerow(header)
    for (headword, anchor), row in sorted(rows.items()):
        values = [headword, anchor, row["anchor_connotation"]]
        for combo in combos:
            cell = row.get(combo)
            values += ["", ""] if cell is None else [f"{cell.mean:.4f}", f"{cell.std:.4f}"]
        writer.writerow(values)
    return buf.getvalue()
