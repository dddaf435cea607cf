"""Pluggable classification backends for the two pipeline roles.

The in-repo backend is a character n-gram logistic model trained by mini-batch
gradient descent; it stands in for transformer models so the experiment
pipeline runs hermetically on CPU.  Transformer results enter through
prediction JSONL files produced by the external adapter.

For the word-level task the target headword occurrences are wrapped in
visible markers so the model conditions on the word in its context.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .corpus import Corpus
from .matcher import MatchSpan

TASKS = ("pej", "mis")
DEFAULT_SEEDS = (13, 42, 2024)
MARKER_OPEN, MARKER_CLOSE = "⟦", "⟧"  # ⟦ ⟧


class ClassifierError(ValueError):
    """Bad training inputs or malformed prediction records."""


@dataclass(frozen=True)
class PredictionRecord:
    id: str
    task: str
    label: bool
    score: float
    run_id: int


@dataclass(frozen=True)
class Hyperparams:
    ngram_min: int = 2
    ngram_max: int = 5
    dim: int = 2**15
    lr: float = 0.5
    epochs: int = 40
    batch_size: int = 32
    l2: float = 1e-4


@dataclass
class BaselineModel:
    task: str
    hyperparams: Hyperparams
    weights: np.ndarray
    bias: float
    seed: int


def _hash_ngram(gram: str, dim: int) -> int:
    digest = hashlib.blake2b(gram.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little") % dim


def featurize(text: str, hp: Hyperparams) -> np.ndarray:
    """L2-normalized counts of hashed character n-grams."""
    vec = np.zeros(hp.dim, dtype=np.float64)
    padded = f" {text.lower()} "
    for n in range(hp.ngram_min, hp.ngram_max + 1):
        for i in range(len(padded) - n + 1):
            vec[_hash_ngram(padded[i : i + n], hp.dim)] += 1.0
    norm = np.linalg.norm(vec)
    if norm > 0:
        vec /= norm
    return vec


def featurize_corpus(texts: Sequence[str], hp: Hyperparams) -> np.ndarray:
    return np.stack([featurize(t, hp) for t in texts]) if texts else np.zeros((0, hp.dim))


def pej_input(text: str, spans: Sequence[MatchSpan]) -> str:
    """Wrap the target spans in markers, right to left to keep offsets valid."""
    for span in sorted(spans, key=lambda s: s.char_start, reverse=True):
        text = f"{text[: span.char_start]}{MARKER_OPEN}{span.surface}{MARKER_CLOSE}{text[span.char_end :]}"
    return text


def task_texts(
    corpus: Corpus,
    task: str,
    spans_by_id: Mapping[str, Sequence[MatchSpan]] | None = None,
) -> list[str]:
    """Model inputs for a task: raw text for "mis", marker-wrapped for "pej".

    For "pej", spans are restricted to the tweet's target word when one is set,
    mirroring how the word-level label refers to the retrieval keyword.
    """
    if task == "mis" or spans_by_id is None:
        return [t.text for t in corpus]
    texts = []
    for t in corpus:
        spans = list(spans_by_id.get(t.id, ()))
        if t.target_word:
            spans = [s for s in spans if s.headword == t.target_word]
        texts.append(pej_input(t.text, spans))
    return texts


def _labels(corpus: Corpus, task: str) -> np.ndarray:
    values = []
    for t in corpus:
        value = t.pejorative if task == "pej" else t.misogynous
        if value is None:
            raise ClassifierError(f"tweet {t.id!r} lacks the {task!r} label")
        values.append(1.0 if value else -1.0)
    return np.asarray(values)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def loss(model: BaselineModel, X: np.ndarray, y: np.ndarray) -> float:
    """Mean logistic loss plus L2 penalty on the weights (bias unpenalized)."""
    z = X @ model.weights + model.bias
    data = float(np.mean(np.logaddexp(0.0, -y * z)))
    return data + 0.5 * model.hyperparams.l2 * float(model.weights @ model.weights)


def loss_gradient(model: BaselineModel, X: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Analytic gradient of :func:`loss`; weights first, bias last."""
    if len(X) == 0:
        raise ClassifierError("empty batch")
    z = X @ model.weights + model.bias
    coeff = -y * _sigmoid(-y * z) / len(X)
    grad_w = X.T @ coeff + model.hyperparams.l2 * model.weights
    grad_b = float(np.sum(coeff))
    return np.concatenate([grad_w, [grad_b]])


def train_baseline(
    corpus: Corpus,
    task: str,
    hp: Hyperparams | None = None,
    seed: int = DEFAULT_SEEDS[0],
    spans_by_id: Mapping[str, Sequence[MatchSpan]] | None = None,
) -> BaselineModel:
    """Fit the logistic baseline on the train split; deterministic given seed."""
    if task not in TASKS:
        raise ClassifierError(f"unknown task {task!r}")
    hp = hp or Hyperparams()
    train = corpus.subset("train")
    if len(train) == 0:
        raise ClassifierError("training split is empty")
    y = _labels(train, task)
    X = featurize_corpus(task_texts(train, task, spans_by_id), hp)

    rng = np.random.default_rng(seed)
    model = BaselineModel(task=task, hyperparams=hp, weights=np.zeros(hp.dim), bias=0.0, seed=seed)
    n = len(train)
    for _ in range(hp.epochs):
        order = rng.permutation(n)
        for start in range(0, n, hp.batch_size):
            idx = order[start : start + hp.batch_size]
            grad = loss_gradient(model, X[idx], y[idx])
            model.weights = model.weights - hp.lr * grad[:-1]
            model.bias = model.bias - hp.lr * grad[-1]
    return model


def predict(
    model: BaselineModel,
    corpus: Corpus,
    task: str,
    run_id: int = 0,
    spans_by_id: Mapping[str, Sequence[MatchSpan]] | None = None,
) -> list[PredictionRecord]:
    """One record per tweet; scores in [0, 1], ties at 0.5 resolve to negative."""
    if task != model.task:
        raise ClassifierError(f"model was trained for {model.task!r}, not {task!r}")
    X = featurize_corpus(task_texts(corpus, task, spans_by_id), model.hyperparams)
    scores = _sigmoid(X @ model.weights + model.bias)
    return [
        PredictionRecord(id=t.id, task=task, label=bool(s > 0.5), score=float(s), run_id=run_id)
        for t, s in zip(corpus, scores)
    ]


def save_model(model: BaselineModel, path: str | Path) -> None:
    obj = {
        "format": 1,
        "task": model.task,
        "seed": model.seed,
        "hyperparams": vars(model.hyperparams),
        "bias": model.bias,
        "weights": model.weights.tolist(),
    }
    Path(path).write_text(json.dumps(obj), encoding="utf-8")


def load_model(path: str | Path) -> BaselineModel:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    if obj.get("format") != 1:
        raise ClassifierError(f"{path}: unsupported model format {obj.get('format')!r}")
    hp = Hyperparams(**obj["hyperparams"])
    return BaselineModel(
        task=obj["task"],
        hyperparams=hp,
        weights=np.asarray(obj["weights"], dtype=np.float64),
        bias=float(obj["bias"]),
        seed=int(obj["seed"]),
    )


def load_external_predictions(
    path: str | Path,
    corpus: Corpus | None = None,
    task: str | None = None,
) -> list[PredictionRecord]:
    """Read prediction JSONL from an external backend and validate it."""
    path = Path(path)
    known_ids = set(corpus.by_id()) if corpus is not None else None
    records = []
    for i, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ClassifierError(f"{path}:{i}: invalid JSON: {exc}") from exc
        if obj.get("task") not in TASKS:
            raise ClassifierError(f"{path}:{i}: unknown task {obj.get('task')!r}")
        if task is not None and obj["task"] != task:
            raise ClassifierError(f"{path}:{i}: expected task {task!r}, got {obj['task']!r}")
        score = obj.get("score")
        if not isinstance(score, (int, float)) or not 0.0 <= float(score) <= 1.0:
            raise ClassifierError(f"{path}:{i}: score {score!r} outside [0, 1]")
        if not isinstance(obj.get("label"), bool):
            raise ClassifierError(f"{path}:{i}: label must be boolean")
        if not isinstance(obj.get("run_id"), int):
            raise ClassifierError(f"{path}:{i}: run_id must be an integer")
        record_id = str(obj.get("id", ""))
        if known_ids is not None and record_id not in known_ids:
            raise ClassifierError(f"{path}:{i}: unknown tweet id {record_id!r}")
        records.append(
            PredictionRecord(
                id=record_id,
                task=obj["task"],
                label=obj["label"],
                score=float(score),
                run_id=obj["run_id"],
            )
        )
    return records


def save_predictions(records: Iterable[PredictionRecord], path: str | Path) -> None:
    lines = [
        json.dumps(
            {"id": r.id, "task": r.task, "label": r.label, "score": r.score, "run_id": r.run_id}
        )
        for r in records
    ]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
