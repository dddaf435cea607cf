"""Zero-shot disambiguation prompts: byte-exact construction, batch export,
and side-by-side review of generated responses.

The instruction template ships as a frozen text file; build_prompt is a pure
string substitution into that template, so a prompt always reconstructs
exactly from its (word, sentence) pair.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, asdict
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

from .corpus import Corpus
from .lexicon import Lexicon
from .matcher import LemmatizerConfig, find_matches


class PromptError(ValueError):
    """Empty slots, unknown prompt ids, or failed integrity checks."""


@dataclass(frozen=True)
class GenerationConfig:
    temperature: float = 0.2
    num_beams: int = 4
    top_p: float = 0.75
    max_new_tokens: int = 300
    repetition_penalty: float = 1.8


def _load_template() -> str:
    return resources.files("pejoratives").joinpath("data/prompt_template.txt").read_text(encoding="utf-8")


PROMPT_TEMPLATE = _load_template()


def build_prompt(word: str, sentence: str) -> str:
    """Fill the frozen template; slot contents go in literally, no escaping."""
    if not word or not sentence:
        raise PromptError("word and sentence must be non-empty")
    return PROMPT_TEMPLATE.replace("{word}", word).replace("{sentence}", sentence)


@dataclass(frozen=True)
class PromptItem:
    id: str
    word: str
    sentence: str
    prompt: str


@dataclass(frozen=True)
class ResponseRecord:
    id: str
    word: str
    sentence: str
    prompt: str
    response: str
    model: str


def export_prompt_batch(
    corpus: Corpus,
    lexicon: Lexicon,
    out_dir: str | Path,
    gen_config: GenerationConfig | None = None,
    config: LemmatizerConfig | None = None,
    max_edit: int = 1,
    model_name: str | None = None,
) -> list[PromptItem]:
    """One prompt per test-split tweet with a matched headword.

    Writes ``batch.jsonl`` and ``manifest.json`` (generation parameters plus a
    model-name placeholder) under ``out_dir``.
    """
    gen_config = gen_config or GenerationConfig()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    items: list[PromptItem] = []
    for tweet in corpus.subset("test"):
        spans = find_matches(tweet.text, lexicon, config, max_edit, tweet_id=tweet.id)
        if not spans:
            continue
        if tweet.target_word and any(s.headword == tweet.target_word for s in spans):
            word = tweet.target_word
        else:
            word = spans[0].headword
        items.append(PromptItem(tweet.id, word, tweet.text, build_prompt(word, tweet.text)))
    if not items:
        warnings.warn("prompt batch is empty: no test tweet matched a headword", stacklevel=2)

    batch_lines = [
        json.dumps({"id": it.id, "word": it.word, "sentence": it.sentence, "prompt": it.prompt}, ensure_ascii=False)
        for it in items
    ]
    (out_dir / "batch.jsonl").write_text("\n".join(batch_lines) + ("\n" if batch_lines else ""), encoding="utf-8")
    manifest = {"generation": asdict(gen_config), "model": model_name, "prompt_count": len(items)}
    (out_dir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return items


def load_prompt_batch(path: str | Path) -> list[PromptItem]:
    items = []
    for i, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        obj = json.loads(line)
        items.append(PromptItem(str(obj["id"]), obj["word"], obj["sentence"], obj["prompt"]))
    return items


def load_manifest(path: str | Path) -> dict:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def ingest_responses(path: str | Path, batch: Sequence[PromptItem]) -> list[ResponseRecord]:
    """Pair generated responses with their exported prompts.

    Every response must reference an exported prompt id, and the stored prompt
    must reconstruct byte-for-byte from its (word, sentence) pair.
    """
    by_id = {item.id: item for item in batch}
    records = []
    for i, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        obj = json.loads(line)
        response_id = str(obj.get("id", ""))
        item = by_id.get(response_id)
        if item is None:
            raise PromptError(f"{path}:{i}: response references unknown prompt id {response_id!r}")
        if build_prompt(item.word, item.sentence) != item.prompt:
            raise PromptError(f"{path}:{i}: prompt for id {response_id!r} fails reconstruction")
        records.append(
            ResponseRecord(
                id=response_id,
                word=item.word,
                sentence=item.sentence,
                prompt=item.prompt,
                response=str(obj.get("response", "")),
                model=str(obj.get("model", "")),
            )
        )
    return records


def render_review_table(records: Sequence[ResponseRecord], corpus: Corpus | None = None) -> str:
    """Qualitative review layout: tweet, target word, gold connotation, response."""
    gold: Mapping[str, bool | None] = {}
    if corpus is not None:
        gold = {t.id: t.pejorative for t in corpus}
    header = f"{'id':<10}{'word':<14}{'gold':<14}tweet / response"
    rows = [header, "-" * len(header)]
    for r in records:
        gold_label = gold.get(r.id)
        gold_text = "?" if gold_label is None else ("pejorative" if gold_label else "neutral")
        rows.append(f"{r.id:<10}{r.word:<14}{gold_text:<14}{r.sentence}")
        rows.append(f"{'':<10}{'':<14}{'':<14}-> {r.response}")
    return "\n".join(rows)
