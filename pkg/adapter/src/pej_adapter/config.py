"""Adapter configuration, echoed verbatim into every export manifest."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

# Italian tweet-pretrained BERT encoder used for real runs; smoke tests point
# model_name at a local directory instead.
DEFAULT_MODEL = "m-polignano-uniba/bert_uncased_L-12_H-768_A-12_italian_alb3rt0"


@dataclass(frozen=True)
class AdapterConfig:
    model_name: str = DEFAULT_MODEL
    adamw_epsilon: float = 1e-8
    epochs: int = 4
    batch_size: int = 16
    seeds: tuple[int, ...] = (13, 42, 2024)
    embedding_layer: int = -1  # last hidden layer unless configured otherwise
    # Not fixed by the experimental protocol; documented assumptions.
    learning_rate: float = 2e-5
    max_length: int = 128

    def to_dict(self) -> dict:
        data = asdict(self)
        data["seeds"] = list(self.seeds)
        return data


def write_manifest(out_dir: str | Path, config: AdapterConfig, command: str, **extra) -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    manifest = {"command": command, "config": config.to_dict(), **extra}
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
