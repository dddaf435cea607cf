"""Fine-tuning loop: AdamW with the fixed epsilon, fixed epochs and batch size."""

from __future__ import annotations

import json
from pathlib import Path

import torch

from .config import AdapterConfig, write_manifest
from .data import Tweet, label_for_task
from .modeling import encode_batch, load_classifier, load_tokenizer, set_seed


def finetune(
    tweets: list[Tweet],
    task: str,
    config: AdapterConfig,
    out_dir: str | Path,
    seed: int | None = None,
    epochs: int | None = None,
) -> Path:
    """Train on the corpus train split and save a checkpoint directory.

    ``epochs`` overrides the configured count for smoke runs only.
    """
    out_dir = Path(out_dir)
    seed = config.seeds[0] if seed is None else seed
    epochs = config.epochs if epochs is None else epochs
    train = [t for t in tweets if t.split == "train"]
    if not train:
        raise ValueError("training split is empty")
    labels = torch.tensor([int(label_for_task(t, task)) for t in train])

    set_seed(seed)
    tokenizer = load_tokenizer(config.model_name)
    model = load_classifier(config.model_name)
    device = torch.device("cuda" if torch.cuda.is_available() else "cpu")
    model.to(device)
    optimizer = torch.optim.AdamW(model.parameters(), lr=config.learning_rate, eps=config.adamw_epsilon)

    encodings = encode_batch(tokenizer, train, task, config.max_length)
    n = len(train)
    log = []
    generator = torch.Generator().manual_seed(seed)
    model.train()
    for epoch in range(epochs):
        order = torch.randperm(n, generator=generator)
        epoch_loss = 0.0
        for start in range(0, n, config.batch_size):
            idx = order[start : start + config.batch_size]
            batch = {key: value[idx].to(device) for key, value in encodings.items()}
            batch["labels"] = labels[idx].to(device)
            optimizer.zero_grad()
            output = model(**batch)
            output.loss.backward()
            optimizer.step()
            epoch_loss += float(output.loss.detach()) * len(idx)
        log.append({"epoch": epoch, "mean_loss": epoch_loss / n})

    model.save_pretrained(out_dir)
    tokenizer.save_pretrained(out_dir)
    (out_dir / "training_log.json").write_text(json.dumps(log, indent=2) + "\n", encoding="utf-8")
    write_manifest(out_dir, config, "finetune", task=task, seed=seed, epochs=epochs, train_size=n)
    return out_dir
