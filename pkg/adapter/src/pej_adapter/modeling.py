"""Model and tokenizer loading, plus a tiny local model for offline smoke runs."""

from __future__ import annotations

import random
from pathlib import Path

import numpy as np
import torch
from transformers import (
    AutoModel,
    AutoModelForSequenceClassification,
    AutoTokenizer,
    BertConfig,
    BertForSequenceClassification,
    BertTokenizerFast,
)

from .data import Tweet


def set_seed(seed: int) -> None:
    random.seed(seed)
    np.random.seed(seed)
    torch.manual_seed(seed)


def load_tokenizer(model_name_or_dir: str):
    return AutoTokenizer.from_pretrained(model_name_or_dir)


def load_classifier(model_name_or_dir: str):
    return AutoModelForSequenceClassification.from_pretrained(model_name_or_dir, num_labels=2)


def load_encoder(model_name_or_dir: str):
    return AutoModel.from_pretrained(model_name_or_dir)


def encode_batch(tokenizer, tweets: list[Tweet], task: str, max_length: int):
    """Word-level inputs pair the tweet with its target word; sentence-level
    inputs use the text alone."""
    texts = [t.text for t in tweets]
    if task == "pej":
        pairs = [t.target_word or "" for t in tweets]
        return tokenizer(
            texts, pairs, truncation=True, padding=True, max_length=max_length, return_tensors="pt"
        )
    return tokenizer(texts, truncation=True, padding=True, max_length=max_length, return_tensors="pt")


def make_tiny_model(out_dir: str | Path, texts: list[str], planted_pieces: tuple[str, ...] = ("balen", "##a")) -> Path:
    """Create a small randomly initialized BERT checkpoint with a WordPiece
    vocabulary derived from ``texts``; everything loads offline afterwards.

    ``planted_pieces`` are added so known headwords split into multi-piece
    spans, which the tokenization and embedding exports must handle.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    alphabet = sorted({ch for text in texts for ch in text.lower() if not ch.isspace()})
    tokens = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
    tokens += alphabet
    tokens += [f"##{ch}" for ch in alphabet]
    tokens += [p for p in planted_pieces if p not in tokens]
    vocab = {token: index for index, token in enumerate(tokens)}

    tokenizer = BertTokenizerFast(vocab=vocab, do_lower_case=True)
    tokenizer.save_pretrained(out_dir)

    torch.manual_seed(0)
    config = BertConfig(
        vocab_size=len(vocab),
        hidden_size=32,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=96,
        num_labels=2,
    )
    model = BertForSequenceClassification(config)
    model.save_pretrained(out_dir)
    return out_dir
