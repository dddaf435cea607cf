"""Transformer backend for the epithet-disambiguation toolkit.

Exchanges data with the main toolkit exclusively through its JSONL file
schemas (corpora, match spans, predictions, tokenizations, embeddings), so
either side can be swapped out independently.
"""

__version__ = "0.1.0"
