#!/usr/bin/env python3
"""Write the synthetic fixture corpora to disk for CLI experiments.

Usage: python scripts/build_fixtures.py [--out DIR]
"""

import argparse
from pathlib import Path

from pejoratives.corpus import save_corpus
from pejoratives.embeddings import save_embeddings
from pejoratives.fixtures import geometry_fixture, pipeline_corpus, table3_corpus


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="fixtures", help="output directory")
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    save_corpus(table3_corpus(), out / "table3.jsonl")
    save_corpus(pipeline_corpus(), out / "pipeline400.jsonl")
    corpus, embeddings = geometry_fixture()
    save_corpus(corpus, out / "geometry.jsonl")
    save_embeddings(embeddings, out / "geometry_embeddings.jsonl")

    for name in ("table3.jsonl", "pipeline400.jsonl", "geometry.jsonl", "geometry_embeddings.jsonl"):
        print(f"wrote {out / name}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
