import json

import pytest

from pejoratives.corpus import Corpus, save_corpus
from pejoratives.lexicon import default_lexicon


@pytest.fixture(scope="session")
def lexicon():
    return default_lexicon()


@pytest.fixture(scope="session")
def table3(lexicon):
    from pejoratives.fixtures import table3_corpus

    return table3_corpus(lexicon)


def write_jsonl(path, objects):
    path.write_text("\n".join(json.dumps(o, ensure_ascii=False) for o in objects) + "\n", encoding="utf-8")


@pytest.fixture()
def corpus_file(tmp_path):
    def _write(corpus: Corpus, name="corpus.jsonl"):
        path = tmp_path / name
        save_corpus(corpus, path)
        return path

    return _write
