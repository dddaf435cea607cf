import os
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import write_jsonl
from pejoratives.corpus import (
    AnnotatedTweet,
    ContingencyTable,
    Corpus,
    CorpusError,
    DegenerateMarginalError,
    corpus_stats,
    filter_epithet_subset,
    load_corpus,
    match_corpus,
    phi_correlation,
)
from pejoratives.lexicon import Lexicon
from pejoratives.matcher import tokenize_words


def _record(i, text="sei una balena", **kw):
    base = {
        "id": f"r{i}",
        "text": text,
        "target_word": "balena",
        "pejorative": True,
        "misogynous": True,
        "split": "train",
    }
    base.update(kw)
    return base


def test_load_pejorativity(tmp_path):
    path = tmp_path / "c.jsonl"
    write_jsonl(path, [_record(0), _record(1, split="test", pejorative=False, misogynous=False)])
    corpus = load_corpus(path, "pejorativity")
    assert len(corpus) == 2
    assert len(corpus.subset("test")) == 1


def test_pejorativity_requires_both_labels(tmp_path):
    path = tmp_path / "c.jsonl"
    write_jsonl(path, [_record(0, pejorative=None)])
    with pytest.raises(CorpusError, match="both labels"):
        load_corpus(path, "pejorativity")


def test_ami_requires_misogynous_only(tmp_path):
    path = tmp_path / "c.jsonl"
    write_jsonl(path, [_record(0, pejorative=None, target_word=None)])
    assert len(load_corpus(path, "ami")) == 1
    write_jsonl(path, [_record(0, target_word=None)])
    with pytest.raises(CorpusError, match="must not carry a pejorative label"):
        load_corpus(path, "ami")
    write_jsonl(path, [_record(0, pejorative=None, misogynous=None, target_word=None)])
    with pytest.raises(CorpusError, match="misogynous label"):
        load_corpus(path, "ami")


def test_target_word_must_be_headword(tmp_path):
    path = tmp_path / "c.jsonl"
    write_jsonl(path, [_record(0, target_word="balcone")])
    with pytest.raises(CorpusError, match="not a headword"):
        load_corpus(path, "pejorativity")


def test_duplicate_id_rejected(tmp_path):
    path = tmp_path / "c.jsonl"
    write_jsonl(path, [_record(0), _record(0)])
    with pytest.raises(CorpusError, match="duplicate id"):
        load_corpus(path, "pejorativity")


def test_empty_text_rejected(tmp_path):
    path = tmp_path / "c.jsonl"
    write_jsonl(path, [_record(0, text="")])
    with pytest.raises(CorpusError, match="empty text"):
        load_corpus(path, "pejorativity")


def test_invalid_json_rejected(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text("{not json}\n", encoding="utf-8")
    with pytest.raises(CorpusError, match="invalid JSON"):
        load_corpus(path, "pejorativity")


# --- statistics ---------------------------------------------------------------


def test_table3_fixture_stats(table3):
    report = corpus_stats(table3)
    assert report.total == 1200
    assert report.class_total(True) == 397
    assert report.class_total(False) == 803
    assert report.cell_tuple() == (391, 6, 190, 613)
    # split-level cells
    assert (report.cell(True, True).train, report.cell(True, True).test) == (363, 28)
    assert (report.cell(True, False).train, report.cell(True, False).test) == (6, 0)
    assert (report.cell(False, True).train, report.cell(False, True).test) == (172, 18)
    assert (report.cell(False, False).train, report.cell(False, False).test) == (563, 50)


def test_stats_empty_corpus():
    report = corpus_stats(Corpus((), "pejorativity"))
    assert report.total == 0
    assert report.cell_tuple() == (0, 0, 0, 0)


def test_stats_requires_pejorativity_schema():
    with pytest.raises(CorpusError):
        corpus_stats(Corpus((), "ami"))


def test_stats_cells_sum_to_corpus_size(table3):
    report = corpus_stats(table3)
    assert sum(report.cell_tuple()) == len(table3)


def test_stats_render_text(table3):
    text = corpus_stats(table3).render_text()
    assert "Misogynous" in text and "397" in text and "613" in text


# --- phi coefficient ------------------------------------------------------------


def test_phi_reproduces_published_value():
    assert phi_correlation(ContingencyTable(391, 6, 190, 613)) == pytest.approx(0.70, abs=0.01)


@pytest.mark.parametrize("n", [1, 5, 100])
def test_phi_perfect_diagonal(n):
    assert phi_correlation(ContingencyTable(n, 0, 0, n)) == pytest.approx(1.0)


@pytest.mark.parametrize("k", [1, 7])
def test_phi_independence(k):
    assert phi_correlation(ContingencyTable(k, k, k, k)) == pytest.approx(0.0)


def test_phi_degenerate_marginal():
    with pytest.raises(DegenerateMarginalError):
        phi_correlation(ContingencyTable(3, 0, 5, 0))


nonneg = st.integers(min_value=0, max_value=50)


@settings(max_examples=300, deadline=None)
@given(nonneg, nonneg, nonneg, nonneg)
def test_phi_symmetries(a, b, c, d):
    try:
        value = phi_correlation(ContingencyTable(a, b, c, d))
    except ValueError:  # empty table or zero marginal
        return
    assert -1.0 <= value <= 1.0
    # swapping both diagonals simultaneously preserves phi
    assert phi_correlation(ContingencyTable(d, c, b, a)) == pytest.approx(value)
    # swapping the columns flips the sign
    assert phi_correlation(ContingencyTable(b, a, d, c)) == pytest.approx(-value)


# --- epithet subsets -------------------------------------------------------------


def _mixed_corpus():
    texts = [
        ("m0", "sei proprio una balena", "train"),
        ("m1", "il tempo oggi non promette niente", "train"),
        ("m2", "quelle oche starnazzano", "train"),
        ("m3", "domani si vota", "test"),
        ("m4", "che cagna quella ragazza", "test"),
        ("m5", "il balcone resta chiuso", "test"),
        ("m6", "andiamo al cinema", "train"),
        ("m7", "piove da stamattina", "train"),
        ("m8", "il traffico in tangenziale", "test"),
        ("m9", "tutto tranquillo da queste parti", "train"),
    ]
    return Corpus(
        tuple(AnnotatedTweet(i, t, None, None, True, s) for i, t, s in texts), "ami"
    )


def test_filter_epithet_subset_matches_oracle(lexicon):
    corpus = _mixed_corpus()
    subset = filter_epithet_subset(corpus, lexicon)
    assert [t.id for t in subset] == ["m0", "m2", "m4"]
    # splits preserved
    assert {t.id: t.split for t in subset} == {"m0": "train", "m2": "train", "m4": "test"}
    # brute-force oracle: token-by-token lemma comparison, no fuzz beyond d=1
    from pejoratives.matcher import lemma, levenshtein

    expected = []
    for t in corpus:
        hit = False
        for token, _, _ in tokenize_words(t.text):
            lm = lemma(token)
            if any(
                lm == h or (len(token) >= 4 and levenshtein(lm, h) <= 1)
                for h in lexicon.entries
            ):
                hit = True
        if hit:
            expected.append(t.id)
    assert [t.id for t in subset] == expected


def test_filter_with_empty_lexicon():
    corpus = _mixed_corpus()
    assert len(filter_epithet_subset(corpus, Lexicon(entries={}))) == 0


def test_filter_is_idempotent_and_subset(lexicon):
    corpus = _mixed_corpus()
    once = filter_epithet_subset(corpus, lexicon)
    twice = filter_epithet_subset(once, lexicon)
    assert once == twice
    assert set(t.id for t in once) <= set(t.id for t in corpus)


def test_match_corpus_keys_every_tweet(lexicon):
    corpus = _mixed_corpus()
    spans = match_corpus(corpus, lexicon)
    assert set(spans) == {t.id for t in corpus}
    assert [s.headword for s in spans["m0"]] == ["balena"]
    assert spans["m3"] == []


# --- optional external data ------------------------------------------------------


AMI_2018 = Path(os.environ.get("PEJ_DATA_DIR", "")) / "ami2018.jsonl"
AMI_2020 = Path(os.environ.get("PEJ_DATA_DIR", "")) / "ami2020.jsonl"


@pytest.mark.skipif(not AMI_2018.is_file(), reason="AMI 2018 data not available locally")
def test_ami_2018_counts(lexicon):
    corpus = load_corpus(AMI_2018, "ami", lexicon)
    assert len(corpus.subset("train")) == 4000
    assert len(corpus.subset("test")) == 1000
    subset = filter_epithet_subset(corpus, lexicon)
    assert len(subset) == 389
    assert len(subset.subset("train")) == 355
    assert len(subset.subset("test")) == 34


@pytest.mark.skipif(not AMI_2020.is_file(), reason="AMI 2020 data not available locally")
def test_ami_2020_counts(lexicon):
    corpus = load_corpus(AMI_2020, "ami", lexicon)
    assert len(corpus.subset("train")) == 5000
    assert len(corpus.subset("test")) == 1000
    subset = filter_epithet_subset(corpus, lexicon)
    assert len(subset) == 605
    assert len(subset.subset("train")) == 413
    assert len(subset.subset("test")) == 192
