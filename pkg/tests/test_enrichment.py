import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pejoratives.corpus import AnnotatedTweet, Corpus
from pejoratives.enrichment import (
    ConnotationAssignment,
    EnrichmentError,
    concat_enrich,
    enrich_corpus,
    strip_concat_tags,
    subst_enrich,
    write_enriched,
)
from pejoratives.lexicon import Connotation, UnknownWordError
from pejoratives.matcher import MatchSpan, find_matches

PEJ = Connotation.PEJORATIVE
NEU = Connotation.NEUTRAL


def _tweet(text, tid="t0", **kw):
    base = dict(target_word=None, pejorative=True, misogynous=True, split="train")
    base.update(kw)
    return AnnotatedTweet(tid, text, **base)


def _assign(tid, spans, connotations, source="gold"):
    return ConnotationAssignment(tid, dict(zip(spans, connotations)), source)


def test_concat_single_span(lexicon):
    tweet = _tweet("Sei una balena")
    spans = find_matches(tweet.text, lexicon, tweet_id=tweet.id)
    enriched = concat_enrich(tweet, spans, _assign(tweet.id, spans, [PEJ]))
    assert enriched.text == "Sei una balena [SEP] balena: peggiorativo"
    assert enriched.strategy == "concat"
    assert enriched.original_text == tweet.text


def test_concat_neutral_tag(lexicon):
    tweet = _tweet("Sei una balena")
    spans = find_matches(tweet.text, lexicon, tweet_id=tweet.id)
    enriched = concat_enrich(tweet, spans, _assign(tweet.id, spans, [NEU]))
    assert enriched.text == "Sei una balena [SEP] balena: neutro"


def test_concat_no_spans_is_identity(lexicon):
    tweet = _tweet("nessuna parola ambigua qui")
    enriched = concat_enrich(tweet, [], _assign(tweet.id, [], []))
    assert enriched.text == tweet.text
    assert enriched.strategy == "none"


def test_concat_two_spans_in_offset_order(lexicon):
    tweet = _tweet("quella cagna e quella oca litigano")
    spans = find_matches(tweet.text, lexicon, tweet_id=tweet.id)
    assert [s.headword for s in spans] == ["cagna", "oca"]
    enriched = concat_enrich(tweet, spans, _assign(tweet.id, spans, [PEJ, NEU]))
    # string-assembly oracle: original plus the two suffixes in span order
    expected = tweet.text + " [SEP] cagna: peggiorativo" + " [SEP] oca: neutro"
    assert enriched.text == expected
    assert strip_concat_tags(enriched.text) == tweet.text


def test_concat_unassigned_span_error(lexicon):
    tweet = _tweet("Sei una balena")
    spans = find_matches(tweet.text, lexicon, tweet_id=tweet.id)
    with pytest.raises(EnrichmentError, match="no assigned connotation"):
        concat_enrich(tweet, spans, _assign(tweet.id, [], []))


def test_subst_pejorative(lexicon):
    tweet = _tweet("Sei una balena")
    spans = find_matches(tweet.text, lexicon, tweet_id=tweet.id)
    enriched = subst_enrich(tweet, spans, _assign(tweet.id, spans, [PEJ]), lexicon)
    assert enriched.text == "Sei una grassa"


def test_subst_neutral_uses_all_anchors(lexicon):
    tweet = _tweet("La balena nuota")
    spans = find_matches(tweet.text, lexicon, tweet_id=tweet.id)
    enriched = subst_enrich(tweet, spans, _assign(tweet.id, spans, [NEU]), lexicon)
    assert enriched.text == "La cetaceo balenare nuota"


def test_subst_single_anchor_mode(lexicon):
    tweet = _tweet("La balena nuota")
    spans = find_matches(tweet.text, lexicon, tweet_id=tweet.id)
    enriched = subst_enrich(tweet, spans, _assign(tweet.id, spans, [NEU]), lexicon, single_anchor=True)
    assert enriched.text == "La cetaceo nuota"


def test_subst_no_spans_is_identity(lexicon):
    tweet = _tweet("tutto tranquillo")
    enriched = subst_enrich(tweet, [], _assign(tweet.id, [], []), lexicon)
    assert enriched.text == tweet.text
    assert enriched.strategy == "none"


def test_subst_unknown_headword(lexicon):
    tweet = _tweet("Sei una balena")
    span = MatchSpan(tweet.id, 8, 14, "balena", "sconosciuta")
    with pytest.raises(UnknownWordError):
        subst_enrich(tweet, [span], _assign(tweet.id, [span], [PEJ]), lexicon)


def test_subst_outside_spans_untouched(lexicon):
    tweet = _tweet("xx cagna yy balena zz")
    spans = find_matches(tweet.text, lexicon, tweet_id=tweet.id)
    enriched = subst_enrich(tweet, spans, _assign(tweet.id, spans, [PEJ, NEU]), lexicon)
    assert enriched.text == "xx donna di facili costumi troia yy cetaceo balenare zz"


def test_enrich_corpus_passthrough_and_coverage(lexicon):
    tweets = (
        _tweet("sei una balena", "a"),
        _tweet("niente di niente", "b"),
        _tweet("quella cagna abbaia", "c"),
    )
    corpus = Corpus(tweets, "pejorativity")
    spans = {t.id: find_matches(t.text, lexicon, tweet_id=t.id) for t in corpus}
    assignments = {
        "a": _assign("a", spans["a"], [PEJ]),
        "c": _assign("c", spans["c"], [NEU]),
    }
    result = enrich_corpus(corpus, spans, assignments, "subst", lexicon)
    texts = {t.id: t.text for t in result.corpus}
    assert texts["a"] == "sei una grassa"
    assert texts["b"] == "niente di niente"
    assert texts["c"] == "quella cane femmina canide abbaia"
    assert result.records["b"].strategy == "none"
    # labels, ids, splits untouched
    for before, after in zip(corpus, result.corpus):
        assert (before.id, before.pejorative, before.misogynous, before.split) == (
            after.id,
            after.pejorative,
            after.misogynous,
            after.split,
        )


def test_enrich_corpus_coverage_error(lexicon):
    corpus = Corpus((_tweet("sei una balena", "a"),), "pejorativity")
    spans = {"a": find_matches("sei una balena", lexicon, tweet_id="a")}
    with pytest.raises(EnrichmentError, match="\\['a'\\]"):
        enrich_corpus(corpus, spans, {}, "subst", lexicon)


def test_enrich_corpus_source_tags(lexicon):
    corpus = Corpus((_tweet("sei una balena", "a"),), "pejorativity")
    spans = {"a": find_matches("sei una balena", lexicon, tweet_id="a")}
    for source in ("gold", "predicted"):
        assignments = {"a": _assign("a", spans["a"], [PEJ], source=source)}
        result = enrich_corpus(corpus, spans, assignments, "concat", lexicon)
        assert result.records["a"].source == source


def test_predicted_connotations_change_text(lexicon):
    corpus = Corpus((_tweet("sei una balena", "a"),), "pejorativity")
    spans = {"a": find_matches("sei una balena", lexicon, tweet_id="a")}
    pej = enrich_corpus(corpus, spans, {"a": _assign("a", spans["a"], [PEJ], "predicted")}, "subst", lexicon)
    neu = enrich_corpus(corpus, spans, {"a": _assign("a", spans["a"], [NEU], "predicted")}, "subst", lexicon)
    assert pej.corpus.tweets[0].text != neu.corpus.tweets[0].text


def test_enrichment_determinism(lexicon):
    corpus = Corpus((_tweet("quella cagna e quella oca", "a"),), "pejorativity")
    spans = {"a": find_matches(corpus.tweets[0].text, lexicon, tweet_id="a")}
    assignments = {"a": _assign("a", spans["a"], [PEJ, NEU])}
    first = enrich_corpus(corpus, spans, assignments, "concat", lexicon)
    second = enrich_corpus(corpus, spans, assignments, "concat", lexicon)
    assert first.corpus.tweets[0].text == second.corpus.tweets[0].text


def test_write_enriched_round_trip(tmp_path, lexicon):
    import json

    corpus = Corpus((_tweet("sei una balena", "a"),), "pejorativity")
    spans = {"a": find_matches("sei una balena", lexicon, tweet_id="a")}
    result = enrich_corpus(corpus, spans, {"a": _assign("a", spans["a"], [PEJ])}, "subst", lexicon)
    path = tmp_path / "enriched.jsonl"
    write_enriched(result, path)
    obj = json.loads(path.read_text(encoding="utf-8").splitlines()[0])
    assert obj["strategy"] == "subst" and obj["source"] == "gold"
    assert obj["original_text"] == "sei una balena"
    assert obj["text"] == "sei una grassa"


# --- generated-tweet properties ---------------------------------------------

WORDS = st.sampled_from(
    "balena balene cagna oca mucca stasera oggi davvero cane tavolo quel e non sempre vento".split()
)
TWEETS = st.lists(WORDS, min_size=1, max_size=12).map(" ".join)


@settings(max_examples=300, deadline=None)
@given(TWEETS)
def test_concat_prefix_and_strip_property(lexicon, text):
    tweet = _tweet(text)
    spans = find_matches(text, lexicon, tweet_id=tweet.id)
    assignment = _assign(tweet.id, spans, [PEJ if i % 2 else NEU for i in range(len(spans))])
    enriched = concat_enrich(tweet, spans, assignment)
    assert enriched.text.startswith(text)
    assert strip_concat_tags(enriched.text) == text
    if not spans:
        assert enriched.text == text


@settings(max_examples=300, deadline=None)
@given(TWEETS)
def test_subst_only_changes_spans_property(lexicon, text):
    tweet = _tweet(text)
    spans = find_matches(text, lexicon, tweet_id=tweet.id)
    assignment = _assign(tweet.id, spans, [PEJ if i % 2 else NEU for i in range(len(spans))])
    enriched = subst_enrich(tweet, spans, assignment, lexicon)
    # reconstruct the expected text by splicing anchor strings over the spans
    expected = []
    cursor = 0
    for span in spans:
        expected.append(text[cursor : span.char_start])
        expected.append(" ".join(lexicon.get(span.headword).anchors(assignment.spans[span])))
        cursor = span.char_end
    expected.append(text[cursor:])
    assert enriched.text == "".join(expected)
    if not spans:
        assert enriched.text == text
