import pytest

from pejoratives.lexicon import (
    Connotation,
    Lexicon,
    LexiconError,
    UnknownWordError,
    anchors_for,
    load_lexicon,
    save_lexicon,
    validate_lexicon,
)


def test_bundled_has_24_entries(lexicon):
    assert len(lexicon) == 24


def test_excluded_candidates_are_not_headwords(lexicon):
    from pejoratives.lexicon import EXCLUDED_CANDIDATES

    assert len(EXCLUDED_CANDIDATES) == 14
    assert not set(EXCLUDED_CANDIDATES) & set(lexicon.headwords)


def test_balena_row(lexicon):
    assert anchors_for(lexicon, "balena", Connotation.NEUTRAL) == ["cetaceo", "balenare"]
    assert anchors_for(lexicon, "balena", Connotation.PEJORATIVE) == ["grassa"]


def test_cagna_row(lexicon):
    assert anchors_for(lexicon, "cagna", Connotation.NEUTRAL) == ["cane femmina", "canide"]
    assert anchors_for(lexicon, "cagna", Connotation.PEJORATIVE) == ["donna di facili costumi", "troia"]


def test_lookup_is_case_insensitive(lexicon):
    assert anchors_for(lexicon, "BALENA", Connotation.PEJORATIVE) == ["grassa"]
    assert lexicon.get("Oca").word == "oca"


def test_unknown_word(lexicon):
    with pytest.raises(UnknownWordError):
        anchors_for(lexicon, "balcone", Connotation.NEUTRAL)


def test_every_entry_has_nonempty_anchor_lists(lexicon):
    for entry in lexicon:
        for connotation in Connotation:
            assert anchors_for(lexicon, entry.word, connotation)


def test_empty_file_is_parse_error(tmp_path):
    path = tmp_path / "empty.tsv"
    path.write_text("", encoding="utf-8")
    with pytest.raises(LexiconError):
        load_lexicon(path)


def test_bad_header_is_parse_error(tmp_path):
    path = tmp_path / "bad.tsv"
    path.write_text("foo\tbar\n", encoding="utf-8")
    with pytest.raises(LexiconError):
        load_lexicon(path)


def test_duplicate_word_rejected(tmp_path):
    path = tmp_path / "dup.tsv"
    path.write_text(
        "word\tliteral_gloss\tpejorative_gloss\tneutral_anchors\tpejorative_anchors\n"
        "oca\tgoose\tstupid\tpennuto\tstupida\n"
        "oca\tgoose\tstupid\tpennuto\tstupida\n",
        encoding="utf-8",
    )
    with pytest.raises(LexiconError, match="duplicate"):
        load_lexicon(path)


def test_empty_anchor_list_rejected(tmp_path):
    path = tmp_path / "noanchor.tsv"
    path.write_text(
        "word\tliteral_gloss\tpejorative_gloss\tneutral_anchors\tpejorative_anchors\n"
        "oca\tgoose\tstupid\tpennuto\t\n",
        encoding="utf-8",
    )
    with pytest.raises(LexiconError, match="empty anchor"):
        load_lexicon(path)


def test_overlapping_anchor_sets_rejected(tmp_path):
    path = tmp_path / "overlap.tsv"
    path.write_text(
        "word\tliteral_gloss\tpejorative_gloss\tneutral_anchors\tpejorative_anchors\n"
        "oca\tgoose\tstupid\tpennuto\tpennuto\n",
        encoding="utf-8",
    )
    with pytest.raises(LexiconError, match="shares anchors"):
        load_lexicon(path)


def test_uppercase_headword_rejected(tmp_path):
    path = tmp_path / "case.tsv"
    path.write_text(
        "word\tliteral_gloss\tpejorative_gloss\tneutral_anchors\tpejorative_anchors\n"
        "Oca\tgoose\tstupid\tpennuto\tstupida\n",
        encoding="utf-8",
    )
    with pytest.raises(LexiconError, match="lowercase"):
        load_lexicon(path)


def test_bundled_violations_are_only_the_known_self_anchor(lexicon):
    # The source table anchors "femminista" with itself, so the bundled file
    # cannot validate fully clean; everything else must be.
    violations = validate_lexicon(lexicon)
    assert [(v.word, v.code, v.severity) for v in violations] == [
        ("femminista", "self-anchor", "warning")
    ]


def test_validate_flags_anchor_that_is_another_headword():
    entries = {
        "oca": _entry("oca", ("pennuto",), ("stupida",)),
        "asina": _entry("asina", ("oca",), ("stupida",)),
    }
    violations = validate_lexicon(Lexicon(entries=entries))
    assert [(v.word, v.code) for v in violations] == [("asina", "anchor-is-headword")]


def _entry(word, neutral, pejorative):
    from pejoratives.lexicon import LexiconEntry

    return LexiconEntry(word, "", "", tuple(neutral), tuple(pejorative))


@pytest.mark.parametrize("suffix", ["tsv", "json"])
def test_round_trip_is_idempotent(lexicon, tmp_path, suffix):
    first = tmp_path / f"copy1.{suffix}"
    second = tmp_path / f"copy2.{suffix}"
    save_lexicon(lexicon, first)
    reloaded = load_lexicon(first)
    assert reloaded == lexicon
    save_lexicon(reloaded, second)
    assert first.read_text(encoding="utf-8") == second.read_text(encoding="utf-8")


def test_json_form_loads(tmp_path):
    path = tmp_path / "lex.json"
    path.write_text(
        '[{"word": "oca", "literal_gloss": "goose", "pejorative_gloss": "stupid girl",'
        ' "neutral_anchors": ["pennuto"], "pejorative_anchors": ["stupida", "pettegola"]}]',
        encoding="utf-8",
    )
    lex = load_lexicon(path)
    assert anchors_for(lex, "oca", Connotation.PEJORATIVE) == ["stupida", "pettegola"]
