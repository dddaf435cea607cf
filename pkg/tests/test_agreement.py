"""Agreement coefficient tests.

The reference implementation below computes alpha straight from the
definition with exact fractions (pair enumeration within units), fully
independently of the module's coincidence-matrix code path.
"""

import random
from fractions import Fraction

import pytest

from pejoratives.corpus import AnnotationError, AnnotationSet, krippendorff_alpha, load_annotations


def reference_alpha(values_by_item):
    units = {u: vs for u, vs in values_by_item.items() if len(vs) >= 2}
    n = sum(len(vs) for vs in units.values())
    observed = Fraction(0)
    for vs in units.values():
        m = len(vs)
        disagreements = sum(1 for i in range(m) for j in range(m) if i != j and vs[i] != vs[j])
        observed += Fraction(disagreements, m - 1)
    observed = observed / n
    counts = {}
    for vs in units.values():
        m = len(vs)
        for i in range(m):
            for j in range(m):
                if i != j:
                    counts[vs[i]] = counts.get(vs[i], Fraction(0)) + Fraction(1, m - 1)
    expected = sum(
        counts[c] * counts[k] for c in counts for k in counts if c != k
    ) / Fraction(n * (n - 1))
    if expected == 0:
        return None
    return 1 - observed / expected


def _annotation_set(matrix):
    """matrix: dict annotator -> dict item -> label."""
    annotators = tuple(sorted(matrix))
    items = tuple(sorted({i for row in matrix.values() for i in row}))
    labels = {(a, i): v for a, row in matrix.items() for i, v in row.items()}
    return AnnotationSet(items=items, annotators=annotators, labels=labels)


def test_perfect_agreement_with_label_variety():
    matrix = {
        a: {f"i{k}": int(k < 5) for k in range(10)} for a in ("a1", "a2", "a3")
    }
    assert krippendorff_alpha(_annotation_set(matrix)) == pytest.approx(1.0)


def test_golden_two_by_four():
    # A:(1,1,0,0) B:(1,0,0,0); hand derivation via the coincidence matrix
    # gives alpha = 8/15.
    matrix = {
        "A": {"i0": 1, "i1": 1, "i2": 0, "i3": 0},
        "B": {"i0": 1, "i1": 0, "i2": 0, "i3": 0},
    }
    ann = _annotation_set(matrix)
    assert krippendorff_alpha(ann) == pytest.approx(8 / 15, abs=1e-9)
    assert float(reference_alpha({"i0": [1, 1], "i1": [1, 0], "i2": [0, 0], "i3": [0, 0]})) == pytest.approx(8 / 15)


def test_single_annotator_is_precondition_error():
    ann = AnnotationSet(items=("i0",), annotators=("solo",), labels={("solo", "i0"): 1})
    with pytest.raises(AnnotationError):
        krippendorff_alpha(ann)


def test_all_identical_labels_is_degenerate():
    matrix = {a: {f"i{k}": 1 for k in range(4)} for a in ("a1", "a2")}
    with pytest.raises(AnnotationError, match="expected disagreement"):
        krippendorff_alpha(_annotation_set(matrix))


def test_items_with_single_label_are_ignored():
    # i9 is labeled by one annotator only; alpha must equal the set without it
    matrix = {
        "A": {"i0": 1, "i1": 1, "i2": 0, "i3": 0, "i9": 1},
        "B": {"i0": 1, "i1": 0, "i2": 0, "i3": 0},
    }
    assert krippendorff_alpha(_annotation_set(matrix)) == pytest.approx(8 / 15, abs=1e-9)


def _random_matrix(rng, n_annotators=None, n_items=None):
    n_annotators = n_annotators or rng.randint(2, 5)
    n_items = n_items or rng.randint(2, 12)
    matrix = {}
    for a in range(n_annotators):
        row = {}
        for i in range(n_items):
            if rng.random() < 0.8:
                row[f"i{i}"] = rng.randint(0, 1)
        matrix[f"a{a}"] = row
    return matrix


def _pairable(matrix):
    per_item = {}
    for row in matrix.values():
        for item, value in row.items():
            per_item.setdefault(item, []).append(value)
    return {i: vs for i, vs in per_item.items() if len(vs) >= 2}


def test_matches_reference_on_random_cases():
    rng = random.Random(4242)
    checked = 0
    while checked < 200:
        matrix = _random_matrix(rng)
        units = _pairable(matrix)
        if not units:
            continue
        expected = reference_alpha(units)
        if expected is None:
            continue
        got = krippendorff_alpha(_annotation_set(matrix))
        assert got == pytest.approx(float(expected), abs=1e-12)
        checked += 1


def test_annotator_permutation_invariance_thousand_cases():
    rng = random.Random(20136)
    checked = 0
    while checked < 1000:
        matrix = _random_matrix(rng)
        units = _pairable(matrix)
        if not units or reference_alpha(units) is None:
            continue
        base = krippendorff_alpha(_annotation_set(matrix))
        names = list(matrix)
        rng.shuffle(names)
        permuted = {f"b{k}": matrix[name] for k, name in enumerate(names)}
        assert krippendorff_alpha(_annotation_set(permuted)) == pytest.approx(base, abs=1e-12)
        checked += 1


def test_relabeling_invariance():
    rng = random.Random(77)
    checked = 0
    while checked < 100:
        matrix = _random_matrix(rng)
        units = _pairable(matrix)
        if not units or reference_alpha(units) is None:
            continue
        base = krippendorff_alpha(_annotation_set(matrix))
        flipped = {a: {i: 1 - v for i, v in row.items()} for a, row in matrix.items()}
        assert krippendorff_alpha(_annotation_set(flipped)) == pytest.approx(base, abs=1e-12)
        checked += 1


def test_csv_loader(tmp_path):
    path = tmp_path / "ann.csv"
    path.write_text(
        "item_id,annotator_id,task,label\n"
        "i0,A,pejorative,1\n"
        "i0,B,pejorative,1\n"
        "i1,A,pejorative,1\n"
        "i1,B,pejorative,0\n"
        "i2,A,pejorative,0\n"
        "i2,B,pejorative,0\n"
        "i3,A,pejorative,0\n"
        "i3,B,pejorative,0\n"
        "i0,A,misogynous,1\n"
        "i0,B,misogynous,0\n"
        "i1,A,misogynous,0\n"
        "i1,B,misogynous,1\n",
        encoding="utf-8",
    )
    sets = load_annotations(path)
    assert set(sets) == {"pejorative", "misogynous"}
    assert krippendorff_alpha(sets["pejorative"]) == pytest.approx(8 / 15, abs=1e-9)


def test_csv_loader_rejects_bad_label(tmp_path):
    path = tmp_path / "ann.csv"
    path.write_text("item_id,annotator_id,task,label\ni0,A,pejorative,2\n", encoding="utf-8")
    with pytest.raises(AnnotationError):
        load_annotations(path)
