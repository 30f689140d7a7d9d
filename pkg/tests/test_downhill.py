"""Downhill traversal, returning-strand reduction, and clasp emission."""

import pytest

from coverlink.diagram import AnnularWord, Cap, Cross, Cup, Kink, analyze
from coverlink.downhill import (
    MultiComponentError,
    NotDownhillError,
    WindingTooSmallError,
    force_downhill,
    is_downhill,
    normalize,
    random_annular_word,
    reduce_returning,
)
from coverlink.obstruct import auto_verdict, branched_linkings
from coverlink.pattern import cable_template, compile, validate


def _flip(word: AnnularWord, idx: int) -> AnnularWord:
    events = list(word.events)
    events[idx] = Cross(events[idx].position, not events[idx].upper_over)
    return AnnularWord(word.seam_orientations, tuple(events), word.labels)


def test_template_is_downhill_fixed_point():
    word = cable_template(6)
    out, changes = force_downhill(word)
    assert changes == () and out == word


def test_single_flip_detected_and_restored():
    word = cable_template(6)
    flipped = _flip(word, 2)
    out, changes = force_downhill(flipped)
    assert changes == (2,)
    assert out.events == word.events


def test_force_downhill_idempotent():
    word = _flip(_flip(cable_template(5), 1), 3)
    out, _ = force_downhill(word)
    assert is_downhill(out)
    again, changes = force_downhill(out)
    assert changes == () and again == out


def test_changes_bounded_by_crossing_count():
    for seed in range(20):
        word = random_annular_word(6, seed)
        crossings = sum(isinstance(e, Cross) for e in word.events)
        _, changes = force_downhill(word)
        assert len(changes) <= crossings


def test_force_downhill_rejects_multi_component():
    from coverlink.pattern import random_presentation

    word = compile(random_presentation(4, 1, 0))
    with pytest.raises(MultiComponentError):
        force_downhill(word)


def test_reduce_needs_downhill():
    mirror = AnnularWord(
        cable_template(4).seam_orientations,
        tuple(Cross(e.position, not e.upper_over) for e in cable_template(4).events),
        cable_template(4).labels,
    )
    with pytest.raises(NotDownhillError):
        reduce_returning(mirror)


def test_reduce_returning_reaches_wrapping_equals_winding():
    for seed in range(15):
        word = random_annular_word(6, seed)
        downhill, _ = force_downhill(word)
        reduced = reduce_returning(downhill)
        comp = analyze(reduced).components[0]
        assert comp.wrapping == abs(comp.winding) == 6


def test_reduce_wrapping_four_to_two():
    # Winding-2 word with one finger: wrapping 4 drops to 2 in one reduction.
    for seed in range(40):
        word = random_annular_word(2, seed)
        comp = analyze(word).components[0]
        if comp.wrapping != 4:
            continue
        downhill, _ = force_downhill(word)
        reduced = reduce_returning(downhill)
        assert analyze(reduced).components[0].wrapping == 2
        return
    raise AssertionError("no wrapping-4 sample found")


def test_reduce_returning_winding_zero_circle():
    word = AnnularWord((), (Cup(1, 1), Cap(1)))
    reduced = reduce_returning(word)
    comp = analyze(reduced).components[0]
    assert comp.wrapping == 0


def test_reduce_returning_unchanged_when_already_tight():
    word = cable_template(7)
    assert reduce_returning(word) == word


def test_normalize_template_is_cable_only():
    result = normalize(cable_template(6))
    assert result.orientation == "Standard"
    assert result.presentation.n == 6
    assert result.presentation.clasps == ()


def test_normalize_mirrored_cable_reports_reversed():
    word = cable_template(6)
    mirror = AnnularWord(
        word.seam_orientations,
        tuple(Cross(e.position, not e.upper_over) for e in word.events),
        word.labels,
    )
    result = normalize(mirror)
    assert result.orientation == "Reversed"
    assert result.presentation.clasps == ()


def test_normalize_single_flip_gives_one_clasp_with_parity():
    word = _flip(cable_template(6), 3)
    result = normalize(word)
    assert len(result.presentation.clasps) == 1
    rep = branched_linkings(result.presentation, 2)
    from fractions import Fraction

    val = (rep.linkings[0] - Fraction(3)) * rep.h1_order
    assert val.denominator == 1 and int(val) % 2 == 0


def test_normalize_requires_winding_at_least_two():
    with pytest.raises(WindingTooSmallError):
        normalize(cable_template(1))


def test_normalize_strips_kinks():
    word = cable_template(6)
    kinked = AnnularWord(
        word.seam_orientations, word.events + (Kink(2, -1),), word.labels
    )
    result = normalize(kinked)
    assert result.presentation.clasps == ()


def test_normalize_negative_winding_reports_reversed():
    word = cable_template(6)
    reversed_word = AnnularWord(
        tuple(-o for o in word.seam_orientations), word.events, word.labels
    )
    result = normalize(reversed_word)
    assert result.presentation.n == 6
    assert result.orientation == "Reversed"


def test_normalize_output_always_validates():
    for seed in range(25):
        result = normalize(random_annular_word(6, seed))
        assert validate(compile(result.presentation)).passed


def test_normalize_end_to_end_obstructed():
    for seed in range(25):
        result = normalize(random_annular_word(6, seed))
        assert auto_verdict(result.presentation, (2,)).aggregate == "Obstructed"


def test_random_annular_word_deterministic():
    assert random_annular_word(6, 12) == random_annular_word(6, 12)
    assert random_annular_word(6, 12) != random_annular_word(6, 13)


def test_random_annular_word_single_component_winding():
    for seed in range(30):
        comp = analyze(random_annular_word(6, seed)).components
        assert len(comp) == 1 and comp[0].winding == 6
