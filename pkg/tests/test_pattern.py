"""Presentations, the gadget compiler, validation, and the DSLs."""

import math

import pytest

from coverlink.diagram import AnnularWord, analyze
from coverlink.pattern import (
    ClaspPresentation,
    ClaspSpec,
    GapOutOfRangeError,
    PatternSyntaxError,
    SlotOutOfRangeError,
    WeaveLengthError,
    add_cancelling_pair,
    cable_template,
    compile,
    from_json,
    parse,
    random_presentation,
    serialize,
    to_json,
    validate,
)


def test_cable_template_core():
    word = cable_template(1)
    assert word.seam_width == 1 and word.events == ()


def test_cable_template_goldens():
    for n in (6, 8):
        word = cable_template(n)
        ana = analyze(word)
        assert len(ana.components) == 1
        eta = ana.component_by_name("eta")
        assert ana.winding(eta) == n


def test_compile_empty_equals_template():
    p = ClaspPresentation(6, ())
    assert compile(p) == cable_template(6)


def test_compile_gadget_contract():
    p = ClaspPresentation(
        6, (ClaspSpec(slot=0, gap_enter=1, gap_exit=3, weave="uoou", framing=-1),)
    )
    word = compile(p)
    ana = analyze(word)
    eta = ana.component_by_name("eta")
    clasp = ana.component_by_name("L1")
    assert ana.winding(clasp) == 0
    assert ana.wrapping(clasp) == 2
    assert ana.framing(clasp) == -1
    assert ana.linking(eta, clasp) == 0


def test_compile_balanced_weave_n2():
    p = ClaspPresentation(2, (ClaspSpec(0, 0, 2, "uoou", 1, 1),))
    word = compile(p)
    ana = analyze(word)
    assert len(ana.components) == 2
    assert ana.linking(ana.component_by_name("eta"), ana.component_by_name("L1")) == 0


def test_compile_unbalanced_weave_flags_eta_linking():
    p = ClaspPresentation(6, (ClaspSpec(0, 1, 3, "oouu", 1, 1),))
    report = validate(compile(p))
    assert not report.passed
    assert {item.name for item in report.failures()} == {"EtaLinkingNonzero"}


def test_compile_deterministic():
    p = random_presentation(6, 3, 9)
    assert compile(p) == compile(p)


def test_compile_injective_on_sample():
    words = {}
    for seed in range(12):
        p = random_presentation(6, 2, seed)
        w = compile(p)
        key = serialize(p)
        for other_key, other_w in words.items():
            if other_key != key:
                assert other_w != w
        words[key] = w


def test_gap_out_of_range():
    with pytest.raises(GapOutOfRangeError):
        ClaspPresentation(4, (ClaspSpec(0, 0, 5, "u" * 10),))


def test_slot_out_of_range():
    with pytest.raises(SlotOutOfRangeError):
        ClaspSpec(-1, 0, 1, "uu")


def test_weave_length_enforced():
    with pytest.raises(WeaveLengthError):
        ClaspSpec(0, 0, 2, "uo")


def test_validate_winding_check_on_raw_word():
    # A labeled surgery curve winding once: flagged WindingNonzero.
    from coverlink.diagram import parse as parse_word

    text = "annular v1\nseam 2 ++\nlabel eta seam 1\nlabel L1 seam 2\n"
    report = validate(parse_word(text))
    names = {item.name for item in report.failures()}
    assert "WindingNonzero" in names


def test_validate_passes_compiled_presentations():
    for seed in range(8):
        p = random_presentation(6, (seed % 4) + 1, seed)
        assert validate(compile(p)).passed


def test_add_cancelling_pair_structure():
    p = ClaspPresentation(6, ())
    template = ClaspSpec(slot=0, gap_enter=1, gap_exit=3, weave="ouuo", clasp_sign=1, framing=1)
    doubled = add_cancelling_pair(p, template)
    assert len(doubled.clasps) == 2
    first, second = doubled.clasps
    assert first == template
    assert second.framing == -template.framing
    assert second.clasp_sign == -template.clasp_sign
    assert (second.gap_enter, second.gap_exit, second.weave) == (1, 3, "ouuo")
    redoubled = add_cancelling_pair(doubled, template)
    assert len(redoubled.clasps) == 4


def test_random_presentation_deterministic():
    assert random_presentation(6, 3, 42) == random_presentation(6, 3, 42)
    assert random_presentation(6, 3, 42) != random_presentation(6, 3, 43)


def test_random_presentation_validates():
    p = random_presentation(4, 5, 7)
    assert validate(compile(p)).passed


def test_stacked_template_closes_to_torus_link():
    # m stacked copies of the n-cable close to a gcd(n, m)-component link.
    for n, m in [(6, 2), (6, 4), (8, 6), (5, 3)]:
        base = cable_template(n)
        stacked = AnnularWord(base.seam_orientations, base.events * m)
        assert len(analyze(stacked).components) == math.gcd(n, m)


def test_pattern_dsl_round_trip():
    p = ClaspPresentation(
        6,
        (
            ClaspSpec(2, 1, 3, "uoou", 1, -1),
            ClaspSpec(0, 4, 4, "", -1, 1),
        ),
        name="example-w6",
    )
    assert parse(serialize(p)) == p


def test_pattern_dsl_documented_example():
    text = (
        "pattern v1\n"
        "name example-w6\n"
        "cable 6\n"
        "clasp slot 2 enter 1 exit 3 weave uoou sign + framing -1\n"
    )
    p = parse(text)
    assert p.n == 6 and p.clasps[0].framing == -1 and p.clasps[0].weave == "uoou"


def test_pattern_json_mirror():
    p = random_presentation(8, 2, 3)
    assert from_json(to_json(p)) == p


def test_pattern_dsl_rejects_framing_zero():
    text = "pattern v1\ncable 6\nclasp slot 0 enter 1 exit 1 sign + framing 0\n"
    with pytest.raises(PatternSyntaxError):
        parse(text)


def test_pattern_dsl_rejects_bad_directive():
    with pytest.raises(PatternSyntaxError) as exc:
        parse("pattern v1\ncable 6\nfrobnicate 1\n")
    assert exc.value.line == 3
