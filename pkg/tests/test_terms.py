from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubecat.terms import (
    ALL_LANGUAGES,
    ALL_RULES,
    ALL_SIGNATURES,
    ONE,
    ZERO,
    Join,
    Language,
    Meet,
    Rev,
    Signature,
    StructuralRules,
    TermError,
    Var,
    check_discipline,
    depth,
    format_term,
    parse_term,
    random_term,
    rename,
    signature_of,
    substitute,
    variable_listing,
)


def test_six_rule_sets_and_six_signatures():
    assert sorted(r.code for r in ALL_RULES) == sorted(["∅", "e", "ec", "w", "we", "wec"])
    assert [s.code for s in ALL_SIGNATURES] == ["∅", "r", "j", "m", "jm", "jmr"]
    assert len(ALL_LANGUAGES) == 36


def test_contraction_needs_exchange():
    with pytest.raises(TermError):
        StructuralRules.parse("c")
    with pytest.raises(TermError):
        StructuralRules.parse("wc")


def test_reversal_needs_both_or_neither_connection():
    with pytest.raises(TermError):
        Signature.parse("jr")
    with pytest.raises(TermError):
        Signature.parse("∧′")
    assert Signature.parse("∨∧′") == Signature(True, True, True)
    assert Signature.parse("∅") == Signature()


def test_parse_precedence_and_ascii():
    t = parse_term("x1 \\/ x2 /\\ x3'", 3)
    assert t == Join(Var(1), Meet(Var(2), Rev(Var(3))))
    assert format_term(t) == "x1 ∨ (x2 ∧ x3′)"
    assert parse_term("x1''", 1) == Rev(Rev(Var(1)))
    assert parse_term("(x1 ∨ x2)′", 2) == Rev(Join(Var(1), Var(2)))


def test_parse_rejects_out_of_signature_and_range():
    with pytest.raises(TermError):
        parse_term("x1 ∨ x2", 2, Signature.parse("m"))
    with pytest.raises(TermError):
        parse_term("x3", 2)
    with pytest.raises(TermError):
        parse_term("x1 ∨", 1)
    with pytest.raises(TermError):
        parse_term("x1 x2", 2)


def test_listing_discipline():
    w, we, none = StructuralRules.parse("w"), StructuralRules.parse("we"), StructuralRules()
    x1, x2 = Var(1), Var(2)
    assert check_discipline([x1, x2], 2, none)
    assert not check_discipline([x2, x1], 2, none)
    assert check_discipline([x2, x1], 2, StructuralRules.parse("e"))
    assert not check_discipline([x1], 2, none)
    assert check_discipline([x1, ZERO], 2, w)
    assert not check_discipline([x1, x1], 1, we)
    assert check_discipline([Meet(x1, Rev(x1))], 1, StructuralRules.parse("wec"))
    # the discipline applies to the whole tuple, not to each component
    assert not check_discipline([x1, x1], 2, w)


def test_variable_listing_left_to_right():
    t = Join(Meet(Var(3), Var(1)), Rev(Var(2)))
    assert variable_listing([t, Var(4)]) == (3, 1, 2, 4)


def test_signature_of_and_depth():
    t = parse_term("(x1 ∧ 0)′ ∨ 1", 1)
    assert signature_of(t) == Signature(True, True, True)
    assert signature_of(Var(1)) == Signature()
    assert depth(Var(1)) == 0 and depth(t) == 3


def test_substitute_and_rename():
    t = parse_term("x1 ∧ x2′", 2)
    s = substitute(t, [ONE, Var(1)])
    assert format_term(s) == "1 ∧ x1′"
    assert rename(t, [2, 1]) == parse_term("x2 ∧ x1′", 2)


languages = st.sampled_from(ALL_LANGUAGES)


@settings(max_examples=200, deadline=None)
@given(lang=languages, arity=st.integers(0, 3), seed=st.integers(0, 10**6))
def test_format_parse_roundtrip(lang: Language, arity, seed):
    rng = random.Random(seed)
    try:
        t = random_term(rng, lang, arity, 3)
    except TermError:
        return
    assert parse_term(format_term(t), arity, lang.signature) == t


@settings(max_examples=200, deadline=None)
@given(lang=languages, arity=st.integers(0, 3), seed=st.integers(0, 10**6))
def test_random_terms_obey_language(lang: Language, arity, seed):
    rng = random.Random(seed)
    try:
        t = random_term(rng, lang, arity, 3)
    except TermError:
        # only impossible when weakening is absent and the context is too big to fill
        assert not lang.rules.weakening
        return
    assert check_discipline([t], arity, lang.rules)
    assert signature_of(t) <= lang.signature


def test_random_term_without_weakening_covers_context():
    rng = random.Random(3)
    lang = Language.parse("ec", "jm")
    for _ in range(50):
        t = random_term(rng, lang, 2, 3)
        assert set(variable_listing([t])) == {1, 2}
