import pytest
from hypothesis import given
from hypothesis import strategies as st

from cliffordt.word import (MACROS, ParseError, XGen, YGen, Y_GENERATORS, dump_relations, format_word,
                            is_clifford_word, parse, relations_R, relations_S, t_count)

x_words = st.lists(st.sampled_from(list(XGen)), max_size=40).map(tuple)
y_words = st.lists(st.sampled_from(Y_GENERATORS), max_size=30).map(tuple)


@given(x_words)
def test_x_roundtrip(word):
    assert parse(format_word(word), "X") == word


@given(y_words)
def test_y_roundtrip(word):
    assert parse(format_word(word), "Y") == word


@given(x_words, x_words)
def test_parse_is_a_monoid_homomorphism(u, v):
    assert parse(format_word(u) + " " + format_word(v)) == u + v


def test_exponents_and_eps():
    assert parse("T0^3 eps H1") == (XGen.T0,) * 3 + (XGen.H1,)
    assert parse("eps") == () == parse("")
    assert format_word(()) == "eps"
    assert format_word(parse("S0 S0 S0 W")) == "S0^3 W"
    assert parse("w[3]^4", "Y") == (YGen.omega(3),) * 4
    assert parse("X[0,1] H[2,3]", "Y") == (YGen.x(0, 1), YGen.h(2, 3))


def test_macros_expand():
    assert parse("Td0") == (XGen.T0,) * 7
    assert parse("Sd1") == (XGen.S1,) * 3
    assert parse("CX10") == parse("H0 CZ H0")
    assert set(MACROS) >= {"CX01", "NCX10", "CH10", "NCH01"}


@pytest.mark.parametrize("text,alphabet,pos", [
    ("H0 Q7", "X", 3),
    ("T0 ^2", "X", 3),
    ("H0^x", "X", 0),
    ("w[4]", "Y", 0),
    ("X[1,0]", "Y", 0),
    ("H0", "Y", 0),
])
def test_parse_errors_carry_position(text, alphabet, pos):
    with pytest.raises(ParseError) as exc:
        parse(text, alphabet)
    assert exc.value.position == pos


def test_y_generator_validation():
    assert len(Y_GENERATORS) == 16
    with pytest.raises(ValueError):
        YGen.x(2, 2)
    with pytest.raises(ValueError):
        YGen("Q", 0, 1)


def test_relation_counts_and_ids():
    s, r = relations_S(), relations_R()
    assert len(s) == 39 and len({x.id for x in s}) == 39
    assert len(r) == 123 and len({x.id for x in r}) == 123
    assert len(set((x.lhs, x.rhs) for x in r)) == 123
    assert dump_relations(s[:1]).startswith(s[0].id + ": ")


def test_t_count_and_clifford_flag():
    w = parse("T0 H0 T1 Td0")
    assert t_count(w) == 9
    assert not is_clifford_word(w)
    assert is_clifford_word(parse("H0 S1 CZ W"))
