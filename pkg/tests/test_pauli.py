import random

import pytest

from cliffordt.clifford import Pauli2
from cliffordt.pauli import (NONOBVIOUS_ROTATION_RELATIONS, RotationForm, from_rotation_form,
                             nonobvious_rotation_checks, rotation_count, rotation_matrix, standardize,
                             to_rotation_form)
from cliffordt.semantics import interp_x
from cliffordt.word import XGen, format_word, parse, t_count

from conftest import random_x_word


def norm(text):
    return standardize(to_rotation_form(parse(text)))


def test_single_t_is_a_z_rotation():
    assert str(norm("T0")) == "+ZI | eps"
    assert str(norm("T1")) == "+IZ | eps"


def test_cliffords_have_no_rotations():
    assert str(norm("H0 H0")) == "| eps"
    f = norm("T0 T0")
    assert f.rotations == () and interp_x(f.tail) == interp_x(parse("S0"))


def test_rotation_matrix_of_z_is_t():
    assert rotation_matrix(Pauli2.parse("+ZI")) == interp_x((XGen.T0,))
    with pytest.raises(ValueError):
        rotation_matrix(Pauli2.parse("+II"))


def test_signs_and_squares():
    f = standardize(RotationForm((Pauli2.parse("-ZI"),), ()))
    assert [str(p) for p in f.rotations] == ["+ZI"]
    g = standardize(RotationForm((Pauli2.parse("+ZI"), Pauli2.parse("+ZI")), ()))
    assert g.rotations == () and interp_x(g.tail) == interp_x(parse("S0"))


def test_commuting_rotations_are_sorted():
    f = standardize(RotationForm.parse("+ZZ +IZ +ZI | eps"))
    assert str(f) == "+IZ +ZI +ZZ | eps"
    # XI and ZI anticommute, so they keep their order
    g = standardize(RotationForm.parse("+ZI +XI | eps"))
    assert [str(p) for p in g.rotations] == ["+ZI", "+XI"]


def test_form_text_roundtrip():
    f = RotationForm.parse("+ZX +IZ | H0 S1")
    assert RotationForm.parse(str(f)) == f


@pytest.mark.parametrize("seed", range(4))
def test_standardize_properties_on_random_words(seed):
    rng = random.Random(seed)
    for _ in range(40):
        w = random_x_word(rng, 60)
        f = standardize(to_rotation_form(w))
        assert f.matrix() == interp_x(w), format_word(w)
        assert standardize(f) == f
        assert rotation_count(f) <= t_count(w)
        assert all(p.sign > 0 for p in f.rotations)
        back = from_rotation_form(f)
        assert interp_x(back) == interp_x(w)
        assert t_count(back) == rotation_count(f)


def test_rotation_form_matches_word():
    rng = random.Random(9)
    for _ in range(50):
        w = random_x_word(rng, 30)
        assert to_rotation_form(w).matrix() == interp_x(w)


def test_nonobvious_relations_hold_and_survive_standardization():
    assert all(ok for _, ok in nonobvious_rotation_checks())
    for lhs, rhs in NONOBVIOUS_ROTATION_RELATIONS:
        a = RotationForm(tuple(Pauli2.parse("+" + t) for t in lhs.split()), ())
        b = RotationForm(tuple(Pauli2.parse("+" + t) for t in rhs.split()), ())
        assert a.matrix() == b.matrix()
        # the easy rules alone cannot identify the two sides
        assert standardize(a) != standardize(b)
