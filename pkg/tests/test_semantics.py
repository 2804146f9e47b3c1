import random

import numpy as np
import pytest

from cliffordt.linalg import I4, det4
from cliffordt.ring import OMEGA
from cliffordt.semantics import (F_TABLE, CosetClass, coset_class, controlled_t_checks, det_omega_exponent,
                                 interp_x, interp_x_batch, interp_y, relation_valid, translate_f,
                                 verify_controlled_T_identities, y_image)
from cliffordt.word import XGen, YGen, Y_GENERATORS, parse, relations_R, relations_S

from conftest import random_x_word

w = np.exp(1j * np.pi / 4)


def y_oracle(g: YGen) -> np.ndarray:
    m = np.eye(4, dtype=complex)
    if g.kind == "w":
        m[g.j, g.j] = w
    elif g.kind == "X":
        m[[g.j, g.k]] = m[[g.k, g.j]]
    else:
        j, k = g.j, g.k
        m[j, j], m[j, k], m[k, j], m[k, k] = (np.array([1, 1, 1, -1]) / np.sqrt(2))
    return m


@pytest.mark.parametrize("g", Y_GENERATORS, ids=str)
def test_y_images_match_two_level_oracle(g):
    assert np.allclose(y_image(g).to_complex(), y_oracle(g))


@pytest.mark.parametrize("rel", relations_S(), ids=lambda r: r.id)
def test_clifford_t_relations_hold(rel):
    assert relation_valid(rel)


@pytest.mark.parametrize("rel", relations_R(), ids=lambda r: r.id)
def test_greylyn_relations_hold(rel):
    assert relation_valid(rel)


def test_broken_relation_is_rejected():
    from cliffordt.word import Relation
    assert not relation_valid(Relation("bogus", parse("T0 T0"), parse("S1")))


@pytest.mark.parametrize("x", list(XGen))
def test_translation_preserves_generators(x):
    assert interp_y(translate_f(x)) == interp_x((x,))
    assert translate_f(x) == F_TABLE[x]


def test_translation_is_homomorphic_on_random_words():
    rng = random.Random(5)
    for _ in range(100):
        word = random_x_word(rng, 10)
        f_word = tuple(g for x in word for g in F_TABLE[x])
        assert interp_y(f_word) == interp_x(word)


def test_determinants_of_x_words_are_powers_of_i():
    rng = random.Random(6)
    mats = interp_x_batch([random_x_word(rng, 30) for _ in range(300)])
    assert {det_omega_exponent(m) % 2 for m in mats} == {0}
    assert coset_class(I4) is CosetClass.EVEN


def test_odd_coset_representative():
    m = y_image(YGen.omega(0))
    assert det4(m) == OMEGA
    assert coset_class(m) is CosetClass.ODD
    assert CosetClass.ODD + CosetClass.ODD is CosetClass.EVEN


def test_spec_style_examples():
    assert interp_x(parse("S0 H0 S0 H0 S0 H0")) == interp_x((XGen.W,))
    d = interp_y(parse("w[3]^4", "Y"))
    assert np.allclose(d.to_complex(), np.diag([1, 1, 1, -1]))
    assert interp_x(parse("Td0 T0")) == I4


def test_controlled_t_identities():
    checks = controlled_t_checks()
    assert len(checks) == 8 and all(ok for _, ok in checks)
    assert verify_controlled_T_identities()
