import random

import numpy as np
import pytest

from cliffordt.linalg import I4, Mat2, Mat4, det4, tensor
from cliffordt.ring import OMEGA, ONE, RingElt
from cliffordt.semantics import X_IMAGES, interp_x, interp_x_batch
from cliffordt.word import XGen

from conftest import random_x_word

w = np.exp(1j * np.pi / 4)
H = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
S = np.diag([1, 1j])
T = np.diag([1, w])
I = np.eye(2)

# qubit 0 is the left tensor factor
ORACLE = {
    XGen.W: w * np.eye(4),
    XGen.H0: np.kron(H, I), XGen.H1: np.kron(I, H),
    XGen.S0: np.kron(S, I), XGen.S1: np.kron(I, S),
    XGen.T0: np.kron(T, I), XGen.T1: np.kron(I, T),
    XGen.CZ: np.diag([1, 1, 1, -1]),
}


def oracle(word):
    m = np.eye(4, dtype=complex)
    for g in word:
        m = m @ ORACLE[g]
    return m


@pytest.mark.parametrize("g", list(XGen))
def test_generator_images_match_float_oracle(g):
    assert np.allclose(X_IMAGES[g].to_complex(), ORACLE[g], atol=1e-12)
    assert X_IMAGES[g].is_unitary()


def test_random_products_match_oracle():
    rng = random.Random(1)
    words = [random_x_word(rng, 40) for _ in range(200)]
    for word, m in zip(words, interp_x_batch(words)):
        assert np.allclose(m.to_complex(), oracle(word), atol=1e-9)
        assert m == interp_x(word)


def test_det_is_multiplicative():
    rng = random.Random(2)
    for _ in range(30):
        a, b = interp_x(random_x_word(rng, 12)), interp_x(random_x_word(rng, 12))
        assert det4(a @ b) == det4(a) * det4(b)
        assert np.isclose(complex(det4(a).to_complex()), np.linalg.det(a.to_complex()))


def test_tensor_identity_and_kron():
    h = Mat2.from_entries([[RingElt((1, 0, 0, 0), 1), RingElt((1, 0, 0, 0), 1)],
                           [RingElt((1, 0, 0, 0), 1), RingElt((-1, 0, 0, 0), 1)]])
    i2 = Mat2.identity()
    assert tensor(i2, i2) == I4
    assert tensor(h, i2) == X_IMAGES[XGen.H0]
    assert tensor(i2, h) == X_IMAGES[XGen.H1]


def test_denominator_is_minimal_and_keys_are_canonical():
    hh = X_IMAGES[XGen.H0] @ X_IMAGES[XGen.H0]
    assert hh == I4 and hh.k == 0
    assert hh.key() == I4.key()
    assert len({I4, hh}) == 1


def test_adjoint_inverts_and_power():
    rng = random.Random(3)
    m = interp_x(random_x_word(rng, 25))
    assert m @ m.adjoint() == I4
    assert X_IMAGES[XGen.T0] ** 8 == I4
    assert Mat4.scalar(OMEGA) == X_IMAGES[XGen.W]
    assert Mat4.diag([ONE, ONE, ONE, -ONE]) == X_IMAGES[XGen.CZ]
