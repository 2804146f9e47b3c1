import cmath
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cliffordt.ring import (INV_SQRT2, OMEGA, OMEGA_POWERS, ONE, SQRT2, ZERO, CycloInt, RingElt,
                            canonicalize, float_embed)

W = cmath.exp(1j * cmath.pi / 4)

coeff = st.integers(-50, 50)
elts = st.builds(lambda a, b, c, d, k: RingElt((a, b, c, d), k), coeff, coeff, coeff, coeff, st.integers(0, 6))


def oracle(x: RingElt) -> complex:
    a, b, c, d = x.num
    return (a + b * W + c * W**2 + d * W**3) / (2 ** 0.5) ** x.k


def close(z, w):
    return abs(z - w) <= 1e-9 * max(1.0, abs(w))


@given(elts, elts)
def test_add_and_mul_match_complex_embedding(x, y):
    assert close(oracle(x + y), oracle(x) + oracle(y))
    assert close(oracle(x * y), oracle(x) * oracle(y))
    assert close(oracle(x - y), oracle(x) - oracle(y))


@given(elts)
def test_conj_and_to_complex(x):
    assert close(oracle(x.conj()), oracle(x).conjugate())
    assert close(x.to_complex(), oracle(x))
    re, im = float_embed(x)
    assert close(complex(re, im), oracle(x))


@given(elts, elts)
def test_equality_is_value_equality(x, y):
    same = abs(oracle(x) - oracle(y)) < 1e-9
    assert (x == y) == same
    if x == y:
        assert hash(x) == hash(y)


@given(st.tuples(coeff, coeff, coeff, coeff), st.integers(0, 5))
def test_canonical_k_is_minimal(num, k):
    x = canonicalize(CycloInt(*num), k)
    if x.is_zero():
        assert x.k == 0
    elif x.k > 0:
        a, b, c, d = x.num
        # divisible by sqrt2 exactly when a = c and b = d mod 2
        assert (a - c) % 2 or (b - d) % 2


def test_sqrt2_identities():
    assert SQRT2 * SQRT2 == RingElt.from_int(2)
    assert SQRT2 * INV_SQRT2 == ONE
    assert INV_SQRT2 * INV_SQRT2 * RingElt.from_int(2) == ONE
    assert RingElt((2, 0, 0, 0), 2) == ONE


def test_omega_powers():
    assert OMEGA ** 8 == ONE
    assert OMEGA ** 4 == -ONE
    assert [p.omega_power() for p in OMEGA_POWERS] == list(range(8))
    assert (OMEGA + ONE).omega_power() is None
    assert ZERO.omega_power() is None


def test_omega_is_unit_on_circle():
    assert OMEGA * OMEGA.conj() == ONE


@pytest.mark.parametrize("seed", range(3))
def test_ring_associativity_distributivity(seed):
    rng = random.Random(seed)
    for _ in range(200):
        x, y, z = (RingElt(tuple(rng.randint(-9, 9) for _ in range(4)), rng.randint(0, 4)) for _ in range(3))
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
