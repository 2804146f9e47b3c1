import random

import numpy as np
import pytest

from cliffordt.clifford import (CACHE_VERSION, POSITIVE_PAULIS, SIGNED_PAULIS, CliffordTable, Pauli2, Z0, Z1,
                                conj_pauli, find_transporter, is_clifford, pauli_images, pauli_of)
from cliffordt.linalg import Mat4
from cliffordt.ring import ONE, RingElt
from cliffordt.semantics import interp_x
from cliffordt.word import CLIFFORD_GENS, XGen

from conftest import random_x_word


def test_order(table):
    assert table.order == 92160


def test_sampled_words_reevaluate_to_their_keys(table):
    rng = np.random.default_rng(0)
    assert table.verify(rng.choice(table.order, 3000, replace=False).tolist()) == []


def test_words_are_breadth_first_shortest(table):
    # brute-force the first layers independently
    seen = {interp_x(()).key(): 0}
    frontier = [()]
    for depth in range(1, 5):
        nxt = []
        for w in frontier:
            for g in CLIFFORD_GENS:
                key = interp_x(w + (g,)).key()
                if key not in seen:
                    seen[key] = depth
                    nxt.append(w + (g,))
        frontier = nxt
    mats = {interp_x(()).key(): interp_x(())}
    for w in _layers(4):
        mats.setdefault(interp_x(w).key(), interp_x(w))
    for key, depth in seen.items():
        assert len(table.word(table.lookup(mats[key]))) == depth


def _layers(n):
    frontier = [()]
    for _ in range(n):
        frontier = [w + (g,) for w in frontier for g in CLIFFORD_GENS]
        yield from frontier


def test_neighbor_table_matches_products(table):
    nxt = table.neighbors()
    rng = random.Random(1)
    for i in rng.sample(range(table.order), 50):
        for a, g in enumerate(CLIFFORD_GENS):
            assert table.matrix(i) @ interp_x((g,)) == table.matrix(int(nxt[i, a]))


def test_lookup_and_membership(table):
    rng = random.Random(2)
    for _ in range(50):
        w = random_x_word(rng, 30, CLIFFORD_GENS)
        m = interp_x(w)
        assert m in table
        assert interp_x(table.word_of(m)) == m
    assert interp_x((XGen.T0,)) not in table
    assert is_clifford(interp_x((XGen.T0,)), table) is None


def test_diag_i111_is_not_clifford(table):
    d = Mat4.diag([RingElt.omega(2), ONE, ONE, ONE])
    assert d not in table
    from cliffordt.rs import find_clifford_t_word
    from cliffordt.word import t_count
    w = find_clifford_t_word(d, 3, table)
    assert w is not None and interp_x(w) == d and t_count(w) == 3


def test_cache_roundtrip_and_version_check(table, tmp_path):
    path = tmp_path / "t.npz"
    table.save(path)
    loaded = CliffordTable.load(path)
    assert loaded.order == table.order
    assert np.array_equal(loaded.neighbors(), table.neighbors())
    with np.load(path) as data:
        payload = dict(data)
    payload["version"] = np.array(CACHE_VERSION + "-old")
    np.savez(path, **payload)
    with pytest.raises(ValueError):
        CliffordTable.load(path)


def test_corrupted_cache_is_rejected(table, tmp_path):
    path = tmp_path / "t.npz"
    table.save(path)
    with np.load(path) as data:
        payload = dict(data)
    payload["parent"] = np.roll(payload["parent"], 1)
    np.savez(path, **payload)
    with pytest.raises(ValueError):
        CliffordTable.load(path, sample_fraction=0.05)


# ---- Paulis

def test_pauli_parse_print_and_order():
    p = Pauli2.parse("-ZX")
    assert str(p) == "-ZX" and p.negate() == Pauli2.parse("+ZX") and p.positive().sign == 1
    assert len(POSITIVE_PAULIS) == 15 and len(SIGNED_PAULIS) == 30
    assert [str(q) for q in POSITIVE_PAULIS[:4]] == ["+IX", "+IY", "+IZ", "+XI"]


def test_commutation_matches_matrices():
    for p in SIGNED_PAULIS:
        for q in SIGNED_PAULIS:
            pm, qm = p.matrix(), q.matrix()
            assert p.commutes(q) == (pm @ qm == qm @ pm)


def test_pauli_of_recognizes_signed_paulis():
    for p in SIGNED_PAULIS:
        assert pauli_of(p.matrix()) == p
    assert pauli_of(interp_x((XGen.T0,))) is None


def test_conjugation_composes():
    rng = random.Random(3)
    for _ in range(100):
        u, v = random_x_word(rng, 8, CLIFFORD_GENS), random_x_word(rng, 8, CLIFFORD_GENS)
        p = rng.choice(SIGNED_PAULIS)
        assert conj_pauli(u + v, p) == conj_pauli(u, conj_pauli(v, p))
        c = interp_x(u)
        assert conj_pauli(u, p).matrix() == c @ p.matrix() @ c.adjoint()


@pytest.mark.parametrize("p", POSITIVE_PAULIS, ids=str)
@pytest.mark.parametrize("source", [Z0, Z1], ids=str)
def test_transporters(table, p, source):
    c = find_transporter(p, table, source)
    assert conj_pauli(c, source) == p


def test_every_pauli_is_hit_equally_often(table):
    images = pauli_images(table, Z0)
    counts = {p: images.count(p) for p in SIGNED_PAULIS}
    assert set(counts.values()) == {92160 // 30}
