"""Pauli rotation forms of Clifford+T words.

A rotation form is ``R_P1 R_P2 ... R_Pn . C`` where ``R_P = (1+w)/2 I + (1-w)/2 P``
and ``C`` is a Clifford word.  ``standardize`` works modulo three easy
relations: commuting rotations swap, ``R_P^2`` is Clifford, and
``R_-P = R_P D`` for a Clifford ``D``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .clifford import Pauli2, CliffordTable, Z0, Z1, conj_pauli_matrix, find_transporter, get_table
from .linalg import I4, Mat4
from .ring import ONE, RingElt
from .semantics import X_IMAGES, interp_x
from .word import XGen, format_word, parse

_HALF_PLUS = RingElt((1, 1, 0, 0), 2)    # (1 + w) / 2
_HALF_MINUS = RingElt((1, -1, 0, 0), 2)  # (1 - w) / 2


@lru_cache(maxsize=None)
def rotation_matrix(p: Pauli2) -> Mat4:
    """R_P = (1+w)/2 I + (1-w)/2 P, exactly."""
    if p.is_identity():
        raise ValueError("R_P is only defined for non-identity P")
    pm = p.matrix()
    rows = [[_HALF_PLUS * (ONE if i == j else 0) + _HALF_MINUS * pm.entry(i, j) for j in range(4)]
            for i in range(4)]
    return Mat4.from_entries(rows)


@lru_cache(maxsize=None)
def rotation_inverse(p: Pauli2) -> Mat4:
    return rotation_matrix(p).adjoint()


@dataclass(frozen=True)
class RotationForm:
    rotations: tuple[Pauli2, ...]
    tail: tuple

    def __post_init__(self):
        object.__setattr__(self, "rotations", tuple(self.rotations))
        object.__setattr__(self, "tail", tuple(self.tail))

    def matrix(self) -> Mat4:
        m = I4
        for p in self.rotations:
            m = m @ rotation_matrix(p)
        return m @ interp_x(self.tail)

    def __len__(self):
        return len(self.rotations)

    def __str__(self):
        rots = " ".join(str(p) for p in self.rotations)
        return (rots + " " if rots else "") + "| " + format_word(self.tail)

    @classmethod
    def parse(cls, text: str) -> "RotationForm":
        head, _, tail = text.partition("|")
        return cls(tuple(Pauli2.parse(t) for t in head.split()), parse(tail.strip() or "eps", "X"))


def to_rotation_form(word: Sequence[XGen], table: CliffordTable | None = None) -> RotationForm:
    """Push every Clifford prefix rightward: C1 T C2 T ... = R_P1 R_P2 ... D."""
    table = table or get_table()
    d = I4
    rotations = []
    for g in word:
        if g in (XGen.T0, XGen.T1):
            rotations.append(conj_pauli_matrix(d, Z0 if g is XGen.T0 else Z1))
        else:
            d = d @ X_IMAGES[g]
    tail = table.word_of(d)
    assert tail is not None, "Clifford prefix missing from table"
    return RotationForm(tuple(rotations), tail)


def _clifford_word(m: Mat4, table: CliffordTable) -> tuple:
    w = table.word_of(m)
    if w is None:
        raise AssertionError("expected a Clifford residue")
    return w


def _remove_signs(rotations, tail_m: Mat4):
    """Relation (c), left to right, pushing each residue D to the right."""
    out = []
    k = I4
    for p in rotations:
        q = conj_pauli_matrix(k, p)
        if q.sign < 0:
            q = q.positive()
            # R_-Q = R_Q D, so D = R_Q^-1 R_-Q
            d = rotation_inverse(q) @ rotation_matrix(q.negate())
            k = d @ k
        out.append(q)
    return out, k @ tail_m


def _lex_least(rotations: list[Pauli2]) -> list[Pauli2]:
    """Least representative under swaps of adjacent commuting rotations."""
    rest = list(rotations)
    out = []
    while rest:
        best = None
        for i, p in enumerate(rest):
            if all(p.commutes(q) for q in rest[:i]):
                if best is None or p.sort_key() < rest[best].sort_key():
                    best = i
        out.append(rest.pop(best))
    return out


def _cancel_one(rotations: list[Pauli2], tail_m: Mat4):
    """Relation (b): drop the first equal pair that can be brought together."""
    for i, p in enumerate(rotations):
        for j in range(i + 1, len(rotations)):
            q = rotations[j]
            if q == p:
                # R_P R_P is Clifford; push it through everything after i
                e = rotation_matrix(p) @ rotation_matrix(p)
                rest = rotations[i + 1:j] + rotations[j + 1:]
                moved = [conj_pauli_matrix(e, r) for r in rest]
                return rotations[:i] + moved, e @ tail_m
            if not p.commutes(q):
                break
    return None


def standardize(form: RotationForm, table: CliffordTable | None = None) -> RotationForm:
    """Signs, then commuting sort, then square removal; repeat to a fixpoint."""
    table = table or get_table()
    rotations = list(form.rotations)
    tail_m = interp_x(form.tail)
    while True:
        rotations, tail_m = _remove_signs(rotations, tail_m)
        rotations = _lex_least(rotations)
        hit = _cancel_one(rotations, tail_m)
        if hit is None:
            break
        rotations, tail_m = hit
    return RotationForm(tuple(rotations), _clifford_word(tail_m, table))


def from_rotation_form(form: RotationForm, table: CliffordTable | None = None) -> tuple:
    """Expand each R_P as C T0 C^-1 with C the transporter of P."""
    table = table or get_table()
    out: list[XGen] = []
    for p in form.rotations:
        if p.sign < 0:
            raise ValueError(f"negative rotation {p}; standardize first")
        c = find_transporter(p, table)
        out.extend(c)
        out.append(XGen.T0)
        out.extend(_clifford_word(interp_x(c).adjoint(), table))
    out.extend(form.tail)
    return tuple(out)


def rotation_count(form: RotationForm) -> int:
    return len(form.rotations)


# The three relations that the easy rules above cannot account for.
NONOBVIOUS_ROTATION_RELATIONS = [
    ("IX IZ ZZ ZX", "ZX IZ ZZ IX"),
    ("IX IZ IX ZX ZZ ZX", "ZX IZ IX ZX ZZ IX"),
    ("XY YZ XZ IX ZI YX ZY ZX XI IZ", "YX ZY ZX XI IZ XY YZ XZ IX ZI"),
]


def rotation_product(labels: str) -> Mat4:
    m = I4
    for t in labels.split():
        m = m @ rotation_matrix(Pauli2.parse("+" + t))
    return m


def nonobvious_rotation_checks() -> list[tuple[str, bool]]:
    return [(f"{lhs} = {rhs}", rotation_product(lhs) == rotation_product(rhs))
            for lhs, rhs in NONOBVIOUS_ROTATION_RELATIONS]


def verify_nonobvious_rotation_relations() -> bool:
    return all(ok for _, ok in nonobvious_rotation_checks())
