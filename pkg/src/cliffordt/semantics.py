"""Matrix semantics of X-words and Y-words.

Also holds the translation ``f`` from X to Y-words, the determinant-parity
coset invariant, and the controlled-T identities checked in an extended
gate alphabet that is deliberately kept out of ``XGen``.
"""

from __future__ import annotations

from enum import Enum
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from .linalg import I2, I4, Mat2, Mat4, cyclo_matmul, det4, reduce_denominator, tensor
from .ring import INV_SQRT2, OMEGA, ONE, RingElt, ZERO
from .word import MACROS, Relation, XGen, YGen, parse

H2 = Mat2.from_entries([[INV_SQRT2, INV_SQRT2], [INV_SQRT2, -INV_SQRT2]])
S2 = Mat2.diag([ONE, RingElt.omega(2)])
T2 = Mat2.diag([ONE, OMEGA])
X2 = Mat2.from_entries([[0, 1], [1, 0]])
Z2 = Mat2.diag([ONE, -ONE])


def _x_table() -> dict[XGen, Mat4]:
    return {
        XGen.W: Mat4.scalar(OMEGA),
        XGen.H0: tensor(H2, I2),
        XGen.H1: tensor(I2, H2),
        XGen.S0: tensor(S2, I2),
        XGen.S1: tensor(I2, S2),
        XGen.T0: tensor(T2, I2),
        XGen.T1: tensor(I2, T2),
        XGen.CZ: Mat4.diag([ONE, ONE, ONE, -ONE]),
    }


X_IMAGES: Mapping[XGen, Mat4] = _x_table()


def _two_level(j: int, k: int, block: Mat2) -> Mat4:
    rows = [[ONE if r == c else ZERO for c in range(4)] for r in range(4)]
    b = block.entries()
    for a, r in enumerate((j, k)):
        for bcol, c in enumerate((j, k)):
            rows[r][c] = b[a][bcol]
    return Mat4.from_entries(rows)


@lru_cache(maxsize=None)
def y_image(g: YGen) -> Mat4:
    if g.kind == "w":
        d = [ONE] * 4
        d[g.j] = OMEGA
        return Mat4.diag(d)
    return _two_level(g.j, g.k, X2 if g.kind == "X" else H2)


class Interpretation:
    """A generator -> matrix table for one alphabet."""

    def __init__(self, images):
        self._images = images

    def __getitem__(self, g) -> Mat4:
        return self._images(g) if callable(self._images) else self._images[g]

    def __call__(self, word: Sequence) -> Mat4:
        return evaluate(word, self)


X_INTERP = Interpretation(X_IMAGES)
Y_INTERP = Interpretation(y_image)


def evaluate(word: Sequence, interp: Interpretation) -> Mat4:
    m = I4
    for g in word:
        m = m @ interp[g]
    return m


def interp_x(word: Sequence[XGen]) -> Mat4:
    return evaluate(word, X_INTERP)


def interp_y(word: Sequence[YGen]) -> Mat4:
    return evaluate(word, Y_INTERP)


def interp(word: Sequence) -> Mat4:
    """Interpret a word over either alphabet."""
    if word and isinstance(word[0], YGen):
        return interp_y(word)
    return interp_x(word)


def interp_x_batch(words: Sequence[Sequence[XGen]]) -> list[Mat4]:
    """Evaluate many X-words at once, stepping through positions in lockstep."""
    n = len(words)
    if n == 0:
        return []
    num = np.zeros((n, 4, 4, 4), dtype=np.int64)
    num[:, 0] = np.eye(4, dtype=np.int64)
    k = np.zeros(n, dtype=np.int64)
    maxlen = max(len(w) for w in words)
    codes = np.full((n, maxlen), -1)
    for i, w in enumerate(words):
        codes[i, :len(w)] = [int(g) for g in w]
    for pos in range(maxlen):
        for g in XGen:
            sel = np.nonzero(codes[:, pos] == int(g))[0]
            if not len(sel):
                continue
            img = X_IMAGES[g]
            prod = cyclo_matmul(num[sel], img.num[None])
            if prod.dtype == object:
                return [interp_x(w) for w in words]
            prod, kk = reduce_denominator(prod, k[sel] + img.k)
            num[sel] = prod
            k[sel] = kk
    return [Mat4(num[i], int(k[i]), reduced=True) for i in range(n)]


def relation_valid(rel: Relation, interp: Interpretation | None = None) -> bool:
    if interp is None:
        interp = Y_INTERP if rel.lhs and isinstance(rel.lhs[0], YGen) or \
            rel.rhs and isinstance(rel.rhs[0], YGen) else X_INTERP
    return evaluate(rel.lhs, interp) == evaluate(rel.rhs, interp)


# ---------------------------------------------------------------- translation f

_F_TABLE = {
    XGen.W: "w[0] w[1] w[2] w[3]",
    XGen.H0: "H[1,3] H[0,2]",
    XGen.H1: "H[2,3] H[0,1]",
    XGen.S0: "w[2]^2 w[3]^2",
    XGen.S1: "w[1]^2 w[3]^2",
    XGen.T0: "w[2] w[3]",
    XGen.T1: "w[1] w[3]",
    XGen.CZ: "w[3]^4",
}
F_TABLE: Mapping[XGen, tuple] = {x: parse(t, "Y") for x, t in _F_TABLE.items()}


def translate_f(x: XGen) -> tuple:
    return F_TABLE[x]


# ---------------------------------------------------------------- cosets

class CosetClass(Enum):
    EVEN = 0
    ODD = 1

    def __add__(self, other):
        return CosetClass((self.value + other.value) % 2)


def det_omega_exponent(m: Mat4) -> int:
    """The e with det(m) = w^e; raises if det is not a power of w."""
    e = det4(m).omega_power()
    if e is None:
        raise ValueError("determinant is not a power of w (matrix is not unitary over R)")
    return e


def coset_class(m: Mat4) -> CosetClass:
    return CosetClass(det_omega_exponent(m) % 2)


# ---------------------------------------------------------------- controlled-T

def _controlled(target: int, control: int, block: Mat2, negated: bool = False) -> Mat4:
    rows = [[ONE if r == c else ZERO for c in range(4)] for r in range(4)]
    b = block.entries()
    on = 0 if negated else 1
    idx = []
    for tbit in (0, 1):
        bits = {control: on, target: tbit}
        idx.append(2 * bits[0] + bits[1])
    for a in (0, 1):
        for c in (0, 1):
            rows[idx[a]][idx[c]] = b[a][c]
    return Mat4.from_entries(rows)


def extended_images() -> dict[str, Mat4]:
    """Gates of the extended alphabet: X generators, macros, controlled T/H.

    Names follow ``CTct``/``NCTct``/``CHct``/``NCHct`` with control c and target t.
    """
    ext: dict[str, Mat4] = {g.name: X_IMAGES[g] for g in XGen}
    for name, body in MACROS.items():
        ext[name] = interp_x(body)
    for c, t in ((0, 1), (1, 0)):
        ext[f"CT{c}{t}"] = _controlled(t, c, T2)
        ext[f"NCT{c}{t}"] = _controlled(t, c, T2, negated=True)
        ext[f"CHm{c}{t}"] = _controlled(t, c, H2)
        ext[f"NCHm{c}{t}"] = _controlled(t, c, H2, negated=True)
    return ext


def eval_extended(text: str, ext: Mapping[str, Mat4] | None = None) -> Mat4:
    ext = ext or extended_images()
    m = I4
    for tok in text.split():
        m = m @ ext[tok]
    return m


def _upside_down(text: str) -> str:
    swap = {"0": "1", "1": "0"}
    out = []
    for tok in text.split():
        if tok[-2:].isdigit():
            tok = tok[:-2] + swap[tok[-2]] + swap[tok[-1]]
        elif tok[-1] in "01":
            tok = tok[:-1] + swap[tok[-1]]
        out.append(tok)
    return " ".join(out)


# (name, lhs, rhs) in the extended alphabet
CONTROLLED_T_IDENTITIES = [
    ("(5)", "CT10", "CT01"),
    ("(6)", "NCT10 CT10", "T0"),
    ("(7)", "T1 NCT10", "T0 NCT01"),
    ("(8)", "NCH10 T0 CH10", "CT10 H0 NCT10"),
]


def controlled_t_checks() -> list[tuple[str, bool]]:
    """Each identity and its upside-down version, with its exact verdict."""
    ext = extended_images()
    out = []
    for name, lhs, rhs in CONTROLLED_T_IDENTITIES:
        out.append((name, eval_extended(lhs, ext) == eval_extended(rhs, ext)))
        out.append((name + " upside-down",
                    eval_extended(_upside_down(lhs), ext) == eval_extended(_upside_down(rhs), ext)))
    return out


def verify_controlled_T_identities() -> bool:
    return all(ok for _, ok in controlled_t_checks())
