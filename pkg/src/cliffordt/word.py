"""Words over the Clifford+T alphabet X and the two-level alphabet Y.

Words are plain tuples of generators; the empty tuple is the empty word.
A word ``g1 g2 ... gn`` stands for the matrix product in the same order.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from enum import IntEnum
from typing import Sequence, Union


class XGen(IntEnum):
    W = 0
    H0 = 1
    H1 = 2
    S0 = 3
    S1 = 4
    T0 = 5
    T1 = 6
    CZ = 7

    def __str__(self):
        return self.name

    __repr__ = __str__


W, H0, H1, S0, S1, T0, T1, CZ = XGen
CLIFFORD_GENS = (W, H0, H1, S0, S1, CZ)


@dataclass(frozen=True, order=True)
class YGen:
    """A Greylyn generator: w[j], X[j,k] or H[j,k] (always j < k)."""

    kind: str
    j: int
    k: int = -1

    def __post_init__(self):
        if self.kind == "w":
            if not 0 <= self.j <= 3 or self.k != -1:
                raise ValueError(f"bad index for w[{self.j}]")
        elif self.kind in ("X", "H"):
            if not (0 <= self.j <= 3 and 0 <= self.k <= 3):
                raise ValueError(f"index out of range in {self.kind}[{self.j},{self.k}]")
            if self.j >= self.k:
                raise ValueError(f"{self.kind}[{self.j},{self.k}] needs j < k")
        else:
            raise ValueError(f"unknown Greylyn generator kind {self.kind!r}")

    @classmethod
    def omega(cls, j: int) -> "YGen":
        return cls("w", j)

    @classmethod
    def x(cls, j: int, k: int) -> "YGen":
        return cls("X", j, k)

    @classmethod
    def h(cls, j: int, k: int) -> "YGen":
        return cls("H", j, k)

    def __str__(self):
        if self.kind == "w":
            return f"w[{self.j}]"
        return f"{self.kind}[{self.j},{self.k}]"

    __repr__ = __str__


Gen = Union[XGen, YGen]
Word = tuple

Y_GENERATORS: tuple[YGen, ...] = tuple(
    [YGen.omega(j) for j in range(4)]
    + [YGen.x(j, k) for j, k in itertools.combinations(range(4), 2)]
    + [YGen.h(j, k) for j, k in itertools.combinations(range(4), 2)]
)


@dataclass(frozen=True)
class Relation:
    id: str
    lhs: tuple
    rhs: tuple

    def __str__(self):
        return f"{self.id}: {format_word(self.lhs)} = {format_word(self.rhs)}"


# ---------------------------------------------------------------- macros

def _w(text: str) -> tuple:
    return tuple(XGen[t] for t in text.split())


def _macros() -> dict[str, tuple]:
    m: dict[str, tuple] = {}
    for i in "01":
        m["Td" + i] = (XGen["T" + i],) * 7
        m["Sd" + i] = (XGen["S" + i],) * 3
    # CXct: control c, target t
    m["CX10"] = _w("H0 CZ H0")
    m["CX01"] = _w("H1 CZ H1")
    m["NCX10"] = m["CX10"] + _w("H0 S0 S0 H0")
    m["NCX01"] = m["CX01"] + _w("H1 S1 S1 H1")
    m["CH10"] = _w("S0 H0 T0") + m["CX10"] + m["Td0"] + _w("H0") + m["Sd0"]
    m["CH01"] = _w("S1 H1 T1") + m["CX01"] + m["Td1"] + _w("H1") + m["Sd1"]
    m["NCH10"] = m["CH10"] + _w("H0")
    m["NCH01"] = m["CH01"] + _w("H1")
    return m


MACROS: dict[str, tuple] = _macros()


def expand(text: str) -> tuple:
    """Parse an X-word that may use macros; convenience for building relations."""
    return parse(text, "X")


# ---------------------------------------------------------------- relation sets

def relations_S() -> list[Relation]:
    """The Clifford+T relations, expanded over their index ranges."""
    rels: list[Relation] = []

    def add(rid, lhs, rhs):
        rels.append(Relation(rid, expand(lhs) if isinstance(lhs, str) else lhs,
                             expand(rhs) if isinstance(rhs, str) else rhs))

    for a in ("H0", "H1", "S0", "S1", "T0", "T1", "CZ"):
        add(f"C1[A={a}]", f"W {a}", f"{a} W")
    for a, b in itertools.product("HST", repeat=2):
        add(f"C2[A={a},B={b}]", f"{a}0 {b}1", f"{b}1 {a}0")
    add("C3", "W^8", "eps")
    for i in "01":
        add(f"C4[i={i}]", f"H{i}^2", "eps")
    for i in "01":
        add(f"C5[i={i}]", f"S{i}^4", "eps")
    for i in "01":
        add(f"C6[i={i}]", f"S{i} H{i} S{i} H{i} S{i} H{i}", "W")
    add("C7", "CZ^2", "eps")
    add("C8", "S1 CZ", "CZ S1")
    add("C9", "S0 CZ", "CZ S0")
    add("C10", "H1 S1 S1 H1 CZ", "CZ S0 H1 S0 S1 S1 H1")
    add("C11", "H0 S0 S0 H0 CZ", "CZ H0 S1 S0 S1 S0 H0")
    add("C12", "CZ H1 CZ", "S1 H1 CZ S0 S1 H1 S1 W^7")
    add("C13", "CZ H0 CZ", "S0 H0 CZ S0 S1 H0 S0 W^7")
    for i in "01":
        add(f"C14[i={i}]", f"T{i} T{i}", f"S{i}")
    for i in "01":
        add(f"C15[i={i}]", f"T{i} H{i} S{i} S{i} H{i} T{i} H{i} S{i} S{i} H{i}", "W")
    add("C16", "T1 CZ", "CZ T1")
    add("C17", "H0 CZ H0 H1 CZ H1 T1", "T0 H0 CZ H0 H1 CZ H1")
    add("C18", "CX10 T0 H0 Td0 NCX10 T0 H0 Td0", "T0 H0 Td0 NCX10 T0 H0 Td0 CX10")
    add("C19", "CX10 T0 H0 T0 H0 Td0 NCX10 T0 H0 Td0 H0 Td0",
        "T0 H0 T0 H0 Td0 NCX10 T0 H0 Td0 H0 Td0 CX10")
    add("C20", "NCH10 T0 CH10 NCH01 T1 CH01", "NCH01 T1 CH01 NCH10 T0 CH10")
    return rels


def relations_R() -> list[Relation]:
    """Greylyn's relations for U4(Z[1/sqrt2, i]), expanded over all indices."""
    w, X, H = YGen.omega, YGen.x, YGen.h
    rels: list[Relation] = []
    idx = range(4)
    pairs = list(itertools.combinations(idx, 2))

    def add(rid, lhs, rhs):
        rels.append(Relation(rid, tuple(lhs), tuple(rhs)))

    for j in idx:
        add(f"G1[j={j}]", [w(j)] * 8, [])
    for j, k in pairs:
        add(f"G2[j={j},k={k}]", [H(j, k)] * 2, [])
    for j, k in pairs:
        add(f"G3[j={j},k={k}]", [X(j, k)] * 2, [])
    for j, k in itertools.permutations(idx, 2):
        add(f"G4[j={j},k={k}]", [w(j), w(k)], [w(k), w(j)])
    for (j, k), l in itertools.product(pairs, idx):
        if l not in (j, k):
            add(f"G5[l={l},j={j},k={k}]", [w(l), H(j, k)], [H(j, k), w(l)])
    for (j, k), l in itertools.product(pairs, idx):
        if l not in (j, k):
            add(f"G6[l={l},j={j},k={k}]", [w(l), X(j, k)], [X(j, k), w(l)])
    disjoint = [(p, q) for p, q in itertools.product(pairs, repeat=2) if not set(p) & set(q)]
    for (j, k), (l, t) in disjoint:
        add(f"G7[j={j},k={k},l={l},t={t}]", [H(j, k), H(l, t)], [H(l, t), H(j, k)])
    for (j, k), (l, t) in disjoint:
        add(f"G8[j={j},k={k},l={l},t={t}]", [H(j, k), X(l, t)], [X(l, t), H(j, k)])
    for (j, k), (l, t) in disjoint:
        add(f"G9[j={j},k={k},l={l},t={t}]", [X(j, k), X(l, t)], [X(l, t), X(j, k)])
    for j, k in pairs:
        add(f"G10[j={j},k={k}]", [X(j, k), w(k)], [w(j), X(j, k)])
    for j, k in pairs:
        add(f"G11[j={j},k={k}]", [X(j, k), w(j)], [w(k), X(j, k)])
    for j, k, l in itertools.permutations(idx, 3):
        if j < k < l:
            add(f"G12[j={j},k={k},l={l}]", [X(j, k), X(j, l)], [X(k, l), X(j, k)])
    for j, k, l in itertools.permutations(idx, 3):
        if l < j < k:
            add(f"G13[j={j},k={k},l={l}]", [X(j, k), X(l, j)], [X(l, k), X(j, k)])
    for j, k, l in itertools.permutations(idx, 3):
        if j < k < l:
            add(f"G14[j={j},k={k},l={l}]", [X(j, k), H(j, l)], [H(k, l), X(j, k)])
    for j, k, l in itertools.permutations(idx, 3):
        if l < j < k:
            add(f"G15[j={j},k={k},l={l}]", [X(j, k), H(l, j)], [H(l, k), X(j, k)])
    for j, k in pairs:
        add(f"G16[j={j},k={k}]", [w(j), w(k), X(j, k)], [X(j, k), w(j), w(k)])
    for j, k in pairs:
        add(f"G17[j={j},k={k}]", [w(j), w(k), H(j, k)], [H(j, k), w(j), w(k)])
    for j, k in pairs:
        add(f"G18[j={j},k={k}]", [H(j, k), X(j, k)], [w(k)] * 4 + [H(j, k)])
    for j, k in pairs:
        add(f"G19[j={j},k={k}]", [H(j, k), w(j), w(j), H(j, k)],
            [w(j)] * 6 + [H(j, k)] + [w(j)] * 3 + [w(k)] * 5)
    for j, k, l, t in itertools.permutations(idx, 4):
        if j < k < l < t:
            add(f"G20[j={j},k={k},l={l},t={t}]",
                [H(j, k), H(l, t), H(j, l), H(k, t)],
                [H(j, l), H(k, t), H(j, k), H(l, t)])
    return rels


def dump_relations(rels: Sequence[Relation]) -> str:
    return "\n".join(str(r) for r in rels)


# ---------------------------------------------------------------- text syntax

class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


_X_TOKEN = re.compile(r"^([A-Za-z][A-Za-z0-9]*)(?:\^(\d+))?$")
_Y_TOKEN = re.compile(r"^(w)\[(\d+)\](?:\^(\d+))?$|^([XH])\[(\d+),(\d+)\](?:\^(\d+))?$")


def _tokens(text: str):
    for m in re.finditer(r"\S+", text):
        yield m.start(), m.group()


def parse(text: str, alphabet: str = "X") -> tuple:
    """Parse whitespace-separated generator tokens into a word."""
    alphabet = alphabet.upper()
    if alphabet not in ("X", "Y"):
        raise ValueError("alphabet must be 'X' or 'Y'")
    out: list = []
    for pos, tok in _tokens(text):
        if tok.startswith("^"):
            raise ParseError(f"dangling exponent {tok!r}", pos)
        if tok == "eps" or tok.startswith("eps^"):
            if tok != "eps" and not re.fullmatch(r"eps\^\d+", tok):
                raise ParseError(f"bad token {tok!r}", pos)
            continue
        if alphabet == "X":
            m = _X_TOKEN.match(tok)
            if not m:
                raise ParseError(f"bad token {tok!r}", pos)
            name, exp = m.group(1), m.group(2)
            if name in XGen.__members__:
                body = (XGen[name],)
            elif name in MACROS:
                body = MACROS[name]
            else:
                raise ParseError(f"unknown generator {name!r}", pos)
        else:
            m = _Y_TOKEN.match(tok)
            if not m:
                raise ParseError(f"bad token {tok!r}", pos)
            try:
                if m.group(1):
                    body = (YGen.omega(int(m.group(2))),)
                    exp = m.group(3)
                else:
                    body = (YGen(m.group(4), int(m.group(5)), int(m.group(6))),)
                    exp = m.group(7)
            except ValueError as err:
                raise ParseError(str(err), pos) from None
        n = 1 if exp is None else int(exp)
        out.extend(body * n)
    return tuple(out)


def format_word(word: Sequence[Gen]) -> str:
    """Print a word with run-length exponents; inverse of parse."""
    if not word:
        return "eps"
    parts = []
    for g, run in itertools.groupby(word):
        n = sum(1 for _ in run)
        parts.append(str(g) if n == 1 else f"{g}^{n}")
    return " ".join(parts)


def alphabet_of(word: Sequence[Gen]) -> str:
    return "Y" if word and isinstance(word[0], YGen) else "X"


def t_count(word: Sequence[XGen]) -> int:
    return sum(1 for g in word if g in (XGen.T0, XGen.T1))


def is_clifford_word(word: Sequence[XGen]) -> bool:
    return all(g not in (XGen.T0, XGen.T1) for g in word)
