"""The finite 2-qubit Clifford group, enumerated exactly.

The table is a breadth-first closure of {W, H0, H1, S0, S1, CZ} under right
multiplication.  Children are generated in (parent order, generator order),
so the first word to reach a matrix is the shortest one and, among those,
the lexicographically least.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .linalg import I4, Mat4, conj_num, cyclo_matmul, reduce_denominator
from .semantics import X_IMAGES, interp_x
from .word import CLIFFORD_GENS, XGen, is_clifford_word

log = logging.getLogger(__name__)

CACHE_VERSION = "clifford-table-v2"
CACHE_ENV = "CLIFFORDT_CACHE_DIR"


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "cliffordt"


def _small_key(num: np.ndarray, k: int) -> bytes | None:
    if k > 8 or num.max() > 127 or num.min() < -128:
        return None
    return bytes([k]) + num.astype(np.int8).tobytes()


def batch_keys(nums: np.ndarray, ks: np.ndarray) -> list[bytes | None]:
    """``_small_key`` for a whole batch at once."""
    n = len(ks)
    flat = nums.reshape(n, 64)
    ok = (ks <= 8) & (flat.max(axis=1) <= 127) & (flat.min(axis=1) >= -128)
    arr = np.empty((n, 65), dtype=np.int8)
    arr[:, 0] = np.where(ok, ks, 0)
    arr[:, 1:] = np.where(ok[:, None], flat, 0)
    raw = arr.tobytes()
    return [raw[65 * i:65 * i + 65] if ok[i] else None for i in range(n)]


def matrix_key(m: Mat4) -> bytes | None:
    """Compact key for Clifford-sized matrices; None if m cannot be Clifford."""
    if m.k > 8 or m.bound > 127:
        return None
    return _small_key(m.num, m.k)


class CliffordTable:
    """Exact matrix -> shortest word lookup for the 2-qubit Clifford group."""

    def __init__(self, nums: np.ndarray, ks: np.ndarray, parent: np.ndarray, gen: np.ndarray):
        self.nums = nums.astype(np.int8)
        self.ks = ks.astype(np.int8)
        self.parent = parent.astype(np.int32)
        self.gen = gen.astype(np.int8)
        self.index = {bytes([int(self.ks[i])]) + self.nums[i].tobytes(): i
                      for i in range(len(self.ks))}
        self._words: list[tuple | None] = [None] * len(self.ks)
        self._words[0] = ()
        self._neighbors: np.ndarray | None = None

    @property
    def order(self) -> int:
        return len(self.ks)

    def __len__(self):
        return self.order

    def matrix(self, i: int) -> Mat4:
        return Mat4(self.nums[i].astype(np.int64), int(self.ks[i]), reduced=True)

    def word(self, i: int) -> tuple:
        chain = []
        j = i
        while self._words[j] is None:
            chain.append(j)
            j = int(self.parent[j])
        w = self._words[j]
        for j in reversed(chain):
            w = w + (XGen(int(self.gen[j])),)
            self._words[j] = w
        return w

    def lookup(self, m: Mat4) -> int | None:
        key = matrix_key(m)
        return None if key is None else self.index.get(key)

    def word_of(self, m: Mat4) -> tuple | None:
        i = self.lookup(m)
        return None if i is None else self.word(i)

    def __contains__(self, m: Mat4) -> bool:
        return self.lookup(m) is not None

    def depth(self, i: int) -> int:
        return len(self.word(i))

    def all_matrices(self) -> np.ndarray:
        """All numerators as an int64 batch, in BFS order."""
        return self.nums.astype(np.int64)

    def verify(self, indices: Iterable[int] | None = None) -> list[int]:
        """Re-evaluate stored words; return indices whose word disagrees with the key."""
        from .semantics import interp_x_batch
        idx = list(range(self.order)) if indices is None else list(indices)
        bad = []
        chunk = 4096
        for start in range(0, len(idx), chunk):
            part = idx[start:start + chunk]
            mats = interp_x_batch([self.word(i) for i in part])
            for i, m in zip(part, mats):
                if self.lookup(m) != i:
                    bad.append(i)
        return bad

    def _right_products(self, m: Mat4) -> list[int | None]:
        nums = self.all_matrices()
        prod, ks = reduce_denominator(cyclo_matmul(nums, m.num[None]), self.ks.astype(np.int64) + m.k)
        return [self.index.get(key) if key else None for key in batch_keys(prod, ks)]

    def neighbors(self) -> np.ndarray:
        """nxt[i, a] = index of element i times CLIFFORD_GENS[a]."""
        if self._neighbors is None:
            nxt = np.empty((self.order, len(CLIFFORD_GENS)), dtype=np.int64)
            for a, g in enumerate(CLIFFORD_GENS):
                col = self._right_products(X_IMAGES[g])
                if any(j is None for j in col):
                    raise AssertionError("Clifford table is not closed")
                nxt[:, a] = col
            self._neighbors = nxt
        return self._neighbors

    def closed_under_generators(self) -> bool:
        """Every key times every generator image is again a key."""
        return all(j is not None for g in CLIFFORD_GENS for j in self._right_products(X_IMAGES[g]))

    # ---------------------------------------------------------- persistence

    def save(self, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp.npz")
        np.savez_compressed(tmp, version=np.array(CACHE_VERSION), nums=self.nums, ks=self.ks,
                            parent=self.parent, gen=self.gen, nxt=self.neighbors().astype(np.int32))
        os.replace(tmp, path)

    @classmethod
    def load(cls, path: Path, *, full_verify: bool = False, sample_fraction: float = 0.01,
             seed: int = 0) -> "CliffordTable":
        with np.load(path) as data:
            if str(data["version"]) != CACHE_VERSION:
                raise ValueError(f"cache {path} has version {data['version']}, expected {CACHE_VERSION}")
            table = cls(data["nums"], data["ks"], data["parent"], data["gen"])
            table._neighbors = data["nxt"].astype(np.int64)
        if full_verify:
            sample = range(table.order)
        else:
            rng = np.random.default_rng(seed)
            n = max(1, int(table.order * sample_fraction))
            sample = rng.choice(table.order, size=n, replace=False).tolist()
        bad = table.verify(sample)
        nxt = table._neighbors
        if full_verify:
            stored, table._neighbors = nxt, None
            bad.extend(np.nonzero((table.neighbors() != stored).any(axis=1))[0].tolist())
        else:
            for i in sample[:64]:
                for a, g in enumerate(CLIFFORD_GENS):
                    if table.matrix(i) @ X_IMAGES[g] != table.matrix(int(nxt[i, a])):
                        bad.append(i)
        if bad:
            raise ValueError(f"cache {path} failed verification at entries {bad[:5]}")
        return table


def build_table() -> CliffordTable:
    """Breadth-first closure of the Clifford generators."""
    images = [X_IMAGES[g] for g in CLIFFORD_GENS]
    gen_num = np.stack([m.num for m in images])
    gen_k = np.array([m.k for m in images])
    ident = I4.num.astype(np.int64)
    nums = [ident]
    ks = [0]
    parent = [0]
    gens = [0]
    index = {_small_key(ident, 0): 0}
    frontier = [0]
    while frontier:
        fnum = np.stack([nums[i] for i in frontier])
        fk = np.array([ks[i] for i in frontier])
        # shape (F, G, 4, 4, 4) in (parent, generator) order
        prod = cyclo_matmul(fnum[:, None], gen_num[None])
        pk = fk[:, None] + gen_k[None]
        flat, flat_k = reduce_denominator(prod.reshape((-1, 4, 4, 4)), pk.reshape(-1))
        new = []
        for t, key in enumerate(batch_keys(flat, flat_k)):
            if key in index:
                continue
            i = len(nums)
            index[key] = i
            nums.append(flat[t])
            ks.append(int(flat_k[t]))
            parent.append(frontier[t // len(images)])
            gens.append(int(CLIFFORD_GENS[t % len(images)]))
            new.append(i)
        frontier = new
        log.debug("clifford BFS: %d elements", len(nums))
    return CliffordTable(np.stack(nums), np.array(ks), np.array(parent), np.array(gens))


_TABLE: CliffordTable | None = None


def get_table(cache_dir: Path | str | None = None, *, use_cache: bool = True,
              full_verify: bool = False) -> CliffordTable:
    """The process-wide table, loaded from cache or built on first use."""
    global _TABLE
    if _TABLE is not None and use_cache:
        return _TABLE
    path = Path(cache_dir or default_cache_dir()) / "clifford_table.npz"
    table = None
    if use_cache and path.exists():
        try:
            table = CliffordTable.load(path, full_verify=full_verify)
        except (ValueError, OSError, KeyError) as err:
            log.warning("ignoring clifford cache: %s", err)
    if table is None:
        table = build_table()
        try:
            table.save(path)
        except OSError as err:
            log.warning("could not write clifford cache: %s", err)
    _TABLE = table
    return table


def is_clifford(m: Mat4, table: CliffordTable | None = None) -> tuple | None:
    return (table or get_table()).word_of(m)


# ---------------------------------------------------------------- Paulis

_P1 = {
    "I": ((1, 0), (0, 1)),
    "X": ((0, 1), (1, 0)),
    "Y": ((0, -1j), (1j, 0)),
    "Z": ((1, 0), (0, -1)),
}
PAULI_ORDER = "IXYZ"


@dataclass(frozen=True)
class Pauli2:
    """A signed two-qubit Pauli sign * (p0 (x) p1)."""

    sign: int
    p0: str
    p1: str

    def __post_init__(self):
        if self.sign not in (1, -1) or self.p0 not in _P1 or self.p1 not in _P1:
            raise ValueError(f"bad Pauli {self.sign}, {self.p0}, {self.p1}")

    @classmethod
    def parse(cls, text: str) -> "Pauli2":
        sign = -1 if text[0] == "-" else 1
        body = text.lstrip("+-")
        if len(body) != 2:
            raise ValueError(f"bad Pauli label {text!r}")
        return cls(sign, body[0], body[1])

    @property
    def label(self) -> str:
        return self.p0 + self.p1

    def __str__(self):
        return ("+" if self.sign > 0 else "-") + self.label

    __repr__ = __str__

    def sort_key(self) -> tuple:
        return (PAULI_ORDER.index(self.p0), PAULI_ORDER.index(self.p1), -self.sign)

    def is_identity(self) -> bool:
        return self.p0 == "I" and self.p1 == "I"

    def negate(self) -> "Pauli2":
        return Pauli2(-self.sign, self.p0, self.p1)

    def positive(self) -> "Pauli2":
        return Pauli2(1, self.p0, self.p1)

    def commutes(self, other: "Pauli2") -> bool:
        anti = sum(1 for a, b in ((self.p0, other.p0), (self.p1, other.p1))
                   if a != "I" and b != "I" and a != b)
        return anti % 2 == 0

    def matrix(self) -> Mat4:
        return _PAULI_MATS[self]


def _pauli_matrix(p: Pauli2) -> Mat4:
    from .ring import ONE, ZERO, RingElt
    i_elt = RingElt.omega(2)

    def elt(z):
        return {0: ZERO, 1: ONE, -1: -ONE, 1j: i_elt, -1j: -i_elt}[z]

    a, b = _P1[p.p0], _P1[p.p1]
    rows = [[elt(p.sign * a[r // 2][c // 2] * b[r % 2][c % 2]) for c in range(4)]
            for r in range(4)]
    return Mat4.from_entries(rows)


ALL_PAULIS: tuple[Pauli2, ...] = tuple(
    Pauli2(s, a, b) for a in PAULI_ORDER for b in PAULI_ORDER for s in (1, -1))
POSITIVE_PAULIS: tuple[Pauli2, ...] = tuple(
    p for p in ALL_PAULIS if p.sign == 1 and not p.is_identity())
SIGNED_PAULIS: tuple[Pauli2, ...] = tuple(p for p in ALL_PAULIS if not p.is_identity())
_PAULI_MATS = {p: _pauli_matrix(p) for p in ALL_PAULIS}
_PAULI_BY_KEY = {m.key(): p for p, m in _PAULI_MATS.items()}
Z0 = Pauli2(1, "Z", "I")
Z1 = Pauli2(1, "I", "Z")


def pauli_of(m: Mat4) -> Pauli2 | None:
    return _PAULI_BY_KEY.get(m.key())


def conj_pauli_matrix(c: Mat4, p: Pauli2) -> Pauli2:
    """The signed Pauli c p c^-1 for a Clifford matrix c."""
    q = pauli_of(c @ p.matrix() @ c.adjoint())
    if q is None:
        raise ValueError(f"conjugate of {p} is not a signed Pauli")
    return q


def conj_pauli(c: Sequence[XGen], p: Pauli2) -> Pauli2:
    if not is_clifford_word(c):
        raise ValueError("conj_pauli needs a Clifford-only word")
    return conj_pauli_matrix(interp_x(c), p)


_IMAGES: dict[tuple[int, Pauli2], list[Pauli2]] = {}


def pauli_images(table: CliffordTable | None = None, source: Pauli2 = Z0) -> list[Pauli2]:
    """C source C^-1 for every table entry C, in table order."""
    table = table or get_table()
    cache_key = (id(table), source)
    if cache_key not in _IMAGES:
        nums = table.all_matrices()
        src = source.matrix()
        prod = cyclo_matmul(cyclo_matmul(nums, src.num[None]), np.swapaxes(conj_num(nums), -1, -2))
        prod, ks = reduce_denominator(prod, 2 * table.ks.astype(np.int64) + src.k)
        keys = [int(k).to_bytes(2, "little") + prod[i].tobytes() for i, k in enumerate(ks)]
        images = [_PAULI_BY_KEY.get(key) for key in keys]
        if any(p is None for p in images):
            raise AssertionError("a Clifford conjugate of a Pauli is not a Pauli")
        _IMAGES[cache_key] = images
    return _IMAGES[cache_key]


def transporter_indices(table: CliffordTable | None = None, source: Pauli2 = Z0) -> dict[Pauli2, int]:
    """For every signed Pauli P, the first table entry C (BFS order) with C source C^-1 = P."""
    found: dict[Pauli2, int] = {}
    for i, p in enumerate(pauli_images(table, source)):
        found.setdefault(p, i)
    return found


def find_transporter(p: Pauli2, table: CliffordTable | None = None, source: Pauli2 = Z0) -> tuple:
    """A Clifford word C with C source C^-1 = p, deterministic (first in BFS order)."""
    if p.is_identity():
        raise ValueError("no transporter for the identity")
    table = table or get_table()
    return table.word(transporter_indices(table, source)[p])
