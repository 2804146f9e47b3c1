"""Exact 2x2 and 4x4 matrices over Z[1/sqrt2, i].

A matrix is stored as one integer array ``num`` of shape ``(4, n, n)``
holding the w-coefficients of every entry, plus a single denominator
exponent ``k`` shared by all entries (the matrix is ``num / sqrt2**k``).
``k`` is kept minimal, so two matrices are equal iff their ``(k, num)``
agree; this makes matrices cheap to hash and compare.

Index convention for 4x4 matrices: qubit 0 is the left tensor factor,
so row/column index = 2*q0 + q1.
"""

from __future__ import annotations

import itertools

import numpy as np

from .ring import CycloInt, RingElt, canonicalize, ONE, ZERO

_INT_LIMIT = 1 << 62

# structure constants: w^p * w^q = E[p, q, r] * w^r
_E = np.zeros((4, 4, 4), dtype=np.int64)
for _p, _q in itertools.product(range(4), repeat=2):
    _E[_p, _q, (_p + _q) % 4] = 1 if _p + _q < 4 else -1
_E16 = _E.reshape(16, 4)


def _maxabs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return int(max(a.max(), -a.min()))


def _to_storage(a: np.ndarray) -> np.ndarray:
    """Demote an object array to int64 when it fits."""
    if a.dtype == object and _maxabs(a) < _INT_LIMIT:
        return a.astype(np.int64)
    return a


def cyclo_matmul(a: np.ndarray, b: np.ndarray, bound: int | None = None) -> np.ndarray:
    """Product of numerator arrays of shape (..., 4, n, n).

    ``bound`` may carry a precomputed ``maxabs(a) * maxabs(b)``.
    """
    n = a.shape[-1]
    if bound is None:
        bound = _maxabs(a) * _maxabs(b)
    if bound * 4 * n >= _INT_LIMIT:
        a = a.astype(object)
        b = b.astype(object)
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=object)
        for p, q in itertools.product(range(4), repeat=2):
            out[..., (p + q) % 4, :, :] += _E[p, q, (p + q) % 4] * (a[..., p, :, :] @ b[..., q, :, :])
        return _to_storage(out)
    prods = np.matmul(a[..., :, None, :, :], b[..., None, :, :, :])
    lead = prods.shape[:-4]
    prods = prods.reshape(lead + (16, n, n))
    return np.einsum("...sij,sr->...rij", prods, _E16) if lead else np.tensordot(_E16, prods, axes=(0, 0))


def reduce_denominator(num: np.ndarray, k):
    """Strip common sqrt2 factors.  Works on a single matrix or a batch."""
    num = np.array(num, copy=True)
    if num.ndim == 3:
        kk = int(k)
        while kk > 0:
            a, b, c, d = num
            if np.any((a - c) % 2) or np.any((b - d) % 2):
                break
            num = np.stack([(b - d) // 2, (a + c) // 2, (b + d) // 2, (c - a) // 2])
            kk -= 1
        if not num.any():
            kk = 0
        return num, kk
    k = np.array(k, copy=True)
    while True:
        a, b, c, d = (num[:, i] for i in range(4))
        ok = ((a - c) % 2 == 0) & ((b - d) % 2 == 0)
        ok = ok.reshape(len(num), -1).all(axis=1) & (k > 0)
        if not ok.any():
            break
        sel = num[ok]
        a, b, c, d = (sel[:, i] for i in range(4))
        num[ok] = np.stack([(b - d) // 2, (a + c) // 2, (b + d) // 2, (c - a) // 2], axis=1)
        k[ok] -= 1
    return num, k


def conj_num(num: np.ndarray) -> np.ndarray:
    """Entrywise complex conjugate of a numerator array (..., 4, n, n)."""
    return np.stack([num[..., 0, :, :], -num[..., 3, :, :],
                     -num[..., 2, :, :], -num[..., 1, :, :]], axis=-3)


class _Matrix:
    size = 0

    __slots__ = ("num", "k", "_key", "_bound")

    def __init__(self, num, k: int = 0, *, reduced: bool = False):
        num = np.asarray(num)
        if num.dtype != object:
            num = num.astype(np.int64, copy=False)
        if num.shape != (4, self.size, self.size):
            raise ValueError(f"expected numerator shape (4, {self.size}, {self.size})")
        if not reduced:
            num, k = reduce_denominator(num, k)
        self.num = _to_storage(num)
        self.num.setflags(write=False)
        self.k = int(k)
        self._key = None
        self._bound = None

    @property
    def bound(self) -> int:
        """Largest absolute numerator coefficient."""
        if self._bound is None:
            self._bound = _maxabs(self.num)
        return self._bound

    @classmethod
    def from_entries(cls, rows) -> "_Matrix":
        n = cls.size
        entries = [[rows[i][j] if isinstance(rows[i][j], RingElt) else RingElt.from_int(rows[i][j])
                    for j in range(n)] for i in range(n)]
        k = max(e.k for row in entries for e in row)
        num = np.zeros((4, n, n), dtype=object)
        for i, j in itertools.product(range(n), repeat=2):
            x = entries[i][j].num
            for _ in range(k - entries[i][j].k):
                x = x.mul_sqrt2()
            num[:, i, j] = list(x)
        return cls(_to_storage(num), k)

    @classmethod
    def identity(cls):
        num = np.zeros((4, cls.size, cls.size), dtype=np.int64)
        num[0] = np.eye(cls.size, dtype=np.int64)
        return cls(num, 0, reduced=True)

    @classmethod
    def diag(cls, entries):
        n = cls.size
        rows = [[entries[i] if i == j else ZERO for j in range(n)] for i in range(n)]
        return cls.from_entries(rows)

    @classmethod
    def scalar(cls, x: RingElt):
        return cls.diag([x] * cls.size)

    def entry(self, i: int, j: int) -> RingElt:
        return canonicalize(CycloInt(*(int(v) for v in self.num[:, i, j])), self.k)

    def entries(self):
        return [[self.entry(i, j) for j in range(self.size)] for i in range(self.size)]

    def key(self):
        """Hashable exact identity of the matrix."""
        if self._key is None:
            if self.num.dtype == object:
                self._key = (self.k, tuple(int(v) for v in self.num.flat))
            else:
                self._key = self.k.to_bytes(2, "little") + self.num.tobytes()
        return self._key

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.k == other.k and np.array_equal(self.num, other.num)

    def __hash__(self):
        return hash(self.key())

    def __matmul__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return type(self)(cyclo_matmul(self.num, other.num, self.bound * other.bound), self.k + other.k)

    def scale(self, x: RingElt):
        num = np.zeros((4, self.size, self.size), dtype=np.int64)
        num[:] = np.eye(self.size, dtype=np.int64)[None] * np.array(list(x.num))[:, None, None]
        # x * A == (x I) @ A
        return type(self)(cyclo_matmul(num, self.num), self.k + x.k)

    def adjoint(self):
        return type(self)(np.swapaxes(conj_num(self.num), -1, -2), self.k, reduced=True)

    def __pow__(self, n: int):
        out = type(self).identity()
        base = self
        while n:
            if n & 1:
                out = out @ base
            base = base @ base
            n >>= 1
        return out

    def is_unitary(self) -> bool:
        return self.adjoint() @ self == type(self).identity()

    def to_complex(self) -> np.ndarray:
        w = np.exp(1j * np.pi / 4)
        num = self.num.astype(float)
        z = num[0] + w * num[1] + w**2 * num[2] + w**3 * num[3]
        return z / np.sqrt(2) ** self.k

    def __repr__(self):
        return f"{type(self).__name__}(k={self.k}, num={self.num.tolist()})"

    def pretty(self) -> str:
        rows = []
        for row in self.entries():
            rows.append("[ " + ", ".join(_entry_str(e) for e in row) + " ]")
        return "\n".join(rows)


def _entry_str(x: RingElt) -> str:
    e = x.omega_power()
    if x.is_zero():
        return "0"
    if e is not None:
        return {0: "1", 4: "-1"}.get(e, f"w^{e}")
    return str(x)


class Mat2(_Matrix):
    size = 2
    __slots__ = ()


class Mat4(_Matrix):
    size = 4
    __slots__ = ()


def matmul(a: _Matrix, b: _Matrix) -> _Matrix:
    return a @ b


def adjoint(a: _Matrix) -> _Matrix:
    return a.adjoint()


def is_unitary(a: _Matrix) -> bool:
    return a.is_unitary()


def tensor(a: Mat2, b: Mat2) -> Mat4:
    num = np.zeros((4, 4, 4), dtype=object)
    for p, q in itertools.product(range(4), repeat=2):
        sign = 1 if p + q < 4 else -1
        num[(p + q) % 4] += sign * np.kron(a.num[p].astype(object), b.num[q].astype(object))
    return Mat4(_to_storage(num), a.k + b.k)


def _det(m: list[list[RingElt]]) -> RingElt:
    n = len(m)
    if n == 1:
        return m[0][0]
    total = ZERO
    for j in range(n):
        if m[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * _det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def det4(a: Mat4) -> RingElt:
    """Determinant by cofactor expansion along the first row."""
    return _det(a.entries())


def det2(a: Mat2) -> RingElt:
    return _det(a.entries())


I2 = Mat2.identity()
I4 = Mat4.identity()
__all__ = ["Mat2", "Mat4", "matmul", "adjoint", "tensor", "det4", "det2", "is_unitary",
           "I2", "I4", "ONE", "cyclo_matmul", "reduce_denominator", "conj_num"]
