"""Exact arithmetic in Z[1/sqrt2, i].

Elements are stored as ``num / sqrt2**k`` where ``num`` is a cyclotomic
integer ``a + b*w + c*w^2 + d*w^3`` with ``w = exp(i*pi/4)``.  Since
``w^4 = -1`` the four coefficients are a Z-basis of Z[w], and
``sqrt2 = w - w^3`` lets us clear factors of sqrt2 from the numerator.
"""

from __future__ import annotations

import cmath
from typing import NamedTuple

_W = cmath.exp(1j * cmath.pi / 4)


class CycloInt(NamedTuple):
    """The cyclotomic integer a + b*w + c*w^2 + d*w^3."""

    a: int
    b: int
    c: int
    d: int

    def __add__(self, other):  # type: ignore[override]
        return CycloInt(self.a + other.a, self.b + other.b,
                        self.c + other.c, self.d + other.d)

    def __sub__(self, other):
        return CycloInt(self.a - other.a, self.b - other.b,
                        self.c - other.c, self.d - other.d)

    def __neg__(self):
        return CycloInt(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, other):  # type: ignore[override]
        a, b, c, d = self
        e, f, g, h = other
        # w^4 = -1, so coefficients of w^4..w^6 fold back with a sign flip
        return CycloInt(
            a * e - b * h - c * g - d * f,
            a * f + b * e - c * h - d * g,
            a * g + b * f + c * e - d * h,
            a * h + b * g + c * f + d * e,
        )

    def conj(self) -> CycloInt:
        # w -> w^7 = -w^3, w^2 -> w^6 = -w^2, w^3 -> w^5 = -w
        return CycloInt(self.a, -self.d, -self.c, -self.b)

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    def sqrt2_divisible(self) -> bool:
        return (self.a - self.c) % 2 == 0 and (self.b - self.d) % 2 == 0

    def div_sqrt2(self) -> CycloInt:
        """Exact quotient by sqrt2; caller checks divisibility first."""
        a, b, c, d = self
        # x / sqrt2 = x * (w - w^3) / 2
        return CycloInt((b - d) // 2, (a + c) // 2, (b + d) // 2, (c - a) // 2)

    def mul_sqrt2(self) -> CycloInt:
        a, b, c, d = self
        return CycloInt(b - d, a + c, b + d, c - a)

    def to_complex(self) -> complex:
        return self.a + self.b * _W + self.c * _W**2 + self.d * _W**3


ZERO_NUM = CycloInt(0, 0, 0, 0)


def canonicalize(num: CycloInt, k: int) -> RingElt:
    if k < 0:
        raise ValueError("denominator exponent must be non-negative")
    num = CycloInt(*num)
    if num.is_zero():
        return RingElt(ZERO_NUM, 0, _raw=True)
    while k > 0 and num.sqrt2_divisible():
        num = num.div_sqrt2()
        k -= 1
    return RingElt(num, k, _raw=True)


class RingElt:
    """An element num / sqrt2**k of Z[1/sqrt2, i], always in canonical form."""

    __slots__ = ("num", "k", "_hash")

    def __init__(self, num, k: int = 0, *, _raw: bool = False):
        if not _raw:
            c = canonicalize(CycloInt(*num), k)
            num, k = c.num, c.k
        self.num = num
        self.k = k
        self._hash = hash((num, k))

    @classmethod
    def from_int(cls, n: int) -> RingElt:
        return cls(CycloInt(n, 0, 0, 0), 0)

    @classmethod
    def omega(cls, power: int = 1) -> RingElt:
        power %= 8
        sign = -1 if power >= 4 else 1
        coeffs = [0, 0, 0, 0]
        coeffs[power % 4] = sign
        return cls(CycloInt(*coeffs), 0, _raw=True)

    def __eq__(self, other):
        if isinstance(other, int):
            other = RingElt.from_int(other)
        if not isinstance(other, RingElt):
            return NotImplemented
        return self.k == other.k and self.num == other.num

    def __hash__(self):
        return self._hash

    def __add__(self, other):
        if isinstance(other, int):
            other = RingElt.from_int(other)
        if not isinstance(other, RingElt):
            return NotImplemented
        x, y = self.num, other.num
        k = max(self.k, other.k)
        for _ in range(k - self.k):
            x = x.mul_sqrt2()
        for _ in range(k - other.k):
            y = y.mul_sqrt2()
        return canonicalize(x + y, k)

    __radd__ = __add__

    def __neg__(self):
        return RingElt(-self.num, self.k, _raw=True)

    def __sub__(self, other):
        if isinstance(other, int):
            other = RingElt.from_int(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            other = RingElt.from_int(other)
        if not isinstance(other, RingElt):
            return NotImplemented
        return canonicalize(self.num * other.num, self.k + other.k)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> RingElt:
        if n < 0:
            raise ValueError("only non-negative powers are supported")
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def conj(self) -> RingElt:
        return RingElt(self.num.conj(), self.k, _raw=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def to_complex(self) -> complex:
        return self.num.to_complex() / (2 ** 0.5) ** self.k

    def omega_power(self) -> int | None:
        """Return e if self == w**e, otherwise None."""
        if self.k != 0:
            return None
        for e in range(8):
            if self == OMEGA_POWERS[e]:
                return e
        return None

    def __repr__(self):
        a, b, c, d = self.num
        return f"{a}+{b}*w+{c}*w2+{d}*w3 / rt2^{self.k}"

    __str__ = __repr__


def add(x: RingElt, y: RingElt) -> RingElt:
    return x + y


def mul(x: RingElt, y: RingElt) -> RingElt:
    return x * y


def conj(x: RingElt) -> RingElt:
    return x.conj()


def float_embed(x: RingElt) -> tuple[float, float]:
    z = x.to_complex()
    return (z.real, z.imag)


ZERO = RingElt(ZERO_NUM, 0, _raw=True)
ONE = RingElt(CycloInt(1, 0, 0, 0), 0, _raw=True)
OMEGA = RingElt.omega(1)
OMEGA_POWERS = tuple(RingElt.omega(e) for e in range(8))
INV_SQRT2 = RingElt(CycloInt(1, 0, 0, 0), 1, _raw=True)
SQRT2 = RingElt(CycloInt(0, 1, 0, -1), 0, _raw=True)
