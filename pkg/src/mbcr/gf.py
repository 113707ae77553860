"""Finite-field arithmetic.

Two field families are supported: prime fields GF(p) for small,
hand-checkable parameters, and GF(256) for byte-oriented share files.
Elements are plain ints in [0, order); the field object carries the
arithmetic. GF(256) uses the storage-coding reduction polynomial
X^8 + X^4 + X^3 + X^2 + 1 (0x11D); changing it would break the share
file format.
"""

from __future__ import annotations

from .errors import FieldMismatchError

GF256_REDUCTION_POLY = 0x11D
_MAX_PRIME = 1 << 16


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def smallest_prime_at_least(n: int) -> int:
    p = max(n, 2)
    while not is_prime(p):
        p += 1
    return p


class Field:
    """Immutable finite field, either GF(p) or GF(256).

    All operations are pure; instances are safe to share across threads.
    """

    __slots__ = ("kind", "order", "modulus", "_exp", "_log")

    def __init__(self, kind: str, modulus: int):
        if kind == "prime":
            if not (2 <= modulus <= _MAX_PRIME) or not is_prime(modulus):
                raise ValueError(f"modulus {modulus} is not a prime in [2, 2^16]")
            self.order = modulus
            self._exp = self._log = None
        elif kind == "binary":
            if modulus != GF256_REDUCTION_POLY:
                raise ValueError(
                    f"GF(256) reduction polynomial must be {GF256_REDUCTION_POLY:#x}"
                )
            self.order = 256
            self._init_tables()
        else:
            raise ValueError(f"unknown field kind {kind!r}")
        self.kind = kind
        self.modulus = modulus

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls("prime", p)

    @classmethod
    def gf256(cls) -> "Field":
        return cls("binary", GF256_REDUCTION_POLY)

    def _init_tables(self):
        exp = [0] * 510
        log = [0] * 256
        x = 1
        for i in range(255):
            exp[i] = x
            log[x] = i
            x <<= 1
            if x & 0x100:
                x ^= GF256_REDUCTION_POLY
        for i in range(255, 510):
            exp[i] = exp[i - 255]
        self._exp = exp
        self._log = log

    def __eq__(self, other):
        return (
            isinstance(other, Field)
            and self.kind == other.kind
            and self.modulus == other.modulus
        )

    def __hash__(self):
        return hash((self.kind, self.modulus))

    def __repr__(self):
        return f"GF({self.order})"

    def _check(self, a: int) -> int:
        if not isinstance(a, int) or not 0 <= a < self.order:
            raise FieldMismatchError(f"{a!r} is not an element of {self}")
        return a

    def add(self, a: int, b: int) -> int:
        self._check(a)
        self._check(b)
        if self.kind == "prime":
            return (a + b) % self.order
        return a ^ b

    def sub(self, a: int, b: int) -> int:
        self._check(a)
        self._check(b)
        if self.kind == "prime":
            return (a - b) % self.order
        return a ^ b

    def neg(self, a: int) -> int:
        self._check(a)
        if self.kind == "prime":
            return (-a) % self.order
        return a

    def mul(self, a: int, b: int) -> int:
        self._check(a)
        self._check(b)
        if self.kind == "prime":
            return (a * b) % self.order
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        self._check(a)
        if a == 0:
            raise ZeroDivisionError(f"no inverse of 0 in {self}")
        if self.kind == "prime":
            return pow(a, self.order - 2, self.order)
        return self._exp[255 - self._log[a]]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        self._check(a)
        if e < 0:
            raise ValueError("negative exponent")
        if self.kind == "prime":
            return pow(a, e, self.order)
        if e == 0:
            return 1
        if a == 0:
            return 0
        return self._exp[(self._log[a] * e) % 255]

    def element_at(self, index: int) -> int:
        """Canonical enumeration of field elements; element_at(0) == 0."""
        if not 0 <= index < self.order:
            raise ValueError(f"index {index} out of range for {self}")
        return index
