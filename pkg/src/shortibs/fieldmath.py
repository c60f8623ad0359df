"""Modular arithmetic over F_p and the quadratic extension F_p[i]/(i^2 + 1)."""

from __future__ import annotations

import random
from typing import Union

from .errors import NoRoot, ZeroInverse

IntLike = Union[int, "FieldElement"]

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def byte_width(modulus: int) -> int:
    """Number of bytes needed to hold any residue of ``modulus``."""
    return (modulus.bit_length() + 7) // 8


def int_to_bytes(value: int, width: int) -> bytes:
    # fixed-width big-endian, zero padded on the left
    return value.to_bytes(width, "big")


def mod_exp(base: IntLike, exponent: int, modulus: int | None = None):
    """Return ``base ** exponent`` reduced mod the modulus.

    Accepts either a FieldElement (modulus taken from it) or a plain int with
    an explicit modulus.
    """
    if exponent < 0:
        raise ValueError("negative exponent; invert first")
    if isinstance(base, FieldElement):
        return FieldElement(pow(base.value, exponent, base.modulus), base.modulus)
    if modulus is None:
        raise TypeError("modulus required for integer base")
    return pow(base, exponent, modulus)


def mod_inverse(x: IntLike, modulus: int | None = None):
    if isinstance(x, FieldElement):
        return FieldElement(mod_inverse(x.value, x.modulus), x.modulus)
    if modulus is None:
        raise TypeError("modulus required for integer argument")
    if x % modulus == 0:
        raise ZeroInverse(f"0 has no inverse mod {modulus}")
    return pow(x, -1, modulus)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p, as -1, 0 or 1."""
    s = pow(a % p, (p - 1) // 2, p)
    return -1 if s == p - 1 else s


def _tonelli_shanks(a: int, p: int) -> int:
    # p - 1 = q * 2^s with q odd
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while legendre(z, p) != -1:
        z += 1
    m = s
    c = pow(z, q, p)
    t = pow(a, q, p)
    root = pow(a, (q + 1) // 2, p)
    while t != 1:
        # least i with t^(2^i) = 1
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m = i
        c = b * b % p
        t = t * c % p
        root = root * b % p
    return root


def sqrt_mod_p(a: int, p: int) -> int:
    """Square root of ``a`` modulo the prime ``p``.

    Uses the single exponentiation a^((p+1)/4) when p = 3 mod 4 and
    Tonelli-Shanks otherwise. Which of the two roots comes back is not
    specified; callers pick by parity.

    Raises NoRoot when ``a`` is a quadratic non-residue.
    """
    a %= p
    if a == 0 or p == 2:
        return a
    if legendre(a, p) != 1:
        raise NoRoot(f"{a} is not a quadratic residue mod {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    return _tonelli_shanks(a, p)


def is_probable_prime(n: int, rounds: int = 40) -> bool:
    """Miller-Rabin with ``rounds`` bases.

    The bases are derived from ``n`` itself so the answer is reproducible.
    """
    if n < 2:
        return False
    for sp in _SMALL_PRIMES:
        if n % sp == 0:
            return n == sp
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    picker = random.Random(n)
    bases = list(_SMALL_PRIMES[:12])
    while len(bases) < rounds:
        bases.append(picker.randrange(2, n - 1))
    for a in bases:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FieldElement:
    """A residue modulo a prime, kept in canonical form 0 <= value < modulus."""

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: int):
        self.value = value % modulus
        self.modulus = modulus

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise ValueError("field elements with different moduli")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.value + o, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.value - o, self.modulus)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(o - self.value, self.modulus)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.value * o, self.modulus)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.value * mod_inverse(o, self.modulus), self.modulus)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(o * mod_inverse(self.value, self.modulus), self.modulus)

    def __neg__(self):
        return FieldElement(-self.value, self.modulus)

    def __pow__(self, exponent: int):
        if exponent < 0:
            return mod_exp(self.inverse(), -exponent)
        return mod_exp(self, exponent)

    def inverse(self) -> FieldElement:
        return mod_inverse(self)

    def sqrt(self) -> FieldElement:
        return FieldElement(sqrt_mod_p(self.value, self.modulus), self.modulus)

    def is_square(self) -> bool:
        return legendre(self.value, self.modulus) != -1

    def is_zero(self) -> bool:
        return self.value == 0

    def to_bytes(self) -> bytes:
        return int_to_bytes(self.value, byte_width(self.modulus))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.value == other.value and self.modulus == other.modulus
        if isinstance(other, int):
            return self.value == other % self.modulus
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FieldElement({self.value}, {self.modulus})"


class Fp2Element:
    """c0 + c1*i with i^2 = -1; only a field when the modulus is 3 mod 4."""

    __slots__ = ("c0", "c1")

    def __init__(self, c0: IntLike, c1: IntLike, modulus: int | None = None):
        if modulus is None:
            modulus = c0.modulus if isinstance(c0, FieldElement) else c1.modulus
        self.c0 = c0 if isinstance(c0, FieldElement) else FieldElement(c0, modulus)
        self.c1 = c1 if isinstance(c1, FieldElement) else FieldElement(c1, modulus)
        if self.c0.modulus != self.c1.modulus:
            raise ValueError("components with different moduli")

    @property
    def modulus(self) -> int:
        return self.c0.modulus

    @classmethod
    def one(cls, modulus: int) -> Fp2Element:
        return cls(1, 0, modulus)

    @classmethod
    def zero(cls, modulus: int) -> Fp2Element:
        return cls(0, 0, modulus)

    def _parts(self, other):
        if isinstance(other, Fp2Element):
            return other.c0.value, other.c1.value
        if isinstance(other, FieldElement):
            return other.value, 0
        if isinstance(other, int):
            return other, 0
        return None

    def __add__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        p = self.modulus
        return Fp2Element(self.c0.value + o[0], self.c1.value + o[1], p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        p = self.modulus
        return Fp2Element(self.c0.value - o[0], self.c1.value - o[1], p)

    def __rsub__(self, other):
        return -(self - other)

    def __neg__(self):
        return Fp2Element(-self.c0.value, -self.c1.value, self.modulus)

    def __mul__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        p = self.modulus
        a, b = self.c0.value, self.c1.value
        c, d = o
        return Fp2Element((a * c - b * d) % p, (a * d + b * c) % p, p)

    __rmul__ = __mul__

    def square(self) -> Fp2Element:
        p = self.modulus
        a, b = self.c0.value, self.c1.value
        return Fp2Element((a + b) * (a - b) % p, 2 * a * b % p, p)

    def conjugate(self) -> Fp2Element:
        return Fp2Element(self.c0.value, -self.c1.value, self.modulus)

    def norm(self) -> FieldElement:
        return self.c0 * self.c0 + self.c1 * self.c1

    def inverse(self) -> Fp2Element:
        if self.is_zero():
            raise ZeroInverse("0 has no inverse in Fp2")
        p = self.modulus
        n_inv = mod_inverse(self.norm().value, p)
        return Fp2Element(self.c0.value * n_inv, -self.c1.value * n_inv, p)

    def __truediv__(self, other):
        if isinstance(other, Fp2Element):
            return self * other.inverse()
        o = self._parts(other)
        if o is None:
            return NotImplemented
        return self * mod_inverse(o[0], self.modulus)

    def __pow__(self, exponent: int) -> Fp2Element:
        base = self
        if exponent < 0:
            base, exponent = self.inverse(), -exponent
        result = Fp2Element.one(self.modulus)
        for bit in bin(exponent)[2:]:
            result = result.square()
            if bit == "1":
                result = result * base
        return result

    def is_zero(self) -> bool:
        return self.c0.value == 0 and self.c1.value == 0

    def is_one(self) -> bool:
        return self.c0.value == 1 and self.c1.value == 0

    def to_bytes(self) -> bytes:
        return self.c0.to_bytes() + self.c1.to_bytes()

    @classmethod
    def from_bytes(cls, data: bytes, modulus: int) -> Fp2Element:
        w = byte_width(modulus)
        if len(data) != 2 * w:
            raise ValueError(f"expected {2 * w} bytes, got {len(data)}")
        return cls(int.from_bytes(data[:w], "big"), int.from_bytes(data[w:], "big"), modulus)

    def __eq__(self, other):
        if isinstance(other, Fp2Element):
            return self.c0 == other.c0 and self.c1 == other.c1
        o = self._parts(other)
        if o is None:
            return NotImplemented
        return self.c0 == o[0] and self.c1.value == 0

    def __hash__(self):
        return hash((self.c0.value, self.c1.value, self.modulus))

    def __repr__(self):
        return f"Fp2Element({self.c0.value}, {self.c1.value}, {self.modulus})"


def fp2_mul(x: Fp2Element, y) -> Fp2Element:
    return x * y


def fp2_inv(x: Fp2Element) -> Fp2Element:
    return x.inverse()


def fp2_exp(x: Fp2Element, exponent: int) -> Fp2Element:
    return x ** exponent


def fp2_conjugate(x: Fp2Element) -> Fp2Element:
    return x.conjugate()
