"""Reduced Tate pairing on y^2 = x^3 + x over F_q (embedding degree 2).

The symmetric map is e(P, Q) = Tate(P, phi(Q)) where phi(x, y) = (-x, i*y)
is the distortion map into E(F_{q^2}).
"""

from __future__ import annotations

from contextlib import contextmanager
from contextvars import ContextVar
from typing import NamedTuple

from .curve import Point
from .errors import DegeneratePair, InfinityInput, ZeroInput
from .fieldmath import Fp2Element, byte_width


class Fp2Point(NamedTuple):
    x: Fp2Element
    y: Fp2Element


class GtElement:
    """Element of the order-r subgroup of F_{q^2}^*, written multiplicatively."""

    __slots__ = ("value", "order")

    def __init__(self, value: Fp2Element, order: int):
        if value.is_zero():
            raise ZeroInput("0 is not a GT element")
        self.value = value
        self.order = order

    @classmethod
    def one(cls, modulus: int, order: int) -> GtElement:
        return cls(Fp2Element.one(modulus), order)

    def __mul__(self, other: GtElement) -> GtElement:
        return GtElement(self.value * other.value, self.order)

    def __truediv__(self, other: GtElement) -> GtElement:
        return self * other.inverse()

    def inverse(self) -> GtElement:
        return GtElement(self.value.inverse(), self.order)

    def __pow__(self, k: int) -> GtElement:
        # exponents only matter mod r inside the subgroup
        return GtElement(self.value ** (int(k) % self.order), self.order)

    def is_one(self) -> bool:
        return self.value.is_one()

    def to_bytes(self) -> bytes:
        return self.value.to_bytes()

    @classmethod
    def from_bytes(cls, data: bytes, modulus: int, order: int) -> GtElement:
        return cls(Fp2Element.from_bytes(data, modulus), order)

    def __eq__(self, other):
        if not isinstance(other, GtElement):
            return NotImplemented
        return self.value == other.value

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return f"GtElement({self.value.c0.value}, {self.value.c1.value})"


def gt_mul(a: GtElement, b: GtElement) -> GtElement:
    return a * b


def gt_exp(a: GtElement, k: int) -> GtElement:
    return a ** k


def gt_eq(a: GtElement, b: GtElement) -> bool:
    return a == b


class PairingCounter:
    __slots__ = ("count",)

    def __init__(self):
        self.count = 0


_active_counter: ContextVar[PairingCounter | None] = ContextVar("pairing_counter", default=None)


@contextmanager
def count_pairings():
    """Count pair() invocations made inside the ``with`` block."""
    counter = PairingCounter()
    token = _active_counter.set(counter)
    try:
        yield counter
    finally:
        _active_counter.reset(token)


def distortion_map(P: Point) -> Fp2Point:
    if P.is_infinity:
        raise InfinityInput("distortion map undefined at infinity")
    q = P.curve.q
    return Fp2Point(Fp2Element(-P.x.value, 0, q), Fp2Element(0, P.y.value, q))


def _line_step(T: Point, R: Point, Q: Fp2Point):
    """Line through T and R evaluated at Q, the sum T + R, and the vertical at T + R."""
    curve = T.curve
    q, a = curve.q, curve.a
    xt, yt = T.x.value, T.y.value
    xr, yr = R.x.value, R.y.value
    if xt == xr and (yt + yr) % q == 0:
        # T = -R: the line is vertical and T + R is infinity
        return Q.x - xt, curve.infinity, None
    if xt == xr:
        lam = (3 * xt * xt + a) * pow(2 * yt, -1, q) % q
    else:
        lam = (yr - yt) * pow(xr - xt, -1, q) % q
    x3 = (lam * lam - xt - xr) % q
    y3 = (lam * (xt - x3) - yt) % q
    line = (Q.y - yt) - (Q.x - xt) * lam
    return line, curve.point(x3, y3), Q.x - x3


def miller_loop(P: Point, Q: Fp2Point, r: int | None = None) -> Fp2Element:
    """f_{r,P}(Q) accumulated over the binary expansion of r."""
    if P.is_infinity:
        raise InfinityInput("Miller loop needs a finite P")
    r = P.curve.r if r is None else r
    q = P.curve.q
    num = Fp2Element.one(q)
    den = Fp2Element.one(q)
    T = P
    for bit in bin(r)[3:]:
        line, T, vert = _line_step(T, T, Q)
        num = num.square() * line
        den = den.square()
        if vert is not None:
            den = den * vert
        if bit == "1":
            line, T, vert = _line_step(T, P, Q)
            num = num * line
            if vert is not None:
                den = den * vert
    if num.is_zero() or den.is_zero():
        raise DegeneratePair("line function vanished at the evaluation point")
    return num / den


def final_exponentiation(f: Fp2Element, r: int) -> GtElement:
    """Raise to (q^2 - 1)/r.

    When r | q + 1 this is (conj(f)/f)^((q+1)/r), since f^q is the conjugate.
    """
    if f.is_zero():
        raise ZeroInput("final exponentiation of 0")
    q = f.modulus
    if (q + 1) % r == 0:
        g = f.conjugate() / f
        return GtElement(g ** ((q + 1) // r), r)
    return GtElement(f ** ((q * q - 1) // r), r)


def pair(P: Point, Q: Point) -> GtElement:
    if P.is_infinity or Q.is_infinity:
        raise InfinityInput("cannot pair with the point at infinity")
    counter = _active_counter.get()
    if counter is not None:
        counter.count += 1
    r = P.curve.r
    return final_exponentiation(miller_loop(P, distortion_map(Q), r), r)


def gt_width(q: int) -> int:
    return 2 * byte_width(q)
