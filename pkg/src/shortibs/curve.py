"""Short Weierstrass curve arithmetic, curve parameter files and G1 embedding.

Only type "a" descriptors (y^2 = x^3 + x over F_q, q = 3 mod 4) are
executable end to end. Descriptors of the other families are parsed so the
size calculator can read their bit lengths, and their base-field points can
still be compressed and decompressed.
"""

from __future__ import annotations

import hashlib
import os
import secrets
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import NamedTuple

from .errors import GenerationTimeout, ParseError, UnknownCurve, ValidationError
from .fieldmath import (
    FieldElement,
    byte_width,
    int_to_bytes,
    is_probable_prime,
    legendre,
    sqrt_mod_p,
)

CURVE_TYPES = ("a", "a1", "d", "e", "f", "g")

# Names of the parameter files bundled under shortibs/params, in table order.
SHIPPED_CURVES = ("a", "a1", "d159", "d201", "d224", "e", "f", "g149")

# How many base-field elements make up one G2 / GT element, per family.
# G1 is always an affine point over F_q, i.e. two field elements.
_EXTENSION_WIDTHS = {
    "a": (2, 2),
    "a1": (2, 2),
    "d": (6, 6),
    "e": (2, 1),
    "f": (4, 12),
    "g": (10, 10),
}

_INT_KEYS = (
    "q", "r", "h", "a", "b", "k", "n", "exp2", "exp1", "sign1", "sign0",
    "beta", "alpha0", "alpha1", "discriminant", "nk", "hk",
    "coeff0", "coeff1", "coeff2", "nqr", "qbits", "rbits",
)


@dataclass(frozen=True)
class Curve:
    """The equation y^2 = x^3 + a*x + b over F_q, with optional subgroup order r."""

    q: int
    a: int
    b: int
    r: int | None = None

    def rhs(self, x: int) -> int:
        return (x * x * x + self.a * x + self.b) % self.q

    def point(self, x: int, y: int) -> Point:
        return Point(FieldElement(x, self.q), FieldElement(y, self.q), self)

    @property
    def infinity(self) -> Point:
        return Point(None, None, self)


class Point:
    """Affine point on a Curve; ``x is None`` marks the point at infinity."""

    __slots__ = ("x", "y", "curve")

    def __init__(self, x: FieldElement | None, y: FieldElement | None, curve: Curve):
        self.x = x
        self.y = y
        self.curve = curve

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def is_on_curve(self) -> bool:
        if self.is_infinity:
            return True
        return self.y.value * self.y.value % self.curve.q == self.curve.rhs(self.x.value)

    def __add__(self, other: Point) -> Point:
        return point_add(self, other)

    def __sub__(self, other: Point) -> Point:
        return point_add(self, negate(other))

    def __neg__(self) -> Point:
        return negate(self)

    def __mul__(self, k: int) -> Point:
        return scalar_mul(k, self)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        if self.is_infinity or other.is_infinity:
            return self.is_infinity and other.is_infinity
        return self.x == other.x and self.y == other.y

    def __hash__(self):
        if self.is_infinity:
            return hash(None)
        return hash((self.x.value, self.y.value))

    def __repr__(self):
        if self.is_infinity:
            return "Point(infinity)"
        return f"Point({self.x.value}, {self.y.value})"


def negate(P: Point) -> Point:
    if P.is_infinity:
        return P
    return Point(P.x, -P.y, P.curve)


def _affine(x: int, y: int, curve: Curve) -> Point:
    return Point(FieldElement(x, curve.q), FieldElement(y, curve.q), curve)


def point_double(P: Point) -> Point:
    if P.is_infinity or P.y.value == 0:
        return P.curve.infinity
    q = P.curve.q
    x, y = P.x.value, P.y.value
    lam = (3 * x * x + P.curve.a) * pow(2 * y, -1, q) % q
    x3 = (lam * lam - 2 * x) % q
    return _affine(x3, lam * (x - x3) - y, P.curve)


def point_add(P: Point, Q: Point) -> Point:
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    q = P.curve.q
    x1, y1, x2, y2 = P.x.value, P.y.value, Q.x.value, Q.y.value
    if x1 == x2:
        if (y1 + y2) % q == 0:
            return P.curve.infinity
        return point_double(P)
    lam = (y2 - y1) * pow(x2 - x1, -1, q) % q
    x3 = (lam * lam - x1 - x2) % q
    return _affine(x3, lam * (x1 - x3) - y1, P.curve)


def scalar_mul(k: int, P: Point) -> Point:
    """Double-and-add, most significant bit first."""
    k = int(k)
    if k < 0:
        return scalar_mul(-k, negate(P))
    result = P.curve.infinity
    if k == 0 or P.is_infinity:
        return result
    for bit in bin(k)[2:]:
        result = point_double(result)
        if bit == "1":
            result = point_add(result, P)
    return result


class ElementSizes(NamedTuple):
    zr: int
    g1: int
    g2: int
    gt: int


@dataclass(frozen=True, eq=False)
class CurveDescriptor:
    """A parsed curve parameter file.

    Fields a descriptor's family does not use stay ``None``; keys the parser
    does not know are kept verbatim in ``extra``.
    """

    type_tag: str
    q: int | None = None
    r: int | None = None
    h: int | None = None
    a: int | None = None
    b: int | None = None
    k: int | None = None
    n: int | None = None
    exp2: int | None = None
    exp1: int | None = None
    sign1: int | None = None
    sign0: int | None = None
    beta: int | None = None
    alpha0: int | None = None
    alpha1: int | None = None
    discriminant: int | None = None
    nk: int | None = None
    hk: int | None = None
    coeff0: int | None = None
    coeff1: int | None = None
    coeff2: int | None = None
    nqr: int | None = None
    qbits: int | None = None
    rbits: int | None = None
    name: str | None = None
    extra: dict = field(default_factory=dict)

    @property
    def q_bits(self) -> int:
        return self.q.bit_length() if self.q is not None else self.qbits

    @property
    def r_bits(self) -> int:
        return self.r.bit_length() if self.r is not None else self.rbits

    @property
    def field_bytes(self) -> int:
        return (self.q_bits + 7) // 8

    @property
    def scalar_bytes(self) -> int:
        return (self.r_bits + 7) // 8

    @property
    def element_sizes(self) -> ElementSizes:
        g2_width, gt_width = _EXTENSION_WIDTHS[self.type_tag]
        fq = self.field_bytes
        return ElementSizes(self.scalar_bytes, 2 * fq, g2_width * fq, gt_width * fq)

    @property
    def compressed_g1_bytes(self) -> int:
        return self.field_bytes + 1

    @property
    def executable(self) -> bool:
        return self.type_tag == "a" and self.q is not None and self.r is not None

    @cached_property
    def curve(self) -> Curve:
        if self.q is None:
            raise ValidationError(f"descriptor {self.label!r} carries no field prime")
        return Curve(self.q, self.a or 0, self.b or 0, self.r)

    @cached_property
    def cofactor(self) -> int:
        if self.h is not None:
            return self.h
        if self.type_tag == "a":
            return (self.q + 1) // self.r
        raise ValidationError(f"descriptor {self.label!r} has no cofactor")

    @cached_property
    def generator(self) -> Point:
        return derive_generator(self)

    @property
    def label(self) -> str:
        return self.name or f"type {self.type_tag}"


def _parse_int(key: str, value: str, lineno: int) -> int:
    try:
        return int(value, 10)
    except ValueError:
        raise ParseError(f"line {lineno}: {key} expects a decimal integer, got {value!r}") from None


def load_descriptor(text: str, name: str | None = None, validate: bool = True) -> CurveDescriptor:
    """Parse ``key value`` lines (plus a ``type X`` line) into a descriptor."""
    values: dict = {}
    extra: dict = {}
    type_tag = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: expected 'key value', got {raw.strip()!r}")
        key, value = parts
        if key == "type":
            if value not in CURVE_TYPES:
                raise ParseError(f"line {lineno}: unknown curve type {value!r}")
            type_tag = value
        elif key in _INT_KEYS:
            values[key] = _parse_int(key, value, lineno)
        else:
            extra[key] = _parse_int(key, value, lineno)
    if type_tag is None:
        raise ParseError("missing 'type' line")

    # type a1 files name the field prime p and the composite order n
    if type_tag == "a1":
        if "p" in extra and "q" not in values:
            values["q"] = extra.pop("p")
        if "n" in values and "r" not in values:
            values["r"] = values["n"]
    if type_tag in ("a", "a1"):
        values.setdefault("a", 1)
        values.setdefault("b", 0)
        values.setdefault("k", 2)
    elif type_tag == "f":
        values.setdefault("a", 0)
        values.setdefault("k", 12)

    if "q" not in values and "qbits" not in values:
        raise ParseError(f"type {type_tag} descriptor needs 'q' (or 'qbits')")
    if "r" not in values and "rbits" not in values:
        raise ParseError(f"type {type_tag} descriptor needs 'r' (or 'rbits')")
    if type_tag == "a" and ("q" not in values or "r" not in values):
        raise ParseError("type a descriptor needs both 'q' and 'r'")

    desc = CurveDescriptor(type_tag=type_tag, name=name, extra=extra, **values)
    if validate:
        validate_descriptor(desc)
    return desc


def validate_descriptor(desc: CurveDescriptor) -> None:
    if desc.type_tag != "a":
        return
    q, r = desc.q, desc.r
    if q % 4 != 3:
        raise ValidationError("type a requires q = 3 mod 4")
    if not is_probable_prime(q):
        raise ValidationError("q is not prime")
    if not is_probable_prime(r):
        raise ValidationError("r is not prime")
    if (q + 1) % r:
        raise ValidationError("r does not divide q + 1")
    if desc.h is not None and desc.h * r != q + 1:
        raise ValidationError("h * r != q + 1")
    if None not in (desc.exp2, desc.exp1, desc.sign1, desc.sign0):
        solinas = 2 ** desc.exp2 + desc.sign1 * 2 ** desc.exp1 + desc.sign0
        if solinas != r:
            raise ValidationError("exp2/exp1/sign1/sign0 do not reproduce r")


_DUMP_ORDER = ("q", "n", "h", "r", "a", "b", "k", "exp2", "exp1", "sign1", "sign0",
               "beta", "alpha0", "alpha1", "discriminant", "nk", "hk",
               "coeff0", "coeff1", "coeff2", "nqr", "qbits", "rbits")


def dump_descriptor(desc: CurveDescriptor) -> str:
    lines = [f"type {desc.type_tag}"]
    implied = {"a": {"a": 1, "b": 0, "k": 2}}.get(desc.type_tag, {})
    for key in _DUMP_ORDER:
        value = getattr(desc, key)
        if value is None or implied.get(key) == value:
            continue
        lines.append(f"{key} {value}")
    for key, value in desc.extra.items():
        lines.append(f"{key} {value}")
    return "\n".join(lines) + "\n"


def load_descriptor_file(path) -> CurveDescriptor:
    path = Path(path)
    return load_descriptor(path.read_text(), name=path.stem)


def shipped_descriptor_text(name: str) -> str:
    name = name.removesuffix(".properties")
    if name == "g":
        name = "g149"
    try:
        return resources.files("shortibs.params").joinpath(f"{name}.properties").read_text()
    except FileNotFoundError:
        raise UnknownCurve(f"no bundled parameter file named {name!r}") from None


def shipped_descriptor(name: str) -> CurveDescriptor:
    """Load one of the bundled parameter files by name (``a``, ``d159``, ...)."""
    canonical = name.removesuffix(".properties")
    if canonical == "g":
        canonical = "g149"
    return load_descriptor(shipped_descriptor_text(canonical), name=canonical)


def resolve_descriptor(ref: str) -> CurveDescriptor:
    """Find a parameter file by path, then in $SHORTIBS_PARAMS_DIR, then bundled."""
    path = Path(ref)
    if path.is_file():
        return load_descriptor_file(path)
    env_dir = os.environ.get("SHORTIBS_PARAMS_DIR")
    if env_dir:
        for candidate in (Path(env_dir) / ref, Path(env_dir) / f"{ref}.properties"):
            if candidate.is_file():
                return load_descriptor_file(candidate)
    return shipped_descriptor(ref)


def generate_type_a(r_bits: int, q_bits: int, rng=None, max_attempts: int = 200_000) -> CurveDescriptor:
    """Search for type a parameters with a Solinas-form prime order.

    r = 2^exp2 + sign1*2^exp1 + sign0 has exactly ``r_bits`` bits and
    q = h*r - 1 is a ``q_bits``-bit prime with 4 | h, hence q = 3 mod 4.
    """
    if not 16 <= r_bits < q_bits:
        raise ValueError(f"need 16 <= r_bits < q_bits, got r_bits={r_bits}, q_bits={q_bits}")
    rng = rng or secrets.SystemRandom()
    attempts = 0
    lo, hi = 1 << (q_bits - 1), 1 << q_bits
    while attempts < max_attempts:
        attempts += 1
        sign1 = rng.choice((1, -1))
        sign0 = rng.choice((1, -1))
        exp2 = r_bits - 1 if sign1 == 1 else r_bits
        exp1 = rng.randrange(1, r_bits - 1)
        r = 2 ** exp2 + sign1 * 2 ** exp1 + sign0
        if r.bit_length() != r_bits or not is_probable_prime(r):
            continue
        h_lo = -(-(lo + 1) // r)
        h_hi = hi // r
        if h_hi - h_lo < 8:
            continue
        for _ in range(40 * q_bits):
            if attempts >= max_attempts:
                break
            attempts += 1
            h = rng.randrange(h_lo, h_hi + 1)
            h -= h % 4
            q = h * r - 1
            if h == 0 or not lo <= q < hi:
                continue
            if is_probable_prime(q):
                return CurveDescriptor(
                    type_tag="a", q=q, r=r, h=h, a=1, b=0, k=2,
                    exp2=exp2, exp1=exp1, sign1=sign1, sign0=sign0,
                )
    raise GenerationTimeout(f"no type a parameters after {max_attempts} attempts")


def derive_generator(desc: CurveDescriptor) -> Point:
    """First x = 1, 2, ... giving a residue; that point times the cofactor.

    The root is whatever sqrt_mod_p returns, so the generator is
    reproducible across implementations that use the same square root rule.
    """
    curve, h = desc.curve, desc.cofactor
    x = 1
    while True:
        rhs = curve.rhs(x)
        if rhs and legendre(rhs, curve.q) == 1:
            G = scalar_mul(h, curve.point(x, sqrt_mod_p(rhs, curve.q)))
            if not G.is_infinity:
                return G
        x += 1


def hash_to_scalar(data: bytes, r: int) -> int:
    return int.from_bytes(hashlib.sha256(data).digest(), "big") % r


def hash_to_g1(data: bytes, desc: CurveDescriptor, g1: Point | None = None) -> Point:
    """Embed a byte string into G1 as (SHA-256(data) mod r) * g1."""
    g1 = desc.generator if g1 is None else g1
    return scalar_mul(hash_to_scalar(data, desc.r), g1)


def random_curve_point(curve: Curve, rng=None) -> Point:
    """Uniform-ish point of E(F_q) (not cofactor cleared)."""
    rng = rng or secrets.SystemRandom()
    while True:
        x = rng.randrange(curve.q)
        rhs = curve.rhs(x)
        if legendre(rhs, curve.q) == -1:
            continue
        y = sqrt_mod_p(rhs, curve.q)
        if rng.getrandbits(1):
            y = -y
        return curve.point(x, y)


def random_g1(desc: CurveDescriptor, rng=None) -> Point:
    while True:
        P = scalar_mul(desc.cofactor, random_curve_point(desc.curve, rng))
        if not P.is_infinity:
            return P


def point_to_bytes(P: Point) -> bytes:
    """X || Y, each fixed width; the point at infinity is all zeros."""
    w = byte_width(P.curve.q)
    if P.is_infinity:
        return bytes(2 * w)
    return int_to_bytes(P.x.value, w) + int_to_bytes(P.y.value, w)


def point_from_bytes(data: bytes, curve: Curve) -> Point:
    w = byte_width(curve.q)
    if len(data) != 2 * w:
        raise ValueError(f"expected {2 * w} bytes for an uncompressed point, got {len(data)}")
    if not any(data):
        return curve.infinity
    x = int.from_bytes(data[:w], "big")
    y = int.from_bytes(data[w:], "big")
    if x >= curve.q or y >= curve.q:
        raise ValueError("coordinate out of range")
    P = curve.point(x, y)
    if not P.is_on_curve():
        raise ValueError("point is not on the curve")
    return P
