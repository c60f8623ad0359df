"""Setup, key extraction, and sign/verify for five pairing-based IBS schemes.

Every scheme is written against the two-generator interface (g1, g2, P1, P2)
even though the type a backend is symmetric and has g1 = g2, P1 = P2.

Signing nonces are called ``k`` throughout; ``r`` is always the group order.
"""

from __future__ import annotations

import hashlib
import secrets
import struct
from dataclasses import dataclass

from .codec import (
    HASH_MODES,
    compress_hash_mod_r,
    compress_hash_truncate,
    compress_point,
    decompress_point,
)
from .curve import (
    CurveDescriptor,
    Point,
    hash_to_g1,
    hash_to_scalar,
    point_from_bytes,
    point_to_bytes,
    scalar_mul,
)
from .errors import (
    DegeneratePair,
    EmptyIdentity,
    MalformedSignature,
    ShortIBSError,
    UnknownHashMode,
    UnknownScheme,
    UnsupportedCurve,
)
from .fieldmath import int_to_bytes
from .pairing import GtElement, pair

SCHEMES = ("sok", "paterson", "sk_elgamal", "sk_schnorr", "xunyi")
SCHEME_TAGS = {name: i for i, name in enumerate(SCHEMES, 1)}

# Which group the first signature component lives in; the second is always G1.
PART1_ROLE = {
    "sok": "g2",
    "paterson": "g2",
    "sk_elgamal": "g2",
    "sk_schnorr": "hash",
    "xunyi": "g1",
}

_MAX_NONCE_TRIES = 16


def normalize_scheme(name: str) -> str:
    key = name.strip().lower().replace("-", "_")
    if key not in SCHEME_TAGS:
        raise UnknownScheme(f"unknown scheme {name!r}; choose from {', '.join(SCHEMES)}")
    return key


def _as_bytes(data) -> bytes:
    return data.encode("utf-8") if isinstance(data, str) else bytes(data)


@dataclass(frozen=True)
class PublicParams:
    descriptor: CurveDescriptor
    g1: Point
    g2: Point
    P1: Point
    P2: Point

    @property
    def r(self) -> int:
        return self.descriptor.r

    def H(self, data: bytes) -> Point:
        return hash_to_g1(_as_bytes(data), self.descriptor, self.g1)


@dataclass(frozen=True)
class MasterSecret:
    x: int


@dataclass(frozen=True)
class UserKey:
    identity: bytes
    C_A: Point
    V_A: Point


@dataclass(frozen=True)
class Signature:
    """A signature tuple plus how it is to be serialized.

    ``part1`` is Z_A (a Point) for every scheme except sk_schnorr, where it
    is the challenge bytes. ``part2`` is S.
    """

    scheme: str
    part1: Point | bytes
    part2: Point
    point_compressed: bool = False
    hash_mode: str = "none"

    def __post_init__(self):
        if self.scheme not in SCHEME_TAGS:
            raise MalformedSignature(f"unknown scheme tag {self.scheme!r}")
        if self.hash_mode not in HASH_MODES:
            raise UnknownHashMode(self.hash_mode)
        if self.hash_mode != "none" and self.scheme != "sk_schnorr":
            raise MalformedSignature("hash compression only applies to sk_schnorr")

    def _encode_point(self, P: Point, role: str) -> bytes:
        if self.point_compressed and role == "g1":
            return compress_point(P).to_bytes()
        return point_to_bytes(P)

    def payload(self) -> tuple[bytes, bytes]:
        role = PART1_ROLE[self.scheme]
        first = self.part1 if role == "hash" else self._encode_point(self.part1, role)
        return first, self._encode_point(self.part2, "g1")

    @property
    def size(self) -> int:
        """Payload bytes, excluding the tag/flag/length framing."""
        return sum(map(len, self.payload()))

    def to_bytes(self) -> bytes:
        flags = int(self.point_compressed) | HASH_MODES.index(self.hash_mode) << 1
        out = bytearray([SCHEME_TAGS[self.scheme], flags])
        for part in self.payload():
            out += struct.pack(">H", len(part)) + part
        return bytes(out)


def _decode_point(data: bytes, params: PublicParams, compressed: bool) -> Point:
    if compressed:
        P = decompress_point(data, params.descriptor)
    else:
        P = point_from_bytes(data, params.descriptor.curve)
    if not scalar_mul(params.r, P).is_infinity:
        raise MalformedSignature("point is not in the order-r subgroup")
    return P


def signature_from_bytes(data: bytes, params: PublicParams) -> Signature:
    try:
        tag, flags = data[0], data[1]
        parts, pos = [], 2
        for _ in range(2):
            (n,) = struct.unpack_from(">H", data, pos)
            pos += 2
            if pos + n > len(data):
                raise MalformedSignature("truncated signature")
            parts.append(bytes(data[pos:pos + n]))
            pos += n
        if pos != len(data):
            raise MalformedSignature("trailing bytes after signature")
        scheme = SCHEMES[tag - 1] if 1 <= tag <= len(SCHEMES) else None
        if scheme is None:
            raise MalformedSignature(f"unknown scheme tag byte {tag}")
        mode_index = flags >> 1 & 0b11
        if flags >> 3 or mode_index >= len(HASH_MODES):
            raise MalformedSignature(f"bad flags byte {flags:#04x}")
        compressed = bool(flags & 1)
        hash_mode = HASH_MODES[mode_index]
        role = PART1_ROLE[scheme]
        if role == "hash":
            if len(parts[0]) != _challenge_width(hash_mode, params):
                raise MalformedSignature("challenge has the wrong length")
            part1 = parts[0]
        else:
            part1 = _decode_point(parts[0], params, compressed and role == "g1")
        part2 = _decode_point(parts[1], params, compressed)
        return Signature(scheme, part1, part2, compressed, hash_mode)
    except MalformedSignature:
        raise
    except (ShortIBSError, ValueError, IndexError, struct.error) as exc:
        raise MalformedSignature(str(exc) or type(exc).__name__) from exc


def _e(P: Point, Q: Point) -> GtElement:
    # e(O, Q) = e(P, O) = 1
    if P.is_infinity or Q.is_infinity:
        q = P.curve.q
        return GtElement.one(q, P.curve.r)
    return pair(P, Q)


def _nonce(params: PublicParams, rng) -> int:
    return rng.randrange(1, params.r)


def _rng(rng):
    return rng if rng is not None else secrets.SystemRandom()


# -- setup / extract ---------------------------------------------------------

def setup(descriptor: CurveDescriptor, rng=None, x: int | None = None) -> tuple[MasterSecret, PublicParams]:
    if not descriptor.executable:
        raise UnsupportedCurve(f"curve type {descriptor.type_tag!r} has no executable pairing")
    if x is None:
        x = _rng(rng).randrange(1, descriptor.r)
    if not 1 <= x < descriptor.r:
        raise ValueError("master secret must lie in [1, r)")
    g = descriptor.generator
    P = scalar_mul(x, g)
    return MasterSecret(x), PublicParams(descriptor, g, g, P, P)


def extract(msk: MasterSecret, params: PublicParams, identity) -> UserKey:
    identity = _as_bytes(identity)
    if not identity:
        raise EmptyIdentity("identity must be non-empty")
    C_A = params.H(identity)
    return UserKey(identity, C_A, scalar_mul(msk.x, C_A))


def check_user_key(params: PublicParams, key: UserKey) -> bool:
    """e(V_A, g2) = e(C_A, P2), and C_A really is H(identity)."""
    if key.C_A != params.H(key.identity):
        return False
    return _e(key.V_A, params.g2) == _e(key.C_A, params.P2)


# -- Sakai-Ohgishi-Kasahara --------------------------------------------------

def sok_sign(params: PublicParams, key: UserKey, m, rng=None, compress: bool = False) -> Signature:
    rng = _rng(rng)
    R = params.H(_as_bytes(m))
    for _ in range(_MAX_NONCE_TRIES):
        k = _nonce(params, rng)
        Z_A = scalar_mul(k, params.g2)
        S = key.V_A + scalar_mul(k, R)
        if not S.is_infinity:
            return Signature("sok", Z_A, S, compress)
    raise RuntimeError("could not find a usable nonce")


def sok_verify(params: PublicParams, identity, m, sig: Signature) -> bool:
    _expect(sig, "sok")
    Z_A, S = sig.part1, sig.part2
    if Z_A.is_infinity:
        return False
    C_A = params.H(_as_bytes(identity))
    R = params.H(_as_bytes(m))
    return _e(S, params.g2) == _e(C_A, params.P2) * _e(R, Z_A)


# -- Paterson ----------------------------------------------------------------

def paterson_sign(params: PublicParams, key: UserKey, m, rng=None, compress: bool = False) -> Signature:
    rng, r = _rng(rng), params.r
    h0 = hash_to_scalar(_as_bytes(m), r)
    for _ in range(_MAX_NONCE_TRIES):
        k = _nonce(params, rng)
        Z_A = scalar_mul(k, params.g2)
        h1 = hash_to_scalar(point_to_bytes(Z_A), r)
        k_inv = pow(k, -1, r)
        S = scalar_mul(k_inv * h0 % r, params.g1) + scalar_mul(k_inv * h1 % r, key.V_A)
        if not S.is_infinity:
            return Signature("paterson", Z_A, S, compress)
    raise RuntimeError("could not find a usable nonce")


def paterson_verify(params: PublicParams, identity, m, sig: Signature) -> bool:
    _expect(sig, "paterson")
    Z_A, S = sig.part1, sig.part2
    if Z_A.is_infinity:
        return False
    r = params.r
    h0 = hash_to_scalar(_as_bytes(m), r)
    h1 = hash_to_scalar(point_to_bytes(Z_A), r)
    C_A = params.H(_as_bytes(identity))
    rhs = _e(params.g1, params.g2) ** h0 * _e(C_A, params.P2) ** h1
    return _e(S, Z_A) == rhs


# -- Sakai-Kasahara, El-Gamal analogue ---------------------------------------

def sk_elgamal_sign(params: PublicParams, key: UserKey, m, rng=None, compress: bool = False) -> Signature:
    rng, r = _rng(rng), params.r
    h = hash_to_scalar(_as_bytes(m), r)
    for _ in range(_MAX_NONCE_TRIES):
        k = _nonce(params, rng)
        Z_A = scalar_mul(k, params.g2)
        x_za = Z_A.x.value % r
        if x_za == 0:
            continue
        k_inv = pow(k, -1, r)
        S = scalar_mul(k_inv * h % r, key.C_A) + scalar_mul(k_inv * x_za % r, key.V_A)
        if not S.is_infinity:
            return Signature("sk_elgamal", Z_A, S, compress)
    raise RuntimeError("could not find a usable nonce")


def sk_elgamal_verify(params: PublicParams, identity, m, sig: Signature) -> bool:
    _expect(sig, "sk_elgamal")
    Z_A, S = sig.part1, sig.part2
    if Z_A.is_infinity:
        return False
    r = params.r
    x_za = Z_A.x.value % r
    if x_za == 0:
        return False
    h = hash_to_scalar(_as_bytes(m), r)
    C_A = params.H(_as_bytes(identity))
    return _e(S, Z_A) == _e(C_A, scalar_mul(h, params.g2) + scalar_mul(x_za, params.P2))


# -- Sakai-Kasahara, Schnorr analogue ----------------------------------------

def _challenge_width(hash_mode: str, params: PublicParams) -> int:
    if hash_mode == "none":
        return 32
    if hash_mode == "truncate20":
        return 20
    if hash_mode == "mod_r":
        return params.descriptor.scalar_bytes
    raise UnknownHashMode(hash_mode)


def schnorr_challenge(m: bytes, value: GtElement, hash_mode: str, params: PublicParams) -> bytes:
    """H1(m || value), shortened as ``hash_mode`` asks."""
    digest = hashlib.sha256(m + value.to_bytes()).digest()
    if hash_mode == "none":
        return digest
    if hash_mode == "truncate20":
        return compress_hash_truncate(digest)
    if hash_mode == "mod_r":
        return int_to_bytes(compress_hash_mod_r(digest, params.r), params.descriptor.scalar_bytes)
    raise UnknownHashMode(hash_mode)


def sk_schnorr_sign(params: PublicParams, key: UserKey, m, rng=None, hash_mode: str = "none",
                    compress: bool = False) -> Signature:
    if hash_mode not in HASH_MODES:
        raise UnknownHashMode(hash_mode)
    rng, r, m = _rng(rng), params.r, _as_bytes(m)
    degenerate_retry = True
    for _ in range(_MAX_NONCE_TRIES):
        k = _nonce(params, rng)
        Z_A = scalar_mul(k, params.g2)
        try:
            e = _e(key.C_A, Z_A)
        except DegeneratePair:
            if not degenerate_retry:
                raise
            degenerate_retry = False
            continue
        c_bytes = schnorr_challenge(m, e, hash_mode, params)
        c = int.from_bytes(c_bytes, "big") % r
        S = scalar_mul(c, key.V_A) + scalar_mul(k, key.C_A)
        if not S.is_infinity:
            return Signature("sk_schnorr", c_bytes, S, compress, hash_mode)
    raise RuntimeError("could not find a usable nonce")


def sk_schnorr_verify(params: PublicParams, identity, m, sig: Signature) -> bool:
    _expect(sig, "sk_schnorr")
    c_bytes, S = sig.part1, sig.part2
    if len(c_bytes) != _challenge_width(sig.hash_mode, params):
        raise MalformedSignature("challenge has the wrong length")
    r = params.r
    c = int.from_bytes(c_bytes, "big") % r
    C_A = params.H(_as_bytes(identity))
    w = _e(S, params.g2) * _e(C_A, scalar_mul(-c % r, params.P2))
    return schnorr_challenge(_as_bytes(m), w, sig.hash_mode, params) == c_bytes


# -- Xun-Yi ------------------------------------------------------------------

def xunyi_sign(params: PublicParams, key: UserKey, m, rng=None, compress: bool = False) -> Signature:
    rng, r, m = _rng(rng), params.r, _as_bytes(m)
    for _ in range(_MAX_NONCE_TRIES):
        k = _nonce(params, rng)
        Z_A = scalar_mul(k, params.g1)
        h = hash_to_scalar(m + point_to_bytes(Z_A), r)
        S = scalar_mul(k, params.P1) + scalar_mul(h, key.V_A)
        if not S.is_infinity:
            return Signature("xunyi", Z_A, S, compress)
    raise RuntimeError("could not find a usable nonce")


def xunyi_verify(params: PublicParams, identity, m, sig: Signature) -> bool:
    _expect(sig, "xunyi")
    Z_A, S = sig.part1, sig.part2
    if Z_A.is_infinity:
        return False
    h = hash_to_scalar(_as_bytes(m) + point_to_bytes(Z_A), params.r)
    C_A = params.H(_as_bytes(identity))
    return _e(S, params.g2) == _e(Z_A + scalar_mul(h, C_A), params.P2)


# -- dispatch ----------------------------------------------------------------

def _expect(sig: Signature, scheme: str) -> None:
    if sig.scheme != scheme:
        raise MalformedSignature(f"expected a {scheme} signature, got {sig.scheme}")
    role = PART1_ROLE[scheme]
    points = [sig.part2] if role == "hash" else [sig.part1, sig.part2]
    if role == "hash" and not isinstance(sig.part1, (bytes, bytearray)):
        raise MalformedSignature("sk_schnorr challenge must be bytes")
    for P in points:
        if not isinstance(P, Point) or not P.is_on_curve():
            raise MalformedSignature("signature point is not on the curve")


_SIGNERS = {
    "sok": sok_sign,
    "paterson": paterson_sign,
    "sk_elgamal": sk_elgamal_sign,
    "sk_schnorr": sk_schnorr_sign,
    "xunyi": xunyi_sign,
}
_VERIFIERS = {
    "sok": sok_verify,
    "paterson": paterson_verify,
    "sk_elgamal": sk_elgamal_verify,
    "sk_schnorr": sk_schnorr_verify,
    "xunyi": xunyi_verify,
}


def sign(params: PublicParams, key: UserKey, m, scheme: str, rng=None, compress: bool = False,
         hash_mode: str = "none") -> Signature:
    scheme = normalize_scheme(scheme)
    if scheme == "sk_schnorr":
        return sk_schnorr_sign(params, key, m, rng, hash_mode=hash_mode, compress=compress)
    if hash_mode != "none":
        raise MalformedSignature("hash compression only applies to sk_schnorr")
    return _SIGNERS[scheme](params, key, m, rng, compress=compress)


def verify(params: PublicParams, identity, m, sig: Signature) -> bool:
    return _VERIFIERS[sig.scheme](params, identity, m, sig)
