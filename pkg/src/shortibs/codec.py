"""Point compression, challenge-hash shortening, and the signature size calculator."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Sequence

from .curve import (
    SHIPPED_CURVES,
    Curve,
    CurveDescriptor,
    Point,
    shipped_descriptor,
)
from .errors import (
    BadLength,
    InfinityNotCompressible,
    InvalidPrefix,
    NotOnCurve,
    UnknownCurve,
    UnknownHashMode,
    UnknownScheme,
)
from .fieldmath import byte_width, int_to_bytes, legendre, sqrt_mod_p

EVEN_PREFIX = 0x02
ODD_PREFIX = 0x03

HASH_MODES = ("none", "truncate20", "mod_r")
TRUNCATED_HASH_BYTES = 20
DIGEST_BYTES = 32


def _curve_of(where) -> Curve:
    return where.curve if isinstance(where, CurveDescriptor) else where


@dataclass(frozen=True)
class CompressedPoint:
    prefix: int
    x_bytes: bytes

    def to_bytes(self) -> bytes:
        return bytes([self.prefix]) + self.x_bytes

    @classmethod
    def from_bytes(cls, data: bytes) -> CompressedPoint:
        if len(data) < 2:
            raise BadLength("compressed point needs a prefix and an X coordinate")
        return cls(data[0], bytes(data[1:]))

    def to_hex(self) -> str:
        # "2"/"3" followed by X in unpadded hex
        return f"{self.prefix & 0xF:x}{int.from_bytes(self.x_bytes, 'big'):x}"

    @classmethod
    def from_hex(cls, text: str, width: int) -> CompressedPoint:
        text = text.strip()
        if len(text) < 2 or text[0] not in "23":
            raise InvalidPrefix(f"hex compressed point must start with 2 or 3: {text[:1]!r}")
        x = int(text[1:], 16)
        if x.bit_length() > 8 * width:
            raise BadLength("X coordinate wider than the field")
        return cls(int(text[0]), int_to_bytes(x, width))

    def __len__(self):
        return 1 + len(self.x_bytes)


def compress_point(P: Point, descriptor=None) -> CompressedPoint:
    if P.is_infinity:
        raise InfinityNotCompressible("the point at infinity has no affine X")
    curve = P.curve if descriptor is None else _curve_of(descriptor)
    prefix = EVEN_PREFIX if P.y.value % 2 == 0 else ODD_PREFIX
    return CompressedPoint(prefix, int_to_bytes(P.x.value, byte_width(curve.q)))


def decompress_point(c: CompressedPoint | bytes, descriptor) -> Point:
    """Recover Y from X and the parity prefix.

    Both square roots y and q - y are candidates; the one whose parity
    matches the prefix is kept.
    """
    if not isinstance(c, CompressedPoint):
        c = CompressedPoint.from_bytes(c)
    if c.prefix not in (EVEN_PREFIX, ODD_PREFIX):
        raise InvalidPrefix(f"prefix must be 0x02 or 0x03, got {c.prefix:#04x}")
    curve = _curve_of(descriptor)
    if len(c.x_bytes) != byte_width(curve.q):
        raise BadLength(f"X must be {byte_width(curve.q)} bytes, got {len(c.x_bytes)}")
    x = int.from_bytes(c.x_bytes, "big")
    if x >= curve.q:
        raise NotOnCurve("X coordinate is not reduced mod q")
    y_squared = curve.rhs(x)
    if legendre(y_squared, curve.q) == -1:
        raise NotOnCurve(f"no point with X = {x}")
    y = sqrt_mod_p(y_squared, curve.q)
    if y % 2 != c.prefix & 1:
        y = (curve.q - y) % curve.q
    return curve.point(x, y)


def compress_hash_truncate(digest: bytes) -> bytes:
    if len(digest) != DIGEST_BYTES:
        raise BadLength(f"expected a {DIGEST_BYTES}-byte digest, got {len(digest)}")
    return digest[-TRUNCATED_HASH_BYTES:]


def compress_hash_mod_r(digest: bytes, r: int) -> int:
    return int.from_bytes(digest, "big") % r


# -- size calculator ---------------------------------------------------------

# Component kinds making up each scheme's signature, in order.
SCHEME_SHAPES = {
    "sok": ("g2", "g1"),
    "paterson": ("g2", "g1"),
    "sk_elgamal": ("g2", "g1"),
    "sk_schnorr": ("hash", "g1"),
    "xunyi": ("g1", "g1"),
    "cha_cheon": ("g1", "g1"),
    "paterson_schuldt": ("g1", "g1", "g1"),
}
SIZE_SCHEMES = tuple(SCHEME_SHAPES)

SCHEME_TITLES = {
    "sok": "Sakai-Ohgishi-Kasahara",
    "paterson": "Paterson",
    "sk_elgamal": "Sakai-Kasahara El-Gamal",
    "sk_schnorr": "Sakai-Kasahara Schnorr",
    "xunyi": "Xun-Yi",
    "cha_cheon": "Cha-Cheon",
    "paterson_schuldt": "Paterson-Schuldt",
}

# The seven curves compared column by column in the signature tables.
TABLE_CURVES = ("a", "a1", "d159", "d201", "d224", "f", "g149")


def curve_label(desc: CurveDescriptor) -> str:
    if desc.name == "g149":
        return "g"
    return desc.name or desc.type_tag


def normalize_scheme(name: str) -> str:
    key = name.strip().lower().replace("-", "_")
    if key not in SCHEME_SHAPES:
        raise UnknownScheme(f"unknown scheme {name!r}; choose from {', '.join(SIZE_SCHEMES)}")
    return key


def _as_descriptor(d) -> CurveDescriptor:
    if isinstance(d, CurveDescriptor):
        return d
    try:
        return shipped_descriptor(d)
    except UnknownCurve:
        raise UnknownCurve(f"unknown curve {d!r}; choose from {', '.join(SHIPPED_CURVES)}") from None


def component_size(kind: str, desc: CurveDescriptor, compressed: bool, hash_mode: str = "truncate20") -> int:
    sizes = desc.element_sizes
    if kind == "g1":
        return desc.compressed_g1_bytes if compressed else sizes.g1
    if kind == "g2":
        # G2 elements are never compressed
        return sizes.g2
    if kind == "hash":
        if not compressed or hash_mode == "none":
            return DIGEST_BYTES
        if hash_mode == "truncate20":
            return TRUNCATED_HASH_BYTES
        if hash_mode == "mod_r":
            return sizes.zr
        raise UnknownHashMode(hash_mode)
    raise ValueError(f"unknown component kind {kind!r}")


@dataclass(frozen=True)
class SizeRow:
    scheme: str
    curve: str
    uncompressed_bytes: int
    compressed_bytes: int | None
    uncompressed_parts: tuple
    compressed_parts: tuple | None = None


def size_report(
    descriptors: Iterable = TABLE_CURVES,
    schemes: Iterable[str] = SIZE_SCHEMES,
    compressed: bool = True,
    hash_mode: str = "truncate20",
) -> list[SizeRow]:
    """Signature sizes in payload bytes for every (scheme, curve) pair.

    Rows come out scheme-major. With ``compressed`` every G1 component is
    counted as X plus a parity byte and the Sakai-Kasahara Schnorr challenge
    is shortened according to ``hash_mode``.
    """
    if hash_mode not in HASH_MODES:
        raise UnknownHashMode(hash_mode)
    descs = [_as_descriptor(d) for d in descriptors]
    rows = []
    for scheme in schemes:
        shape = SCHEME_SHAPES[normalize_scheme(scheme)]
        for desc in descs:
            raw = tuple(component_size(k, desc, False) for k in shape)
            packed = tuple(component_size(k, desc, True, hash_mode) for k in shape) if compressed else None
            rows.append(SizeRow(
                scheme=normalize_scheme(scheme),
                curve=curve_label(desc),
                uncompressed_bytes=sum(raw),
                compressed_bytes=sum(packed) if packed else None,
                uncompressed_parts=raw,
                compressed_parts=packed,
            ))
    return rows


def _cell(parts: tuple) -> str:
    if len(set(parts)) == 1 and len(parts) > 2:
        return f"{len(parts)} * {parts[0]} = {sum(parts)}"
    return f"{' + '.join(map(str, parts))} = {sum(parts)}"


def format_size_table(rows: Sequence[SizeRow], breakdown: bool = False) -> str:
    curves = list(dict.fromkeys(row.curve for row in rows))
    schemes = list(dict.fromkeys(row.scheme for row in rows))
    lookup = {(row.scheme, row.curve): row for row in rows}
    with_compressed = any(row.compressed_bytes is not None for row in rows)

    def cell(row: SizeRow, packed: bool) -> str:
        if packed:
            return _cell(row.compressed_parts) if breakdown else str(row.compressed_bytes)
        return _cell(row.uncompressed_parts) if breakdown else str(row.uncompressed_bytes)

    table = [["scheme", "size"] + curves]
    for scheme in schemes:
        table.append([SCHEME_TITLES[scheme], "raw"] + [cell(lookup[scheme, c], False) for c in curves])
        if with_compressed:
            table.append(["", "compressed"] + [cell(lookup[scheme, c], True) for c in curves])
    widths = [max(len(r[i]) for r in table) for i in range(len(table[0]))]
    lines = []
    for i, r in enumerate(table):
        lines.append("  ".join(v.ljust(w) if j < 2 else v.rjust(w) for j, (v, w) in enumerate(zip(r, widths))).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def size_rows_csv(rows: Sequence[SizeRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["scheme", "curve", "uncompressed_bytes", "compressed_bytes"])
    for row in rows:
        writer.writerow([row.scheme, row.curve, row.uncompressed_bytes,
                         "" if row.compressed_bytes is None else row.compressed_bytes])
    return buf.getvalue()


def element_table(descriptors: Iterable = SHIPPED_CURVES) -> list[tuple]:
    """(curve, q bits, r bits, Zr, G1, G2, GT) in bytes, one tuple per descriptor."""
    out = []
    for d in descriptors:
        desc = _as_descriptor(d)
        s = desc.element_sizes
        out.append((desc.name or desc.type_tag, desc.q_bits, desc.r_bits, s.zr, s.g1, s.g2, s.gt))
    return out


def format_element_table(descriptors: Iterable = SHIPPED_CURVES) -> str:
    header = ("curve", "q/r bits", "Zr", "G1", "G2", "GT")
    body = [(name, f"{qb}/{rb}", *map(str, sizes)) for name, qb, rb, *sizes in element_table(descriptors)]
    widths = [max(len(r[i]) for r in [header, *body]) for i in range(len(header))]
    lines = ["  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in [header, *body]]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"
