"""Identity-based signatures over a symmetric Tate pairing, with point and hash compression."""

from .codec import compress_point, decompress_point, size_report
from .curve import (
    CurveDescriptor,
    Point,
    generate_type_a,
    hash_to_g1,
    load_descriptor,
    random_g1,
    shipped_descriptor,
)
from .pairing import GtElement, pair
from .schemes import (
    SCHEMES,
    MasterSecret,
    PublicParams,
    Signature,
    UserKey,
    extract,
    setup,
    sign,
    signature_from_bytes,
    verify,
)

__version__ = "0.1.0"

__all__ = [
    "CurveDescriptor", "GtElement", "MasterSecret", "Point", "PublicParams", "SCHEMES",
    "Signature", "UserKey", "compress_point", "decompress_point", "extract",
    "generate_type_a", "hash_to_g1", "load_descriptor", "pair", "random_g1",
    "setup", "shipped_descriptor", "sign", "signature_from_bytes", "size_report", "verify",
]
