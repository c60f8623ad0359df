"""Command-line front end.

    shortibs gen-params --rbits 160 --qbits 512 --seed 1 --out my.properties
    shortibs setup   --params a --out-keystore pkg.json
    shortibs extract --keystore pkg.json --identity alice@example.org
    shortibs sign    --keystore pkg.json --identity alice@example.org \\
                     --scheme sk-schnorr --message-file msg.txt --compress \\
                     --hash-mode truncate20 --out sig.bin
    shortibs verify  --params pkg.public.json --identity alice@example.org \\
                     --scheme sk-schnorr --message-file msg.txt --signature-file sig.bin
    shortibs sizes   --curves all --schemes all --compressed
    shortibs bench   --params a --iterations 5

Keystores are plaintext JSON with hex-encoded secrets. They are not
encrypted and are meant for experimentation only.

verify exits 0 on accept, 1 on reject and 2 on malformed input.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import codec
from .bench import format_bench, run_benchmark
from .curve import (
    SHIPPED_CURVES,
    CurveDescriptor,
    dump_descriptor,
    generate_type_a,
    load_descriptor,
    point_from_bytes,
    point_to_bytes,
    resolve_descriptor,
)
from .errors import GenerationTimeout, MalformedSignature, ShortIBSError
from .schemes import (
    SCHEMES,
    MasterSecret,
    PublicParams,
    UserKey,
    check_user_key,
    extract,
    normalize_scheme,
    setup,
    sign,
    signature_from_bytes,
    verify,
)

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_MALFORMED = 2

KEYSTORE_FORMAT = "shortibs-keystore/1"
PUBLIC_FORMAT = "shortibs-public/1"


class InputError(Exception):
    """Bad files or arguments; reported with exit status 2."""


def _rng(seed):
    return random.Random(seed) if seed is not None else None


def _curve_block(desc: CurveDescriptor, ref: str) -> dict:
    return {"ref": ref, "text": dump_descriptor(desc)}


def _descriptor_from_block(block: dict) -> CurveDescriptor:
    return load_descriptor(block["text"], name=block.get("ref"))


def _read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _params_from_doc(doc: dict) -> PublicParams:
    """Rebuild public parameters from a keystore or a public-parameters file."""
    desc = _descriptor_from_block(doc["curve"])
    curve = desc.curve
    if "public" in doc:
        P1 = point_from_bytes(bytes.fromhex(doc["public"]["P1"]), curve)
        P2 = point_from_bytes(bytes.fromhex(doc["public"]["P2"]), curve)
    else:
        master = next(r for r in doc["records"] if r["role"] == "master")
        P1 = P2 = point_from_bytes(bytes.fromhex(master["public"]), curve)
    g = desc.generator
    return PublicParams(desc, g, g, P1, P2)


def _load_keystore(path):
    doc = _read_json(path)
    if doc.get("format") != KEYSTORE_FORMAT:
        raise InputError(f"{path} is not a keystore")
    try:
        return doc, _params_from_doc(doc)
    except (KeyError, StopIteration, ValueError) as exc:
        raise InputError(f"corrupt keystore {path}: {exc}") from exc


def _user_key(doc: dict, params: PublicParams, identity: bytes) -> UserKey:
    for rec in doc["records"]:
        if rec["role"] == "user" and bytes.fromhex(rec["identity"]) == identity:
            curve = params.descriptor.curve
            key = UserKey(identity,
                          point_from_bytes(bytes.fromhex(rec["public"]), curve),
                          point_from_bytes(bytes.fromhex(rec["secret"]), curve))
            if not check_user_key(params, key):
                raise InputError(f"user key for {identity!r} fails the pairing consistency check")
            return key
    raise InputError(f"no key for identity {identity.decode(errors='replace')!r}; run extract first")


def _write_json(path, doc: dict) -> None:
    Path(path).write_text(json.dumps(doc, indent=2) + "\n")


def _split(value: str, universe) -> list[str]:
    if value.strip().lower() == "all":
        return list(universe)
    return [v for v in (p.strip() for p in value.split(",")) if v]


# -- commands ----------------------------------------------------------------

def cmd_gen_params(args) -> int:
    try:
        desc = generate_type_a(args.rbits, args.qbits, _rng(args.seed), args.max_attempts)
    except GenerationTimeout as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    text = dump_descriptor(desc)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return EXIT_OK


def cmd_setup(args) -> int:
    desc = resolve_descriptor(args.params)
    msk, params = setup(desc, _rng(args.seed))
    curve = _curve_block(desc, args.params)
    keystore = {
        "format": KEYSTORE_FORMAT,
        "curve": curve,
        "records": [{
            "role": "master",
            "secret": msk.x.to_bytes(desc.scalar_bytes, "big").hex(),
            "public": point_to_bytes(params.P1).hex(),
        }],
    }
    _write_json(args.out_keystore, keystore)
    public_path = args.out_public or str(Path(args.out_keystore).with_suffix("")) + ".public.json"
    _write_json(public_path, {
        "format": PUBLIC_FORMAT,
        "curve": curve,
        "public": {"P1": point_to_bytes(params.P1).hex(), "P2": point_to_bytes(params.P2).hex()},
    })
    print(f"wrote {args.out_keystore} and {public_path}", file=sys.stderr)
    return EXIT_OK


def cmd_extract(args) -> int:
    doc, params = _load_keystore(args.keystore)
    master = next((r for r in doc["records"] if r["role"] == "master"), None)
    if master is None:
        raise InputError("keystore holds no master secret")
    identity = args.identity.encode()
    key = extract(MasterSecret(int(master["secret"], 16)), params, identity)
    doc["records"] = [r for r in doc["records"]
                      if not (r["role"] == "user" and bytes.fromhex(r["identity"]) == identity)]
    doc["records"].append({
        "role": "user",
        "identity": identity.hex(),
        "secret": point_to_bytes(key.V_A).hex(),
        "public": point_to_bytes(key.C_A).hex(),
    })
    _write_json(args.keystore, doc)
    print(f"extracted key for {args.identity}", file=sys.stderr)
    return EXIT_OK


def _read_message(path) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read message: {exc}") from exc


def cmd_sign(args) -> int:
    doc, params = _load_keystore(args.keystore)
    key = _user_key(doc, params, args.identity.encode())
    message = _read_message(args.message_file)
    sig = sign(params, key, message, args.scheme, _rng(args.seed),
               compress=args.compress, hash_mode=args.hash_mode)
    blob = sig.to_bytes()
    if args.out in (None, "-"):
        sys.stdout.buffer.write(blob)
    else:
        Path(args.out).write_bytes(blob)
    print(f"{sig.scheme} signature: {sig.size} payload bytes ({len(blob)} on the wire)", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    doc = _read_json(args.params)
    try:
        params = _params_from_doc(doc)
    except (KeyError, StopIteration, ValueError) as exc:
        raise InputError(f"{args.params} does not hold public parameters: {exc}") from exc
    message = _read_message(args.message_file)
    try:
        blob = Path(args.signature_file).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read signature: {exc}") from exc
    sig = signature_from_bytes(blob, params)
    if sig.scheme != normalize_scheme(args.scheme):
        raise MalformedSignature(f"signature is {sig.scheme}, not {normalize_scheme(args.scheme)}")
    if verify(params, args.identity.encode(), message, sig):
        print("accept")
        return EXIT_OK
    print("reject")
    return EXIT_REJECT


def cmd_sizes(args) -> int:
    curves = _split(args.curves, codec.TABLE_CURVES if not args.elements else SHIPPED_CURVES)
    if args.elements:
        sys.stdout.write(codec.format_element_table(curves))
        return EXIT_OK
    schemes = [codec.normalize_scheme(s) for s in _split(args.schemes, codec.SIZE_SCHEMES)]
    rows = codec.size_report(curves, schemes, compressed=args.compressed, hash_mode=args.hash_mode)
    if args.csv:
        sys.stdout.write(codec.size_rows_csv(rows))
    else:
        sys.stdout.write(codec.format_size_table(rows, breakdown=args.breakdown))
    return EXIT_OK


def cmd_bench(args) -> int:
    desc = resolve_descriptor(args.params)
    schemes = [normalize_scheme(s) for s in _split(args.schemes, SCHEMES)]
    rows = run_benchmark(desc, schemes, args.iterations, _rng(args.seed))
    sys.stdout.write(format_bench(rows))
    return EXIT_OK


# -- argument parsing --------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shortibs", description="Short identity-based signatures.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-params", help="generate type a curve parameters")
    p.add_argument("--rbits", type=int, required=True)
    p.add_argument("--qbits", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--max-attempts", type=int, default=200_000)
    p.set_defaults(func=cmd_gen_params)

    p = sub.add_parser("setup", help="create a master secret and public parameters")
    p.add_argument("--params", required=True, help="parameter file path or bundled curve name")
    p.add_argument("--out-keystore", required=True)
    p.add_argument("--out-public", help="defaults to <keystore>.public.json")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_setup)

    p = sub.add_parser("extract", help="derive a user key and store it in the keystore")
    p.add_argument("--keystore", required=True)
    p.add_argument("--identity", required=True)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("sign", help="sign a message")
    p.add_argument("--keystore", required=True)
    p.add_argument("--identity", required=True)
    p.add_argument("--scheme", required=True, choices=[s.replace("_", "-") for s in SCHEMES])
    p.add_argument("--message-file", required=True)
    p.add_argument("--compress", action="store_true", help="compress G1 points")
    p.add_argument("--hash-mode", default="none", choices=codec.HASH_MODES)
    p.add_argument("--out", help="signature file (default: stdout)")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_sign)

    p = sub.add_parser("verify", help="verify a signature")
    p.add_argument("--params", required=True, help="public parameters or keystore JSON")
    p.add_argument("--identity", required=True)
    p.add_argument("--scheme", required=True, choices=[s.replace("_", "-") for s in SCHEMES])
    p.add_argument("--message-file", required=True)
    p.add_argument("--signature-file", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sizes", help="print signature size tables")
    p.add_argument("--curves", default="all")
    p.add_argument("--schemes", default="all")
    p.add_argument("--compressed", action="store_true")
    p.add_argument("--hash-mode", default="truncate20", choices=codec.HASH_MODES)
    p.add_argument("--csv", action="store_true", help="comma-separated rows")
    p.add_argument("--breakdown", action="store_true", help="show per-component sums")
    p.add_argument("--elements", action="store_true", help="group element sizes instead")
    p.set_defaults(func=cmd_sizes)

    p = sub.add_parser("bench", help="time sign and verify")
    p.add_argument("--params", required=True)
    p.add_argument("--schemes", default="all")
    p.add_argument("--iterations", type=int, default=10)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "gen-params" and not 16 <= args.rbits < args.qbits:
        parser.error("need 16 <= --rbits < --qbits")
    if args.command == "bench" and args.iterations < 0:
        parser.error("--iterations must be >= 0")
    try:
        return args.func(args)
    except (InputError, ShortIBSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
