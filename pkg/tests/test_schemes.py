import random
from dataclasses import replace

import pytest

from shortibs.curve import random_curve_point, scalar_mul, shipped_descriptor
from shortibs.errors import EmptyIdentity, MalformedSignature, UnknownHashMode, UnknownScheme, UnsupportedCurve
from shortibs.schemes import (
    SCHEMES,
    Signature,
    check_user_key,
    extract,
    paterson_verify,
    setup,
    sign,
    signature_from_bytes,
    verify,
)

MSG = b"transfer 10 coins to bob"


def _perturb_z(sig, params):
    if sig.scheme == "sk_schnorr":
        c = bytearray(sig.part1)
        c[-1] ^= 1
        return replace(sig, part1=bytes(c))
    return replace(sig, part1=sig.part1 + params.g2)


@pytest.mark.parametrize("scheme", SCHEMES)
def test_completeness(scheme, desk_params, desk_alice):
    _, params = desk_params
    rng = random.Random(1)
    for i in range(10):
        m = MSG + bytes([i])
        sig = sign(params, desk_alice, m, scheme, rng)
        assert verify(params, desk_alice.identity, m, sig)


@pytest.mark.parametrize("scheme", SCHEMES)
def test_perturbations_rejected(scheme, desk_params, desk_alice):
    _, params = desk_params
    rng = random.Random(2)
    sig = sign(params, desk_alice, MSG, scheme, rng)
    flipped = bytes([MSG[0] ^ 1]) + MSG[1:]
    assert not verify(params, desk_alice.identity, flipped, sig)
    assert not verify(params, desk_alice.identity, MSG, replace(sig, part2=sig.part2 + params.g1))
    assert not verify(params, desk_alice.identity, MSG, _perturb_z(sig, params))
    assert not verify(params, b"mallory@example.org", MSG, sig)


@pytest.mark.parametrize("scheme", SCHEMES)
def test_wire_roundtrip(scheme, desk_params, desk_alice):
    _, params = desk_params
    rng = random.Random(3)
    for compress in (False, True):
        sig = sign(params, desk_alice, MSG, scheme, rng, compress=compress)
        data = sig.to_bytes()
        assert len(data) == 2 + 4 + sig.size
        back = signature_from_bytes(data, params)
        assert back == sig
        assert verify(params, desk_alice.identity, MSG, back)


def test_payload_sizes_desk_scale(desk_params, desk_alice):
    # 64-bit q: 8-byte coordinates, 9-byte compressed points
    _, params = desk_params
    rng = random.Random(4)
    expect = {"sok": (32, 25), "paterson": (32, 25), "sk_elgamal": (32, 25), "xunyi": (32, 18)}
    for scheme, (full, short) in expect.items():
        assert sign(params, desk_alice, MSG, scheme, rng).size == full
        assert sign(params, desk_alice, MSG, scheme, rng, compress=True).size == short
    assert sign(params, desk_alice, MSG, "sk_schnorr", rng).size == 32 + 16
    assert sign(params, desk_alice, MSG, "sk_schnorr", rng, hash_mode="truncate20", compress=True).size == 29


@pytest.mark.parametrize("mode,width", [("none", 32), ("truncate20", 20), ("mod_r", 4)])
def test_schnorr_hash_modes(mode, width, desk_params, desk_alice):
    _, params = desk_params
    assert params.descriptor.scalar_bytes == (params.r.bit_length() + 7) // 8 == 4
    sig = sign(params, desk_alice, MSG, "sk_schnorr", random.Random(5), hash_mode=mode)
    assert len(sig.part1) == width
    assert verify(params, desk_alice.identity, MSG, sig)
    if mode == "mod_r":
        assert int.from_bytes(sig.part1, "big") < params.r
    back = signature_from_bytes(sig.to_bytes(), params)
    assert back.hash_mode == mode


def test_malformed_bytes(desk_params, desk_alice):
    _, params = desk_params
    sig = sign(params, desk_alice, MSG, "sok", random.Random(6), compress=True)
    data = sig.to_bytes()
    bad_inputs = [
        b"",
        data[:-1],
        data + b"\x00",
        bytes([9]) + data[1:],
        data[:1] + bytes([0x80]) + data[2:],
    ]
    # a compressed S with an invalid prefix
    tail = bytearray(data)
    tail[-9] = 0x07
    bad_inputs.append(bytes(tail))
    for bad in bad_inputs:
        with pytest.raises(MalformedSignature):
            signature_from_bytes(bad, params)


def test_point_outside_subgroup_rejected(desk_params, desk_alice, desk_desc):
    _, params = desk_params
    sig = sign(params, desk_alice, MSG, "sok", random.Random(7))
    # a curve point with order not dividing r
    rng = random.Random(8)
    while True:
        P = random_curve_point(desk_desc.curve, rng)
        if not scalar_mul(desk_desc.r, P).is_infinity:
            break
    with pytest.raises(MalformedSignature):
        signature_from_bytes(replace(sig, part2=P).to_bytes(), params)


def test_zero_z_is_rejected(desk_params, desk_alice):
    _, params = desk_params
    for scheme in ("sok", "paterson", "sk_elgamal", "xunyi"):
        sig = sign(params, desk_alice, MSG, scheme, random.Random(9))
        forged = replace(sig, part1=params.g1.curve.infinity)
        assert not verify(params, desk_alice.identity, MSG, forged)


def test_fresh_nonces(desk_params, desk_alice):
    _, params = desk_params
    rng = random.Random(10)
    for scheme in SCHEMES:
        a = sign(params, desk_alice, MSG, scheme, rng)
        b = sign(params, desk_alice, MSG, scheme, rng)
        assert a.to_bytes() != b.to_bytes()
        c = sign(params, desk_alice, MSG, scheme, random.Random(99))
        d = sign(params, desk_alice, MSG, scheme, random.Random(99))
        assert c == d


def test_default_rng_signs(desk_params, desk_alice):
    _, params = desk_params
    sig = sign(params, desk_alice, MSG, "xunyi")
    assert verify(params, desk_alice.identity, MSG, sig)


def test_setup_and_extract(desk_desc):
    msk, params = setup(desk_desc, x=1)
    assert params.P1 == params.g1 == desk_desc.generator
    key = extract(msk, params, "bob")
    assert key.identity == b"bob"
    assert key.V_A == key.C_A
    assert check_user_key(params, key)
    msk, params = setup(desk_desc, random.Random(11))
    key = extract(msk, params, b"carol")
    assert check_user_key(params, key)
    assert not check_user_key(params, replace(key, V_A=key.V_A + params.g1))
    assert not check_user_key(params, replace(key, identity=b"dave"))
    with pytest.raises(EmptyIdentity):
        extract(msk, params, b"")
    with pytest.raises(ValueError):
        setup(desk_desc, x=0)


def test_unsupported_curves():
    for name in ("d159", "f", "g149", "a1", "e"):
        with pytest.raises(UnsupportedCurve):
            setup(shipped_descriptor(name))


def test_bad_scheme_and_mode(desk_params, desk_alice):
    _, params = desk_params
    with pytest.raises(UnknownScheme):
        sign(params, desk_alice, MSG, "hess")
    with pytest.raises(MalformedSignature):
        sign(params, desk_alice, MSG, "sok", hash_mode="truncate20")
    with pytest.raises(UnknownHashMode):
        sign(params, desk_alice, MSG, "sk_schnorr", hash_mode="crc32")
    assert verify(params, desk_alice.identity, MSG, sign(params, desk_alice, MSG, "SK-ElGamal", random.Random(1)))


def test_scheme_mismatch(desk_params, desk_alice):
    _, params = desk_params
    sig = sign(params, desk_alice, MSG, "sok", random.Random(12))
    with pytest.raises(MalformedSignature):
        paterson_verify(params, desk_alice.identity, MSG, sig)
    with pytest.raises(MalformedSignature):
        Signature("sok", sig.part1, sig.part2, hash_mode="mod_r")


@pytest.mark.slow
@pytest.mark.parametrize("scheme", SCHEMES)
def test_full_size_roundtrip(scheme, a_params):
    msk, params = a_params
    key = extract(msk, params, b"alice@example.org")
    sig = sign(params, key, MSG, scheme, random.Random(13), compress=True, hash_mode="truncate20" if scheme == "sk_schnorr" else "none")
    assert verify(params, key.identity, MSG, sig)
    assert not verify(params, key.identity, MSG + b"!", sig)
