import csv
import io
import json

import pytest

from shortibs.cli import main
from shortibs.codec import SIZE_SCHEMES, TABLE_CURVES
from shortibs.curve import load_descriptor

CLI_SCHEMES = ("sok", "paterson", "sk-elgamal", "sk-schnorr", "xunyi")


@pytest.fixture(scope="module")
def world(tmp_path_factory):
    """A 64-bit curve file, a keystore with alice's key, and a message."""
    d = tmp_path_factory.mktemp("cli")
    params = d / "desk.properties"
    assert main(["gen-params", "--rbits", "32", "--qbits", "64", "--seed", "3", "--out", str(params)]) == 0
    ks = d / "ks.json"
    assert main(["setup", "--params", str(params), "--out-keystore", str(ks), "--seed", "5"]) == 0
    assert main(["extract", "--keystore", str(ks), "--identity", "alice@example.org"]) == 0
    msg = d / "msg.txt"
    msg.write_bytes(b"hello world\n")
    return d, ks, d / "ks.public.json", msg


def _sign(world, scheme, out, *extra):
    d, ks, _, msg = world
    return main(["sign", "--keystore", str(ks), "--identity", "alice@example.org", "--scheme", scheme,
                 "--message-file", str(msg), "--out", str(out), *extra])


def _verify(world, scheme, sig, identity="alice@example.org", msg=None, params=None):
    d, ks, pub, m = world
    return main(["verify", "--params", str(params or pub), "--identity", identity, "--scheme", scheme,
                 "--message-file", str(msg or m), "--signature-file", str(sig)])


@pytest.mark.parametrize("scheme", CLI_SCHEMES)
@pytest.mark.parametrize("flags", [[], ["--compress"]])
def test_pipeline(world, scheme, flags, capsys):
    d = world[0]
    sig = d / f"{scheme}{len(flags)}.sig"
    assert _sign(world, scheme, sig, *flags) == 0
    assert _verify(world, scheme, sig) == 0
    assert capsys.readouterr().out.strip().endswith("accept")
    assert _verify(world, scheme, sig, params=world[1]) == 0
    assert _verify(world, scheme, sig, identity="bob@example.org") == 1
    other = d / "other.txt"
    other.write_bytes(b"hello world?\n")
    assert _verify(world, scheme, sig, msg=other) == 1


def test_public_file_holds_no_secrets(world):
    doc = json.loads(world[2].read_text())
    assert doc["format"] == "shortibs-public/1"
    assert "records" not in doc and "secret" not in json.dumps(doc)


def test_verify_malformed_inputs(world, capsys):
    d = world[0]
    sig = d / "ok.sig"
    assert _sign(world, "sok", sig) == 0
    truncated = d / "trunc.sig"
    truncated.write_bytes(sig.read_bytes()[:-3])
    assert _verify(world, "sok", truncated) == 2
    assert _verify(world, "paterson", sig) == 2
    assert _verify(world, "sok", d / "missing.sig") == 2
    garbage = d / "garbage.json"
    garbage.write_text("{not json")
    assert _verify(world, "sok", sig, params=garbage) == 2
    assert "error" in capsys.readouterr().err


def test_sign_unknown_identity(world):
    d, ks, _, msg = world
    code = main(["sign", "--keystore", str(ks), "--identity", "nobody", "--scheme", "sok",
                 "--message-file", str(msg), "--out", str(d / "y.sig")])
    assert code == 2


def test_schnorr_hash_modes(world):
    d = world[0]
    for mode in ("none", "truncate20", "mod_r"):
        sig = d / f"schnorr-{mode}.sig"
        assert _sign(world, "sk-schnorr", sig, "--hash-mode", mode, "--compress") == 0
        assert _verify(world, "sk-schnorr", sig) == 0


def test_sign_rejects_hash_mode_for_other_schemes(world):
    assert _sign(world, "sok", world[0] / "z.sig", "--hash-mode", "truncate20") == 2


def test_seeded_signing_is_reproducible(world):
    d = world[0]
    a, b = d / "a.sig", d / "b.sig"
    assert _sign(world, "xunyi", a, "--seed", "1") == 0
    assert _sign(world, "xunyi", b, "--seed", "1") == 0
    assert a.read_bytes() == b.read_bytes()


def test_gen_params_deterministic(tmp_path):
    a, b = tmp_path / "a.properties", tmp_path / "b.properties"
    for out in (a, b):
        assert main(["gen-params", "--rbits", "20", "--qbits", "64", "--seed", "7", "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()
    desc = load_descriptor(a.read_text())
    assert desc.r.bit_length() == 20 and desc.q.bit_length() == 64


def test_gen_params_full_size(tmp_path):
    out = tmp_path / "a.properties"
    assert main(["gen-params", "--rbits", "160", "--qbits", "512", "--seed", "1", "--out", str(out)]) == 0
    desc = load_descriptor(out.read_text())
    assert (desc.q_bits, desc.r_bits) == (512, 160)


def test_gen_params_usage_errors(capsys):
    for argv in (["--rbits", "64", "--qbits", "64"], ["--rbits", "8", "--qbits", "64"]):
        with pytest.raises(SystemExit) as info:
            main(["gen-params", *argv])
        assert info.value.code == 2
    with pytest.raises(SystemExit):
        main(["sign", "--scheme", "hess"])


def test_gen_params_timeout(tmp_path):
    argv = ["gen-params", "--rbits", "20", "--qbits", "64", "--seed", "0", "--max-attempts", "1"]
    assert main(argv) == 1


def test_setup_unsupported_curve(tmp_path):
    assert main(["setup", "--params", "d159", "--out-keystore", str(tmp_path / "k.json")]) == 2
    assert main(["setup", "--params", "nope", "--out-keystore", str(tmp_path / "k.json")]) == 2


def test_sizes_single_cell(capsys):
    assert main(["sizes", "--curves", "f", "--schemes", "sok", "--csv"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert rows == [{"scheme": "sok", "curve": "f", "uncompressed_bytes": "120", "compressed_bytes": ""}]
    assert main(["sizes", "--curves", "a1", "--schemes", "sk-schnorr", "--compressed", "--csv"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert rows[0]["compressed_bytes"] == "151"


def test_sizes_full_grid(capsys):
    assert main(["sizes", "--curves", "all", "--schemes", "all", "--compressed", "--csv"]) == 0
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert len(rows) == len(TABLE_CURVES) * len(SIZE_SCHEMES) == 49
    assert main(["sizes", "--compressed", "--breakdown"]) == 0
    text = capsys.readouterr().out
    assert "Cha-Cheon" in text and "210" in text
    assert main(["sizes", "--elements"]) == 0
    assert "1020/160" in capsys.readouterr().out


def test_sizes_unknown_curve():
    assert main(["sizes", "--curves", "zz"]) == 2


def test_bench(world, capsys):
    params = world[0] / "desk.properties"
    assert main(["bench", "--params", str(params), "--iterations", "0"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 1
    assert main(["bench", "--params", str(params), "--iterations", "2", "--seed", "1"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 6
    for line in lines[1:]:
        fields = line.split()
        assert all(float(v) > 0 for v in fields[2:6])


def test_schnorr_41_bytes_on_159_bit_curve(tmp_path, capsys):
    params = tmp_path / "c159.properties"
    assert main(["gen-params", "--rbits", "100", "--qbits", "159", "--seed", "2", "--out", str(params)]) == 0
    ks = tmp_path / "ks.json"
    assert main(["setup", "--params", str(params), "--out-keystore", str(ks), "--seed", "1"]) == 0
    assert main(["extract", "--keystore", str(ks), "--identity", "alice"]) == 0
    msg = tmp_path / "m"
    msg.write_bytes(b"short")
    sig = tmp_path / "s"
    assert main(["sign", "--keystore", str(ks), "--identity", "alice", "--scheme", "sk-schnorr",
                 "--message-file", str(msg), "--compress", "--hash-mode", "truncate20", "--out", str(sig)]) == 0
    assert "41 payload bytes" in capsys.readouterr().err
    assert len(sig.read_bytes()) == 41 + 6
    assert main(["verify", "--params", str(tmp_path / "ks.public.json"), "--identity", "alice",
                 "--scheme", "sk-schnorr", "--message-file", str(msg), "--signature-file", str(sig)]) == 0
