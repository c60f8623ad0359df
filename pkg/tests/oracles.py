"""Reference implementations that share no code with the package."""


def _f2mul(a, b, q):
    return ((a[0] * b[0] - a[1] * b[1]) % q, (a[0] * b[1] + a[1] * b[0]) % q)


def _f2sub(a, b, q):
    return ((a[0] - b[0]) % q, (a[1] - b[1]) % q)


def _f2inv(a, q):
    n = pow(a[0] * a[0] + a[1] * a[1], q - 2, q)
    return (a[0] * n % q, -a[1] * n % q)


def _f2pow(a, e, q):
    out = (1, 0)
    while e:
        if e & 1:
            out = _f2mul(out, a, q)
        a = _f2mul(a, a, q)
        e >>= 1
    return out


def oracle_pairing(P, Q, q, r):
    """Tate pairing of P and distort(Q) via f_{i+1} = f_i * l_{iP,P} / v_{(i+1)P}.

    Points are (x, y) int tuples on y^2 = x^3 + x; None is infinity.
    """
    qx, qy = (-Q[0] % q, 0), (0, Q[1])
    f, T = (1, 0), P
    for _ in range(1, r):
        xt, yt = T
        xp, yp = P
        if xt == xp and (yt + yp) % q == 0:
            line, vert, T = _f2sub(qx, (xt, 0), q), (1, 0), None
        else:
            if T == P:
                lam = (3 * xt * xt + 1) * pow(2 * yt, q - 2, q) % q
            else:
                lam = (yp - yt) * pow(xp - xt, q - 2, q) % q
            x3 = (lam * lam - xt - xp) % q
            y3 = (lam * (xt - x3) - yt) % q
            line = _f2sub(_f2sub(qy, (yt, 0), q), _f2mul((lam, 0), _f2sub(qx, (xt, 0), q), q), q)
            vert = _f2sub(qx, (x3, 0), q)
            T = (x3, y3)
        f = _f2mul(f, _f2mul(line, _f2inv(vert, q), q), q)
    assert T is None
    return _f2pow(f, (q * q - 1) // r, q)


def brute_sqrt(a, p):
    """All square roots of a mod p by exhaustive search."""
    return [y for y in range(p) if y * y % p == a % p]


def primes_below(n):
    sieve = bytearray([1]) * n
    sieve[:2] = b"\x00\x00"
    for i in range(2, int(n ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(sieve[i * i::i]))
    return [i for i, v in enumerate(sieve) if v]
