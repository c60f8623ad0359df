"""Sign/verify timing with pairing-count accounting."""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass

from .curve import CurveDescriptor
from .pairing import count_pairings
from .schemes import SCHEMES, extract, normalize_scheme, setup, sign, verify


@dataclass(frozen=True)
class BenchRow:
    scheme: str
    iterations: int
    sign_mean_ms: float
    sign_median_ms: float
    verify_mean_ms: float
    verify_median_ms: float
    sign_pairings: int
    verify_pairings: int


def run_benchmark(descriptor: CurveDescriptor, schemes=SCHEMES, iterations: int = 10, rng=None) -> list[BenchRow]:
    if iterations <= 0:
        return []
    msk, params = setup(descriptor, rng)
    key = extract(msk, params, b"bench@example.org")
    rows = []
    for scheme in map(normalize_scheme, schemes):
        sign_times, verify_times = [], []
        sign_pairings = verify_pairings = 0
        for i in range(iterations):
            message = b"benchmark message %d" % i
            with count_pairings() as sc:
                t0 = time.perf_counter()
                sig = sign(params, key, message, scheme, rng)
                t1 = time.perf_counter()
            with count_pairings() as vc:
                ok = verify(params, key.identity, message, sig)
                t2 = time.perf_counter()
            if not ok:
                raise RuntimeError(f"{scheme}: honest signature failed to verify")
            sign_times.append(t1 - t0)
            verify_times.append(t2 - t1)
            sign_pairings = max(sign_pairings, sc.count)
            verify_pairings = max(verify_pairings, vc.count)
        rows.append(BenchRow(
            scheme=scheme,
            iterations=iterations,
            sign_mean_ms=1e3 * statistics.fmean(sign_times),
            sign_median_ms=1e3 * statistics.median(sign_times),
            verify_mean_ms=1e3 * statistics.fmean(verify_times),
            verify_median_ms=1e3 * statistics.median(verify_times),
            sign_pairings=sign_pairings,
            verify_pairings=verify_pairings,
        ))
    return rows


def format_bench(rows: list[BenchRow]) -> str:
    header = ("scheme", "n", "sign mean ms", "sign median ms", "verify mean ms",
              "verify median ms", "sign pairings", "verify pairings")
    body = [(r.scheme, str(r.iterations), f"{r.sign_mean_ms:.3f}", f"{r.sign_median_ms:.3f}",
             f"{r.verify_mean_ms:.3f}", f"{r.verify_median_ms:.3f}",
             str(r.sign_pairings), str(r.verify_pairings)) for r in rows]
    widths = [max(len(x[i]) for x in [header, *body]) for i in range(len(header))]
    lines = ["  ".join(v.rjust(w) for v, w in zip(x, widths)) for x in [header, *body]]
    return "\n".join(lines) + "\n"
