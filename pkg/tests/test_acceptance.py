"""Exit criteria for the codec, one test per criterion.

Run with ``pytest tests/test_acceptance.py``; a PASS/FAIL line per criterion
is printed in the terminal summary.
"""

import hashlib
import random
import statistics
import time
from decimal import Decimal

import pytest

from ldcl.bench import BenchSpec, run_bench
from ldcl.container import from_bytes, to_bytes
from ldcl.matrix import CodecParams, compress, decompress
from ldcl.metrics import format_ratio, format_rmse, rmse
from ldcl.numeric import DefaultNumber, antilog_default, divmod_default, log_base_default
from ldcl.oracle import naive_subtract_count
from ldcl.sequence import BitSequence, map_bits, rle_decode, rle_encode, unmap_digits

MIB = 1 << 20
SEED = 20151031


@pytest.mark.acceptance(1, "lossless-limit round trip, 1000 inputs, T=50, p=55")
def test_lossless_limit_round_trip(record_property):
    rng = random.Random(SEED)
    params = CodecParams(50, 55)
    start = time.perf_counter()
    failures = 0
    total_bytes = 0
    for _ in range(1000):
        data = rng.randbytes(rng.randint(1, 65_536))
        total_bytes += len(data)
        blob = to_bytes(compress(data, params))
        failures += decompress(from_bytes(blob)).data != data
    elapsed = time.perf_counter() - start
    record_property("detail", f"{1000 - failures}/1000 identical, "
                              f"{total_bytes / MIB:.1f} MiB in {elapsed:.0f}s")
    assert failures == 0
    assert elapsed < 300


@pytest.mark.acceptance(2, "divmod agrees with repeated subtraction, s <= 9999, D in {9,99,999}")
def test_oracle_equivalence(record_property):
    cases = disagreements = 0
    for nines in (1, 2, 3):
        d = DefaultNumber(nines)
        for s in range(1, 10_000):
            cases += 1
            disagreements += divmod_default(s, d) != naive_subtract_count(s, d)
    record_property("detail", f"{cases} cases, {disagreements} disagreements")
    assert cases == 29_997
    assert disagreements == 0


@pytest.mark.acceptance(3, "exhaustive residue recovery, D=999, p=10")
def test_exhaustive_recovery(record_property):
    d = DefaultNumber(3)
    exact = sum(antilog_default(log_base_default(r, d, 10), d) == r for r in range(1, 999))
    record_property("detail", f"{exact}/998 exact")
    assert exact == 998


def _run_lengths_cases(rng):
    # explicit run lengths around the tokenization and chunking boundaries
    for n in (4, 5, 9, 10, 18):
        for digit in "2345":
            yield digit * n
            yield "".join(rng.choice("2345") for _ in range(3)) + digit * n + "2"


@pytest.mark.acceptance(4, "stage inverses, 10^4 random cases each")
def test_stage_inverses(record_property):
    rng = random.Random(SEED + 4)
    map_cases = map_fail = 0
    for i in range(10_000):
        n = rng.randint(0, 200)
        if i % 2:
            n |= 1  # force odd lengths for half the cases
        bits = "".join(rng.choice("01") for _ in range(n))
        seq = BitSequence.from_bits(bits)
        map_cases += 1
        map_fail += unmap_digits(map_bits(seq)) != seq

    rle_cases = rle_fail = 0
    for digits in _run_lengths_cases(rng):
        rle_cases += 1
        rle_fail += rle_decode(rle_encode(digits)) != digits
    while rle_cases < 10_000:
        parts = []
        for _ in range(rng.randint(0, 12)):
            parts.append(rng.choice("2345") * rng.choice((1, 2, 3, 4, 5, 6, 9, 10, 14, 18, 27)))
        digits = "".join(parts)
        rle_cases += 1
        rle_fail += rle_decode(rle_encode(digits)) != digits
    record_property("detail", f"map/unmap {map_cases - map_fail}/{map_cases}, "
                              f"rle {rle_cases - rle_fail}/{rle_cases}")
    assert map_cases >= 10_000 and map_fail == 0
    assert rle_cases >= 10_000 and rle_fail == 0


def _medians(rows):
    cells = {}
    for row in rows:
        assert row.error is None, row.error
        cells.setdefault((row.T, row.p), []).append(row.rmse)
    return {key: statistics.median(values) for key, values in cells.items()}


@pytest.mark.acceptance(5, "RMSE rises with T at p=8 and falls with p at T=300 (10 x 1 MiB)")
def test_rmse_trend(record_property):
    by_size = _medians(run_bench(BenchSpec((20, 100, 300), (8,), random_bytes=MIB,
                                           seed=SEED, trials=10)))
    by_precision = _medians(run_bench(BenchSpec((300,), (4, 16, 305), random_bytes=MIB,
                                                seed=SEED, trials=10)))
    by_precision[(300, 8)] = by_size[(300, 8)]

    size_trend = [by_size[(t, 8)] for t in (20, 100, 300)]
    prec_trend = [by_precision[(300, p)] for p in (4, 8, 16, 305)]
    fmt = lambda xs: ", ".join(format_rmse(x) for x in xs)
    record_property("detail", f"T=20,100,300: {fmt(size_trend)}; p=4,8,16,305: {fmt(prec_trend)}")

    assert size_trend[0] < size_trend[1] < size_trend[2]
    assert all(a >= b for a, b in zip(prec_trend, prec_trend[1:]))
    assert prec_trend[-1] == 0


@pytest.mark.acceptance(6, "CR within 5% of T/(4(1+p)) on 1 MiB random input")
def test_cr_size_model(record_property):
    data = random.Random(SEED + 6).randbytes(MIB)
    details = []
    for T, p in ((300, 12), (100, 8), (50, 4)):
        size = len(to_bytes(compress(data, CodecParams(T, p))))
        measured = len(data) / size
        predicted = T / (4 * (1 + p))
        details.append(f"T={T} p={p}: {measured:.3f} vs {predicted:.3f}")
        assert abs(measured - predicted) / predicted <= 0.05
    record_property("detail", "; ".join(details))


@pytest.mark.acceptance(7, "CR display and RMSE formula checks")
def test_metric_formulas(record_property):
    assert format_ratio(3_221_225_472, 53_687_091) == "60.00"
    one = rmse([329], [330])
    two = rmse([10, 20], [13, 24])
    # sqrt(12.5) = 3.5355339059327376220...
    expected_two = Decimal("3.53553390593273762200422181052")
    assert one == 1
    assert abs(two - expected_two) / expected_two < Decimal("5e-12")
    assert f"{two:.11E}" == f"{expected_two:.11E}"
    record_property("detail", f"CR 60.00, rmse {one} and {two:.12}")


@pytest.mark.acceptance(8, "deterministic archives, sequential and parallel")
def test_determinism(record_property):
    data = random.Random(SEED + 8).randbytes(MIB)
    params = CodecParams()
    digests = {
        hashlib.sha256(to_bytes(compress(data, params))).hexdigest(),
        hashlib.sha256(to_bytes(compress(data, params))).hexdigest(),
        hashlib.sha256(to_bytes(compress(data, params, workers=2))).hexdigest(),
    }
    record_property("detail", f"{len(digests)} distinct digest(s)")
    assert len(digests) == 1
