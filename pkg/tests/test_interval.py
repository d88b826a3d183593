"""Interval core: containment under every operation, exactness where exact."""

from __future__ import annotations

import math
import random

import pytest

from blowup.errors import DimensionError, DomainError
from blowup.interval import (
    Interval,
    IntervalMatrix,
    IntervalVector,
    arith,
)


def test_construction_rejects_unordered_and_nan():
    with pytest.raises(ValueError):
        Interval(2.0, 1.0)
    with pytest.raises(ValueError):
        Interval(float("nan"), 1.0)
    iv = Interval(1.0)
    assert iv.lo == iv.hi == 1.0


def test_exact_endpoint_arithmetic():
    assert Interval(1, 2) + Interval(3, 4) == Interval(4, 6)
    assert Interval(-1, 1) * Interval(-1, 1) == Interval(-1, 1)
    assert Interval(1, 2) - Interval(1, 2) == Interval(-1, 1)
    assert Interval(3, 3) * Interval(4, 4) == Interval(12, 12)


def test_outward_rounding_strictly_contains_inexact_results():
    a = Interval(0.1)
    b = Interval(0.2)
    s = a + b
    assert s.lo < 0.1 + 0.2 < s.hi or s.lo <= 0.30000000000000004 <= s.hi
    assert s.lo <= 0.3 <= s.hi  # true decimal sum is inside too
    q = Interval(1.0) / Interval(3.0)
    assert q.lo < q.hi
    assert q.lo <= 1.0 / 3.0 <= q.hi
    assert q.lo * 3 <= 1.0 <= q.hi * 3


def test_division_by_zero_interval_rejected():
    with pytest.raises(DomainError):
        Interval(1.0) / Interval(-1.0, 1.0)
    with pytest.raises(DomainError):
        Interval(1.0) / Interval(0.0, 2.0)


def test_exp_examples():
    assert Interval(0.0).exp() == Interval(1.0, 1.0)
    r = Interval(-1e308, -750.0).exp()
    assert r.lo == 0.0
    assert 0.0 < r.hi <= 2.2250738585072014e-308  # below smallest normal
    with pytest.raises(DomainError):
        Interval(-1.0, 1.0).log()


def test_sqrt_and_pow():
    assert Interval(4.0).sqrt() == Interval(2.0, 2.0)
    assert Interval(-2.0, 3.0).sqr().lo == 0.0
    assert Interval(-2.0, 3.0).pow_int(2) == Interval(0.0, 9.0)
    assert Interval(-2.0, 3.0).pow_int(3).lo == -8.0
    r = Interval(2.0).pow_int(-1)
    assert r.lo <= 0.5 <= r.hi


def test_from_decimal():
    assert Interval.from_decimal("1") == Interval(1.0, 1.0)
    assert Interval.from_decimal("0.5") == Interval(0.5, 0.5)
    r = Interval.from_decimal("0.1")
    assert r.width() > 0.0
    assert r.lo <= 0.1 <= r.hi
    assert Interval.from_decimal("8.02e-4").contains(8.02e-4)
    with pytest.raises(ValueError):
        Interval.from_decimal("not-a-number")


SAMPLES_PER_OP = 20_000  # the full 1e5-per-op sweep runs in the acceptance suite


def _random_interval(rng: random.Random) -> Interval:
    kind = rng.randrange(4)
    if kind == 0:
        v = rng.uniform(-10, 10)
        return Interval(v)
    a = rng.uniform(-10, 10)
    b = rng.uniform(-10, 10)
    if kind == 3:
        a *= 1e-8
    lo, hi = min(a, b), max(a, b)
    return Interval(lo, hi)


def _sample(rng: random.Random, iv: Interval) -> float:
    if iv.lo == iv.hi:
        return iv.lo
    return rng.uniform(iv.lo, iv.hi)


@pytest.mark.parametrize("op", ["add", "sub", "mul", "div"])
def test_containment_fuzz(op):
    rng = random.Random(hash(op) & 0xFFFF)
    misses = 0
    for _ in range(SAMPLES_PER_OP):
        a = _random_interval(rng)
        b = _random_interval(rng)
        if op == "div" and b.contains_zero():
            continue
        res = arith(a, b, op)
        x = _sample(rng, a)
        y = _sample(rng, b)
        exact = {"add": x + y, "sub": x - y, "mul": x * y,
                 "div": (x / y) if op == "div" else None}[op]
        # the float image of the sampled pair may itself round; allow one ulp
        if not (res.lo <= exact <= res.hi):
            lo = math.nextafter(res.lo, -math.inf)
            hi = math.nextafter(res.hi, math.inf)
            if not (lo <= exact <= hi):
                misses += 1
    assert misses == 0


def test_exp_containment_fuzz():
    rng = random.Random(7)
    for _ in range(SAMPLES_PER_OP):
        a = _random_interval(rng)
        res = a.exp()
        x = _sample(rng, a)
        assert res.lo <= math.exp(x) <= res.hi


def test_log_sqrt_containment_fuzz():
    rng = random.Random(11)
    for _ in range(SAMPLES_PER_OP):
        a = _random_interval(rng)
        if a.lo <= 0.0:
            a = Interval(abs(a.lo) + 1e-12, abs(a.lo) + 1e-12 + (a.hi - a.lo))
        x = _sample(rng, a)
        r_log = a.log()
        r_sqrt = a.sqrt()
        assert r_log.lo <= math.log(x) <= r_log.hi
        assert r_sqrt.lo <= math.sqrt(x) <= r_sqrt.hi


def test_vector_ops_and_dimension_checks():
    v = IntervalVector.from_floats([1.0, 2.0])
    w = IntervalVector.from_floats([3.0, 4.0])
    assert (v + w)[0] == Interval(4.0)
    assert (w - v)[1] == Interval(2.0)
    assert v.norm_sq().contains(5.0)
    with pytest.raises(DimensionError):
        v + IntervalVector.from_floats([1.0, 2.0, 3.0])
    assert v.contains_point([1.0, 2.0])
    assert not v.contains_point([1.0, 2.5])


def test_matrix_product_containment():
    rng = random.Random(3)
    for _ in range(50):
        rows_a = [[_random_interval(rng) for _ in range(3)] for _ in range(3)]
        rows_b = [[_random_interval(rng) for _ in range(3)] for _ in range(3)]
        A = IntervalMatrix(rows_a)
        B = IntervalMatrix(rows_b)
        C = A.matmul(B)
        a = [[_sample(rng, rows_a[i][j]) for j in range(3)] for i in range(3)]
        b = [[_sample(rng, rows_b[i][j]) for j in range(3)] for i in range(3)]
        prod = [[sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)]
                for i in range(3)]
        for i in range(3):
            for j in range(3):
                iv = C[i, j]
                # sampled product uses float sums; allow a few ulps of slack
                assert iv.lo - 1e-12 <= prod[i][j] <= iv.hi + 1e-12
    with pytest.raises(DimensionError):
        IntervalMatrix.identity(2).matmul(IntervalMatrix.identity(3))


def test_matvec_containment():
    rng = random.Random(5)
    A = IntervalMatrix([[Interval(1.0, 2.0), Interval(-1.0, 0.0)],
                        [Interval(0.0), Interval(3.0, 3.5)]])
    v = IntervalVector([Interval(0.5, 1.0), Interval(2.0)])
    out = A.matvec(v)
    for _ in range(200):
        a = [[_sample(rng, A[i, j]) for j in range(2)] for i in range(2)]
        x = [_sample(rng, v[i]) for i in range(2)]
        y = [a[0][0] * x[0] + a[0][1] * x[1], a[1][0] * x[0] + a[1][1] * x[1]]
        assert out.contains_point(y)


def test_hull_intersect_width():
    a = Interval(0.0, 1.0)
    b = Interval(0.5, 2.0)
    assert a.hull(b) == Interval(0.0, 2.0)
    assert a.intersect(b) == Interval(0.5, 1.0)
    assert a.intersect(Interval(3.0, 4.0)) is None
    assert Interval(1.0, 1.0 + 2 ** -50).width() >= 2 ** -50
