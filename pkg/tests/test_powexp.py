"""Enclosures of the singular power-exponential family."""

from __future__ import annotations

import math
import random

import pytest

from blowup.errors import DomainError, SingularityError
from blowup.interval import Interval
from blowup.powexp import PowExpParams, powexp, powexp_deriv

K111 = PowExpParams(1, Interval(1.0), 1)


def direct(k: int, a: float, m: int, s: float) -> float:
    return s ** (-k) * math.exp(-a / s ** m)


@pytest.mark.parametrize("s,expected", [
    (0.1, 4.539992e-4),
    (0.05, 4.12230724e-8),
    (0.02, 9.6437492e-21),
    (0.01, 3.720076e-42),
])
def test_reference_point_values(s, expected):
    r = powexp(K111, Interval(s))
    mid = r.mid()
    assert abs(mid - expected) / expected <= 1e-6
    assert r.width() / mid <= 1e-6
    assert r.lo <= direct(1, 1.0, 1, s) <= r.hi


def test_zero_extension_enclosure():
    r = powexp(K111, Interval(0.0, 0.02))
    assert r.lo == 0.0
    assert abs(r.hi - 9.6437492e-21) / 9.6437492e-21 <= 1e-6


def test_constant_family():
    r = powexp(PowExpParams(0, Interval(0.0), 2), Interval(0.5, 1.0))
    assert r.lo <= 1.0 <= r.hi
    assert r.width() <= 1e-15


def test_parameter_validation():
    with pytest.raises(DomainError):
        PowExpParams(1, Interval(-0.5, 1.0), 1)
    with pytest.raises(DomainError):
        PowExpParams(-1, Interval(1.0), 1)
    with pytest.raises(DomainError):
        powexp(K111, Interval(-0.1, 0.2))
    with pytest.raises(SingularityError):
        powexp(PowExpParams(2, Interval(0.0), 1), Interval(0.0, 0.1))


def test_agrees_with_direct_formula_away_from_zero():
    rng = random.Random(17)
    for _ in range(500):
        k = rng.randrange(0, 5)
        m = rng.choice([1, 2])
        a = rng.uniform(0.1, 2.0)
        s = rng.uniform(0.05, 2.0)
        r = powexp(PowExpParams(k, Interval(a), m), Interval(s))
        v = direct(k, a, m, s)
        if v < 1e-280:
            continue
        assert r.lo <= v <= r.hi
        assert abs(r.mid() - v) / v <= 1e-12


def test_containment_over_intervals():
    rng = random.Random(23)
    for _ in range(500):
        k = rng.randrange(0, 4)
        m = rng.choice([1, 2])
        a_lo = rng.uniform(0.05, 1.5)
        a_hi = a_lo + rng.uniform(0.0, 0.5)
        lo = rng.uniform(0.0, 0.4)
        hi = lo + rng.uniform(0.0, 0.5)
        if k > 0 and lo == 0.0:
            lo = 0.0
        r = powexp(PowExpParams(k, Interval(a_lo, a_hi), m), Interval(lo, hi))
        for _ in range(20):
            t = rng.uniform(max(lo, 1e-9), max(hi, 1e-9))
            a = rng.uniform(a_lo, a_hi)
            v = direct(k, a, m, t)
            assert r.lo <= v or v < 1e-290
            assert v <= r.hi * (1 + 1e-12) + 1e-300


def test_subdivision_consistency():
    for b in (0.02, 0.2, 0.7, 1.5):
        whole = powexp(K111, Interval(0.0, b))
        left = powexp(K111, Interval(0.0, b / 2))
        right = powexp(K111, Interval(b / 2, b))
        hull = left.hull(right)
        assert whole.lo <= hull.lo + 1e-300
        assert hull.hi <= whole.hi * (1 + 1e-12) + 1e-300
        # and the hull's exact content is inside the whole-interval enclosure
        assert whole.contains(hull.mid()) or hull.width() == 0.0


def test_peak_is_covered():
    # the interior maximum must be enclosed when s straddles it
    k, m, a = 1, 1, 1.0
    peak = (m * a / k) ** (1.0 / m)
    r = powexp(PowExpParams(k, Interval(a), m), Interval(0.5 * peak, 2.0 * peak))
    vmax = direct(k, a, m, peak)
    assert r.hi >= vmax
    assert r.lo <= direct(k, a, m, 0.5 * peak)


def test_deriv_point_value():
    # reference by central difference of the direct formula:
    # h_2(0.1) * (1/0.1 - 1) = 100 e^-10 * 9 = 4.0860e-2
    s, d = 0.1, 1e-6
    fd = (direct(1, 1.0, 1, s + d) - direct(1, 1.0, 1, s - d)) / (2 * d)
    r = powexp_deriv(K111, Interval(s))
    assert abs(r.mid() - fd) / abs(fd) <= 1e-4
    assert abs(r.mid() - 4.0860e-2) / 4.0860e-2 <= 1e-3


def test_deriv_extension_at_zero():
    r = powexp_deriv(PowExpParams(2, Interval(0.7), 2), Interval(0.0))
    assert r.contains(0.0)
    assert r.width() <= 1e-14


def test_deriv_nonnegative_in_monotone_regime():
    rng = random.Random(31)
    for _ in range(200):
        k = rng.randrange(1, 4)
        m = rng.choice([1, 2])
        a = rng.uniform(0.2, 1.5)
        peak = (m * a / k) ** (1.0 / m)
        s = rng.uniform(1e-3, 0.999 * peak)
        r = powexp_deriv(PowExpParams(k, Interval(a), m), Interval(s))
        assert r.hi >= 0.0
        # one-ulp widening tolerance on the lower side
        assert r.lo >= -1e-12 * max(1.0, abs(r.hi))


def test_deriv_matches_finite_differences_along_grid():
    rng = random.Random(41)
    for _ in range(100):
        s = rng.uniform(0.05, 0.5)
        d = 1e-7
        fd = (direct(1, 1.0, 1, s + d) - direct(1, 1.0, 1, s - d)) / (2 * d)
        r = powexp_deriv(K111, Interval(s))
        assert abs(r.mid() - fd) <= 1e-4 * max(abs(fd), 1e-30)
