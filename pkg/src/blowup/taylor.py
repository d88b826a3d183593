"""Truncated Taylor-series arithmetic with interval coefficients.

A series is a plain list of Interval coefficients around a base point; the
helpers here compute one coefficient order at a time so that model recurrences
can interleave (field coefficients of order k feed state coefficients of
order k+1).  Every identity used is an exact relation between the true Taylor
coefficients, so interval evaluation preserves containment.
"""

from __future__ import annotations

from .interval import Interval, ZERO

__all__ = ["conv_at", "exp_coeff", "recip_coeff", "horner"]


def conv_at(a: list[Interval], b: list[Interval], k: int) -> Interval:
    """k-th coefficient of the product of two series."""
    total = ZERO
    for j in range(k + 1):
        aj = a[j]
        if aj.lo == 0.0 and aj.hi == 0.0:
            continue
        bk = b[k - j]
        if bk.lo == 0.0 and bk.hi == 0.0:
            continue
        total = total + aj * bk
    return total


def exp_coeff(u: list[Interval], e: list[Interval], k: int) -> Interval:
    """k-th coefficient of exp(u) given e[0..k-1]; k >= 1.

    Uses  k * e_k = sum_{j=1..k} j * u_j * e_{k-j}.
    """
    total = ZERO
    for j in range(1, k + 1):
        uj = u[j]
        if uj.lo == 0.0 and uj.hi == 0.0:
            continue
        ej = e[k - j]
        if ej.lo == 0.0 and ej.hi == 0.0:
            continue
        total = total + (uj * float(j)) * ej
    return total / float(k)


def recip_coeff(u: list[Interval], r: list[Interval], k: int) -> Interval:
    """k-th coefficient of 1/u given r[0..k-1] (r[0] = 1/u[0]); k >= 1.

    From u * r = 1:  r_k = -r_0 * sum_{j=1..k} u_j r_{k-j}.
    """
    total = ZERO
    for j in range(1, k + 1):
        uj = u[j]
        if uj.lo == 0.0 and uj.hi == 0.0:
            continue
        total = total + uj * r[k - j]
    return -(r[0] * total)


def horner(coeffs: list[Interval], h: Interval) -> Interval:
    """Evaluate a series at h (interval), highest order first."""
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * h + c
    return acc
