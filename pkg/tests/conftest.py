"""Shared oracles: plain-float reference implementations of the fields."""

from __future__ import annotations

import numpy as np
import pytest

from blowup.interval import Interval
from blowup.model import ProblemParams


def scalar_original_rhs(n: int, m: int, lam: float):
    """Independent scalar-loop right-hand side of the physical system."""

    def f(t, u):
        du = np.empty(n - 1)
        for i in range(1, n):
            left = u[i - 2] if i >= 2 else 0.0
            right = u[i] if i <= n - 2 else 0.0
            du[i - 1] = n * n * (left - 2.0 * u[i - 1] + right) \
                + lam * np.exp(u[i - 1] ** m)
        return du

    return f


def scalar_desing_rhs(n: int, m: int, lam: float):
    """Reference augmented chart field [s, x.., t] in plain floats."""
    c = n // 2
    idx = [i for i in range(1, n) if i != c]

    def f(tau, y):
        full = np.zeros(n + 1)
        full[c] = 1.0
        for k, i in enumerate(idx):
            full[i] = y[1 + k]
        s = y[0]
        lap = lambda i: n * n * (full[i - 1] - 2.0 * full[i] + full[i + 1])
        dc = n * n * (full[c - 1] - 2.0 + full[c + 1])
        e = np.exp(-1.0 / s ** m)
        h11 = e / s
        ds = -e * dc - lam * s
        dx = [
            -full[i] * h11 * dc - lam * full[i] + h11 * lap(i)
            + lam * np.exp(-(1.0 - full[i] ** m) / s ** m)
            for i in idx
        ]
        return np.concatenate([[ds], dx, [h11]])

    return f


def reference_trajectory(n: int, m: int, lam: float, y0, taus,
                         rtol=1e-12, atol=1e-14):
    """High-accuracy pointwise reference solution at the given times."""
    from scipy.integrate import solve_ivp

    sol = solve_ivp(scalar_desing_rhs(n, m, lam), (0.0, taus[-1]), np.asarray(y0),
                    t_eval=list(taus), rtol=rtol, atol=atol, method="DOP853",
                    dense_output=True)
    assert sol.success
    return sol


@pytest.fixture(scope="session")
def unit_lambda() -> Interval:
    return Interval(1.0)


@pytest.fixture(scope="session")
def p61(unit_lambda) -> ProblemParams:
    return ProblemParams(6, 1, unit_lambda)


@pytest.fixture(scope="session")
def p62(unit_lambda) -> ProblemParams:
    return ProblemParams(6, 2, unit_lambda)
