"""The spatially discretized reaction system and its compactified form.

The physical system on the grid y_i = i/N (Dirichlet ends, u_0 = u_N = 0):

    u_i' = N^2 (u_{i-1} - 2 u_i + u_{i+1}) + lambda * exp(u_i^m)

The directional chart pivots on the center index c = N/2:

    u_c = 1/s,   u_i = x_i / s   (i != c)

After rescaling time by dt/dtau = s^-1 exp(-1/s^m), the chart's vector field
is smooth up to the horizon {s = 0} and reads

    ds/dtau   = -exp(-1/s^m) * D_c - lambda * s
    dx_i/dtau = -x_i * H(s) * D_c - lambda * x_i + H(s) * D_i
                + lambda * exp(-(1 - x_i^m)/s^m)

where H(s) = s^-1 exp(-1/s^m), D_i is the discrete Laplacian of x with the
formal value 1 in the center slot, and D_c its center row.  All singular
factors are evaluated through :mod:`blowup.powexp` so states on the horizon
are admissible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from .errors import DomainError, InputError, ReframeNeeded, SingularityError
from .interval import PI, Interval, IntervalMatrix, IntervalVector, div_up, pow_up
from .powexp import PowExpParams, powexp

__all__ = [
    "ProblemParams",
    "PhysState",
    "CompactState",
    "original_field",
    "initial_data",
    "compactify",
    "decompactify",
    "desingularized_field",
    "desingularized_jacobian",
    "time_dilation",
]

_ZERO = Interval(0.0)
_ONE = Interval(1.0)


@dataclass(frozen=True)
class ProblemParams:
    """Grid count n (even), nonlinearity order m, reaction coefficient lam."""

    n: int
    m: int
    lam: Interval

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 4 or self.n % 2 != 0:
            raise DomainError(f"n must be an even integer >= 4, got {self.n!r}")
        if not isinstance(self.m, int) or self.m < 1:
            raise DomainError(f"m must be a positive integer, got {self.m!r}")
        if not isinstance(self.lam, Interval):
            object.__setattr__(self, "lam", Interval(float(self.lam)))
        if self.lam.lo <= 0.0:
            raise DomainError(f"lambda must be positive, got {self.lam!r}")

    @property
    def center(self) -> int:
        return self.n // 2

    @property
    def reduced_indices(self) -> tuple[int, ...]:
        """Grid indices carried by the compact chart (1..n-1 without center)."""
        c = self.center
        return tuple(i for i in range(1, self.n) if i != c)


@dataclass(frozen=True)
class PhysState:
    """Interior grid values u_1..u_{n-1}; the Dirichlet ends are implicit."""

    u: IntervalVector

    def require_dim(self, p: ProblemParams) -> None:
        if len(self.u) != p.n - 1:
            raise DomainError(
                f"state has {len(self.u)} components, expected {p.n - 1}"
            )


@dataclass(frozen=True)
class CompactState:
    """Chart state: s (reciprocal peak) and the n-2 ratios x_i, i != n/2."""

    s: Interval
    x: IntervalVector

    def require_dim(self, p: ProblemParams) -> None:
        if len(self.x) != p.n - 2:
            raise DomainError(
                f"chart state has {len(self.x)} ratios, expected {p.n - 2}"
            )

    def max_width(self) -> float:
        return max(self.s.width(), self.x.max_width())


def original_field(p: ProblemParams, state: PhysState) -> IntervalVector:
    """Right-hand side of the physical system (standard Dirichlet Laplacian)."""
    state.require_dim(p)
    u = state.u
    n2 = float(p.n * p.n)
    out = []
    for i in range(1, p.n):
        left = u[i - 2] if i >= 2 else _ZERO
        right = u[i] if i <= p.n - 2 else _ZERO
        lap = (left - u[i - 1] * 2.0 + right) * n2
        out.append(lap + p.lam * u[i - 1].pow_int(p.m).exp())
    return IntervalVector(out)


# ---------------------------------------------------------------------------
# initial data
# ---------------------------------------------------------------------------

_COS_TERMS = 24


def _iv_cos(x: Interval) -> Interval:
    """Enclosure of cos over an interval within [0, 2*pi + 1].

    Alternating series with an explicit Lagrange tail; adequate for the
    initial-data arguments (|x| <= 2*pi) without a full trig library.
    """
    if x.lo < 0.0 or x.hi > 7.0:
        raise DomainError(f"cos enclosure defined on [0, 7], got {x!r}")
    z = x.sqr()
    acc = _ONE
    # Horner over 1 - z/(1*2) * (1 - z/(3*4) * (...))
    for j in range(_COS_TERMS, 0, -1):
        acc = _ONE - (z / float((2 * j - 1) * (2 * j))) * acc
    tail = div_up(pow_up(x.mag(), 2 * _COS_TERMS + 2),
                  float(math.factorial(2 * _COS_TERMS + 2)))
    enclosure = acc.widened(tail)
    return enclosure.intersect(Interval(-1.0, 1.0)) or enclosure


def initial_data(kind: str, p: ProblemParams, path: str | Path | None = None) -> PhysState:
    """Initial grid profiles.

    ``cosine_m1``: u_i(0) = 2.5 (1 - cos(2 pi y_i)).
    ``cosine_m2``: u_i(0) = 1 - cos(2 pi y_i).
    ``file``: one decimal per line, exactly n-1 lines; values become
    tightest-enclosure intervals.
    """
    if kind == "file":
        if path is None:
            raise InputError("file initial data requires a path")
        try:
            text = Path(path).read_text()
        except OSError as e:
            raise InputError(f"cannot read initial data file {path}: {e}") from e
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if len(lines) != p.n - 1:
            raise InputError(
                f"initial data file must have {p.n - 1} values, found {len(lines)}"
            )
        try:
            vals = [Interval.from_decimal(ln) for ln in lines]
        except ValueError as e:
            raise InputError(str(e)) from e
        return PhysState(IntervalVector(vals))

    if kind == "cosine_m1":
        amp = Interval(2.5)
    elif kind == "cosine_m2":
        amp = _ONE
    else:
        raise InputError(f"unknown initial data kind {kind!r}")
    two_pi = PI * 2.0
    out = []
    for i in range(1, p.n):
        arg = two_pi * (Interval(float(i)) / float(p.n))
        # reduce to [0, pi] where needed: cos(t) = cos(2*pi - t)
        if arg.lo > PI.hi:
            arg = two_pi - arg
        out.append(amp * (_ONE - _iv_cos(arg)))
    return PhysState(IntervalVector(out))


# ---------------------------------------------------------------------------
# chart maps
# ---------------------------------------------------------------------------

def compactify(p: ProblemParams, state: PhysState) -> CompactState:
    """Map u to (s, x); requires the center value to dominate."""
    state.require_dim(p)
    uc = state.u[p.center - 1]
    if uc.lo <= 0.0:
        raise DomainError(f"center value must be positive, got {uc!r}")
    s = _ONE / uc
    xs = []
    for i in p.reduced_indices:
        xi = state.u[i - 1] / uc
        if xi.hi > 1.0:
            raise ReframeNeeded(
                f"ratio u_{i}/u_{p.center} reaches {xi.hi!r} > 1; "
                "the peak is not at the center index"
            )
        xs.append(xi)
    return CompactState(s=s, x=IntervalVector(xs))


def decompactify(p: ProblemParams, state: CompactState) -> PhysState:
    """Inverse chart map; undefined on or across the horizon."""
    state.require_dim(p)
    if state.s.lo <= 0.0:
        raise SingularityError(
            f"s = {state.s!r} touches the horizon; no physical image"
        )
    uc = _ONE / state.s
    vals: dict[int, Interval] = {p.center: uc}
    for i, xi in zip(p.reduced_indices, state.x):
        vals[i] = xi / state.s
    return PhysState(IntervalVector([vals[i] for i in range(1, p.n)]))


# ---------------------------------------------------------------------------
# desingularized field and Jacobian
# ---------------------------------------------------------------------------

def _chart_values(p: ProblemParams, state: CompactState) -> dict[int, Interval]:
    """Grid-indexed lookup with the formal center value 1 and zero ends."""
    vals = {0: _ZERO, p.n: _ZERO, p.center: _ONE}
    for i, xi in zip(p.reduced_indices, state.x):
        vals[i] = xi
    return vals


def _check_admissible(p: ProblemParams, state: CompactState) -> None:
    state.require_dim(p)
    if state.s.lo < 0.0:
        raise DomainError(f"s must be nonnegative, got {state.s!r}")
    for i, xi in zip(p.reduced_indices, state.x):
        if xi.hi > 1.0:
            raise DomainError(
                f"x_{i} = {xi!r} exceeds 1; exponential weight would be negative"
            )


def time_dilation(p: ProblemParams, s: Interval) -> Interval:
    """dt/dtau = s^-1 exp(-1/s^m), the factor converting rescaled time back."""
    return powexp(PowExpParams(1, _ONE, p.m), s)


def desingularized_field(p: ProblemParams, state: CompactState) -> IntervalVector:
    """Chart vector field, ordered (s-slot, then x_i ascending)."""
    _check_admissible(p, state)
    s = state.s
    vals = _chart_values(p, state)
    n2 = float(p.n * p.n)
    c = p.center
    lap_c = (vals[c - 1] + vals[c + 1] - 2.0) * n2
    e0 = powexp(PowExpParams(0, _ONE, p.m), s)
    h1 = powexp(PowExpParams(1, _ONE, p.m), s)
    out = [-(e0 * lap_c) - p.lam * s]
    for i in p.reduced_indices:
        xi = vals[i]
        lap_i = (vals[i - 1] - xi * 2.0 + vals[i + 1]) * n2
        alpha = _ONE - xi.pow_int(p.m)
        g = powexp(PowExpParams(0, alpha, p.m), s)
        out.append(-(xi * h1 * lap_c) - p.lam * xi + h1 * lap_i + p.lam * g)
    return IntervalVector(out)


def desingularized_jacobian(p: ProblemParams, state: CompactState) -> IntervalMatrix:
    """Closed-form Jacobian of the chart field, same slot ordering.

    The s-derivative factor (1 - m s^-m) h_2 is rewritten as h_2 - m h_{m+2}
    so the horizon is admissible.
    """
    _check_admissible(p, state)
    s = state.s
    m = p.m
    lam = p.lam
    vals = _chart_values(p, state)
    n2 = float(p.n * p.n)
    c = p.center
    red = p.reduced_indices
    pos = {i: 1 + idx for idx, i in enumerate(red)}  # slot of x_i; slot 0 is s

    lap_c = (vals[c - 1] + vals[c + 1] - 2.0) * n2
    e0 = powexp(PowExpParams(0, _ONE, m), s)
    h1 = powexp(PowExpParams(1, _ONE, m), s)
    h2 = powexp(PowExpParams(2, _ONE, m), s)
    hm1 = powexp(PowExpParams(m + 1, _ONE, m), s)
    hm2 = powexp(PowExpParams(m + 2, _ONE, m), s)

    dim = p.n - 1
    rows = [[_ZERO] * dim for _ in range(dim)]

    rows[0][0] = -(hm1 * lap_c) * float(m) - lam
    for j in (c - 1, c + 1):
        rows[0][pos[j]] = -(e0 * n2)

    for i in red:
        r = pos[i]
        xi = vals[i]
        lap_i = (vals[i - 1] - xi * 2.0 + vals[i + 1]) * n2
        alpha = _ONE - xi.pow_int(m)
        g_m1 = powexp(PowExpParams(m + 1, alpha, m), s)
        g_m = powexp(PowExpParams(m, alpha, m), s)
        xi_pow = _ONE if m == 1 else xi.pow_int(m - 1)

        rows[r][0] = (h2 - hm2 * float(m)) * (xi * lap_c - lap_i) \
            - lam * float(m) * (xi.pow_int(m) - _ONE) * g_m1

        diag = -(h1 * lap_c) - lam - h1 * (2.0 * n2) \
            + lam * float(m) * xi_pow * g_m
        rows[r][r] = rows[r][r] + diag
        for j in (c - 1, c + 1):
            rows[r][pos[j]] = rows[r][pos[j]] - xi * h1 * n2
        if i - 1 != c and i - 1 != 0:
            rows[r][pos[i - 1]] = rows[r][pos[i - 1]] + h1 * n2
        if i + 1 != c and i + 1 != p.n:
            rows[r][pos[i + 1]] = rows[r][pos[i + 1]] + h1 * n2

    return IntervalMatrix(rows)
