"""Validated attraction domain of the horizon equilibrium.

The squared distance L(s,x) = s^2 + sum x_i^2 decays along the flow wherever
the symmetrized Jacobian A = Df^T + Df is strictly negative definite: by the
mean value theorem (the field vanishes at the origin and boxes are convex),

    dL/dtau = 2 (s,x) . f(s,x) = (s,x)^T A(xi) (s,x)  <=  lambda_max(A) * L.

Negative definiteness over a candidate box is certified with a Gershgorin
bound evaluated in interval arithmetic, subdividing the box adaptively until
every piece has all Gershgorin discs strictly in the left half plane.  The
certified decay constant is c = -sup lambda_max(A); the sublevel set
{L <= epsilon} with sqrt(epsilon) <= min(s_max, x_radius) (10% margin) is then
forward-invariant and exponentially attracted to the equilibrium.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, ValidationFailure
from .interval import Interval, IntervalVector, add_up, mul_down, sqrt_up
from .model import CompactState, ProblemParams, desingularized_jacobian

__all__ = ["CandidateBox", "LyapunovDomain", "lyapunov_value",
           "validate_domain", "find_domain"]


@dataclass(frozen=True)
class CandidateBox:
    """Product box [0, s_max] x [-x_radius, x_radius]^(n-2)."""

    s_max: float
    x_radius: float

    def __post_init__(self):
        if not (self.s_max > 0.0 and self.x_radius > 0.0):
            raise DomainError("candidate box must have positive extents")


@dataclass(frozen=True)
class LyapunovDomain:
    """Validated box with sublevel threshold epsilon and decay constant c."""

    box: CandidateBox
    epsilon: float
    c: float


def lyapunov_value(state: CompactState) -> Interval:
    """Enclosure of L = s^2 + sum of squared ratios."""
    acc = state.s.sqr()
    for xi in state.x:
        acc = acc + xi.sqr()
    return acc


def _gershgorin_upper(p: ProblemParams, s_iv: Interval,
                      x_ivs: list[Interval]) -> float:
    """Upper bound of lambda_max(Df^T + Df) over the sub-box, or +inf-ish."""
    state = CompactState(s=s_iv, x=IntervalVector(x_ivs))
    jac = desingularized_jacobian(p, state)
    dim = p.n - 1
    worst = -float("inf")
    for i in range(dim):
        row_i = jac.rows[i]
        diag = add_up(row_i[i].hi, row_i[i].hi)
        off = 0.0
        for j in range(dim):
            if j == i:
                continue
            a = row_i[j] + jac.rows[j][i]
            off = add_up(off, a.mag())
        worst = max(worst, add_up(diag, off))
    return worst


_MAX_BOXES = 60_000


def validate_domain(p: ProblemParams, box: CandidateBox) -> LyapunovDomain:
    """Certify negative definiteness of A over the box; return (epsilon, c).

    Raises ValidationFailure when some sub-box cannot be certified within the
    subdivision budget (shrink the candidate box and retry).
    """
    if box.x_radius > 1.0:
        raise DomainError("x_radius must not exceed 1 (ratio invariant)")
    s0 = Interval(0.0, box.s_max)
    x0 = [Interval(-box.x_radius, box.x_radius)] * (p.n - 2)
    stack = [(s0, x0)]
    c_min = float("inf")
    examined = 0
    while stack:
        s_iv, x_ivs = stack.pop()
        examined += 1
        if examined > _MAX_BOXES:
            raise ValidationFailure(
                f"subdivision budget exhausted over {box!r} "
                f"(bound so far {c_min!r})"
            )
        bound = _gershgorin_upper(p, s_iv, x_ivs)
        if bound < 0.0:
            c_min = min(c_min, -bound)
            continue
        # split the widest coordinate, measuring s against the ratios' scale
        widths = [s_iv.width() * (box.x_radius / box.s_max)] + \
                 [xi.width() for xi in x_ivs]
        pick = max(range(len(widths)), key=widths.__getitem__)
        if widths[pick] < 1e-6 * box.x_radius:
            raise ValidationFailure(
                f"Gershgorin bound stays nonnegative ({bound!r}) near "
                f"s={s_iv!r} of {box!r}"
            )
        if pick == 0:
            mid = s_iv.mid()
            stack.append((Interval(s_iv.lo, mid), x_ivs))
            stack.append((Interval(mid, s_iv.hi), x_ivs))
        else:
            q = pick - 1
            mid = x_ivs[q].mid()
            lo_half = list(x_ivs)
            hi_half = list(x_ivs)
            lo_half[q] = Interval(x_ivs[q].lo, mid)
            hi_half[q] = Interval(mid, x_ivs[q].hi)
            stack.append((s_iv, lo_half))
            stack.append((s_iv, hi_half))
    radius = min(box.s_max, box.x_radius)
    epsilon = mul_down(0.9, mul_down(radius, radius))
    epsilon = min(epsilon, 1.0)
    if not (epsilon > 0.0 and c_min > 0.0):
        raise ValidationFailure("degenerate validated quantities")
    return LyapunovDomain(box=box, epsilon=epsilon, c=c_min)


def find_domain(p: ProblemParams, epsilon_target: float) -> LyapunovDomain:
    """Shrink a candidate box geometrically until validation succeeds."""
    if not (0.0 < epsilon_target <= 1.0):
        raise DomainError(f"epsilon target must lie in (0, 1], got {epsilon_target!r}")
    extent = min(sqrt_up(epsilon_target) / 0.9, 1.0)
    last_err: ValidationFailure | None = None
    for _ in range(60):
        try:
            return validate_domain(p, CandidateBox(s_max=extent, x_radius=extent))
        except ValidationFailure as e:
            last_err = e
            extent *= 0.7
    raise ValidationFailure(
        f"no validated domain down to extent {extent!r}: {last_err}"
    )
