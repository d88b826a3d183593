"""Rigorous enclosures of the singular family  s^(-k) * exp(-alpha / s^m).

Naive interval evaluation of this family explodes near s = 0 (division by
zero meets an exponential that vanishes faster than any power).  The family
is unimodal for fixed alpha > 0, k >= 1: increasing on (0, (m*alpha/k)^(1/m)),
with derivative  h' = h_{k+1,alpha}(s) * (m*alpha*s^-m - k)  negative beyond
the peak.  Enclosures are therefore assembled from directed evaluations at
the interval endpoints plus, when the peak is interior, a bound of the global
maximum.  The continuous extension by 0 at s = 0 is used for the left
endpoint.  The family is decreasing in alpha, so the lower alpha endpoint
yields upper bounds and vice versa.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError, SingularityError
from .interval import Interval, _mk, div_up, mul_down, mul_up, pow_down, pow_up

__all__ = ["PowExpParams", "powexp", "powexp_deriv"]


@dataclass(frozen=True)
class PowExpParams:
    """Exponents of one family member: power index k, weight alpha, order m."""

    k: int
    alpha: Interval
    m: int

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 0:
            raise DomainError(f"k must be an integer >= 0, got {self.k!r}")
        if not isinstance(self.m, int) or self.m < 1:
            raise DomainError(f"m must be a positive integer, got {self.m!r}")
        if not isinstance(self.alpha, Interval):
            object.__setattr__(self, "alpha", Interval(float(self.alpha)))
        if self.alpha.lo < 0.0:
            raise DomainError(f"alpha must be nonnegative, got {self.alpha!r}")


def _eval_at(k: int, alpha: Interval, m: int, t: float) -> Interval:
    """Enclosure of t^-k * exp(-a/t^m) at an exact float t > 0, a in alpha."""
    tv = Interval.point(t)
    arg = -(alpha / tv.pow_int(m))
    e = arg.exp()
    if k == 0:
        return e
    p = tv.pow_int(-k)
    r = p * e
    if r.hi != r.hi or r.hi == float("inf"):
        # power overflowed; go through logarithms instead
        ln = tv.log() * (-k) + arg
        return ln.exp()
    return r


def _upper_at(k: int, alpha_lo: float, m: int, t: float) -> float:
    return _eval_at(k, Interval.point(alpha_lo), m, t).hi


def _lower_at(k: int, alpha_hi: float, m: int, t: float) -> float:
    return max(_eval_at(k, Interval.point(alpha_hi), m, t).lo, 0.0)


def _peak_location(k: int, alpha_lo: float, m: int) -> Interval:
    """Enclosure of (m*alpha/k)^(1/m), the argmax for weight alpha_lo."""
    base = Interval.point(alpha_lo) * m / k
    if m == 1:
        return base
    if m == 2:
        return base.sqrt()
    # exp(log(base)/m); base > 0 here
    return (base.log() / m).exp()


def _global_max_upper(k: int, alpha_lo: float, m: int) -> float:
    """Upper bound of the global maximum (k/(m*alpha))^(k/m) * e^(-k/m)."""
    a = Interval.point(alpha_lo)
    ratio = Interval.point(float(k)) / (a * m)
    # k/m applied through logarithms to allow fractional exponents
    ln_val = (ratio.log() - 1.0) * (Interval.point(float(k)) / m)
    return ln_val.exp().hi


def powexp(p: PowExpParams, s: Interval) -> Interval:
    """Enclosure of {t^-k e^(-a/t^m) : t in s, a in alpha} with 0-extension.

    Requires s.lo >= 0.  Raises SingularityError when k > 0, alpha touches 0
    and s touches 0 (the limit is unbounded there).
    """
    if not isinstance(s, Interval):
        raise TypeError("s must be an Interval")
    if s.lo < 0.0:
        raise DomainError(f"s must be nonnegative, got {s!r}")
    k, m = p.k, p.m
    a_lo, a_hi = p.alpha.lo, p.alpha.hi

    if k == 0:
        # monotone increasing in s, decreasing in alpha
        if s.hi == 0.0:
            up = 1.0 if a_lo == 0.0 else 0.0
        elif a_lo == 0.0:
            up = 1.0
        else:
            up = _upper_at(0, a_lo, m, s.hi)
        if s.lo == 0.0:
            low = 1.0 if a_hi == 0.0 else 0.0
        else:
            low = _lower_at(0, a_hi, m, s.lo)
        return _mk(low, min(up, 1.0))

    if a_lo == 0.0 and s.lo == 0.0:
        raise SingularityError(
            f"k={k} with alpha touching 0 is unbounded as s -> 0 (s={s!r})"
        )

    # upper bound, weight a_lo
    if a_lo == 0.0:
        # h <= s^-k, decreasing; s.lo > 0 here
        up = div_up(1.0, pow_down(s.lo, k))
    else:
        peak = _peak_location(k, a_lo, m)
        if s.hi == 0.0:
            up = 0.0
        elif s.hi <= peak.lo:
            up = _upper_at(k, a_lo, m, s.hi)  # increasing regime
        elif s.lo >= peak.hi:
            up = _upper_at(k, a_lo, m, s.lo)  # decreasing regime
        else:
            up = _global_max_upper(k, a_lo, m)

    # lower bound, weight a_hi; unimodal => minimum at an endpoint
    if s.lo == 0.0:
        lo_end = 0.0
    else:
        lo_end = _lower_at(k, a_hi, m, s.lo)
    if s.hi == 0.0:
        hi_end = 0.0
    else:
        hi_end = _lower_at(k, a_hi, m, s.hi)
    low = min(lo_end, hi_end)
    if low > up:  # directed roundings of close endpoints may cross slightly
        low = up
    return _mk(low, up)


def powexp_deriv(p: PowExpParams, s: Interval) -> Interval:
    """Enclosure of d/ds of the family, via the zero-division-free identity

        h'_{k,a;m} = m*a*h_{k+m+1,a;m} - k*h_{k+1,a;m},

    which extends continuously by 0 at s = 0.
    """
    k, alpha, m = p.k, p.alpha, p.m
    term1 = powexp(PowExpParams(k + m + 1, alpha, m), s) * alpha * m
    term2 = powexp(PowExpParams(k + 1, alpha, m), s) * k
    return term1 - term2
