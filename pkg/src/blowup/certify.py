"""End-to-end blow-up certification.

Pipeline: confirm the horizon equilibrium at the chart origin, validate a
Lyapunov domain around it, rigorously integrate the compactified flow until
the enclosure sits strictly inside the domain's sublevel set with s > 0, then
enclose the blow-up time as

    t_max  in  [t_low, t_up + (2/(c*m)) * exp(-1/L_up^(m/2))]

where [t_low, t_up] encloses the physical time accumulated up to the stop
point and L_up is the rigorous upper bound of L there.  Entering the
attracting domain forces the desingularized trajectory to converge to the
horizon equilibrium with finite remaining physical time, which is exactly the
blow-up of the original stiff system at the center grid point.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field, replace

from .errors import DomainError, InsufficientData, ValidationFailure
from .integrator import (
    AugmentedState,
    EnclosureStep,
    IntegratorOptions,
    StopCondition,
    integrate,
)
from .interval import Interval, IntervalVector, add_up, div_down, div_up, exp_up, mul_down, mul_up, pow_up, sqrt_up
from .lyapunov import LyapunovDomain, find_domain, lyapunov_value
from .model import CompactState, PhysState, ProblemParams, compactify, desingularized_field

__all__ = [
    "BlowupCertificate",
    "CertifyOptions",
    "CertificationResult",
    "RateFit",
    "trap_check",
    "tail_bound",
    "certify_blowup",
    "run_certification",
    "rate_diagnostic",
]


@dataclass(frozen=True)
class CertifyOptions:
    """Pipeline knobs: domain size target, tail smallness, stop margin."""

    integrator: IntegratorOptions = field(default_factory=IntegratorOptions)
    epsilon_target: float = 1e-3
    tail_target: float = 1e-110
    interior_margin: float = 0.9  # radius fraction of the sublevel set


@dataclass(frozen=True)
class BlowupCertificate:
    """Checked facts of one certification run.

    The conjunction of the recorded facts implies that the solution of the
    discretized system from the given initial data blows up at a finite time
    t_max inside the stored enclosure.
    """

    params: ProblemParams
    epsilon: float
    c: float
    tau_bar: float
    t_bar: Interval
    tail: float
    t_max: Interval
    l_at_tau_bar: Interval
    steps_taken: int
    wall_time_sec: float = field(compare=False)

    def __post_init__(self):
        if self.tail < 0.0:
            raise ValidationFailure("negative tail bound")
        if not (self.t_max.lo == self.t_bar.lo
                and self.t_max.hi == add_up(self.t_bar.hi, self.tail)):
            raise ValidationFailure("certificate t_max does not match t_bar + tail")
        if not self.l_at_tau_bar.hi < self.epsilon:
            raise ValidationFailure("stop state is not inside the sublevel set")

    # -- serialization (field names are part of the external contract) ------

    def to_json_dict(self) -> dict:
        return {
            "n": self.params.n,
            "m": self.params.m,
            "lambda": [self.params.lam.lo, self.params.lam.hi],
            "epsilon": self.epsilon,
            "c": self.c,
            "tau_bar": self.tau_bar,
            "t_bar": [self.t_bar.lo, self.t_bar.hi],
            "tail": self.tail,
            "t_max": [self.t_max.lo, self.t_max.hi],
            "l_at_tau_bar": [self.l_at_tau_bar.lo, self.l_at_tau_bar.hi],
            "steps": self.steps_taken,
            "wall_time_sec": self.wall_time_sec,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2)

    @staticmethod
    def from_json_dict(d: dict) -> "BlowupCertificate":
        return BlowupCertificate(
            params=ProblemParams(
                n=int(d["n"]), m=int(d["m"]),
                lam=Interval(d["lambda"][0], d["lambda"][1]),
            ),
            epsilon=float(d["epsilon"]),
            c=float(d["c"]),
            tau_bar=float(d["tau_bar"]),
            t_bar=Interval(d["t_bar"][0], d["t_bar"][1]),
            tail=float(d["tail"]),
            t_max=Interval(d["t_max"][0], d["t_max"][1]),
            l_at_tau_bar=Interval(d["l_at_tau_bar"][0], d["l_at_tau_bar"][1]),
            steps_taken=int(d["steps"]),
            wall_time_sec=float(d["wall_time_sec"]),
        )

    @staticmethod
    def from_json(text: str) -> "BlowupCertificate":
        return BlowupCertificate.from_json_dict(json.loads(text))


@dataclass(frozen=True)
class CertificationResult:
    certificate: BlowupCertificate
    steps: list[EnclosureStep]
    domain: LyapunovDomain


@dataclass(frozen=True)
class RateFit:
    """Non-rigorous asymptotic profile fit u ~ C * [ln(1/(T-t))]^(1/m)."""

    c_estimate: float
    residual: float
    points_used: int


def trap_check(dom: LyapunovDomain, a: AugmentedState) -> bool:
    """Is the enclosure strictly inside the sublevel set with s > 0?"""
    return lyapunov_value(a.c).hi < dom.epsilon and a.c.s.lo > 0.0


def tail_bound(dom: LyapunovDomain, m: int, l_up: float) -> float:
    """Upper bound of the remaining physical time after entering the domain,
    (2/(c*m)) * exp(-1/l_up^(m/2)), rounded upward.
    """
    if not l_up > 0.0:
        raise DomainError(f"need a positive Lyapunov bound, got {l_up!r}")
    if l_up > dom.epsilon or dom.epsilon > 1.0:
        raise DomainError("tail bound requires l_up <= epsilon <= 1")
    if m % 2 == 0:
        pw = pow_up(l_up, m // 2)
    else:
        pw = sqrt_up(pow_up(l_up, m))
    exponent = -div_down(1.0, pw)
    coef = div_up(2.0, mul_down(dom.c, float(m)))
    return mul_up(coef, exp_up(exponent))


def _origin_is_equilibrium(p: ProblemParams) -> bool:
    origin = CompactState(s=Interval(0.0), x=IntervalVector.zeros(p.n - 2))
    f = desingularized_field(p, origin)
    return all(fi.contains(0.0) and fi.width() <= 1e-14 for fi in f)


def run_certification(p: ProblemParams, u0: PhysState,
                      opts: CertifyOptions | None = None) -> CertificationResult:
    """Full pipeline; returns the certificate plus the trajectory and domain."""
    opts = opts or CertifyOptions()
    t_start = time.perf_counter()

    if not _origin_is_equilibrium(p):
        raise ValidationFailure("chart origin is not a validated equilibrium")

    dom = find_domain(p, opts.epsilon_target)
    margin_sq = opts.interior_margin * opts.interior_margin
    l_stop = dom.epsilon * margin_sq

    def stop_pred(a: AugmentedState) -> bool:
        lv = lyapunov_value(a.c)
        if not (a.c.s.lo > 0.0 and lv.hi < l_stop):
            return False
        return tail_bound(dom, p.m, lv.hi) <= opts.tail_target

    a0 = AugmentedState.initial(compactify(p, u0))
    steps = integrate(p, a0, StopCondition.when(stop_pred), opts.integrator)
    last = steps[-1]
    if not trap_check(dom, last.state):
        raise ValidationFailure("stop state failed the strict trap check")

    l_at = lyapunov_value(last.state.c)
    tail = tail_bound(dom, p.m, l_at.hi)
    t_bar = last.state.t
    cert = BlowupCertificate(
        params=p,
        epsilon=dom.epsilon,
        c=dom.c,
        tau_bar=last.tau.hi,
        t_bar=t_bar,
        tail=tail,
        t_max=Interval(t_bar.lo, add_up(t_bar.hi, tail)),
        l_at_tau_bar=l_at,
        steps_taken=len(steps),
        wall_time_sec=time.perf_counter() - t_start,
    )
    return CertificationResult(certificate=cert, steps=steps, domain=dom)


def certify_blowup(p: ProblemParams, u0: PhysState,
                   opts: CertifyOptions | None = None) -> BlowupCertificate:
    return run_certification(p, u0, opts).certificate


def rate_diagnostic(cert: BlowupCertificate,
                    trajectory: list[EnclosureStep]) -> RateFit:
    """Least-squares C for u_peak(t) = C [ln(1/(T-t))]^(1/m) near the end.

    Midpoint data from the final stretch of steps whose blow-up distance
    T - t is still resolvable above the enclosure width (closer to t_max the
    distance drops below the rigorous t resolution and carries no signal).
    Purely diagnostic, no enclosure semantics.
    """
    m = cert.params.m
    T = cert.t_max.mid()
    floor = max(4.0 * cert.t_max.width(), 5e-300)
    pts: list[tuple[float, float]] = []
    for st in trajectory:
        s = st.state.c.s
        if s.lo <= 0.0:
            continue
        gap = T - st.state.t.mid()
        if gap < floor or math.log(1.0 / gap) <= 0.0:
            continue
        pts.append((gap, 1.0 / s.mid()))
    if len(pts) < 10:
        raise InsufficientData(f"only {len(pts)} usable trajectory points")
    window = pts[-max(10, len(pts) // 3):]
    us = [u for _, u in window]
    if max(us) < 1.2 * min(us):
        raise InsufficientData("peak values do not grow across the fit window")
    gs = [math.log(1.0 / g) ** (1.0 / m) for g, _ in window]
    num = sum(u * g for (_, u), g in zip(window, gs))
    den = sum(g * g for g in gs)
    c_est = num / den
    rms_res = math.sqrt(sum((u - c_est * g) ** 2
                            for (_, u), g in zip(window, gs)) / len(window))
    rms_u = math.sqrt(sum(u * u for u in us) / len(us))
    return RateFit(c_estimate=c_est, residual=rms_res / rms_u,
                   points_used=len(window))
