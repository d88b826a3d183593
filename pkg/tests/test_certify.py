"""Certification pipeline: trap check, tail bound, certificates, rate fit."""

from __future__ import annotations

import math
import random
from dataclasses import replace

import pytest

from blowup.certify import (
    BlowupCertificate,
    CertifyOptions,
    RateFit,
    certify_blowup,
    rate_diagnostic,
    run_certification,
    tail_bound,
    trap_check,
)
from blowup.errors import BudgetExhausted, DomainError, InsufficientData
from blowup.integrator import AugmentedState, EnclosureStep, IntegratorOptions
from blowup.interval import Interval, IntervalVector
from blowup.lyapunov import CandidateBox, LyapunovDomain
from blowup.model import CompactState, ProblemParams, initial_data

DOM = LyapunovDomain(box=CandidateBox(0.0315, 0.0315), epsilon=8.02e-4, c=1.0)


def _aug(s_lo, s_hi, xs=None) -> AugmentedState:
    xs = xs if xs is not None else [0.0] * 4
    return AugmentedState(
        c=CompactState(s=Interval(s_lo, s_hi),
                       x=IntervalVector.from_floats(xs)),
        t=Interval(0.0),
    )


def test_trap_check_cases():
    assert trap_check(DOM, _aug(1e-3, 1e-3))
    assert not trap_check(DOM, _aug(0.0, 1e-3))  # s must be strictly positive
    # L exactly at epsilon is not strictly inside
    s_edge = math.sqrt(DOM.epsilon)
    assert not trap_check(DOM, _aug(s_edge, s_edge))


def test_tail_bound_values():
    # l_up = epsilon: 2 * exp(-1/sqrt(8.02e-4)) ~ 9.3e-16
    t1 = tail_bound(DOM, 1, 8.02e-4)
    expect1 = 2.0 * math.exp(-1.0 / math.sqrt(8.02e-4))
    assert expect1 <= t1 <= expect1 * (1 + 1e-10)
    assert 5e-16 < t1 < 2e-15
    # l_up = 2e-6: 2 * exp(-1/sqrt(2e-6)), magnitude 1e-307-ish
    t2 = tail_bound(DOM, 1, 2e-6)
    expect2 = 2.0 * math.exp(-1.0 / math.sqrt(2e-6))
    assert expect2 <= t2 <= expect2 * (1 + 1e-6)
    assert 1e-308 < t2 < 1e-306


def test_tail_bound_monotone_to_zero():
    prev = float("inf")
    for l_up in (1e-4, 1e-5, 1e-6, 1e-8, 1e-12):
        t = tail_bound(DOM, 1, l_up)
        assert t <= prev
        prev = t
    assert prev == 0.0 or prev < 1e-300


def test_tail_bound_preconditions():
    with pytest.raises(DomainError):
        tail_bound(DOM, 1, 0.0)
    with pytest.raises(DomainError):
        tail_bound(DOM, 1, 2 * DOM.epsilon)


@pytest.fixture(scope="module")
def cert41():
    p = ProblemParams(4, 1, Interval(1.0))
    return run_certification(p, initial_data("cosine_m1", p))


def test_certificate_coherence(cert41):
    c = cert41.certificate
    assert c.t_max.lo == c.t_bar.lo
    assert c.t_max.hi >= c.t_bar.hi
    assert c.t_max.hi - c.t_bar.hi <= 2 * c.tail + 1e-300
    assert c.l_at_tau_bar.hi < c.epsilon
    assert c.tail <= 1e-100
    assert c.steps_taken == len(cert41.steps)


def test_certificate_trap_strictness(cert41):
    assert trap_check(cert41.domain, cert41.steps[-1].state)


def test_budget_exhausted_propagates():
    p = ProblemParams(4, 1, Interval(1.0))
    opts = CertifyOptions(integrator=IntegratorOptions(max_steps=1))
    with pytest.raises(BudgetExhausted):
        certify_blowup(p, initial_data("cosine_m1", p), opts)


def test_determinism():
    p = ProblemParams(4, 1, Interval(1.0))
    c1 = certify_blowup(p, initial_data("cosine_m1", p))
    c2 = certify_blowup(p, initial_data("cosine_m1", p))
    assert c1 == c2  # wall time excluded from comparison
    d1 = c1.to_json_dict()
    d2 = c2.to_json_dict()
    d1.pop("wall_time_sec")
    d2.pop("wall_time_sec")
    assert d1 == d2


def test_monotone_refinement():
    p = ProblemParams(4, 1, Interval(1.0))
    u0 = initial_data("cosine_m1", p)
    loose = certify_blowup(p, u0, CertifyOptions(
        integrator=IntegratorOptions(atol=1e-11)))
    tight = certify_blowup(p, u0, CertifyOptions(
        integrator=IntegratorOptions(atol=1e-14)))
    assert loose.t_max.intersect(tight.t_max) is not None


def test_json_round_trip(cert41):
    c = cert41.certificate
    again = BlowupCertificate.from_json(c.to_json())
    assert again == c
    assert again.to_json_dict() == c.to_json_dict()  # endpoint-exact


def test_json_field_names(cert41):
    d = cert41.certificate.to_json_dict()
    assert set(d) == {"n", "m", "lambda", "epsilon", "c", "tau_bar", "t_bar",
                      "tail", "t_max", "l_at_tau_bar", "steps",
                      "wall_time_sec"}


def _synthetic_steps(c0: float, m: int, t_max: float, n_pts: int = 40):
    """Steps generated exactly from u = c0 * ln(1/(T-t))^(1/m)."""
    steps = []
    for k in range(n_pts):
        gap = t_max * 10 ** (-1 - 4 * k / n_pts)
        u = c0 * math.log(1.0 / gap) ** (1.0 / m)
        s = 1.0 / u
        st = AugmentedState(
            c=CompactState(s=Interval(s), x=IntervalVector.zeros(2)),
            t=Interval(t_max - gap),
        )
        steps.append(EnclosureStep(tau=Interval(k * 0.1, (k + 1) * 0.1),
                                   state=st, tube=st))
    return steps


def _fake_cert(m: int, t_max: float) -> BlowupCertificate:
    return BlowupCertificate(
        params=ProblemParams(4, m, Interval(1.0)),
        epsilon=1e-3, c=2.0, tau_bar=4.0,
        t_bar=Interval(t_max), tail=0.0, t_max=Interval(t_max),
        l_at_tau_bar=Interval(1e-6), steps_taken=40, wall_time_sec=0.0,
    )


@pytest.mark.parametrize("m", [1, 2])
def test_rate_fit_recovers_synthetic_constant(m):
    c0 = 1.3
    t_max = 0.01
    steps = _synthetic_steps(c0, m, t_max)
    fit = rate_diagnostic(_fake_cert(m, t_max), steps)
    assert abs(fit.c_estimate - c0) / c0 <= 0.01
    assert fit.residual <= 0.01


def test_rate_fit_rejects_constant_trajectory():
    st = AugmentedState(
        c=CompactState(s=Interval(0.02), x=IntervalVector.zeros(2)),
        t=Interval(0.005),
    )
    steps = [EnclosureStep(tau=Interval(k * 0.1, (k + 1) * 0.1),
                           state=st, tube=st) for k in range(40)]
    with pytest.raises(InsufficientData):
        rate_diagnostic(_fake_cert(1, 0.01), steps)


def test_rate_fit_needs_points():
    steps = _synthetic_steps(1.0, 1, 0.01, n_pts=4)
    with pytest.raises(InsufficientData):
        rate_diagnostic(_fake_cert(1, 0.01), steps)


def test_rate_fit_on_certified_run(cert41):
    fit = rate_diagnostic(cert41.certificate, cert41.steps)
    assert fit.points_used >= 10
    assert fit.residual <= 0.1
