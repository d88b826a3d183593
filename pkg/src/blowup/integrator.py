"""Validated integration of the desingularized flow (interval Taylor series
with mean-value form and orthogonal recoordination of the error set).

Each accepted step carries two guarantees: the *tube* encloses every
trajectory emanating from the current enclosure over the whole step, and the
end-of-step enclosure contains the exact flow image.  The end enclosure is
propagated in the factored form  yhat + B*r  (point + near-orthogonal frame +
interval error set containing 0), which keeps the wrapping effect bounded; an
axis-aligned intersection of the mean-value and factored images is maintained
alongside for monitoring and reporting.

Physical time is carried as an augmented last component with derivative
s^-1 exp(-1/s^m), so the blow-up time integral inherits the step guarantees.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    BlowupError,
    BudgetExhausted,
    DomainError,
    ReframeNeeded,
    StepFailure,
)
from .interval import (
    Interval,
    IntervalVector,
    ONE,
    ZERO,
    _mk,
    add_up,
    div_up,
    mul_up,
    sub_down,
)
from .model import CompactState, ProblemParams
from .powexp import PowExpParams, powexp
from .taylor import conv_at, exp_coeff, horner, recip_coeff

__all__ = [
    "AugmentedState",
    "EnclosureStep",
    "IntegratorOptions",
    "StopCondition",
    "DesingFlowModel",
    "DiagonalFlowModel",
    "apriori_enclosure",
    "step",
    "integrate",
]


@dataclass(frozen=True)
class IntegratorOptions:
    """Knobs of the validated integrator (defaults suit n <= 16)."""

    order: int = 10
    h0: float = 1e-2
    hmin: float = 1e-8
    hmax: float = 0.8
    tube_inflation: float = 1.1
    max_steps: int = 1_000_000
    atol: float = 1e-13

    def __post_init__(self):
        if self.order < 2:
            raise DomainError("order must be >= 2")
        if self.hmin <= 0.0:
            raise DomainError("hmin must be positive")
        if self.tube_inflation <= 1.0:
            raise DomainError("tube_inflation must exceed 1")


@dataclass(frozen=True)
class AugmentedState:
    """Chart enclosure plus the accumulated physical-time enclosure."""

    c: CompactState
    t: Interval

    def to_vector(self) -> list[Interval]:
        return [self.c.s, *self.c.x, self.t]

    @staticmethod
    def from_vector(v: Sequence[Interval]) -> "AugmentedState":
        return AugmentedState(
            c=CompactState(s=v[0], x=IntervalVector(v[1:-1])), t=v[-1]
        )

    @staticmethod
    def initial(c: CompactState) -> "AugmentedState":
        return AugmentedState(c=c, t=ZERO)


@dataclass(frozen=True)
class EnclosureStep:
    """One accepted step: tau range, end-of-step enclosure, step-long tube."""

    tau: Interval
    state: AugmentedState
    tube: AugmentedState


@dataclass(frozen=True)
class StopCondition:
    """Stop at a fixed tau, when a predicate on the end state fires, or both."""

    tau_max: float | None = None
    predicate: Callable[[AugmentedState], bool] | None = None

    @staticmethod
    def at_tau(tau: float) -> "StopCondition":
        return StopCondition(tau_max=float(tau))

    @staticmethod
    def when(pred: Callable[[AugmentedState], bool]) -> "StopCondition":
        return StopCondition(predicate=pred)


class _HorizonTouch(BlowupError):
    """Enclosure reached s <= 0; smaller steps may recover."""


class _XBreach(BlowupError):
    """Some ratio enclosure exceeded 1."""


class _TubeFail(BlowupError):
    """A-priori enclosure did not contract."""


# ---------------------------------------------------------------------------
# flow models: Taylor and variational coefficients
# ---------------------------------------------------------------------------

class DesingFlowModel:
    """Augmented desingularized field, state layout [s, x_1.., x_{n-2}, t],
    with order-by-order Taylor and Jacobian-series builders.
    """

    def __init__(self, p: ProblemParams):
        self.p = p
        self.dim = p.n  # 1 (s) + (n-2) ratios + 1 (t)
        self.monotone_dims = (p.n - 1,)  # physical time never decreases
        self.n2 = float(p.n * p.n)
        c = p.center
        red = p.reduced_indices
        self._red = red
        # slot of grid index i in the state vector (slot 0 is s, last is t)
        self._slot = {i: 1 + k for k, i in enumerate(red)}
        self._left = [self._slot[i - 1] if (i - 1) not in (0, c) else None for i in red]
        self._right = [self._slot[i + 1] if (i + 1) not in (p.n, c) else None for i in red]
        self._center_nb = [i in (c - 1, c + 1) for i in red]
        self._lam = p.lam

    def check_invariants(self, y: Sequence[Interval]) -> None:
        for xi in y[1:-1]:
            if xi.hi > 1.0:
                raise _XBreach(f"ratio enclosure {xi!r} exceeds 1")

    def field(self, y: Sequence[Interval]) -> list[Interval]:
        """Field over a box; the singular factors extend by 0 across s <= 0,
        so boxes dipping below the horizon are admissible here (tubes may).
        """
        p = self.p
        s = y[0]
        s_pos = s if s.lo >= 0.0 else Interval(0.0, max(s.hi, 0.0))
        lam = self._lam
        m = p.m
        c = p.center
        vals = {0: ZERO, p.n: ZERO, c: ONE}
        for i, xi in zip(self._red, y[1:-1]):
            vals[i] = xi
        lap_c = (vals[c - 1] + vals[c + 1] - 2.0) * self.n2
        e0 = powexp(PowExpParams(0, ONE, m), s_pos)
        h1 = powexp(PowExpParams(1, ONE, m), s_pos)
        out = [-(e0 * lap_c) - lam * s]
        for i in self._red:
            xi = vals[i]
            lap_i = (vals[i - 1] - xi * 2.0 + vals[i + 1]) * self.n2
            alpha = ONE - xi.pow_int(m)
            if alpha.lo < 0.0:
                raise _XBreach(f"ratio enclosure {xi!r} exceeds 1")
            g = powexp(PowExpParams(0, alpha, m), s_pos)
            out.append(-(xi * h1 * lap_c) - lam * xi + h1 * lap_i + lam * g)
        out.append(h1)
        return out

    def taylor(self, y: Sequence[Interval], order: int, want_jac: bool):
        """State Taylor coefficients c_0..c_order around any base enclosure y;
        with ``want_jac`` also the field-Jacobian series A_0..A_{order-1}.
        Requires s strictly positive (series divide by s).
        """
        if y[0].lo <= 0.0:
            raise _HorizonTouch(f"s enclosure {y[0]!r} not strictly positive")
        self.check_invariants(y)
        p = self.p
        m = p.m
        lam = self._lam
        n2 = self.n2
        nx = len(self._red)
        mf = float(m)
        lam_m = lam * mf
        lv, rv = self._left, self._right
        slot_l = self._slot[p.center - 1]
        slot_r = self._slot[p.center + 1]

        S: list[Interval] = [y[0]]
        X: list[list[Interval]] = [[y[1 + q]] for q in range(nx)]
        T: list[Interval] = [y[-1]]
        # SP[j] = series of s^j (j = 1..m); XP[q][j] likewise for ratios
        SP: list[list[Interval]] = [[] for _ in range(m + 1)]
        SP[1] = S
        XP = [[[] for _ in range(m + 1)] for _ in range(nx)]
        for q in range(nx):
            XP[q][1] = X[q]
        W: list[Interval] = []    # 1/s^m
        R1: list[Interval] = []   # 1/s
        NW: list[Interval] = []   # -1/s^m
        E: list[Interval] = []    # exp(-1/s^m)
        H11: list[Interval] = []  # s^-1 exp(-1/s^m)
        QX = [[] for _ in range(nx)]  # (x^m - 1)/s^m
        G = [[] for _ in range(nx)]   # exp((x^m - 1)/s^m)
        DC: list[Interval] = []
        DI = [[] for _ in range(nx)]
        U1: list[Interval] = []       # H11 * DC
        FS: list[Interval] = []
        FX = [[] for _ in range(nx)]

        a_order = order - 1 if want_jac else -1
        if want_jac:
            d = self.dim
            H2: list[Interval] = []
            R1P: list[list[Interval]] = [[] for _ in range(m + 3)]
            HM1: list[Interval] = []
            HM2: list[Interval] = []
            D2: list[Interval] = []
            GM1 = [[] for _ in range(nx)]
            GM = [[] for _ in range(nx)]
            A_list: list[list[list[Interval]]] = []

        for k in range(order + 1):
            for j in range(2, m + 1):
                SP[j].append(conv_at(SP[j - 1], S, k))
                for q in range(nx):
                    XP[q][j].append(conv_at(XP[q][j - 1], X[q], k))
            SM = SP[m]
            if k == 0:
                W.append(ONE / SM[0])
                R1.append(W[0] if m == 1 else ONE / S[0])
            else:
                W.append(recip_coeff(SM, W, k))
                R1.append(W[k] if m == 1 else recip_coeff(S, R1, k))
            NW.append(-W[k])
            E.append(NW[0].exp() if k == 0 else exp_coeff(NW, E, k))
            H11.append(conv_at(E, R1, k))
            for q in range(nx):
                PXq = XP[q][m]
                QX[q].append(conv_at(PXq, W, k) - W[k])
                G[q].append(QX[q][0].exp() if k == 0 else exp_coeff(QX[q], G[q], k))
            DC.append((X[slot_l - 1][k] + X[slot_r - 1][k]
                       + (Interval(-2.0) if k == 0 else ZERO)) * n2)
            for q in range(nx):
                left = X[lv[q] - 1][k] if lv[q] is not None else ZERO
                right = X[rv[q] - 1][k] if rv[q] is not None else ZERO
                formal = ONE if (self._center_nb[q] and k == 0) else ZERO
                DI[q].append((left + right + formal - X[q][k] * 2.0) * n2)
            U1.append(conv_at(H11, DC, k))
            FS.append(-conv_at(E, DC, k) - lam * S[k])
            for q in range(nx):
                FX[q].append(
                    -conv_at(X[q], U1, k) - lam * X[q][k]
                    + conv_at(H11, DI[q], k) + lam * G[q][k]
                )

            if k <= a_order:
                H2.append(conv_at(H11, R1, k))
                R1P[1].append(R1[k])
                for j in range(2, m + 3):
                    R1P[j].append(conv_at(R1P[j - 1], R1, k))
                HM1.append(conv_at(E, R1P[m + 1], k))
                HM2.append(conv_at(E, R1P[m + 2], k))
                D2.append(H2[k] - HM2[k] * mf)
                A = [[ZERO] * d for _ in range(d)]
                A[0][0] = -(conv_at(HM1, DC, k)) * mf - (lam if k == 0 else ZERO)
                A[0][slot_l] = -(E[k] * n2)
                A[0][slot_r] = -(E[k] * n2)
                for q in range(nx):
                    GM1[q].append(conv_at(G[q], R1P[m + 1], k))
                    GM[q].append(conv_at(G[q], R1P[m], k))
                A_list.append(A)  # x-rows are filled after all arrays exist
            if k < order:
                k1 = float(k + 1)
                S.append(FS[k] / k1)
                for q in range(nx):
                    X[q].append(FX[q][k] / k1)
                T.append(H11[k] / k1)

        # second pass for the x-row entries requiring product arrays
        if want_jac:
            ZX = [[] for _ in range(nx)]
            for q in range(nx):
                for k in range(a_order + 1):
                    ZX[q].append(conv_at(X[q], DC, k) - DI[q][k])
            for q in range(nx):
                r = 1 + q
                for k in range(a_order + 1):
                    A = A_list[k]
                    t1 = conv_at(D2, ZX[q], k)
                    pg = conv_at(XP[q][m], GM1[q], k) - GM1[q][k]
                    A[r][0] = t1 - lam_m * pg
                    if m == 1:
                        gm_term = GM[q][k]
                    else:
                        gm_term = conv_at(XP[q][m - 1], GM[q], k)
                    diag = -U1[k] - H11[k] * (2.0 * n2) + lam_m * gm_term
                    if k == 0:
                        diag = diag - lam
                    A[r][r] = A[r][r] + diag
                    xh_k = conv_at(X[q], H11, k)
                    A[r][slot_l] = A[r][slot_l] - xh_k * n2
                    A[r][slot_r] = A[r][slot_r] - xh_k * n2
                    if lv[q] is not None:
                        A[r][lv[q]] = A[r][lv[q]] + H11[k] * n2
                    if rv[q] is not None:
                        A[r][rv[q]] = A[r][rv[q]] + H11[k] * n2
            for k in range(a_order + 1):
                A_list[k][self.dim - 1][0] = HM2[k] * mf - H2[k]

        coeffs = [[S[k], *(X[q][k] for q in range(nx)), T[k]]
                  for k in range(order + 1)]
        return coeffs, (A_list if want_jac else None)


class DiagonalFlowModel:
    """Surrogate linear model y_d' = rate_d * y_d for engine-level tests."""

    def __init__(self, rates: Sequence[float]):
        self.rates = [Interval(r) for r in rates]
        self.dim = len(self.rates)
        self.monotone_dims: tuple[int, ...] = ()

    def check_invariants(self, y: Sequence[Interval]) -> None:
        pass

    def field(self, y: Sequence[Interval]) -> list[Interval]:
        return [r * v for r, v in zip(self.rates, y)]

    def taylor(self, y: Sequence[Interval], order: int, want_jac: bool):
        coeffs = [list(y)]
        for k in range(order):
            coeffs.append(
                [r * v / float(k + 1) for r, v in zip(self.rates, coeffs[-1])]
            )
        A_list = None
        if want_jac:
            d = self.dim
            A0 = [[self.rates[i] if i == j else ZERO for j in range(d)]
                  for i in range(d)]
            zero_mat = [[ZERO] * d for _ in range(d)]
            A_list = [A0] + [zero_mat] * max(0, order - 1)
        return coeffs, A_list


# ---------------------------------------------------------------------------
# step primitives
# ---------------------------------------------------------------------------

def _inflate(iv: Interval, factor: float, abs_eps: float) -> Interval:
    pad = iv.rad() * (factor - 1.0) + abs_eps
    return iv.widened(pad)


def _tube(model, box: Sequence[Interval], h: float,
          opts: IntegratorOptions) -> list[Interval]:
    """First-order Picard tube: a box T with box + [0,h]*F(T) inside T."""
    span = _mk(0.0, h)
    fb = model.field(box)
    cand = [_inflate(b + f * span, opts.tube_inflation, 1e-38)
            for b, f in zip(box, fb)]
    for _ in range(4):
        model.check_invariants(cand)
        fc = model.field(cand)
        trial = [b + f * span for b, f in zip(box, fc)]
        if all(c.contains_interval(t) for c, t in zip(cand, trial)):
            return trial
        cand = [_inflate(c.hull(t), opts.tube_inflation, 0.0)
                for c, t in zip(cand, trial)]
    raise _TubeFail(f"no contracting tube at h={h!r}")


def _enclose_inverse_orthogonal(Q: np.ndarray) -> list[list[Interval]]:
    """Interval enclosure of Q^-1 for a numerically orthogonal float Q,
    via Q^-1 = (I + E)^-1 Q^T with E = Q^T Q - I small.
    """
    d = Q.shape[0]
    qs = [[Interval.point(float(Q[i, j])) for j in range(d)] for i in range(d)]
    beta = 0.0
    for i in range(d):
        row = 0.0
        for j in range(d):
            acc = ZERO
            for l in range(d):
                acc = acc + qs[l][i] * qs[l][j]
            if i == j:
                acc = acc - 1.0
            row = add_up(row, acc.mag())
        beta = max(beta, row)
    if beta >= 0.5:
        raise StepFailure("recoordination frame lost orthogonality")
    gamma = div_up(beta, sub_down(1.0, beta))
    rowmax = [max(abs(float(Q[b, l])) for l in range(d)) for b in range(d)]
    out = []
    for a in range(d):
        out.append([
            Interval.point(float(Q[b, a])).widened(mul_up(gamma, rowmax[b]))
            for b in range(d)
        ])
    return out


def _mat_ivec(mat: Sequence[Sequence[Interval]],
              vec: Sequence[Interval]) -> list[Interval]:
    out = []
    for row in mat:
        acc = ZERO
        for a, x in zip(row, vec):
            if (a.lo == 0.0 and a.hi == 0.0) or (x.lo == 0.0 and x.hi == 0.0):
                continue
            acc = acc + a * x
        out.append(acc)
    return out


def _mat_imat(a, b) -> list[list[Interval]]:
    d = len(a)
    cols = len(b[0])
    out = [[ZERO] * cols for _ in range(d)]
    for i in range(d):
        ai = a[i]
        oi = out[i]
        for l in range(len(b)):
            ail = ai[l]
            if ail.lo == 0.0 and ail.hi == 0.0:
                continue
            bl = b[l]
            for j in range(cols):
                blj = bl[j]
                if blj.lo == 0.0 and blj.hi == 0.0:
                    continue
                oi[j] = oi[j] + ail * blj
    return out


def _mat_floatmat(a, B: np.ndarray) -> list[list[Interval]]:
    d = len(a)
    cols = B.shape[1]
    out = [[ZERO] * cols for _ in range(d)]
    for i in range(d):
        ai = a[i]
        oi = out[i]
        for l in range(B.shape[0]):
            ail = ai[l]
            if ail.lo == 0.0 and ail.hi == 0.0:
                continue
            for j in range(cols):
                bv = float(B[l, j])
                if bv == 0.0:
                    continue
                oi[j] = oi[j] + ail * bv
    return out


def _floatmat_ivec(B: np.ndarray, vec: Sequence[Interval]) -> list[Interval]:
    out = []
    for i in range(B.shape[0]):
        acc = ZERO
        for j in range(B.shape[1]):
            bv = float(B[i, j])
            if bv == 0.0:
                continue
            acc = acc + vec[j] * bv
        out.append(acc)
    return out


class _Engine:
    """Stateful Lohner stepper over a flow model."""

    def __init__(self, model, y0: Sequence[Interval], opts: IntegratorOptions):
        self.model = model
        self.opts = opts
        self.yhat = [iv.mid() for iv in y0]
        self.B = np.eye(model.dim)
        self.r = [iv - m for iv, m in zip(y0, self.yhat)]
        self.box_repr = list(y0)
        self.box_tight = list(y0)
        self.tau = 0.0
        self.h_next = opts.h0
        self.last_err = 0.0

    def step_once(self, h_cap: float = math.inf) -> EnclosureStep:
        opts = self.opts
        p = opts.order
        model = self.model
        d = model.dim
        h = min(self.h_next, h_cap, opts.hmax)
        rejections = 0
        while True:
            if h < opts.hmin:
                raise StepFailure(f"step size underflow at tau={self.tau!r}")
            try:
                tube = _tube(model, self.box_repr, h, opts)
                coeffs_tube, _ = model.taylor(tube, p + 1, False)
            except (_TubeFail, _HorizonTouch):
                rejections += 1
                if rejections > 30:
                    raise StepFailure(f"no admissible step at tau={self.tau!r}")
                h *= 0.5
                continue
            hp1 = Interval.point(h).pow_int(p + 1)
            rem = [c * hp1 for c in coeffs_tube[p + 1]]
            err = max(iv.width() for iv in rem)
            if err > opts.atol and h > opts.hmin:
                rejections += 1
                if rejections > 30:
                    raise StepFailure(f"local error stuck above atol at tau={self.tau!r}")
                h = max(h * 0.85 * (opts.atol / err) ** (1.0 / (p + 1)),
                        h * 0.25, opts.hmin)
                continue
            break

        hh = Interval.point(h)
        coeffs_pt, _ = model.taylor([Interval.point(v) for v in self.yhat], p, False)
        u_new = [horner([coeffs_pt[k][i] for k in range(p + 1)], hh) + rem[i]
                 for i in range(d)]
        _, A_list = model.taylor(self.box_repr, p, True)
        V = [[ONE if i == j else ZERO for j in range(d)] for i in range(d)]
        S = [row[:] for row in V]
        Vs = [V]
        hpow = ONE
        for q in range(p):
            nxt = [[ZERO] * d for _ in range(d)]
            for j in range(q + 1):
                prod = _mat_imat(A_list[j], Vs[q - j])
                for a in range(d):
                    na, pa = nxt[a], prod[a]
                    for b in range(d):
                        pab = pa[b]
                        if pab.lo == 0.0 and pab.hi == 0.0:
                            continue
                        na[b] = na[b] + pab
            q1 = float(q + 1)
            nxt = [[e / q1 for e in row] for row in nxt]
            Vs.append(nxt)
            hpow = hpow * hh
            for a in range(d):
                sa, na = S[a], nxt[a]
                for b in range(d):
                    e = na[b]
                    if e.lo == 0.0 and e.hi == 0.0:
                        continue
                    sa[b] = sa[b] + e * hpow

        M = _mat_floatmat(S, self.B)
        yhat_new = [iv.mid() for iv in u_new]
        dvec = [iv - mv for iv, mv in zip(u_new, yhat_new)]  # contains 0
        Mmid = np.array([[iv.mid() for iv in row] for row in M])
        Q, _ = np.linalg.qr(Mmid)
        Binv = _enclose_inverse_orthogonal(Q)
        r_new = [a + b for a, b in zip(
            _mat_ivec(_mat_imat(Binv, M), self.r), _mat_ivec(Binv, dvec))]
        box_qr = [Interval.point(mv) + iv
                  for mv, iv in zip(yhat_new, _floatmat_ivec(Q, r_new))]
        box_direct = [u + mr for u, mr in zip(u_new, _mat_ivec(M, self.r))]
        box_tight = []
        for a, b, t in zip(box_qr, box_direct, tube):
            iv = a.intersect(b)
            iv = iv.intersect(t) if iv is not None else None
            if iv is None:
                raise StepFailure("inconsistent enclosures (internal)")
            box_tight.append(iv)
        for dmon in getattr(model, "monotone_dims", ()):
            floor = self.box_tight[dmon].lo
            iv = box_tight[dmon]
            if floor > iv.lo:
                box_tight[dmon] = Interval(min(floor, iv.hi), iv.hi)
        # clip the error set against the tight box (both enclose B^-1(y-yhat));
        # keep 0 inside r so the next mean-value segment stays in the box image
        r_clip = _mat_ivec(Binv, [bt - mv for bt, mv in zip(box_tight, yhat_new)])
        r_final = []
        for a, b in zip(r_new, r_clip):
            iv = a.intersect(b)
            iv = iv if iv is not None else a
            r_final.append(iv.hull(ZERO))
        box_repr = [Interval.point(mv) + iv
                    for mv, iv in zip(yhat_new, _floatmat_ivec(Q, r_final))]

        self.yhat = yhat_new
        self.B = Q
        self.r = r_final
        self.box_repr = box_repr
        self.box_tight = box_tight
        self.last_err = err
        tau0 = self.tau
        self.tau = tau0 + h
        if err > 0.0:
            grow = 0.9 * (opts.atol / err) ** (1.0 / (p + 1))
            self.h_next = h * min(2.0, max(0.5, grow))
        else:
            self.h_next = h * 2.0
        self.h_next = min(self.h_next, opts.hmax)
        return EnclosureStep(
            tau=Interval(tau0, self.tau),
            state=AugmentedState.from_vector(box_tight),
            tube=AugmentedState.from_vector(tube),
        )


# ---------------------------------------------------------------------------
# public interface (desingularized system)
# ---------------------------------------------------------------------------

def apriori_enclosure(p: ProblemParams, a: AugmentedState, h: float,
                      opts: IntegratorOptions | None = None) -> AugmentedState:
    """Step-long tube for the augmented system: a box T with
    a + [0,h] * F(T) inside T, hence containing every solution over the step.
    """
    opts = opts or IntegratorOptions()
    model = DesingFlowModel(p)
    try:
        tube = _tube(model, a.to_vector(), h, opts)
    except (_TubeFail, _HorizonTouch) as e:
        raise StepFailure(str(e)) from e
    except _XBreach as e:
        raise ReframeNeeded(str(e)) from e
    return AugmentedState.from_vector(tube)


def step(p: ProblemParams, a: AugmentedState, h: float,
         opts: IntegratorOptions | None = None) -> EnclosureStep:
    """A single validated step of size at most h from a box enclosure."""
    opts = opts or IntegratorOptions()
    engine = _Engine(DesingFlowModel(p), a.to_vector(), opts)
    engine.h_next = min(h, opts.hmax)
    try:
        return engine.step_once(h_cap=h)
    except _XBreach as e:
        raise ReframeNeeded(str(e)) from e


def integrate(p: ProblemParams, a0: AugmentedState, stop: StopCondition,
              opts: IntegratorOptions | None = None) -> list[EnclosureStep]:
    """Step until the stop condition fires; every step carries containment.

    Raises BudgetExhausted (with partial steps attached) when max_steps runs
    out, ReframeNeeded when a ratio invariant breaks, StepFailure when no
    admissible step exists above hmin.
    """
    opts = opts or IntegratorOptions()
    engine = _Engine(DesingFlowModel(p), a0.to_vector(), opts)
    steps: list[EnclosureStep] = []
    while len(steps) < opts.max_steps:
        cap = math.inf
        if stop.tau_max is not None:
            cap = stop.tau_max - engine.tau
            if cap <= 1e-14 * max(1.0, abs(stop.tau_max)):
                return steps
        try:
            es = engine.step_once(h_cap=cap)
        except _XBreach as e:
            raise ReframeNeeded(str(e)) from e
        steps.append(es)
        if stop.predicate is not None and stop.predicate(es.state):
            return steps
        if stop.tau_max is not None and engine.tau >= stop.tau_max * (1.0 - 1e-14):
            return steps
    raise BudgetExhausted(
        f"stop condition did not fire within {opts.max_steps} steps", steps=steps
    )
