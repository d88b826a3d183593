"""Outward-rounded interval arithmetic on double-precision endpoints.

Every operation returns an interval that contains the exact real-arithmetic
image of its operands.  Directed rounding is realized portably: each scalar
primitive computes the rounded-to-nearest result together with the sign of
its rounding error (error-free transformations: TwoSum, Dekker's product,
residual checks), and nudges the endpoint outward only when the result is
inexact.  Exact results therefore stay exact, e.g. ``[1,2] + [3,4] == [4,6]``.

Library functions (exp, log) are trusted to be faithful to within 1 ulp and
their results are widened by 2 ulps per endpoint (4 in the subnormal range).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import DimensionError, DomainError

_INF = math.inf
_FLOAT_MAX = 1.7976931348623157e308
_SPLIT = 134217729.0  # 2**27 + 1, Veltkamp splitter
_nextafter = math.nextafter

ScalarLike = Union[int, float, "Interval"]


# ---------------------------------------------------------------------------
# directed scalar primitives
# ---------------------------------------------------------------------------

def add_down(a: float, b: float) -> float:
    s = a + b
    if not math.isfinite(s):
        if s == _INF:
            return _INF if (a == _INF or b == _INF) else _FLOAT_MAX
        return s
    t = s - a
    e = (a - (s - t)) + (b - t)
    if e < 0.0:
        return _nextafter(s, -_INF)
    return s


def add_up(a: float, b: float) -> float:
    s = a + b
    if not math.isfinite(s):
        if s == -_INF:
            return -_INF if (a == -_INF or b == -_INF) else -_FLOAT_MAX
        return s
    t = s - a
    e = (a - (s - t)) + (b - t)
    if e > 0.0:
        return _nextafter(s, _INF)
    return s


def sub_down(a: float, b: float) -> float:
    return add_down(a, -b)


def sub_up(a: float, b: float) -> float:
    return add_up(a, -b)


def mul_down(a: float, b: float) -> float:
    if a == 0.0 or b == 0.0:
        return 0.0
    p = a * b
    ap = abs(p)
    if not (2.3e-292 < ap < 1e292) or abs(a) > 6e297 or abs(b) > 6e297:
        # outside the range where Dekker's error term is exact
        if p == _INF:
            return _INF if (math.isinf(a) or math.isinf(b)) else _FLOAT_MAX
        if p == -_INF or p != p:
            return -_INF
        return _nextafter(p, -_INF)
    ta = _SPLIT * a
    ah = ta - (ta - a)
    al = a - ah
    tb = _SPLIT * b
    bh = tb - (tb - b)
    bl = b - bh
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    if e < 0.0:
        return _nextafter(p, -_INF)
    return p


def mul_up(a: float, b: float) -> float:
    if a == 0.0 or b == 0.0:
        return 0.0
    p = a * b
    ap = abs(p)
    if not (2.3e-292 < ap < 1e292) or abs(a) > 6e297 or abs(b) > 6e297:
        if p == -_INF:
            return -_INF if (math.isinf(a) or math.isinf(b)) else -_FLOAT_MAX
        if p == _INF or p != p:
            return _INF
        return _nextafter(p, _INF)
    ta = _SPLIT * a
    ah = ta - (ta - a)
    al = a - ah
    tb = _SPLIT * b
    bh = tb - (tb - b)
    bl = b - bh
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    if e > 0.0:
        return _nextafter(p, _INF)
    return p


def _div_residual_sign(a: float, b: float, q: float) -> int:
    """Sign of a - q*b, assuming all quantities are in Dekker-safe range."""
    p = q * b
    ta = _SPLIT * q
    ah = ta - (ta - q)
    al = q - ah
    tb = _SPLIT * b
    bh = tb - (tb - b)
    bl = b - bh
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    r = (a - p) - e  # a - p is exact by Sterbenz (p within one ulp-factor of a)
    if r > 0.0:
        return 1
    if r < 0.0:
        return -1
    return 0


def div_down(a: float, b: float) -> float:
    q = a / b
    if q == 0.0:
        if a == 0.0:
            return 0.0
        return _nextafter(0.0, -_INF) if (a > 0.0) != (b > 0.0) else 0.0
    aq = abs(q)
    if not (2.3e-292 < aq < 1e292) or not (2.3e-292 < abs(a) < 1e292) or abs(b) > 6e297:
        if q == _INF:
            return _INF if math.isinf(a) else _FLOAT_MAX
        if q == -_INF or q != q:
            return -_INF
        return _nextafter(q, -_INF)
    sgn = _div_residual_sign(a, b, q)
    if sgn == 0:
        return q
    # exact quotient exceeds q iff residual has the sign of b
    if (sgn > 0) == (b > 0.0):
        return q
    return _nextafter(q, -_INF)


def div_up(a: float, b: float) -> float:
    q = a / b
    if q == 0.0:
        if a == 0.0:
            return 0.0
        return _nextafter(0.0, _INF) if (a > 0.0) == (b > 0.0) else 0.0
    aq = abs(q)
    if not (2.3e-292 < aq < 1e292) or not (2.3e-292 < abs(a) < 1e292) or abs(b) > 6e297:
        if q == -_INF:
            return -_INF if math.isinf(a) else -_FLOAT_MAX
        if q == _INF or q != q:
            return _INF
        return _nextafter(q, _INF)
    sgn = _div_residual_sign(a, b, q)
    if sgn == 0:
        return q
    if (sgn > 0) != (b > 0.0):
        return q
    return _nextafter(q, _INF)


def sqrt_down(a: float) -> float:
    if a == 0.0:
        return 0.0
    s = math.sqrt(a)
    if not (1.6e-146 < s < 1e146):
        return max(0.0, _nextafter(s, -_INF))
    p = s * s
    ts = _SPLIT * s
    sh = ts - (ts - s)
    sl = s - sh
    e = ((sh * sh - p) + 2.0 * sh * sl) + sl * sl
    r = (a - p) - e
    if r >= 0.0:
        return s
    return _nextafter(s, -_INF)


def sqrt_up(a: float) -> float:
    if a == 0.0:
        return 0.0
    s = math.sqrt(a)
    if not (1.6e-146 < s < 1e146):
        return _nextafter(s, _INF)
    p = s * s
    ts = _SPLIT * s
    sh = ts - (ts - s)
    sl = s - sh
    e = ((sh * sh - p) + 2.0 * sh * sl) + sl * sl
    r = (a - p) - e
    if r <= 0.0:
        return s
    return _nextafter(s, _INF)


def exp_down(a: float) -> float:
    if a == 0.0:
        return 1.0
    try:
        v = math.exp(a)
    except OverflowError:
        return _FLOAT_MAX
    if v == 0.0:
        return 0.0
    steps = 4 if v < 1e-300 else 2
    for _ in range(steps):
        v = _nextafter(v, -_INF)
    return max(v, 0.0)


def exp_up(a: float) -> float:
    if a == 0.0:
        return 1.0
    try:
        v = math.exp(a)
    except OverflowError:
        return _INF
    steps = 4 if v < 1e-300 else 2
    for _ in range(steps):
        v = _nextafter(v, _INF)
    return v


def log_down(a: float) -> float:
    if a == 1.0:
        return 0.0
    v = math.log(a)
    return _nextafter(_nextafter(v, -_INF), -_INF)


def log_up(a: float) -> float:
    if a == 1.0:
        return 0.0
    v = math.log(a)
    return _nextafter(_nextafter(v, _INF), _INF)


def pow_down(x: float, k: int) -> float:
    """Lower bound of x**k for x >= 0, integer k >= 0."""
    r = 1.0
    b = x
    while k:
        if k & 1:
            r = mul_down(r, b)
        k >>= 1
        if k:
            b = mul_down(b, b)
    return r


def pow_up(x: float, k: int) -> float:
    r = 1.0
    b = x
    while k:
        if k & 1:
            r = mul_up(r, b)
        k >>= 1
        if k:
            b = mul_up(b, b)
    return r


# ---------------------------------------------------------------------------
# Interval
# ---------------------------------------------------------------------------

class Interval:
    """Closed interval [lo, hi] with containment-preserving arithmetic.

    Instances are immutable values; all operations return new intervals and
    are safe to use from multiple threads.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo: float, hi: float | None = None):
        lo = float(lo)
        hi = lo if hi is None else float(hi)
        if lo != lo or hi != hi:
            raise ValueError("NaN endpoint")
        if lo > hi:
            raise ValueError(f"unordered endpoints [{lo!r}, {hi!r}]")
        self.lo = lo
        self.hi = hi

    # -- constructors ------------------------------------------------------

    @staticmethod
    def point(v: float) -> "Interval":
        return _mk(float(v), float(v))

    @staticmethod
    def from_decimal(text: str) -> "Interval":
        """Tightest interval containing the decimal number in `text`."""
        try:
            exact = Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"not a decimal number: {text!r}") from e
        v = float(exact)
        fv = Fraction(v)
        if fv == exact:
            return _mk(v, v)
        if fv < exact:
            return _mk(v, _nextafter(v, _INF))
        return _mk(_nextafter(v, -_INF), v)

    @staticmethod
    def hull_of(items: Iterable["Interval"]) -> "Interval":
        lo = _INF
        hi = -_INF
        for it in items:
            if it.lo < lo:
                lo = it.lo
            if it.hi > hi:
                hi = it.hi
        if lo > hi:
            raise ValueError("hull of empty collection")
        return _mk(lo, hi)

    # -- basic queries -----------------------------------------------------

    def width(self) -> float:
        return sub_up(self.hi, self.lo)

    def mid(self) -> float:
        if self.lo == self.hi:
            return self.lo
        m = 0.5 * (self.lo + self.hi)
        if not math.isfinite(m):
            m = 0.5 * self.lo + 0.5 * self.hi
        if m < self.lo:
            return self.lo
        if m > self.hi:
            return self.hi
        return m

    def rad(self) -> float:
        return max(sub_up(self.hi, self.mid()), sub_up(self.mid(), self.lo))

    def mag(self) -> float:
        """max |x| over the interval."""
        return max(abs(self.lo), abs(self.hi))

    def mig(self) -> float:
        """min |x| over the interval."""
        if self.lo <= 0.0 <= self.hi:
            return 0.0
        return min(abs(self.lo), abs(self.hi))

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def contains_zero(self) -> bool:
        return self.lo <= 0.0 <= self.hi

    def is_point(self) -> bool:
        return self.lo == self.hi

    def intersect(self, other: "Interval") -> "Interval | None":
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return None
        return _mk(lo, hi)

    def hull(self, other: "Interval") -> "Interval":
        return _mk(min(self.lo, other.lo), max(self.hi, other.hi))

    def widened(self, delta: float) -> "Interval":
        return _mk(sub_down(self.lo, delta), add_up(self.hi, delta))

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: ScalarLike) -> "Interval":
        if isinstance(other, Interval):
            return _mk(add_down(self.lo, other.lo), add_up(self.hi, other.hi))
        o = float(other)
        return _mk(add_down(self.lo, o), add_up(self.hi, o))

    __radd__ = __add__

    def __sub__(self, other: ScalarLike) -> "Interval":
        if isinstance(other, Interval):
            return _mk(sub_down(self.lo, other.hi), sub_up(self.hi, other.lo))
        o = float(other)
        return _mk(sub_down(self.lo, o), sub_up(self.hi, o))

    def __rsub__(self, other: ScalarLike) -> "Interval":
        o = float(other)
        return _mk(sub_down(o, self.hi), sub_up(o, self.lo))

    def __neg__(self) -> "Interval":
        return _mk(-self.hi, -self.lo)

    def __mul__(self, other: ScalarLike) -> "Interval":
        if not isinstance(other, Interval):
            o = float(other)
            if o >= 0.0:
                return _mk(mul_down(self.lo, o), mul_up(self.hi, o))
            return _mk(mul_down(self.hi, o), mul_up(self.lo, o))
        a, b = self.lo, self.hi
        c, d = other.lo, other.hi
        if a >= 0.0:
            if c >= 0.0:
                return _mk(mul_down(a, c), mul_up(b, d))
            if d <= 0.0:
                return _mk(mul_down(b, c), mul_up(a, d))
            return _mk(mul_down(b, c), mul_up(b, d))
        if b <= 0.0:
            if c >= 0.0:
                return _mk(mul_down(a, d), mul_up(b, c))
            if d <= 0.0:
                return _mk(mul_down(b, d), mul_up(a, c))
            return _mk(mul_down(a, d), mul_up(a, c))
        if c >= 0.0:
            return _mk(mul_down(a, d), mul_up(b, d))
        if d <= 0.0:
            return _mk(mul_down(b, c), mul_up(a, c))
        return _mk(min(mul_down(a, d), mul_down(b, c)),
                   max(mul_up(a, c), mul_up(b, d)))

    __rmul__ = __mul__

    def __truediv__(self, other: ScalarLike) -> "Interval":
        if not isinstance(other, Interval):
            other = Interval.point(float(other))
        c, d = other.lo, other.hi
        if c <= 0.0 <= d:
            raise DomainError(f"division by interval containing zero: [{c!r}, {d!r}]")
        a, b = self.lo, self.hi
        if c > 0.0:
            if a >= 0.0:
                return _mk(div_down(a, d), div_up(b, c))
            if b <= 0.0:
                return _mk(div_down(a, c), div_up(b, d))
            return _mk(div_down(a, c), div_up(b, c))
        # d < 0
        if a >= 0.0:
            return _mk(div_down(b, d), div_up(a, c))
        if b <= 0.0:
            return _mk(div_down(b, c), div_up(a, d))
        return _mk(div_down(b, d), div_up(a, d))

    def __rtruediv__(self, other: ScalarLike) -> "Interval":
        return Interval.point(float(other)).__truediv__(self)

    def recip(self) -> "Interval":
        return Interval.point(1.0).__truediv__(self)

    def sqr(self) -> "Interval":
        a, b = self.lo, self.hi
        if a >= 0.0:
            return _mk(mul_down(a, a), mul_up(b, b))
        if b <= 0.0:
            return _mk(mul_down(b, b), mul_up(a, a))
        m = max(-a, b)
        return _mk(0.0, mul_up(m, m))

    def pow_int(self, k: int) -> "Interval":
        """x**k over the interval for integer k (k < 0 needs 0 not inside)."""
        if k < 0:
            return self.pow_int(-k).recip()
        if k == 0:
            return _mk(1.0, 1.0)
        if k == 1:
            return self
        a, b = self.lo, self.hi
        if k % 2 == 0:
            if a >= 0.0:
                return _mk(pow_down(a, k), pow_up(b, k))
            if b <= 0.0:
                return _mk(pow_down(-b, k), pow_up(-a, k))
            return _mk(0.0, pow_up(max(-a, b), k))
        if a >= 0.0:
            return _mk(pow_down(a, k), pow_up(b, k))
        if b <= 0.0:
            return _mk(-pow_up(-a, k), -pow_down(-b, k))
        return _mk(-pow_up(-a, k), pow_up(b, k))

    def exp(self) -> "Interval":
        return _mk(exp_down(self.lo), exp_up(self.hi))

    def log(self) -> "Interval":
        if self.lo <= 0.0:
            raise DomainError(f"log of interval reaching 0: [{self.lo!r}, {self.hi!r}]")
        return _mk(log_down(self.lo), log_up(self.hi))

    def sqrt(self) -> "Interval":
        if self.lo < 0.0:
            raise DomainError(f"sqrt of interval below 0: [{self.lo!r}, {self.hi!r}]")
        return _mk(sqrt_down(self.lo), sqrt_up(self.hi))

    def abs(self) -> "Interval":
        return _mk(self.mig(), self.mag())

    # -- misc --------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Interval):
            return self.lo == other.lo and self.hi == other.hi
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.lo, self.hi))

    def __repr__(self) -> str:
        return f"Interval({self.lo!r}, {self.hi!r})"

    def __str__(self) -> str:
        return f"[{self.lo:.17g}, {self.hi:.17g}]"


def _mk(lo: float, hi: float) -> Interval:
    iv = Interval.__new__(Interval)
    iv.lo = lo
    iv.hi = hi
    return iv


ZERO = _mk(0.0, 0.0)
ONE = _mk(1.0, 1.0)
# math.pi underestimates pi by less than one ulp
PI = _mk(math.pi, _nextafter(math.pi, _INF))


def arith(a: Interval, b: Interval, op: str) -> Interval:
    """Dispatch {add, sub, mul, div} by name (containment-tested surface)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# vectors and matrices
# ---------------------------------------------------------------------------

class IntervalVector:
    """Fixed-length sequence of intervals with dimension-checked operations."""

    __slots__ = ("items",)

    def __init__(self, items: Iterable[Interval]):
        self.items = tuple(items)
        for it in self.items:
            if not isinstance(it, Interval):
                raise TypeError("IntervalVector entries must be Interval")

    @staticmethod
    def from_floats(values: Sequence[float]) -> "IntervalVector":
        return IntervalVector([Interval.point(v) for v in values])

    @staticmethod
    def zeros(n: int) -> "IntervalVector":
        return IntervalVector([ZERO] * n)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, i: int) -> Interval:
        return self.items[i]

    def _check(self, other: "IntervalVector") -> None:
        if len(self.items) != len(other.items):
            raise DimensionError(f"length mismatch {len(self.items)} vs {len(other.items)}")

    def __add__(self, other: "IntervalVector") -> "IntervalVector":
        self._check(other)
        return IntervalVector([a + b for a, b in zip(self.items, other.items)])

    def __sub__(self, other: "IntervalVector") -> "IntervalVector":
        self._check(other)
        return IntervalVector([a - b for a, b in zip(self.items, other.items)])

    def scale(self, s: ScalarLike) -> "IntervalVector":
        return IntervalVector([a * s for a in self.items])

    def norm_sq(self) -> Interval:
        acc = ZERO
        for a in self.items:
            acc = acc + a.sqr()
        return acc

    def max_width(self) -> float:
        return max((a.width() for a in self.items), default=0.0)

    def mids(self) -> list[float]:
        return [a.mid() for a in self.items]

    def contains_point(self, xs: Sequence[float]) -> bool:
        if len(xs) != len(self.items):
            raise DimensionError("point length mismatch")
        return all(a.lo <= x <= a.hi for a, x in zip(self.items, xs))

    def hull(self, other: "IntervalVector") -> "IntervalVector":
        self._check(other)
        return IntervalVector([a.hull(b) for a, b in zip(self.items, other.items)])

    def __eq__(self, other: object) -> bool:
        if isinstance(other, IntervalVector):
            return self.items == other.items
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.items)

    def __repr__(self) -> str:
        return f"IntervalVector({list(self.items)!r})"


class IntervalMatrix:
    """Dense interval matrix (rows of IntervalVector-compatible tuples)."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable[Interval]]):
        self.rows = tuple(tuple(r) for r in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        for r in self.rows:
            if len(r) != self.ncols:
                raise DimensionError("ragged matrix rows")

    @staticmethod
    def identity(n: int) -> "IntervalMatrix":
        return IntervalMatrix(
            [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
        )

    @staticmethod
    def from_floats(values: Sequence[Sequence[float]]) -> "IntervalMatrix":
        return IntervalMatrix(
            [[Interval.point(v) for v in row] for row in values]
        )

    def __getitem__(self, ij) -> Interval:
        i, j = ij
        return self.rows[i][j]

    def row(self, i: int) -> tuple:
        return self.rows[i]

    def __add__(self, other: "IntervalMatrix") -> "IntervalMatrix":
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise DimensionError("matrix shape mismatch")
        return IntervalMatrix(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)]
        )

    def transpose(self) -> "IntervalMatrix":
        return IntervalMatrix(
            [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)]
        )

    def matvec(self, v: IntervalVector | Sequence[Interval]) -> IntervalVector:
        vs = v.items if isinstance(v, IntervalVector) else tuple(v)
        if len(vs) != self.ncols:
            raise DimensionError(f"matvec: {self.ncols} columns vs vector of {len(vs)}")
        out = []
        for row in self.rows:
            acc = ZERO
            for a, x in zip(row, vs):
                if a.lo == 0.0 and a.hi == 0.0:
                    continue
                acc = acc + a * x
            out.append(acc)
        return IntervalVector(out)

    def matmul(self, other: "IntervalMatrix") -> "IntervalMatrix":
        if self.ncols != other.nrows:
            raise DimensionError("matmul shape mismatch")
        bt = other.transpose().rows
        out = []
        for row in self.rows:
            out_row = []
            for col in bt:
                acc = ZERO
                for a, b in zip(row, col):
                    if (a.lo == 0.0 and a.hi == 0.0) or (b.lo == 0.0 and b.hi == 0.0):
                        continue
                    acc = acc + a * b
                out_row.append(acc)
            out.append(out_row)
        return IntervalMatrix(out)

    def contains_matrix(self, values: Sequence[Sequence[float]]) -> bool:
        if len(values) != self.nrows:
            raise DimensionError("row count mismatch")
        for row, vrow in zip(self.rows, values):
            if len(vrow) != self.ncols:
                raise DimensionError("column count mismatch")
            for a, v in zip(row, vrow):
                if not (a.lo <= v <= a.hi):
                    return False
        return True

    def __repr__(self) -> str:
        return f"IntervalMatrix({[list(r) for r in self.rows]!r})"
