"""The limit point [y] = [(1, xi, xi^2)] of the projective sequence [y_i].

Approximants are exact rationals ``xi_i = y_{i,1} / y_{i,0}``. The error of
``xi_i`` is bounded by a safety multiple of the gap to the next approximant,
which is only trusted once the contraction delta_{i+1} <= delta_i / 4 has set
in. The constant in the convergence bound is not effective, so the bound is
heuristic; it is cross-checked against deeper approximants in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import List, Optional

import mpmath

from .linalg import norm, proj_dist, wedge
from .sequence import FibSequence, beta_effective

SAFETY = 5
MAX_DEPTH = 60


class DegenerateSequence(ValueError):
    pass


class PrecisionError(RuntimeError):
    def __init__(self, msg, best=None):
        super().__init__(msg)
        self.best = best


def flog(q) -> float:
    """Natural log of |q| for huge ints/fractions without overflow."""
    q = Fraction(q)
    if q == 0:
        return -math.inf
    q = abs(q)
    return math.log(q.numerator) - math.log(q.denominator)


@dataclass(frozen=True)
class BigReal:
    value: Fraction
    err: Fraction = Fraction(0)
    depth: int = -1

    @classmethod
    def exact(cls, v) -> "BigReal":
        return cls(Fraction(v), Fraction(0))

    @classmethod
    def from_mpf(cls, x, err=None) -> "BigReal":
        """Exact dyadic value of an mpf; err defaults to one ulp."""
        x = mpmath.mpf(x)
        man, exp = (int(t) for t in x.man_exp)
        v = Fraction(man) * Fraction(2) ** exp
        if err is None:
            err = Fraction(2) ** (exp + 1) if man else Fraction(0)
        return cls(v, Fraction(err))

    def __float__(self):
        return float(self.value)

    def contains(self, x) -> bool:
        return abs(Fraction(x) - self.value) <= self.err

    def rounded(self, bits: int) -> "BigReal":
        """Dyadic rounding to ``bits`` fractional bits; the error is widened
        to a dyadic upper bound as well, so both stay short."""
        scale = 1 << bits
        v = Fraction(round(self.value * scale), scale)
        e = self.err + abs(v - self.value)
        e = Fraction(-((-e.numerator * scale) // e.denominator), scale)
        return BigReal(v, e, self.depth)

    def decimal(self, digits: int) -> str:
        """Value rounded to ``digits`` places after the point."""
        v = self.value
        with localcontext() as ctx:
            ctx.prec = digits + len(str(abs(v.numerator) // v.denominator)) + 5
            return f"{Decimal(v.numerator) / Decimal(v.denominator):.{digits}f}"

    def err_str(self) -> str:
        if self.err == 0:
            return "0"
        return mpmath.nstr(mpmath.mpf(self.err.numerator) / self.err.denominator, 3)

    def __str__(self):
        d = 12 if self.err == 0 else max(1, int(-flog(self.err) / math.log(10)))
        return f"{self.decimal(d)} ± {self.err_str()}"


@dataclass
class DeltaSeq:
    deltas: List[Fraction]
    i0: Optional[int]

    def contracting_from(self, i: int) -> bool:
        return self.i0 is not None and self.i0 <= i


def delta_sequence(seq: FibSequence, depth: Optional[int] = None) -> DeltaSeq:
    depth = seq.depth if depth is None else depth
    seq.extend(depth)
    ds = [Fraction(abs(seq.dets[i]), seq.ws[i].norm() ** 2) for i in range(depth + 1)]
    i0 = None
    for i in range(len(ds) - 2, -1, -1):
        if ds[i + 1] * 4 <= ds[i]:
            i0 = i
        else:
            break
    return DeltaSeq(ds, i0)


def dist_ratios(seq: FibSequence, depth: int) -> List[Fraction]:
    """dist([y_i], [y_{i+1}]) / delta_i for i < depth."""
    ds = delta_sequence(seq, depth).deltas
    return [proj_dist(seq.ys[i], seq.ys[i + 1]) / ds[i] for i in range(depth)]


def _ratio(y):
    return Fraction(y[1], y[0]) if y[0] else None


def _check_hypotheses(seq: FibSequence):
    if seq.d3 == 0:
        raise DegenerateSequence("det(y0,y1,y2)=0: the points y_i do not converge to an irrational limit")


def xi_at_depth(seq: FibSequence, i: int, safety=SAFETY) -> BigReal:
    """xi_i with err = safety * |xi_i - xi_{i+1}|; needs the contraction at i."""
    _check_hypotheses(seq)
    seq.extend(i + 2)
    a, b = _ratio(seq.ys[i]), _ratio(seq.ys[i + 1])
    if a is None or b is None:
        raise PrecisionError(f"y_{{i,0}} vanishes near depth {i}")
    dseq = delta_sequence(seq, i + 2)
    if not dseq.contracting_from(i):
        raise PrecisionError(f"delta contraction not established at depth {i}")
    return BigReal(a, safety * abs(a - b), i)


def xi_approx(seq: FibSequence, digits: int, max_depth: int = MAX_DEPTH, safety=SAFETY) -> BigReal:
    """Smallest-depth approximant certified to ``digits`` decimals."""
    _check_hypotheses(seq)
    target = Fraction(1, 2 * 10 ** digits)
    best = None
    for i in range(2, max_depth + 1):
        seq.extend(i + 2)
        if seq.ys[i][0] == 0 or seq.ys[i + 1][0] == 0:
            continue
        if not delta_sequence(seq, i + 2).contracting_from(i):
            continue
        x = xi_at_depth(seq, i, safety)
        best = x
        if x.err <= target:
            b = beta_effective(seq, i)
            if b >= 1:
                raise DegenerateSequence(f"effective beta={b:.4f} >= 1; irrationality of the limit not supported")
            return x
    raise PrecisionError(f"{digits} digits not reached by depth {max_depth}", best)


def y_vector(xi: BigReal):
    one = BigReal.exact(1)
    sq = BigReal(xi.value * xi.value, 2 * abs(xi.value) * xi.err + xi.err * xi.err, xi.depth)
    return one, xi, sq


@dataclass(frozen=True)
class Residuals:
    wedge_norm: BigReal
    z_scalar: BigReal


def residuals(seq: FibSequence, xi: BigReal, i: int, rel_tol: float = 1e-3) -> Residuals:
    """||y_i ^ y|| and |<z_i, y>| with y = (1, xi, xi^2), error bounded."""
    seq.extend(i + 2)
    _, x, x2 = y_vector(xi)
    y = (Fraction(1), x.value, x2.value)
    yi = seq.ys[i]
    w = wedge(yi, y)
    w_err = max(abs(yi[1]) * x2.err + abs(yi[2]) * x.err, abs(yi[0]) * x2.err, abs(yi[0]) * x.err)
    wn = norm(w)
    zi = [Fraction(t, seq.dets[2]) for t in seq.zhats[i]]
    zs = abs(zi[0] + zi[1] * x.value + zi[2] * x2.value)
    z_err = abs(zi[1]) * x.err + abs(zi[2]) * x2.err
    for name, v, e in (("||y_i ^ y||", wn, w_err), ("|<z_i, y>|", zs, z_err)):
        if e > v * Fraction(rel_tol):
            raise PrecisionError(f"{name} at i={i} not certified: value {float(v):.3g}, error bound "
                                 f"{float(e):.3g}; compute xi at a deeper index")
    return Residuals(BigReal(wn, w_err, xi.depth), BigReal(zs, z_err, xi.depth))
