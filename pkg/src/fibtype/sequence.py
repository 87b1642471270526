"""Admissible Fibonacci sequences w_{i+2} = w_{i+1} w_i and their identities.

Alongside the matrices ``w_i`` we keep the symmetric points ``y_i`` (as
integer triples) and ``zhat_i = det(w_2) z_i`` where
``z_i = det(w_i)^{-1} y_i ^ y_{i+1}``. Scaling by ``det(w_2)`` makes every
``z_i`` integral, so the whole pipeline stays in exact integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import gcd
from typing import List, Optional, Union

import mpmath

from .linalg import (Mat2, add, content, det3, point_det, scale, wedge)
from .report import FAIL, INFO, PASS, SKIP, Report, short
from .symmetrizer import SeedPair

GOLDEN = (1 + math.sqrt(5)) / 2

# y_i recomputed from w_i N_i every this many indices
SPOT_CHECK_EVERY = 4


class FibSequence:
    """Lazily extended admissible Fibonacci sequence."""

    def __init__(self, seed: SeedPair, up_to: int = 2):
        if not seed.admissible or seed.n is None:
            raise ValueError(f"seed pair is not admissible ({seed.reason})")
        self.seed = seed
        self.n = seed.n
        self.ws: List[Mat2] = [seed.w0, seed.w1]
        self.ys = [self._y_from_definition(0), self._y_from_definition(1)]
        self.zhats = []
        self.traces = [w.trace for w in self.ws]
        self.dets = [w.det for w in self.ws]
        self.extend(max(up_to, 2))
        self.d3 = det3(*self.ys[:3])

    def n_at(self, i: int) -> Mat2:
        return self.n if i % 2 == 0 else self.n.T

    def _y_from_definition(self, i: int):
        return (self.ws[i] @ self.n_at(i)).to_point()

    @property
    def depth(self) -> int:
        return len(self.ws) - 1

    def extend(self, up_to: int) -> "FibSequence":
        ws, ys = self.ws, self.ys
        while len(ws) <= up_to:
            i = len(ws)
            ws.append(ws[i - 1] @ ws[i - 2])
            self.traces.append(ws[i].trace)
            self.dets.append(self.dets[i - 1] * self.dets[i - 2])
            if i < 3:
                ys.append(self._y_from_definition(i))
            else:
                j = i - 3
                ys.append(add(scale(self.traces[j + 1], ys[j + 2]),
                              scale(-self.dets[j + 1], ys[j])))
                if i % SPOT_CHECK_EVERY == 0 and ys[i] != self._y_from_definition(i):
                    raise AssertionError(f"y recurrence disagrees with w_i N_i at i={i}")
        d2 = self.dets[2]
        while len(self.zhats) < len(ys) - 1:
            i = len(self.zhats)
            num = scale(d2, wedge(ys[i], ys[i + 1]))
            parts = [divmod(t, self.dets[i]) for t in num]
            if any(r for _, r in parts):
                raise AssertionError(f"det(w2) z_{i} is not integral")
            self.zhats.append(tuple(q for q, _ in parts))
        return self

    def z(self, i: int):
        """Reduced integer point on the line of z_i."""
        zh = self.zhats[i]
        g = content(zh)
        return tuple(t // g for t in zh)

    def __repr__(self):
        return f"FibSequence(w0={self.ws[0]}, w1={self.ws[1]}, N={self.n}, depth={self.depth})"


def extend(seq: FibSequence, up_to: int) -> FibSequence:
    return seq.extend(up_to)


def fibonacci_matrices(w0: Mat2, w1: Mat2, up_to: int) -> List[Mat2]:
    ws = [w0, w1]
    while len(ws) <= up_to:
        ws.append(ws[-1] @ ws[-2])
    return ws


def verify_prop3(seq: FibSequence, i_max: int) -> Report:
    """Check the five recurrences/identities for 0 <= i <= i_max, exactly.

    Item (b) is checked on points recomputed from ``w_i N_i``; the stored
    ``ys`` come from that very recurrence, so they are cross-checked
    against the definition separately.
    """
    seq.extend(i_max + 4)
    rep = Report()
    tr, dt, zh = seq.traces, seq.dets, seq.zhats
    yd = [seq._y_from_definition(i) for i in range(i_max + 4)]
    d2, d3 = dt[2], seq.d3
    for i in range(i_max + 4):
        rep.add("recurrence.y_definition", i, seq.ys[i] == yd[i])
    for i in range(i_max + 1):
        lhs = tr[i + 3]
        rhs = tr[i + 1] * tr[i + 2] - dt[i + 1] * tr[i]
        rep.add("recurrence.trace", i, lhs == rhs, short(lhs - rhs))

        rhs_b = add(scale(tr[i + 1], yd[i + 2]), scale(-dt[i + 1], yd[i]))
        rep.add("recurrence.y", i, yd[i + 3] == rhs_b)

        rhs_c = add(scale(tr[i + 1], zh[i + 1]), scale(dt[i], zh[i]))
        rep.add("recurrence.z", i, zh[i + 3] == rhs_c)

        lhs_d = d2 * det3(yd[i], yd[i + 1], yd[i + 2])
        rhs_d = (-1) ** i * d3 * dt[i + 2]
        rep.add("identity.det3", i, lhs_d == rhs_d, short(lhs_d - rhs_d))

        # z_i ^ z_{i+1} = (-1)^i d3 det(w2)^{-1} y_{i+1}, times det(w2)^2
        rhs_e = scale((-1) ** i * d3 * d2, yd[i + 1])
        rep.add("identity.z_wedge", i, wedge(zh[i], zh[i + 1]) == rhs_e)
    return rep


def integrality_hypotheses(seq: FibSequence) -> List[str]:
    seq.extend(3)
    bad = []
    for i in range(4):
        g = gcd(seq.traces[i], seq.dets[i])
        if g != 1:
            bad.append(f"gcd(tr w{i}, det w{i})={g}")
    if seq.d3 == 0:
        bad.append("det(y0,y1,y2)=0")
    return bad


def verify_cor4(seq: FibSequence, i_max: int) -> Report:
    rep = Report()
    bad = integrality_hypotheses(seq)
    if bad:
        rep.add("integrality.hypotheses", -1, FAIL, "hypotheses not met: " + "; ".join(bad))
        return rep
    rep.add("integrality.hypotheses", -1, PASS)
    seq.extend(i_max + 3)
    ys, dt = seq.ys, seq.dets
    det_y2, d2 = point_det(ys[2]), dt[2]
    q_d, r_d = divmod(det_y2, d2)
    rep.add("integrality.det_w2_divides_det_y2", -1, r_d == 0, f"det(y2)={det_y2}, det(w2)={d2}")
    bound_e = det_y2 * seq.d3
    for i in range(i_max + 1):
        rep.add("integrality.independent", i, det3(ys[i], ys[i + 1], ys[i + 2]) != 0)
        rep.add("integrality.coprime_trace_det", i, gcd(seq.traces[i], dt[i]) == 1)
        rep.add("integrality.w_primitive", i, seq.ws[i].content() == 1)
        cy = content(ys[i])
        rep.add("integrality.y_content", i, r_d == 0 and q_d % cy == 0, f"content(y_{i})={cy}")
        num = scale(d2, wedge(ys[i], ys[i + 1]))
        integral = all(t % dt[i] == 0 for t in num)
        cz = content(seq.zhats[i])
        rep.add("integrality.z_content", i, integral and bound_e % cz == 0, f"content(zhat_{i})={cz}")
    return rep


def special_form(w: Mat2) -> bool:
    """[[a, b], [c, d]] with 1 <= a <= min(b, c) and max(b, c) <= d."""
    a, b, c, d = w.entries()
    return 1 <= a <= min(b, c) and max(b, c) <= d


@dataclass(frozen=True)
class LogRatio:
    """The exponent log(p)/log(q), kept symbolic so comparisons stay exact."""
    p: int
    q: int

    def __float__(self):
        return math.log(self.p) / math.log(self.q)


def _exact_log(n: int, base: int) -> Optional[int]:
    """k with base**k == n, or None."""
    if base < 2 or n < 1:
        return None
    k = 0
    while n % base == 0:
        n //= base
        k += 1
    return k if n == 1 else None


def _pow_le(c, norm_w, expo: Union[LogRatio, float], det_abs, lower: bool) -> bool:
    """Decide (c*norm)^expo <= |det| (lower) or |det| <= (c*norm)^expo."""
    base = c * norm_w
    if isinstance(expo, LogRatio):
        k = _exact_log(det_abs, expo.p)
        if k is not None:
            # |det| = p^k, so the comparison reduces to c*norm vs q^k
            return base <= expo.q ** k if lower else expo.q ** k <= base
    with mpmath.workdps(60):
        e = mpmath.log(expo.p) / mpmath.log(expo.q) if isinstance(expo, LogRatio) else mpmath.mpf(expo)
        lhs = e * mpmath.log(mpmath.mpf(base))
        rhs = mpmath.log(det_abs)
        return lhs <= rhs if lower else rhs <= lhs


def growth_report(ws: List[Mat2], i_max: int, alpha=None, beta=None, c1=1, c2=2) -> Report:
    rep = Report()
    if len(ws) < i_max + 3:
        ws = fibonacci_matrices(ws[0], ws[1], i_max + 2)
    seeds_ok = special_form(ws[0]) and special_form(ws[1])
    if not seeds_ok:
        rep.add("growth.special_form_precondition", -1, FAIL,
                f"seeds not of the form 1<=a<=min(b,c), max(b,c)<=d: {ws[0]}, {ws[1]}")
    else:
        rep.add("growth.special_form_precondition", -1, PASS)
        for i in range(i_max + 3):
            rep.add("growth.special_form", i, special_form(ws[i]))
        for i in range(i_max + 1):
            p = ws[i].norm() * ws[i + 1].norm()
            n2 = ws[i + 2].norm()
            rep.add("growth.product_bounds", i, p < n2 <= 2 * p)

    # ratios ||w_{i+1}|| / ||w_i||^gamma and the same for |det|, in logs
    for name, vals in (("norm", [w.norm() for w in ws]), ("det", [abs(w.det) for w in ws])):
        lr = [math.log(vals[i + 1]) - GOLDEN * math.log(vals[i])
              for i in range(i_max + 2) if vals[i] > 0 and vals[i + 1] > 0]
        if lr:
            rep.add(f"growth.gamma_ratio_{name}", -1, INFO,
                    f"c3={math.exp(min(lr)):.6g} c4={math.exp(max(lr)):.6g}")

    if alpha is None and beta is None:
        rep.add("growth.det_bounds", -1, SKIP, "no (alpha, beta) given")
        return rep
    for i in range(i_max + 3):
        nw, da = ws[i].norm(), abs(ws[i].det)
        ok = True
        if alpha is not None:
            ok &= _pow_le(c2, nw, alpha, da, lower=True)
        if beta is not None:
            ok &= _pow_le(c1, nw, beta, da, lower=False)
        rep.add("growth.det_bounds", i, ok)
    return rep


def verify_growth(seq: FibSequence, i_max: int, alpha=None, beta=None, c1=1, c2=2) -> Report:
    seq.extend(i_max + 2)
    return growth_report(seq.ws, i_max, alpha, beta, c1, c2)


def beta_effective(seq: FibSequence, i: Optional[int] = None) -> float:
    """log|det w_i| / log||w_i|| at index i (default: deepest)."""
    i = seq.depth if i is None else i
    return math.log(abs(seq.dets[i])) / math.log(seq.ws[i].norm())


__all__ = [
    "FibSequence", "extend", "fibonacci_matrices", "verify_prop3", "verify_cor4",
    "verify_growth", "growth_report", "special_form", "LogRatio", "integrality_hypotheses",
    "beta_effective", "GOLDEN", "PASS", "FAIL", "INFO", "SKIP",
]
