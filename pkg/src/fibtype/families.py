"""The explicit family of seeds and the (t, eps) -> (k, l) -> (a, b, c) map."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .linalg import Mat2
from .sequence import GOLDEN, LogRatio
from .symmetrizer import NotInV, NotInU, SeedPair, solve_n

GOLDEN_SQ = GOLDEN * GOLDEN
INV_GOLDEN_SQ = 1 / GOLDEN_SQ


@dataclass(frozen=True)
class FamilyParams:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if not (self.a >= 2 and self.c >= self.b >= 1):
            raise ValueError(f"need a >= 2 and c >= b >= 1, got {(self.a, self.b, self.c)}")

    @classmethod
    def parse(cls, text: str) -> "FamilyParams":
        a, b, c = (int(t) for t in text.split(","))
        return cls(a, b, c)

    @property
    def degenerate(self) -> bool:
        # det(y0, y1, y2) = a^4 (c - b)
        return self.b == self.c

    def alpha(self) -> LogRatio:
        return LogRatio(self.a, 2 * self.a * (self.c + 1))

    def beta(self) -> LogRatio:
        return LogRatio(self.a, self.a * (self.b + 1))

    def __str__(self):
        return f"{self.a},{self.b},{self.c}"


def family_matrices(p: FamilyParams) -> Tuple[Mat2, Mat2, Mat2]:
    a, b, c = p.a, p.b, p.c
    w0 = Mat2(1, b, a, a * (b + 1))
    w1 = Mat2(1, c, a, a * (c + 1))
    n = Mat2(-1 + a * (b + 1) * (c + 1), -a * (b + 1), -a * (c + 1), a)
    return w0, w1, n


def example1_seed(p: FamilyParams) -> SeedPair:
    """Seeds of the family with the closed-form symmetrizer.

    The closed form is cross-checked against the generic solver whenever the
    solver applies (for b = c the seeds coincide and the solver's system is
    rank deficient).
    """
    w0, w1, n = family_matrices(p)
    assert w0.det == w1.det == p.a
    assert n.det == -p.a
    try:
        n_solved = solve_n(w0, w1)
    except (NotInV, NotInU):
        n_solved = None
    if n_solved is not None:
        # both are primitive, so proportional means equal up to sign
        if n_solved not in (n, -n):
            raise AssertionError(f"solver gave {n_solved}, closed form is {n}")
    for m in (w0 @ n, w1 @ n.T, w1 @ w0 @ n):
        assert m.is_symmetric()
    return SeedPair(w0, w1, n, True)


@dataclass(frozen=True)
class CorollaryParams:
    k: int
    l: int
    t: Optional[float] = None
    eps: Optional[float] = None

    def __post_init__(self):
        if not 0 < self.l < self.k:
            raise ValueError(f"need 0 < l < k, got k={self.k}, l={self.l}")

    @property
    def family(self) -> FamilyParams:
        return FamilyParams(2 ** self.l, 2 ** (self.k - self.l) - 1, 2 ** (self.k - self.l))

    @property
    def beta(self) -> float:
        return self.l / self.k

    @property
    def alpha(self) -> float:
        """The sharper lower exponent log a / log(2a(c+1))."""
        return float(self.family.alpha())

    @property
    def alpha_coarse(self) -> float:
        return self.l / (self.k + 2)

    @property
    def within_hypothesis(self) -> bool:
        # beta < gamma^-2 is needed for the omega-hat bounds
        return self.beta < INV_GOLDEN_SQ


def corollary_params(t: float, eps: float, k_max: int = 10 ** 7) -> CorollaryParams:
    """Smallest k (then smallest l) with t - eps <= l/(k+2) <= l/k < t."""
    if not 0 < t < INV_GOLDEN_SQ:
        raise ValueError(f"t must lie in (0, gamma^-2) = (0, {INV_GOLDEN_SQ:.6f}), got {t}")
    if not eps > 0:
        raise ValueError("eps must be positive")
    tq, lo = Fraction(t), Fraction(t) - Fraction(eps)
    for k in range(2, k_max + 1):
        l = max(1, math.ceil(lo * (k + 2)))
        if l < k and Fraction(l, k) < tq:
            return CorollaryParams(k, l, t, eps)
    raise RuntimeError(f"no (k, l) found with k <= {k_max}")


def target_interval(p: CorollaryParams, strict: bool = True) -> Tuple[float, float]:
    """(gamma^2 - gamma*beta, gamma^2 - gamma*alpha).

    With ``strict`` the parameters must satisfy beta < gamma^-2, which is
    what places the interval inside [2, gamma^2].
    """
    lo = GOLDEN_SQ - GOLDEN * p.beta
    hi = GOLDEN_SQ - GOLDEN * p.alpha
    if strict:
        if not p.within_hypothesis:
            raise ValueError(f"beta = {p.beta:.4f} is not below gamma^-2; bounds do not apply")
        assert 2 < lo <= hi <= GOLDEN_SQ
    return lo, hi


def exponent_interval(alpha: float, beta: float) -> Tuple[float, float]:
    return GOLDEN_SQ - GOLDEN * beta, GOLDEN_SQ - GOLDEN * alpha


def scaled_z(seq, a: int, i: int):
    """a^{-1} z_i as an integer triple; z_i is stored scaled by det(w2)."""
    seq.extend(i + 2)
    den = a * seq.dets[2]
    parts = [divmod(t, den) for t in seq.zhats[i]]
    if any(r for _, r in parts):
        raise ValueError(f"a^-1 z_{i} is not integral")
    return tuple(q for q, _ in parts)
