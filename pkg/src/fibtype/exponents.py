"""Uniform exponents omega-hat_2 and lambda-hat_2, by candidates and by brute force.

Brute force works in two passes. A float64 pass enumerates every point that
can possibly be a record, with values carried as an exact dyadic part plus a
tiny correction so that small values keep full relative precision. The few
points within float error of a record are then re-evaluated exactly
(rational arithmetic on the approximant of xi) and compared with certified
error bounds.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .families import CorollaryParams, example1_seed, target_interval
from .linalg import canonical_sign, norm
from .sequence import FibSequence
from .xi import BigReal, PrecisionError, flog, residuals, xi_at_depth, y_vector

OMEGA_X_DEFAULT = 5000
LAMBDA_X_DEFAULT = 10 ** 7
CHUNK = 1 << 18

# relative screening slack, far above float64 rounding
_REL = 2.0 ** -44
ROWS_PER_TASK = 4096


@dataclass(frozen=True)
class RecordPoint:
    point: Tuple[int, int, int]
    height: int
    value: Fraction
    err: Fraction = Fraction(0)

    @property
    def log_value(self) -> float:
        return flog(self.value)

    def __float__(self):
        return float(self.value)


@dataclass
class ExponentEstimate:
    kind: str
    method: str
    slope_samples: List[Tuple[int, float]]
    estimate: float
    target_lo: Optional[float] = None
    target_hi: Optional[float] = None

    def in_target(self, tol: float) -> bool:
        return self.target_lo - tol <= self.estimate <= self.target_hi + tol


def _last_quartile_min(values: Sequence[float]) -> float:
    q = max(1, len(values) // 4)
    return min(values[-q:])


# --- float splitting -----------------------------------------------------

class _Split:
    """theta = hi + lo with x * hi exact in float64 for |x| <= X."""

    def __init__(self, theta: Fraction, X: int):
        ib = (abs(theta.numerator) // theta.denominator + 1).bit_length()
        s = 52 - X.bit_length() - ib
        if s < 8:
            raise ValueError(f"coefficient {float(theta):g} too large for X={X}")
        m = math.floor(theta * (1 << s))
        self.hi = m / float(1 << s)
        self.lo = float(theta - Fraction(m, 1 << s))
        self.ulp = 2.0 ** -s

    def parts(self, x: np.ndarray):
        p = x * self.hi
        n = np.rint(p)
        return n, p - n, x * self.lo


def _prepare(y, X: int):
    """Rounded coefficients (xi, eta) and their total error bounds."""
    if len(y) != 3 or y[0].value != 1 or y[0].err != 0:
        raise ValueError("expected y = (1, xi, eta)")
    bits = max(128, 8 * X.bit_length() + 64)
    # short rationals stay exact, so genuine ties remain ties
    return tuple(c if c.value.denominator.bit_length() <= bits else c.rounded(bits) for c in y[1:])


def _check_precision(xi: BigReal, eta: BigReal, X: int):
    bound = Fraction(1, X ** 4)
    if xi.err >= bound or eta.err >= bound:
        raise PrecisionError(f"xi known to {float(xi.err):.3g}; need error < X^-4 = {float(bound):.3g}")


# --- omega side ----------------------------------------------------------

def _dirichlet_bound(H: int, size: float) -> float:
    """Upper bound for min |<x, y>| over 0 < ||x|| <= H (inf if unknown)."""
    if H < 1:
        return math.inf
    n = min(H, math.floor((H - 1) / size))
    return math.inf if n < 1 else 1.0 / (n * n)


def _omega_rows(rows, ctx):
    X, sk, order, n1, r1, t1, n2, r2, t2, thresh = ctx
    lo_all, hi_all, row_all = [], [], []
    c = r2[rows] + t2[rows]
    w = thresh[rows]
    full = w >= 0.5
    for shift in (-1.0, 0.0, 1.0):
        cen = -c + shift
        lo = np.searchsorted(sk, cen - w, "left")
        hi = np.searchsorted(sk, cen + w, "right")
        if shift != 0.0:
            hi = np.where(full, lo, hi)
        else:
            lo = np.where(full, 0, lo)
            hi = np.where(full, len(sk), hi)
        lo_all.append(lo)
        hi_all.append(hi)
        row_all.append(rows)
    lo = np.concatenate(lo_all)
    hi = np.concatenate(hi_all)
    rr = np.concatenate(row_all)
    cnt = np.maximum(hi - lo, 0)
    total = int(cnt.sum())
    if total == 0:
        return None
    start = np.cumsum(cnt) - cnt
    pos = np.repeat(lo - start, cnt) + np.arange(total)
    j = order[pos]
    r = np.repeat(rr, cnt)

    s = r1[j] + r2[r]
    k = np.rint(s)
    v = (s - k) + (t1[j] + t2[r])
    k2 = np.rint(v)
    v = v - k2
    x0 = -(n1[j] + n2[r] + k + k2)
    x1 = (j - X).astype(np.int64)
    x2 = r.astype(np.int64)
    x0 = x0.astype(np.int64)
    keep = (np.abs(x0) <= X) & ((x2 > 0) | (x1 > 0))
    x0, x1, x2, v = x0[keep], x1[keep], x2[keep], np.abs(v[keep])
    h = np.maximum(np.maximum(np.abs(x0), np.abs(x1)), x2)
    return x0, x1, x2, h, v


def _exact_linear(p, xi: BigReal, eta: BigReal):
    x0, x1, x2 = p
    v = abs(x0 + x1 * xi.value + x2 * eta.value)
    return v, abs(x1) * xi.err + abs(x2) * eta.err


def _tiebreak(p):
    # lower-degree polynomial first, then lexicographic
    return (abs(p[2]), abs(p[1]), abs(p[0]), p)


def _exact_records(cands, evaluate) -> List[RecordPoint]:
    """Record points among candidate (height, point) pairs, certified."""
    vals = []
    for h, p in cands:
        v, e = evaluate(p)
        vals.append((h, v, _tiebreak(p), p, e))
    vals.sort(key=lambda t: (t[0], t[1], t[2]))
    out: List[RecordPoint] = []
    best: Optional[Tuple[Fraction, Fraction]] = None
    i = 0
    while i < len(vals):
        h = vals[i][0]
        group = []
        while i < len(vals) and vals[i][0] == h:
            group.append(vals[i])
            i += 1
        _, v, _, p, e = group[0]
        if len(group) > 1:
            _, v2, _, _, e2 = group[1]
            if v2 != v and v2 - v <= e + e2:
                raise PrecisionError(f"cannot separate points at height {h}; refine xi")
        if best is None or v < best[0]:
            if best is not None and best[0] - v <= e + best[1]:
                raise PrecisionError(f"record at height {h} not certified; refine xi")
            best = (v, e)
            out.append(RecordPoint(canonical_sign(p), h, v, e))
        elif v != best[0] and v - best[0] <= e + best[1]:
            raise PrecisionError(f"record status at height {h} not certified; refine xi")
    return out


def _abs_err(X: int, *splits) -> float:
    """Absolute float error bound, from the small parts x * lo."""
    return 2.0 ** -48 * X * sum(sp.ulp for sp in splits) + 2.0 ** -1000


def _screen(h, v, eabs):
    """Indices whose float value could make them a record."""
    idx = np.lexsort((v, h))
    h, v = h[idx], v[idx]
    first = np.r_[True, h[1:] != h[:-1]]
    prev = np.r_[np.inf, np.minimum.accumulate(v[first])[:-1]]
    bound = prev[np.cumsum(first) - 1]
    return idx[v <= bound * (1 + _REL) + 4 * eabs]


def omega_records(y, X: int, threads: int = 1) -> List[RecordPoint]:
    """All record points of |x0 + x1 xi + x2 eta| over 0 < ||x|| <= X."""
    if X < 1:
        raise ValueError("X must be >= 1")
    xi, eta = _prepare(y, X)
    _check_precision(xi, eta, X)
    s1, s2 = _Split(xi.value, X), _Split(eta.value, X)
    x1f = np.arange(-X, X + 1, dtype=np.float64)
    n1, r1, t1 = s1.parts(x1f)
    key = r1 + t1
    order = np.argsort(key, kind="stable")
    sk = key[order]
    x2f = np.arange(0, X + 1, dtype=np.float64)
    n2, r2, t2 = s2.parts(x2f)
    size = abs(float(xi.value)) + abs(float(eta.value))
    thresh = np.array([_dirichlet_bound(r - 1, size) if r > 0 else math.inf for r in range(X + 1)])
    eabs = _abs_err(X, s1, s2)
    thresh = thresh * (1 + _REL) + 4 * eabs
    ctx = (X, sk, order, n1, r1, t1, n2, r2, t2, thresh)

    row_chunks = [np.arange(a, min(a + ROWS_PER_TASK, X + 1)) for a in range(0, X + 1, ROWS_PER_TASK)]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as ex:
        parts = [p for p in ex.map(lambda rows: _omega_rows(rows, ctx), row_chunks) if p is not None]
    x0 = np.concatenate([p[0] for p in parts] + [np.array([1], dtype=np.int64)])
    x1 = np.concatenate([p[1] for p in parts] + [np.array([0], dtype=np.int64)])
    x2 = np.concatenate([p[2] for p in parts] + [np.array([0], dtype=np.int64)])
    h = np.concatenate([p[3] for p in parts] + [np.array([1], dtype=np.int64)])
    v = np.concatenate([p[4] for p in parts] + [np.array([1.0])])
    sel = _screen(h, v, eabs)
    cands = [(int(h[i]), (int(x0[i]), int(x1[i]), int(x2[i]))) for i in sel]
    return _exact_records(cands, lambda p: _exact_linear(p, xi, eta))


def omega_bruteforce(y, X: int, threads: int = 1) -> RecordPoint:
    """Minimizer of |x0 + x1 xi + x2 eta| over non-zero x with ||x|| <= X."""
    return omega_records(y, X, threads)[-1]


def argmin_at(records: Sequence[RecordPoint], X: int) -> RecordPoint:
    """The minimizer over heights <= X, read off a record list."""
    best = None
    for r in records:
        if r.height > X:
            break
        best = r
    if best is None:
        raise ValueError(f"no record at height <= {X}")
    return best


# --- lambda side ---------------------------------------------------------

def _lambda_chunk(a, b, s1, s2):
    x0 = np.arange(a, b, dtype=np.float64)
    out = []
    for s in (s1, s2):
        n, r, t = s.parts(x0)
        k = np.rint(r + t)
        out.append(np.abs((r - k) + t))
    return np.maximum(out[0], out[1])


def _exact_simultaneous(x0: int, xi: BigReal, eta: BigReal):
    vals = []
    for th in (xi, eta):
        p = x0 * th.value
        vals.append(abs(p - round(p)))
    return max(vals), x0 * max(xi.err, eta.err)


def lambda_records(y, X: int, threads: int = 1) -> List[RecordPoint]:
    """Records of max(|x0 xi - x1|, |x0 eta - x2|) for 1 <= x0 <= X."""
    if X < 1:
        raise ValueError("X must be >= 1")
    xi, eta = _prepare(y, X)
    _check_precision(xi, eta, X)
    s1, s2 = _Split(xi.value, X), _Split(eta.value, X)
    bounds = [(a, min(a + CHUNK, X + 1)) for a in range(1, X + 1, CHUNK)]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as ex:
        chunks = list(ex.map(lambda ab: _lambda_chunk(ab[0], ab[1], s1, s2), bounds))
    eabs = _abs_err(X, s1, s2)
    cands = []
    run = math.inf
    for (a, _), v in zip(bounds, chunks):
        prev = np.minimum.accumulate(np.r_[run, v])[:-1]
        sel = np.nonzero(v <= prev * (1 + _REL) + 4 * eabs)[0]
        cands.extend(int(a + i) for i in sel)
        run = min(run, float(v.min()))

    def evaluate(p):
        return _exact_simultaneous(p[0], xi, eta)

    recs = _exact_records([(x0, (x0, 0, 0)) for x0 in cands], evaluate)
    out = []
    for r in recs:
        x0 = r.point[0]
        out.append(RecordPoint((x0, round(x0 * xi.value), round(x0 * eta.value)), x0, r.value, r.err))
    return out


def lambda_bruteforce(y, X: int, threads: int = 1) -> RecordPoint:
    return lambda_records(y, X, threads)[-1]


# --- estimates -----------------------------------------------------------

def uniform_slope(records: Sequence[RecordPoint], kind: str = "omega-hat",
                  method: str = "bruteforce", target=None) -> ExponentEstimate:
    """Uniform exponent from consecutive records (X_j, v_j).

    Between the heights X_j and X_{j+1} the best value available is v_j,
    so the sample at the top of that range is -log v_j / log X_{j+1}.
    """
    if len(records) < 3:
        raise ValueError(f"need at least 3 records, got {len(records)}")
    samples = []
    for cur, nxt in zip(records, records[1:]):
        if nxt.height < 2:
            continue
        s = math.inf if cur.value == 0 else -cur.log_value / math.log(nxt.height)
        samples.append((nxt.height, s))
    est = _last_quartile_min([s for _, s in samples])
    lo, hi = target if target else (None, None)
    return ExponentEstimate(kind, method, samples, est, lo, hi)


def limit_point(seq: FibSequence, i_max: int):
    """(1, xi, xi^2) taken deep enough for residuals up to index i_max + 1."""
    return y_vector(xi_at_depth(seq, i_max + 4))


def candidate_points(seq: FibSequence, i_max: int):
    seq.extend(i_max + 3)
    return [canonical_sign(seq.z(i)) for i in range(i_max + 2)]


def candidate_slopes(seq: FibSequence, y, i_max: int, i_min: int = 3, target=None):
    """Slopes from the z_i (omega side) and the y_i (lambda-side diagnostic)."""
    zs = candidate_points(seq, i_max)
    xi, eta = y[1], y[2]
    om, la = [], []
    for i in range(i_min, i_max + 1):
        v, e = _exact_linear(zs[i], xi, eta)
        if e * 1000 > v:
            raise PrecisionError(f"|<z_{i}, y>| not certified; compute xi deeper")
        # heights of 1 give no slope
        if norm(zs[i + 1]) > 1:
            om.append((i, -flog(v) / math.log(norm(zs[i + 1]))))
        if norm(seq.ys[i + 1]) > 1:
            wn = residuals(seq, xi, i).wedge_norm.value
            la.append((i, -flog(wn) / math.log(norm(seq.ys[i + 1]))))
    lo, hi = target if target else (None, None)
    omega = ExponentEstimate("omega-hat", "candidate", om, _last_quartile_min([s for _, s in om]), lo, hi)
    jl = (1 - 1 / hi, 1 - 1 / lo) if target else (None, None)
    lam = ExponentEstimate("lambda-hat", "candidate-diagnostic", la,
                           _last_quartile_min([s for _, s in la]), *jl)
    return omega, lam


def jarnik_residual(lam: float, omega: float) -> float:
    return lam - (1 - 1 / omega)


def jarnik_check(lambda_est: float, omega_est: float, tol: float) -> bool:
    if omega_est < 2:
        raise ValueError(f"omega-hat estimate {omega_est} is below the Dirichlet floor 2")
    return abs(jarnik_residual(lambda_est, omega_est)) <= tol


def oracle_equivalence(seq: FibSequence, y, X_max: int, threads: int = 1):
    """Compare brute-force minimizers at heights ||z_i|| with the z_i themselves.

    Returns (i, z_i, brute-force point, equal) for every i with
    ||z_i|| <= X_max.
    """
    seq.extend(2)
    out = []
    zs = []
    i = 0
    while True:
        seq.extend(i + 2)
        z = canonical_sign(seq.z(i))
        if norm(z) > X_max:
            break
        zs.append((i, z))
        i += 1
    if not zs:
        return out
    recs = omega_records(y, max(norm(z) for _, z in zs), threads)
    for i, z in zs:
        b = argmin_at(recs, norm(z))
        out.append((i, z, b.point, b.point == z))
    return out


# --- density sweep -------------------------------------------------------

DEFAULT_GRID = ((3, 1), (4, 1), (5, 1), (5, 2), (7, 2), (8, 3))


@dataclass
class SweepRow:
    k: int
    l: int
    a: int
    b: int
    c: int
    depth: int
    target_lo: float
    target_hi: float
    omega_candidate: float
    omega_brute: Optional[float]
    lambda_brute: Optional[float]
    jarnik_residual: Optional[float]
    within_hypothesis: bool = True

    def as_dict(self):
        return asdict(self)


SWEEP_COLUMNS = ["k", "l", "a", "b", "c", "depth", "target_lo", "target_hi", "omega_candidate",
                 "omega_brute", "lambda_brute", "jarnik_residual"]


def sweep_row(p: CorollaryParams, i_max: int, X_omega: int, X_lambda: int, threads: int = 1) -> SweepRow:
    fam = p.family
    seq = FibSequence(example1_seed(fam))
    y = limit_point(seq, i_max)
    lo, hi = target_interval(p, strict=False)
    om, _ = candidate_slopes(seq, y, i_max, target=(lo, hi))
    ob = uniform_slope(omega_records(y, X_omega, threads)).estimate if X_omega else None
    lb = None
    jr = None
    if X_lambda:
        lb = uniform_slope(lambda_records(y, X_lambda, threads), kind="lambda-hat").estimate
        jr = jarnik_residual(lb, om.estimate)
    return SweepRow(p.k, p.l, fam.a, fam.b, fam.c, i_max, lo, hi, om.estimate, ob, lb, jr,
                    p.within_hypothesis)


def density_sweep(grid: Iterable, i_max: int = 14, X_omega: int = OMEGA_X_DEFAULT,
                  X_lambda: int = 10 ** 6, threads: int = 1) -> List[SweepRow]:
    rows = []
    for g in grid:
        p = g if isinstance(g, CorollaryParams) else CorollaryParams(*g)
        rows.append(sweep_row(p, i_max, X_omega, X_lambda, threads))
    return rows
