from fractions import Fraction

import mpmath
import pytest

from fibtype.families import FamilyParams, example1_seed
from fibtype.linalg import proj_dist, scalar
from fibtype.sequence import FibSequence
from fibtype.xi import (BigReal, DegenerateSequence, PrecisionError, delta_sequence, dist_ratios,
                        residuals, xi_approx, xi_at_depth, y_vector)


def test_xi_212(family_seq):
    x = xi_approx(family_seq(2, 1, 2), 4)
    assert x.decimal(4) == "2.8744"
    assert x.contains(Fraction(62498, 21743)) or x.value == Fraction(62498, 21743)
    assert str(x).startswith("2.8744")


def test_degenerate_raises():
    with pytest.raises(DegenerateSequence):
        xi_approx(FibSequence(example1_seed(FamilyParams(2, 1, 1))), 4)


def test_unreachable_digits_carry_best(family_seq):
    with pytest.raises(PrecisionError) as exc:
        xi_approx(family_seq(2, 3, 4), 10 ** 6, max_depth=8)
    assert exc.value.best is not None and exc.value.best.err > 0


def test_thousand_digits(family_seq):
    s = family_seq(2, 3, 4)
    x = xi_approx(s, 1000)
    assert x.err <= Fraction(1, 2 * 10 ** 1000)
    assert 12 <= x.depth <= 18
    # deeper approximant inside the certified interval
    assert x.contains(xi_at_depth(s, x.depth + 2).value)


def test_monotone_certification(family_seq):
    s = family_seq(2, 3, 4)
    a, b = xi_approx(s, 30), xi_approx(s, 200)
    assert abs(a.value - b.value) <= a.err + b.err
    assert b.decimal(200)[:25] == a.decimal(30)[:25]


def test_delta_contraction(family_seq):
    d = delta_sequence(family_seq(2, 3, 4), 16)
    assert d.i0 is not None and d.i0 <= 6
    for i in range(d.i0, 16):
        assert d.deltas[i + 1] * 4 <= d.deltas[i]


def test_dist_ratio_stable(family_seq):
    r = [float(v) for v in dist_ratios(family_seq(2, 3, 4), 14)[6:]]
    assert max(r) / min(r) < 1.1


def test_y_vector():
    one, x, sq = y_vector(BigReal.exact(0))
    assert (one.value, x.value, sq.value) == (1, 0, 0) and sq.err == 0
    _, _, sq = y_vector(BigReal(Fraction(28744, 10000), Fraction(1, 10000)))
    assert abs(float(sq.value) - 8.2622) < 1e-4
    assert abs(float(sq.err) - 5.75e-4) < 1e-6


def test_second_ratio_converges_to_square(family_seq):
    s = family_seq(2, 1, 2).extend(8)
    y = s.ys[8]
    assert abs(Fraction(y[2], y[0]) - Fraction(y[1], y[0]) ** 2) < Fraction(1, 10 ** 6)


def test_bigreal_from_mpf():
    with mpmath.workdps(50):
        b = BigReal.from_mpf(mpmath.cbrt(2))
        assert b.contains(b.value) and 0 < b.err < Fraction(1, 10 ** 45)
        assert abs(b.value ** 3 - 2) < 10 * b.err


def test_rounded_keeps_interval():
    b = BigReal(Fraction(1, 3), Fraction(1, 10 ** 40))
    r = b.rounded(160)
    assert r.value.denominator <= 2 ** 160 and r.contains(Fraction(1, 3))


def test_residual_bands(family_seq):
    s = family_seq(2, 3, 4)
    xi = xi_at_depth(s, 18)
    wr, zr = [], []
    for i in range(4, 13):
        r = residuals(s, xi, i)
        wr.append(float(r.wedge_norm.value * s.ws[i].norm() / abs(s.dets[i])))
        zr.append(float(r.z_scalar.value * s.ws[i + 2].norm() / abs(s.dets[i + 1])))
    assert max(wr) / min(wr) < 10
    assert max(zr) / min(zr) < 10


def test_z_orthogonal_to_y(family_seq):
    s = family_seq(2, 3, 4)
    assert all(scalar(s.zhats[i], s.ys[i]) == 0 for i in range(12))


def test_residual_needs_precision(family_seq):
    s = family_seq(2, 3, 4)
    with pytest.raises(PrecisionError):
        residuals(s, xi_at_depth(s, 5), 12)
