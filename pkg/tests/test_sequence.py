import math

import pytest

from fibtype.families import FamilyParams, example1_seed
from fibtype.linalg import Mat2, wedge
from fibtype.report import FAIL, INFO, PASS, SKIP
from fibtype.sequence import (FibSequence, LogRatio, beta_effective, fibonacci_matrices,
                              growth_report, special_form, verify_cor4, verify_growth, verify_prop3)
from fibtype.symmetrizer import is_admissible

IDENTITY_CHECKS = ("recurrence.trace", "recurrence.y", "recurrence.z", "identity.det3", "identity.z_wedge")
INTEGRALITY_CHECKS = ("integrality.independent", "integrality.coprime_trace_det", "integrality.w_primitive",
              "integrality.y_content", "integrality.z_content")


def test_first_terms(family_seq):
    s = family_seq(2, 1, 2)
    s.extend(6)
    assert s.ws[2] == Mat2.of([[5, 9], [14, 26]])
    assert s.ys[:6] == [(5, -2, 0), (3, -2, 0), (1, -2, -4), (-3, -10, -28),
                        (-105, -302, -868), (-21743, -62498, -179644)]
    assert s.dets[:6] == [2, 2, 4, 8, 32, 256]
    assert s.d3 == 16


def test_zhat_values(family_seq):
    s = family_seq(2, 1, 2)
    assert s.zhats[0] == (0, 0, -8)
    assert s.zhats[1] == (16, 24, -8)
    assert wedge(s.zhats[0], s.zhats[1]) == tuple(64 * t for t in s.ys[1])


def test_recurrences_hold(family_seq):
    s = family_seq(4, 1, 2).extend(16)
    for i in range(15):
        assert s.ws[i + 2] == s.ws[i + 1] @ s.ws[i]
        assert s.dets[i + 2] == s.dets[i + 1] * s.dets[i]
        assert s.ys[i] == s._y_from_definition(i)


def test_extend_low_index_is_noop(family_seq):
    s = family_seq(2, 1, 2)
    d = s.depth
    s.extend(1)
    assert s.depth == d


@pytest.mark.parametrize("abc", [(2, 1, 2), (4, 1, 2), (2, 3, 4), (3, 5, 9)])
def test_identities(family_seq, abc):
    rep = verify_prop3(family_seq(*abc), 15)
    assert rep.ok, rep.failures[:3]
    for name in IDENTITY_CHECKS:
        assert rep.passed(name)


@pytest.mark.parametrize("abc", [(2, 1, 2), (4, 1, 2), (2, 3, 4)])
def test_integrality(family_seq, abc):
    rep = verify_cor4(family_seq(*abc), 15)
    assert rep.ok, rep.failures[:3]
    for name in INTEGRALITY_CHECKS:
        assert rep.passed(name)


def test_integrality_degenerate_family():
    rep = verify_cor4(FibSequence(example1_seed(FamilyParams(2, 1, 1))), 5)
    assert not rep.ok
    assert "det(y0,y1,y2)=0" in rep.failures[0].witness


def test_content_y2_example(family_seq):
    s = family_seq(2, 1, 2)
    rep = verify_cor4(s, 2)
    assert rep.passed("integrality.y_content")


def test_verify_on_generic_seed():
    pair = is_admissible(Mat2(3, 7, 2, 9), Mat2(4, 1, 5, 8))
    assert pair.admissible
    s = FibSequence(pair)
    assert verify_prop3(s, 10).ok


def test_growth_example(family_seq):
    s = family_seq(2, 1, 2)
    assert s.ws[0].norm() * s.ws[1].norm() < s.ws[2].norm() == 26 <= 2 * 24
    p = FamilyParams(2, 1, 2)
    rep = verify_growth(s, 18, p.alpha(), p.beta())
    assert rep.passed("growth.special_form")
    assert rep.passed("growth.product_bounds")
    assert rep.passed("growth.det_bounds")
    assert any(c.status == INFO for c in rep.checks)


def test_growth_without_exponents_skips(family_seq):
    rep = verify_growth(family_seq(2, 3, 4), 5)
    assert [c.status for c in rep.checks if c.check == "growth.det_bounds"] == [SKIP]


def test_growth_precondition_guard():
    w = Mat2(5, 1, 1, 2)
    rep = growth_report([w, w], 4)
    assert rep.checks[0].check == "growth.special_form_precondition"
    assert rep.checks[0].status == FAIL


def test_special_form():
    assert special_form(Mat2(1, 2, 2, 6))
    assert not special_form(Mat2(3, 2, 2, 6))


def test_det_bounds_detect_violation():
    # an exponent too small for the upper bound must fail
    ws = fibonacci_matrices(Mat2(1, 1, 2, 4), Mat2(1, 2, 2, 6), 8)
    rep = growth_report(ws, 6, beta=LogRatio(2, 1000))
    assert not rep.passed("growth.det_bounds")


def test_log_ratio():
    assert math.isclose(float(LogRatio(2, 8)), 1 / 3)


def test_beta_effective_between_bounds(family_seq):
    s = family_seq(2, 3, 4).extend(14)
    p = FamilyParams(2, 3, 4)
    assert float(p.alpha()) <= beta_effective(s, 14) <= float(p.beta())


def test_report_serialization(family_seq):
    rep = verify_prop3(family_seq(2, 1, 2), 2)
    assert rep.to_csv().splitlines()[0] == "check,index,status,witness"
    assert '"checks"' in rep.to_json(family="2,1,2")
