from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.optimize import brentq

from cylsect import ineq, special


@pytest.fixture(scope="module")
def np_m2():
    return ineq.np_report_m2()


def test_ball_default_grid():
    rep = ineq.verify_ball()
    assert rep.ok, rep.violations
    rows = {round(p, 9): v for p, v, _ in rep.data["rows"]}
    assert abs(rows[2.0] - math.pi / math.sqrt(2.0)) <= 1e-8


def test_ball_p3_strict():
    rep = ineq.verify_ball([3.0])
    (_, value, err), = rep.data["rows"]
    assert value + err < math.pi / math.sqrt(2.0)


def test_ball_rejects_small_p():
    with pytest.raises(special.DomainError):
        ineq.verify_ball([1.5])


@pytest.mark.parametrize("m", [2, 5])
def test_inequality_sweep_default_grid(m):
    rep = ineq.verify_thm4(m)
    assert rep.ok, rep.violations


def test_inequality_sweep_m2_at_two():
    rep = ineq.verify_thm4(2, [2.0])
    value = rep.data["rows"][0][1]
    assert value < math.sqrt(2.0 * math.pi)
    assert value == pytest.approx(16 * math.sqrt(2) / (3 * math.pi), abs=1e-8)


@pytest.mark.parametrize("m,p_list", [(2, (1e2, 1e3, 1e4)), (1, (1e4,)), (8, (1e4,))])
def test_limit_check(m, p_list):
    rep = ineq.limit_check(m, p_list)
    assert rep.ok, rep.violations


def test_limit_check_validates_input():
    with pytest.raises(special.DomainError):
        ineq.limit_check(2, (1e3, 1e2, 1e4))
    with pytest.raises(special.DomainError):
        ineq.limit_check(2, (1e2, 1e3))


def test_gaussian_distribution_example():
    c = ineq.distribution_curve("gaussian", 2, [math.exp(-1.0 / 8.0)])
    assert c.values[0] == pytest.approx(1.0, rel=1e-14)


def test_abs_j_distribution_near_top():
    c = ineq.distribution_curve("abs_j", 2, [0.99])
    s = brentq(lambda x: float(special.normalized_bessel(2, x)) - 0.99, 0.0, 1.0, xtol=1e-15)
    assert c.values[0] == pytest.approx(s, abs=1e-12)
    assert c.values[0] == pytest.approx(math.sqrt(0.08), rel=1e-2)


@pytest.mark.parametrize("kind,m", [("abs_j", 2), ("abs_j", 3), ("j_tilde", 6), ("gaussian", 4)])
def test_distribution_nonincreasing(kind, m):
    y = np.geomspace(1e-5, 0.999, 300)
    vals = ineq.distribution_curve(kind, m, y).values
    assert np.all(np.diff(vals) <= 1e-12)


def test_distribution_against_brute_force_measure():
    y = np.array([0.5, 0.1, 0.05, 0.02])
    vals = ineq.distribution_curve("abs_j", 2, y).values
    s = np.linspace(0.0, 400.0, 4_000_001)
    h = np.abs(special.normalized_bessel(2, s))
    ds = s[1] - s[0]
    for yi, v in zip(y, vals):
        assert v == pytest.approx(np.count_nonzero(h > yi) * ds, abs=5 * ds)


def test_distribution_domain():
    with pytest.raises(special.DomainError):
        ineq.distribution_curve("abs_j", 2, [0.0, 0.5])
    with pytest.raises(special.DomainError):
        ineq.distribution_curve("j_tilde", 4, [0.5])
    with pytest.raises(special.DomainError):
        ineq.distribution_curve("sinc", 2, [0.5])


def test_np_m2_single_crossing(np_m2):
    assert np_m2.ok, np_m2.report.violations
    assert np_m2.sign_changes == 1
    assert np_m2.report.data["changes"][0]["from"] == -1
    assert 2.0 / 3.0 < np_m2.p0 < 2.0
    assert abs(np_m2.report.data["p0_residual"]) <= 1e-6


def test_np_m2_dominance_above_first_max(np_m2):
    y1 = np_m2.report.data["y1"]
    y = np.linspace(y1 * 1.0001, 0.999, 200)
    G = ineq.distribution_curve("gaussian", 2, y).values
    H = ineq.distribution_curve("abs_j", 2, y).values
    assert np.all(G - H >= -1e-10)


def test_np_m2_records_square_integral_discrepancy(np_m2):
    assert any("16 sqrt2/(3 pi)" in d for d in np_m2.report.discrepancies)


def test_fubini_identity():
    rep = ineq.fubini_identity_m2()
    assert rep.ok, rep.violations
    assert abs(rep.data["lhs"] - (math.sqrt(math.pi) - 16.0 / (3.0 * math.pi))) <= 1e-9


def test_np_constants_m2():
    rep = ineq.np_constants_m2()
    assert rep.ok, rep.violations
    y1 = rep.data["y1"]
    c = 2 * math.sqrt(2) / math.pi**2
    assert c * 2.25**-1.5 <= y1 <= c
    assert rep.data["max_hprime_0_s1"] <= 0.4
    assert rep.data["Q2"] > 1.0 > rep.data["Q1"]


@pytest.mark.parametrize("m", [5, 6, 8])
def test_np_high_m(m):
    rep = ineq.np_report_highm(m)
    assert rep.ok, rep.report.violations
    assert m < rep.report.data["crossing_s"] < m + 2
    assert rep.report.data["sqrt2_int_jt2"] < math.sqrt(math.pi) * math.sqrt(m / 2 + 1)
    assert 2.0 / (m + 1) < rep.p0 <= 2.0


def test_np_high_m_domain():
    with pytest.raises(special.DomainError):
        ineq.np_report_highm(4)


def test_j_tilde_tail_closed_form():
    import mpmath

    m, p = 6, 2.0
    head_tail, _ = ineq._jt_integral(m, p)
    mpmath.mp.dps = 25
    c = float(special._large_constant(m))
    tail = mpmath.quad(lambda s: (c * (s * s - m * m / 4.0) ** -0.25 * s ** (-m / 2.0)) ** p, [m, mpmath.inf])
    zeros = special.bessel_zeros(m, 4)
    head = ineq.quad.integrate_panels(lambda s: np.abs(special.normalized_bessel(m, s)) ** p,
                                      np.concatenate([[0.0], zeros[zeros < m], [m]]), rel_tol=1e-13)
    assert head_tail == pytest.approx(head.value + float(tail), rel=1e-12)


@pytest.mark.parametrize("m", [3, 4])
def test_m34_chain(m):
    rep = ineq.verify_m34_chain(m)
    assert rep.ok, rep.violations


def test_m3_reduction_values():
    final = -99.0 / 224.0 * math.sqrt(10.0) * math.sqrt(math.pi) + 32.0 / 27.0
    assert ineq.m3_final_value() == pytest.approx(final, abs=1e-15)
    assert abs(ineq.m3_quadratic(2.0) - final) <= 1e-10
    assert final < 0
    assert ineq.m3_last_summand(2.0) == pytest.approx(32.0 / 27.0, rel=1e-14)
    for p in np.linspace(2.0, 40.0, 400):
        assert ineq.m3_reduction(p) <= 1e-14
        assert ineq.m3_reduction(p) <= ineq.m3_quadratic(p) + 1e-14


def test_m34_chain_domain():
    with pytest.raises(special.DomainError):
        ineq.verify_m34_chain(5)
    with pytest.raises(special.DomainError):
        ineq.verify_m34_chain(3, [1.5])


def test_technical_lemmas():
    rep = ineq.verify_technical_lemmas()
    assert rep.ok, rep.violations
    assert any("m^2 + 2m + 4" in d for d in rep.discrepancies)


def test_oleszkiewicz():
    rep = ineq.oleszkiewicz_check()
    assert rep.ok, rep.violations
    rows = {r["p"]: r for r in rep.data["rows"]}
    assert abs(rows[2.0]["I"] - 2.0) <= 1e-8
    assert rows[4.0]["I"] <= 1.0
    assert not rows[2.0]["sqrt_p_form_holds"]
    assert rows[2.0]["sqrt_p_I"] == pytest.approx(2 * math.sqrt(2), rel=1e-9)


def test_report_relations():
    rep = ineq.Report("t")
    assert rep.check("a", 1.0, 1.0 - 1e-12, 1e-11)
    assert not rep.check("b", 1.0, 0.5)
    assert rep.check("c", 2.0, 1.0, 0.0, ">")
    assert rep.check("d", 1.0, 1.0 + 1e-9, 1e-8, "~")
    assert not rep.ok and len(rep.violations) == 1
    d = rep.to_dict()
    assert d["ok"] is False and len(d["checks"]) == 4
