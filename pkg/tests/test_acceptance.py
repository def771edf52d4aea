"""Acceptance suite: one PASS/FAIL line per criterion, printed to the terminal."""

from __future__ import annotations

import math
import time

import numpy as np
import pytest

from cylsect import extremal, ineq, sections, special


@pytest.fixture
def report(capsys):
    def emit(number: int, ok: bool, detail: str) -> bool:
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} {detail}")
        return ok
    return emit


def test_criterion_01_ball_equality_point(report):
    t0 = time.perf_counter()
    rep = ineq.verify_ball([2.0])
    elapsed = time.perf_counter() - t0
    _, value, err = rep.data["rows"][0]
    target = math.pi / math.sqrt(2.0)
    ok = abs(value - target) <= 1e-8 and elapsed < 1.0
    assert report(1, ok, f"J_1(2)={value:.12f} target={target:.12f} diff={abs(value - target):.2e} "
                         f"err={err:.1e} time={elapsed:.2f}s")


def test_criterion_02_sweep_and_limit(report):
    t0 = time.perf_counter()
    grid = np.geomspace(2.0, 1e4, 50)
    worst_slack, worst_limit, bad = math.inf, 0.0, []
    for m in range(2, 9):
        rep = ineq.verify_thm4(m, grid)
        bound = ineq.ball_limit(m)
        if not rep.ok:
            bad.append(m)
        for p, value, err in rep.data["rows"]:
            if value > bound + err:
                bad.append((m, p))
            worst_slack = min(worst_slack, bound - value)
        p_last, v_last, _ = rep.data["rows"][-1]
        rel = abs(v_last - bound) / bound
        worst_limit = max(worst_limit, rel)
        if not (p_last == pytest.approx(1e4) and rel <= 0.01):
            bad.append(("limit", m))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 120.0
    assert report(2, ok, f"m=2..8 min slack={worst_slack:.3e} max rel distance at p=1e4={worst_limit:.2e} "
                         f"failures={bad} time={elapsed:.1f}s")


@pytest.mark.xfail(strict=True, reason="the golden value 8 sqrt2/(3 pi) is half of the true integral "
                                       "16 sqrt2/(3 pi); see the decisions ledger")
def test_criterion_03_m2_golden_value(report):
    rep = ineq.verify_thm4(2, [2.0])
    _, value, err = rep.data["rows"][0]
    target = 8.0 * math.sqrt(2.0) / (3.0 * math.pi)
    closed = 16.0 * math.sqrt(2.0) / (3.0 * math.pi)
    ok = abs(value - target) <= 1e-8
    assert report(3, ok, f"sqrt2*int|j_1|^2={value:.10f} target={target:.10f} "
                         f"(closed form 16 sqrt2/(3 pi)={closed:.10f}, diff to it {abs(value - closed):.1e})")


def test_criterion_04_j1_zeros(report):
    ref = (3.832, 7.016, 10.173)
    got = [special.j1_zero(k) for k in (1, 2, 3)]
    ok = all(abs(g - e) <= 1e-3 for g, e in zip(got, ref))
    assert report(4, ok, "zeros=" + ", ".join(f"{g:.6f}" for g in got))


def test_criterion_05_closed_form_vs_fourier(report):
    radii = (0.2, 1.0 / (2.0 * math.sqrt(3.0)), 0.5, 1.0, 3.0)
    alphas = np.linspace(0.0, 1.0, 50)
    worst = 0.0
    for r in radii:
        z = sections.CylinderSpec(1, 2, r)
        for a in alphas:
            a = float(a)
            closed = sections.section_area_3d(r, a)
            four = sections.section_volume_fourier(z, [math.sqrt(max(0.0, 1.0 - a * a)), a]).volume
            worst = max(worst, abs(closed - four))
    ok = worst <= 1e-6
    assert report(5, ok, f"max |closed - Fourier| over 5 radii x 50 alphas = {worst:.2e}")


def test_criterion_06_threshold(report):
    crit = 1.0 / (2.0 * math.sqrt(3.0))
    alphas = np.concatenate([np.linspace(0.0, 0.99, 991), 1.0 - np.geomspace(1e-2, 1e-7, 400)[1:], [1.0]])
    radii = np.arange(0.25, 0.33, 5e-4)

    def interior_max(r):
        areas = np.array([sections.section_area_3d(r, float(a)) for a in alphas])
        return alphas[int(np.argmax(areas))] < 1.0

    flags = [interior_max(float(r)) for r in radii]
    first = next(i for i, f in enumerate(flags) if f)
    assert not any(flags[:first]) and all(flags[first:])
    located = 0.5 * (radii[first - 1] + radii[first])
    exact = [extremal.maximal_section_3d(float(r)).shape for r in radii]
    exact_first = float(radii[exact.index("truncated_ellipse")])
    mx = extremal.maximal_section_3d(0.25)
    ok = (abs(located - crit) <= 2e-3 and abs(exact_first - crit) <= 2e-3 and mx.shape == "rectangle"
          and abs(mx.area - 0.5) <= 1e-12)
    assert report(6, ok, f"scan transition={located:.5f} exact-solver transition={exact_first:.5f} "
                         f"target={crit:.7f}; r=0.25 -> {mx.shape} area={mx.area:.12f}")


def test_criterion_07_bound_attainment(report):
    z = sections.CylinderSpec(2, 2, 1.0)
    a = [1 / math.sqrt(2), 1 / math.sqrt(2), 0.0, 0.0]
    vol = sections.section_volume_fourier(z, a).volume
    bound = sections.thm2_upper_bound(z).bound
    target = math.sqrt(2.0) * math.pi
    ok = abs(vol - target) <= 1e-6 and abs(vol - bound) <= 1e-6
    assert report(7, ok, f"volume={vol:.12f} bound={bound:.12f} sqrt2*pi={target:.12f}")


def test_criterion_08_monte_carlo_oracle(report):
    rng = np.random.default_rng(20240611)
    t0 = time.perf_counter()
    worst, bad = 0.0, []
    for k in range(20):
        n = int(rng.integers(1, 6))
        m = int(rng.integers(1, 7 - n))
        r = float(rng.uniform(0.2, 2.0))
        a = np.abs(rng.normal(size=n + m))
        z = sections.CylinderSpec(n, m, r)
        four = sections.section_volume_fourier(z, a)
        mc = sections.section_volume_mc(z, a, samples=10**7, seed=1000 + k)
        eps = mc.details["eps"]
        allowed = 3.0 * (mc.err_est + four.err_est) + 10.0 * eps * eps
        diff = abs(four.volume - mc.volume)
        worst = max(worst, diff / allowed)
        if diff > allowed:
            bad.append((n, m, round(r, 3), four.volume, mc.volume))
    elapsed = time.perf_counter() - t0
    ok = not bad and elapsed < 300.0
    assert report(8, ok, f"20 cases, max |diff|/allowance={worst:.3f} failures={bad} time={elapsed:.1f}s")


def test_criterion_09_np_conditions(report):
    r2 = ineq.np_report_m2()
    parts = [f"m=2 sign changes={r2.sign_changes} p0={r2.p0:.8f}"]
    ok = r2.sign_changes == 1 and 2.0 / 3.0 < r2.p0 < 2.0
    for m in (5, 6, 8):
        rh = ineq.np_report_highm(m)
        d = rh.report.data
        bound = math.sqrt(math.pi) * math.sqrt(m / 2.0 + 1.0)
        ok_m = (d["crossings"] == 1 and m < d["crossing_s"] < m + 2 and d["sqrt2_int_jt2"] < bound)
        ok = ok and ok_m
        parts.append(f"m={m} crossings={d['crossings']} at s={d['crossing_s']:.5f} "
                     f"sqrt2*int jt^2={d['sqrt2_int_jt2']:.6f} < {bound:.6f}")
    assert report(9, ok, "; ".join(parts))


def test_criterion_10_lemma_grids(report):
    lem = ineq.verify_technical_lemmas()
    chain3 = ineq.verify_m34_chain(3)
    chain4 = ineq.verify_m34_chain(4)
    consts = ineq.np_constants_m2()
    closed = -99.0 / 224.0 * math.sqrt(10.0) * math.sqrt(math.pi) + 32.0 / 27.0
    final = ineq.m3_quadratic(2.0)
    violations = len(lem.violations) + len(chain3.violations) + len(chain4.violations) + len(consts.violations)
    ok = (violations == 0 and abs(final - closed) <= 1e-10 and final < 0
          and consts.data["max_hprime_0_s1"] <= 0.4 and consts.data["Q2"] > 1.0)
    assert report(10, ok, f"violations={violations} m=3 final value={final:.12f} closed form={closed:.12f} "
                          f"max|h'|={consts.data['max_hprime_0_s1']:.4f} Q(2)={consts.data['Q2']:.4f}")
