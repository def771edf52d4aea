from __future__ import annotations

import math

import numpy as np
import pytest

from cylsect import extremal, sections
from cylsect.sections import CylinderSpec

CRIT = extremal.CRITICAL_RADIUS_3D


def test_no_root_below_threshold():
    assert not extremal.truncation_root(0.2).exists
    assert not extremal.truncation_root(CRIT).exists


def test_root_at_r_one_is_stationary():
    root = extremal.truncation_root(1.0)
    assert root.exists and 0.0 < root.x < 1.0
    assert abs(root.residual) < 1e-12
    alpha = 1.0 / math.sqrt(1.0 + 4.0 * root.x**2)
    assert abs(sections.section_area_3d_derivative(1.0, alpha)) <= 1e-9


def test_root_emerges_from_zero():
    root = extremal.truncation_root(CRIT * (1.0 + 1e-6))
    assert root.exists and root.x < 0.01
    far = extremal.truncation_root(CRIT * 1.01)
    assert far.exists and far.x > root.x


def test_small_x_expansion():
    r = 0.4
    x = 1e-3
    direct = (math.asin(x) / x - (1 + 8 * r * r * x * x) * math.sqrt(1 - x * x)) / x**2
    assert extremal.truncation_condition(r, x) == pytest.approx(2 / 3 - 8 * r * r + (0.2 + 4 * r * r) * x * x, rel=1e-6)
    assert extremal.truncation_condition(r, 0.05) == pytest.approx(
        (math.asin(0.05) / 0.05 - (1 + 8 * r * r * 0.0025) * math.sqrt(1 - 0.0025)) / 0.0025, rel=1e-12)
    assert abs(direct - extremal.truncation_condition(r, x)) <= 1e-6


def test_rectangle_case():
    mx = extremal.maximal_section_3d(0.25)
    assert mx.shape == "rectangle"
    assert mx.area == pytest.approx(0.5)


def test_truncated_ellipse_case():
    mx = extremal.maximal_section_3d(1.0)
    assert mx.shape == "truncated_ellipse"
    assert 1.0 / math.sqrt(5.0) < mx.alpha_max < 1.0
    grid = np.linspace(0.0, 1.0, 10001)
    grid_max = max(sections.section_area_3d(1.0, a) for a in grid)
    assert mx.area >= grid_max - 1e-9


def test_threshold_scan_flips_once():
    rs = np.arange(0.25, 0.35 + 1e-12, 1e-3)
    shapes = [extremal.maximal_section_3d(r).shape for r in rs]
    flips = [i for i in range(1, len(rs)) if shapes[i] != shapes[i - 1]]
    assert len(flips) == 1
    assert shapes[0] == "rectangle" and shapes[-1] == "truncated_ellipse"
    r_flip = 0.5 * (rs[flips[0] - 1] + rs[flips[0]])
    assert abs(r_flip - CRIT) <= 2e-3


def test_boundary_is_rectangle():
    assert extremal.maximal_section_3d(CRIT).shape == "rectangle"


@pytest.mark.parametrize("r", [0.3, 0.5, 1.0, 2.0, 5.0])
def test_stationarity(r):
    mx = extremal.maximal_section_3d(r)
    assert mx.shape == "truncated_ellipse"
    scale = math.pi * (1 + 4 * r * r) / (8 * r)
    assert abs(sections.section_area_3d_derivative(r, mx.alpha_max)) <= 1e-6 * (1 + scale)


@pytest.mark.parametrize("r", [0.2, 0.3, 1.0, 3.0])
def test_derivative_positive_before_alpha_star(r):
    a_star = 1.0 / math.sqrt(1.0 + 4.0 * r * r)
    for alpha in np.linspace(1e-3, a_star, 200):
        assert sections.section_area_3d_derivative(r, alpha) > 0


def test_search_matches_exact_3d():
    res = extremal.search_max_direction(CylinderSpec(1, 2, 1.0), restarts=8)
    assert res.volume == pytest.approx(extremal.maximal_section_3d(1.0).area, abs=1e-6)
    d, v = res
    assert v == res.volume and d == res.direction


def test_search_large_r_attains_bound():
    z = CylinderSpec(2, 2, 3.0)
    res = extremal.search_max_direction(z, restarts=8)
    target = math.sqrt(2.0) * 9.0 * math.pi
    assert res.volume == pytest.approx(target, rel=1e-4)
    assert np.allclose(res.direction.coords, [1 / math.sqrt(2), 1 / math.sqrt(2), 0.0], atol=1e-3)
    assert res.volume <= sections.thm2_upper_bound(z).bound + 1e-6


def test_search_small_r_probe():
    z = CylinderSpec(2, 2, 0.05)
    res = extremal.search_max_direction(z, restarts=8)
    ball_axis = sections.special_direction_volume(z, "ball_axis")
    assert res.volume >= ball_axis - 1e-8
    assert res.volume <= sections.thm2_upper_bound(z).bound + 1e-6


def test_search_budget_warning():
    res = extremal.search_max_direction(CylinderSpec(2, 2, 1.0), restarts=4, max_evals=5)
    assert not res.converged
    assert res.warning


def test_project_simplex():
    u = extremal._project_simplex(np.array([0.5, 0.7, -0.2]))
    assert u.sum() == pytest.approx(1.0) and np.all(u >= 0)
