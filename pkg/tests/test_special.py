from __future__ import annotations

import math

import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from cylsect import special
from cylsect.special import DomainError, EnvelopeKind


def scipy_normalized(m, s):
    nu = m / 2.0
    s = np.asarray(s, dtype=float)
    return 2.0**nu * math.gamma(nu + 1.0) * sp.jv(nu, s) / s**nu


def test_sinc_case_vanishes_at_pi():
    assert abs(special.normalized_bessel(1, math.pi)) <= 1e-12


@pytest.mark.parametrize("m", range(1, 13))
def test_value_at_zero_is_one(m):
    assert special.normalized_bessel(m, 0.0) == 1.0


def test_first_zero_of_order_one():
    assert abs(special.normalized_bessel(2, 3.832)) <= 1e-3


def test_order_three_halves_closed_form():
    s = 2.5
    ref = 3.0 * (math.sin(s) - s * math.cos(s)) / s**3
    assert abs(special.normalized_bessel(3, s) - ref) <= 1e-12


def test_negative_argument_rejected():
    with pytest.raises(DomainError):
        special.normalized_bessel(2, -1.0)


@pytest.mark.parametrize("m", range(1, 16))
def test_against_scipy(m):
    s = np.concatenate([np.linspace(0.01, 60, 3000), np.geomspace(60, 1e4, 500)])
    ours = special.normalized_bessel(m, s)
    ref = scipy_normalized(m, s)
    assert np.max(np.abs(ours - ref)) <= 1e-12


@pytest.mark.parametrize("m", range(1, 13))
def test_bounded_by_one(m):
    s = np.geomspace(1e-6, 100.0, 2000)
    assert np.all(np.abs(special.normalized_bessel(m, s)) <= 1.0 + 1e-15)


def test_sinc_identity():
    s = np.linspace(1e-6, 50.0, 5001)
    assert np.max(np.abs(special.normalized_bessel(1, s) - np.sin(s) / s)) <= 1e-12


@pytest.mark.parametrize("m", [2, 3, 5, 8])
def test_derivative_matches_finite_difference(m):
    s = np.linspace(0.5, 40.0, 200)
    h = 1e-6
    fd = (special.normalized_bessel(m, s + h) - special.normalized_bessel(m, s - h)) / (2 * h)
    assert np.max(np.abs(special.normalized_bessel_derivative(m, s) - fd)) <= 1e-7


@pytest.mark.parametrize("k,expected", [(1, 3.832), (2, 7.016), (3, 10.173)])
def test_j1_zero_values(k, expected):
    assert abs(special.j1_zero(k) - expected) <= 1e-3


def test_j1_zero_bracket_and_scipy():
    ref = sp.jn_zeros(1, 50)
    for k in range(1, 51):
        z = special.j1_zero(k)
        assert k * math.pi < z < (k + 0.25) * math.pi
        assert abs(z - ref[k - 1]) <= 1e-11


def test_j1_zero_resource_limit():
    with pytest.raises(OverflowError):
        special.j1_zero(11, max_index=10)


@pytest.mark.parametrize("m", [1, 2, 3, 6])
def test_bessel_zeros_against_scipy_roots(m):
    zeros = special.bessel_zeros(m, 30)
    assert np.all(np.abs(scipy_normalized(m, zeros)) <= 1e-12)
    assert np.all(np.diff(zeros) > 2.5)


def test_extrema_interlace_zeros():
    z = special.bessel_zeros(2, 20)
    e = special.bessel_extrema(2, 19)
    assert np.all((z[:-1] < e) & (e < z[1:]))


def test_small_envelope_at_zero():
    assert special.bessel_envelope("small", 2, 0.0) == 1.0


def test_large_envelope_pole():
    vals = [special.bessel_envelope("large", 2, 1.0 + d) for d in (1e-2, 1e-4, 1e-8)]
    assert vals[0] < vals[1] < vals[2] and vals[2] > 1e2


def test_tail_envelope_example():
    assert special.bessel_envelope("tail", 3, 4.5) >= abs(special.normalized_bessel(3, 4.5))


def test_envelope_domain_errors():
    with pytest.raises(DomainError):
        special.bessel_envelope("large", 2, 1.0)
    with pytest.raises(DomainError):
        special.bessel_envelope("exp", 4, 1.0)
    with pytest.raises(DomainError):
        special.bessel_envelope("small", 2, 4.5)
    with pytest.raises(DomainError):
        special.bessel_envelope("tail", 2, 3.0)


def _grid(kind, m):
    lo, hi, lo_open = special.envelope_domain(kind, m)
    if math.isinf(hi):
        g = np.concatenate([np.linspace(lo, lo + 50.0, 400), np.geomspace(lo + 50.0, 2000.0, 200)])
    else:
        g = np.linspace(lo, hi, 400)
    return g[g > lo] if lo_open else g


@pytest.mark.parametrize("kind", list(EnvelopeKind))
@pytest.mark.parametrize("m", range(1, 13))
def test_envelope_domination(kind, m):
    if special.envelope_domain(kind, m) is None:
        pytest.skip("kind not defined for this m")
    s = _grid(kind, m)
    diff = np.abs(special.normalized_bessel(m, s)) - special.bessel_envelope(kind, m, s)
    assert diff.max() <= 1e-12


@pytest.mark.parametrize("m", range(1, 13))
def test_lower_envelope(m):
    s = np.linspace(0.0, 1.0, 500)
    assert np.all(special.bessel_lower_envelope(m, s) <= np.abs(special.normalized_bessel(m, s)) + 1e-12)


def test_lower_envelope_examples():
    v = special.bessel_lower_envelope(2, 1.0)
    assert math.isclose(v, math.exp(-1.0 / 8.0 - 1.0), rel_tol=1e-14)
    assert v <= abs(special.normalized_bessel(2, 1.0))
    w = special.bessel_lower_envelope(5, 0.5)
    assert math.isclose(w, math.exp(-0.25 / 14.0 - 0.0625), rel_tol=1e-14)
    assert w <= abs(special.normalized_bessel(5, 0.5))
    assert special.bessel_lower_envelope(2, 0.0) == 1.0
    with pytest.raises(DomainError):
        special.bessel_lower_envelope(2, 1.5)


def test_j_tilde_branches():
    assert special.j_tilde(5, 2.0) == pytest.approx(abs(special.normalized_bessel(5, 2.0)), abs=0)
    expected = special.bessel_envelope("large", 5, 5.0)
    assert special.j_tilde(5, 5.0) == pytest.approx(expected, rel=1e-15)
    assert special.j_tilde(6, 10.0) >= abs(special.normalized_bessel(6, 10.0))
    with pytest.raises(DomainError):
        special.j_tilde(4, 1.0)
    with pytest.raises(DomainError):
        special.j_tilde(5, -1.0)


@pytest.mark.parametrize("m", range(5, 13))
def test_j_tilde_domination(m):
    s = np.linspace(0.0, 100.0, 5001)
    assert np.all(special.normalized_bessel(m, s) <= special.j_tilde(m, s) + 1e-12)


def test_gamma_ratio_examples():
    assert special.gamma_ratio_halfstep(2.0) == pytest.approx(2.0 / math.sqrt(math.pi), rel=1e-13)
    assert special.gamma_ratio_halfstep(2.0) > math.sqrt(2.0) / 2.0
    assert special.gamma_ratio_halfstep(1.0) == pytest.approx(1.0 / math.sqrt(math.pi), rel=1e-13)
    with pytest.raises(DomainError):
        special.gamma_ratio_halfstep(0.5)


def test_gamma_ratio_lower_bound_grid():
    for x in np.linspace(2.0, 100.0, 500):
        assert special.gamma_ratio_halfstep(x) > math.sqrt(x) / 2.0


def test_gamma_ratio_against_mpmath():
    import mpmath

    mpmath.mp.dps = 30
    for x in np.concatenate([np.linspace(1.0, 200.0, 400), [999.5, 9999.0, 1e4, 3e5, 1e8]]):
        ref = float(mpmath.gamma(x) / mpmath.gamma(x - 0.5))
        assert special.gamma_ratio_halfstep(x) == pytest.approx(ref, rel=1e-13)


def test_ball_volume():
    assert special.ball_volume(2, 1.0) == pytest.approx(math.pi)
    assert special.ball_volume(3, 2.0) == pytest.approx(4.0 / 3.0 * math.pi * 8.0)


@settings(max_examples=200, deadline=None)
@given(m=st.integers(1, 14), s=st.floats(0.0, 5e3, allow_nan=False) | st.floats(1e-300, 1e-3))
def test_property_bounded_and_matches_scipy(m, s):
    v = special.normalized_bessel(m, s)
    assert abs(v) <= 1.0 + 1e-15
    if s > 1e-3:  # scipy's own quotient is 0/0 for tiny s, where the series gives 1 - O(s^2)
        assert abs(v - float(scipy_normalized(m, s))) <= 1e-12
    else:
        assert abs(v - (1.0 - s * s / (2.0 * m + 4.0))) <= 1e-12


@settings(max_examples=100, deadline=None)
@given(m=st.integers(1, 12), s=st.floats(0.0, 200.0, allow_nan=False))
def test_property_small_or_tail_envelope(m, s):
    v = abs(special.normalized_bessel(m, s))
    lo_small, hi_small, _ = special.envelope_domain("small", m)
    if s <= hi_small:
        assert v <= special.bessel_envelope("small", m, s) + 1e-12
    if s >= m / 2.0 + 3.0:
        assert v <= special.bessel_envelope("tail", m, s) + 1e-12
