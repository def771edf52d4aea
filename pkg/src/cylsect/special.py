"""Normalized Bessel functions j_{m/2}, their zeros, pointwise envelopes and gamma helpers.

Throughout, the order of a Bessel function is given by the integer ``m`` with
``nu = m / 2``.  The normalized function is

    j_nu(s) = 2**nu * Gamma(nu + 1) * J_nu(s) / s**nu,    j_nu(0) = 1,

so that ``j_{1/2}(s) = sin(s)/s`` and ``|j_nu| <= 1`` on the half line.
"""

from __future__ import annotations

import enum
import math
from functools import lru_cache

import numpy as np

__all__ = [
    "DomainError",
    "EnvelopeKind",
    "MAX_ZERO_INDEX",
    "normalized_bessel",
    "normalized_bessel_derivative",
    "bessel_j",
    "hankel_coefficients",
    "hankel_threshold",
    "asymptotic_amplitude",
    "j1_zero",
    "bessel_zeros",
    "bessel_extrema",
    "bessel_envelope",
    "envelope_domain",
    "bessel_lower_envelope",
    "tail_envelope_constant",
    "j_tilde",
    "gamma_ratio_halfstep",
    "ball_volume",
]

MAX_ZERO_INDEX = 10**6

_SERIES_MAX = 2.0
_SMALL_M1_LIMIT = 3.38


class DomainError(ValueError):
    """Argument outside the domain where a function or bound is defined."""


class EnvelopeKind(str, enum.Enum):
    LARGE = "large"
    SMALL = "small"
    EXP = "exp"
    TAIL = "tail"


def _check_order(m) -> int:
    if int(m) != m or m < 1:
        raise DomainError(f"order index m must be a positive integer, got {m!r}")
    return int(m)


def _as_array(s):
    arr = np.asarray(s, dtype=float)
    return arr, arr.ndim == 0


def _out(values, scalar):
    return float(values) if scalar else values


# ---------------------------------------------------------------------------
# J_nu for nu = m/2
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def hankel_coefficients(m: int, count: int = 60) -> tuple[float, ...]:
    """Coefficients a_k(nu) of the Hankel expansion, nu = m/2, k = 0..count-1.

    a_k = prod_{j=1..k} (4 nu^2 - (2j - 1)^2) / (k! 8^k).  For odd m they vanish
    from k = (m + 1)/2 on, and the expansion is exact.
    """
    mu = float(m * m)  # 4 nu^2
    out = [1.0]
    for k in range(1, count):
        out.append(out[-1] * (mu - (2 * k - 1) ** 2) / (8.0 * k))
    return tuple(out)


@lru_cache(maxsize=None)
def _hankel_plan(m: int) -> tuple[float, int]:
    """Switch-over point x_h and number of Hankel terms for order m/2."""
    nu = m / 2.0
    x_h = max(30.0, nu * nu)
    coeffs = hankel_coefficients(m)
    if m % 2 == 1:
        return x_h, (m + 1) // 2
    terms = len(coeffs)
    for k, a in enumerate(coeffs):
        if k > nu and abs(a) * x_h ** (-k) < 1e-17:
            terms = k
            break
    return x_h, terms


def hankel_threshold(m: int) -> float:
    """Smallest argument at which the Hankel expansion is used for order m/2."""
    return _hankel_plan(_check_order(m))[0]


def _pq(m: int, x: np.ndarray, terms: int):
    coeffs = hankel_coefficients(m)
    inv = 1.0 / x
    p = np.zeros_like(x)
    q = np.zeros_like(x)
    power = np.ones_like(x)
    for k in range(terms):
        term = coeffs[k] * power
        if k % 2 == 0:
            p += term if (k // 2) % 2 == 0 else -term
        else:
            q += term if (k // 2) % 2 == 0 else -term
        power = power * inv
    return p, q


def _bessel_hankel(m: int, x: np.ndarray) -> np.ndarray:
    _, terms = _hankel_plan(m)
    p, q = _pq(m, x, terms)
    chi = x - (m / 4.0 + 0.25) * math.pi
    return np.sqrt(2.0 / (math.pi * x)) * (p * np.cos(chi) - q * np.sin(chi))


def _bessel_miller(m: int, x: np.ndarray) -> np.ndarray:
    """J_{m/2}(x) by backward recurrence; 0 < x below the Hankel switch-over."""
    start_frac = 0.5 * (m % 2)
    target = m // 2  # index of nu = start_frac + target
    top = int(math.ceil(max(float(x.max()), m / 2.0))) + 40
    top += top % 2
    y_next = np.zeros_like(x)
    y = np.full_like(x, 1e-30)
    norm = np.zeros_like(x)
    hit = np.zeros_like(x)
    kept = {}
    for k in range(top, 0, -1):
        mu = start_frac + k
        y_prev = (2.0 * mu / x) * y - y_next
        y_next, y = y, y_prev
        idx = k - 1
        if start_frac == 0.0 and idx % 2 == 0 and idx > 0:
            norm += 2.0 * y
        if idx == target:
            hit = y.copy()
        if idx <= 1:
            kept[idx] = y.copy()
        big = np.abs(y) > 1e200
        if big.any():
            scale = np.where(big, 1e-200, 1.0)
            y *= scale
            y_next *= scale
            norm *= scale
            hit *= scale
            for key in kept:
                kept[key] *= scale
    if start_frac == 0.0:
        norm += kept[0]
        return hit / norm
    # half-integer orders: calibrate against the closed forms of J_{1/2}, J_{3/2}
    amp = np.sqrt(2.0 / (math.pi * x))
    exact0 = amp * np.sin(x)
    exact1 = amp * (np.sin(x) / x - np.cos(x))
    use0 = np.abs(exact0) >= np.abs(exact1)
    ref_exact = np.where(use0, exact0, exact1)
    ref_rec = np.where(use0, kept[0], kept[1])
    return hit * ref_exact / ref_rec


def bessel_j(m: int, x) -> np.ndarray | float:
    """Bessel function J_{m/2}(x) for x >= 0."""
    m = _check_order(m)
    x, scalar = _as_array(x)
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise DomainError("bessel_j requires x >= 0")
    out = np.empty_like(x)
    x_h = _hankel_plan(m)[0]
    small = x <= _SERIES_MAX
    large = x >= x_h
    mid = ~(small | large)
    if small.any():
        xs = x[small]
        nu = m / 2.0
        with np.errstate(divide="ignore"):
            pre = np.where(xs > 0, np.exp(nu * np.log(np.where(xs > 0, xs, 1.0) / 2.0) - math.lgamma(nu + 1.0)), 0.0)
        out[small] = pre * _series(m, xs)
    if mid.any():
        out[mid] = _bessel_miller(m, x[mid])
    if large.any():
        out[large] = _bessel_hankel(m, x[large])
    return _out(out, scalar)


def _series(m: int, x: np.ndarray) -> np.ndarray:
    """sum_k (-x^2/4)^k / (k! (nu+1)_k); converges fast for moderate x."""
    nu = m / 2.0
    z = -0.25 * x * x
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, 60):
        term = term * z / (k * (nu + k))
        total += term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    return total


def normalized_bessel(m: int, s):
    """j_{m/2}(s) for s >= 0 (scalar or array)."""
    m = _check_order(m)
    s, scalar = _as_array(s)
    if np.any(s < 0) or np.any(np.isnan(s)):
        raise DomainError("normalized_bessel requires s >= 0")
    out = np.empty_like(s)
    small = s <= _SERIES_MAX
    if small.any():
        out[small] = _series(m, s[small])
    rest = ~small
    if rest.any():
        xr = s[rest]
        if m == 1:
            out[rest] = np.sin(xr) / xr
        elif m == 3:
            out[rest] = 3.0 * (np.sin(xr) - xr * np.cos(xr)) / xr**3
        else:
            nu = m / 2.0
            scale = np.exp(nu * math.log(2.0) + math.lgamma(nu + 1.0) - nu * np.log(xr))
            out[rest] = scale * bessel_j(m, xr)
    return _out(out, scalar)


def normalized_bessel_derivative(m: int, s):
    """d/ds j_{m/2}(s) = -s/(m+2) * j_{(m+2)/2}(s)."""
    m = _check_order(m)
    s, scalar = _as_array(s)
    return _out(-s / (m + 2.0) * normalized_bessel(m + 2, s), scalar)


def asymptotic_amplitude(m: int) -> float:
    """K with j_{m/2}(s) ~ K s^{-(m+1)/2} cos(s - (m/4 + 1/4) pi)."""
    nu = _check_order(m) / 2.0
    return math.exp(nu * math.log(2.0) + math.lgamma(nu + 1.0)) * math.sqrt(2.0 / math.pi)


# ---------------------------------------------------------------------------
# zeros
# ---------------------------------------------------------------------------

def _bisect(f, lo: float, hi: float, tol: float = 1e-12) -> float:
    flo = f(lo)
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def j1_zero(k: int, max_index: int = MAX_ZERO_INDEX) -> float:
    """k-th positive zero of J_1, bracketed in (k pi, (k + 1/4) pi)."""
    if int(k) != k or k < 1:
        raise DomainError("zero index must be a positive integer")
    if k > max_index:
        raise OverflowError(f"zero index {k} exceeds configured maximum {max_index}")
    f = lambda x: bessel_j(2, x)
    lo, hi = k * math.pi, (k + 0.25) * math.pi
    if (f(lo) > 0) == (f(hi) > 0):
        lo, hi = (k - 0.25) * math.pi, (k + 0.5) * math.pi
        if (f(lo) > 0) == (f(hi) > 0):
            raise ArithmeticError(f"no sign change around zero {k} of J_1")
    return _bisect(f, lo, hi)


def _zeros_of(m: int, count: int) -> np.ndarray:
    """First `count` positive zeros of J_{m/2}, vectorized scan plus bisection."""
    nu = m / 2.0
    upper = (count + nu / 2.0 + 2.0) * math.pi + 2.0 * nu + 10.0
    while True:
        grid = np.arange(0.25, upper, 0.25)
        vals = bessel_j(m, grid)
        idx = np.nonzero(np.sign(vals[1:]) != np.sign(vals[:-1]))[0]
        if idx.size >= count:
            idx = idx[:count]
            break
        upper *= 1.5
    lo = grid[idx].copy()
    hi = grid[idx + 1].copy()
    flo = bessel_j(m, lo)
    for _ in range(50):
        mid = 0.5 * (lo + hi)
        fm = bessel_j(m, mid)
        left = np.sign(fm) == np.sign(flo)
        lo = np.where(left, mid, lo)
        flo = np.where(left, fm, flo)
        hi = np.where(left, hi, mid)
    return 0.5 * (lo + hi)


@lru_cache(maxsize=64)
def _zeros_cached(m: int, count: int) -> np.ndarray:
    return _zeros_of(m, count)


def bessel_zeros(m: int, count: int) -> np.ndarray:
    """First `count` positive zeros of J_{m/2} (equivalently of j_{m/2})."""
    m = _check_order(m)
    if count < 1:
        return np.empty(0)
    if count > MAX_ZERO_INDEX:
        raise OverflowError("too many zeros requested")
    return _zeros_cached(m, int(count)).copy()


def bessel_extrema(m: int, count: int) -> np.ndarray:
    """Positions of the first `count` positive local extrema of j_{m/2}.

    These are the zeros of J_{m/2 + 1}, since j'_{nu} is proportional to -s j_{nu+1}.
    """
    return bessel_zeros(_check_order(m) + 2, count)


# ---------------------------------------------------------------------------
# envelopes
# ---------------------------------------------------------------------------

def _large_constant(m: int) -> float:
    return math.exp((m + 1) / 2.0 * math.log(2.0) + math.lgamma(m / 2.0 + 1.0)) / math.sqrt(math.pi)


def tail_envelope_constant(m: int) -> float:
    """C with |j_{m/2}(s)| <= C s^{-(m+1)/2} for s >= m/2 + 3."""
    m = _check_order(m)
    return _large_constant(m) * math.sqrt(m + 6.0) / (12.0 * m + 36.0) ** 0.25


def envelope_domain(kind: EnvelopeKind, m: int) -> tuple[float, float, bool] | None:
    """(lo, hi, lo_open) of the validity interval in s, or None when m is not covered."""
    kind = EnvelopeKind(kind)
    if kind is EnvelopeKind.LARGE:
        return (m / 2.0, math.inf, True)
    if kind is EnvelopeKind.SMALL:
        return (0.0, _SMALL_M1_LIMIT, False) if m == 1 else (0.0, m / 2.0 + 3.0, False)
    if kind is EnvelopeKind.EXP:
        return (0.0, float(m), False) if m >= 5 else None
    return (m / 2.0 + 3.0, math.inf, False)


def bessel_envelope(kind: EnvelopeKind | str, m: int, s):
    """Upper bound for |j_{m/2}(s)| of the requested kind on its validity domain.

    large: 2^{(m+1)/2} Gamma(m/2+1)/sqrt(pi) (s^2 - m^2/4)^{-1/4} s^{-m/2},  s > m/2
    small: exp(-s^2/(2m+4) - s^4/(4 (m+2)^2 (m+4))),  s in [0, m/2+3]  (m = 1: [0, 3.38])
    exp:   exp(-s^2/(2m+4)),  m >= 5, s in [0, m]
    tail:  2^{(m+1)/2} Gamma(m/2+1)/sqrt(pi) sqrt(m+6)/(12m+36)^{1/4} s^{-(m+1)/2},  s >= m/2+3
    """
    kind = EnvelopeKind(kind)
    m = _check_order(m)
    s, scalar = _as_array(s)
    dom = envelope_domain(kind, m)
    if dom is None:
        raise DomainError(f"envelope {kind.value!r} is not defined for m={m}")
    lo, hi, lo_open = dom
    bad = (s < lo) | (s > hi) | np.isnan(s)
    if lo_open:
        bad |= s == lo
    if np.any(bad):
        raise DomainError(f"envelope {kind.value!r} for m={m} requires s in {'(' if lo_open else '['}{lo}, {hi}]")
    if kind is EnvelopeKind.LARGE:
        out = _large_constant(m) * (s * s - m * m / 4.0) ** -0.25 * s ** (-m / 2.0)
    elif kind is EnvelopeKind.SMALL:
        out = np.exp(-s * s / (2.0 * m + 4.0) - s**4 / (4.0 * (m + 2.0) ** 2 * (m + 4.0)))
    elif kind is EnvelopeKind.EXP:
        out = np.exp(-s * s / (2.0 * m + 4.0))
    else:
        out = tail_envelope_constant(m) * s ** (-(m + 1) / 2.0)
    return _out(out, scalar)


def bessel_lower_envelope(m: int, s):
    """exp(-s^2/(2m+4) - s^4), a lower bound for |j_{m/2}(s)| on [0, 1]."""
    m = _check_order(m)
    s, scalar = _as_array(s)
    if np.any((s < 0) | (s > 1)) or np.any(np.isnan(s)):
        raise DomainError("lower envelope requires s in [0, 1]")
    return _out(np.exp(-s * s / (2.0 * m + 4.0) - s**4), scalar)


def j_tilde(m: int, s):
    """Piecewise majorant of j_{m/2}: |j| on [0, m), the large-argument envelope on [m, inf).

    The two pieces do not match at s = m; callers must not rely on continuity.
    """
    m = _check_order(m)
    if m < 5:
        raise DomainError("j_tilde is defined for m >= 5")
    s, scalar = _as_array(s)
    if np.any(s < 0) or np.any(np.isnan(s)):
        raise DomainError("j_tilde requires s >= 0")
    out = np.empty_like(s)
    low = s < m
    if low.any():
        out[low] = np.abs(normalized_bessel(m, s[low]))
    if (~low).any():
        sh = s[~low]
        out[~low] = _large_constant(m) * (sh * sh - m * m / 4.0) ** -0.25 * sh ** (-m / 2.0)
    return _out(out, scalar)


# ---------------------------------------------------------------------------
# gamma helpers
# ---------------------------------------------------------------------------

def gamma_ratio_halfstep(x: float) -> float:
    """Gamma(x) / Gamma(x - 1/2), x >= 1.

    The direct quotient is used while Gamma(x) is representable; log-gamma
    differences lose about |lgamma(x)| ulps to cancellation.
    """
    if not x >= 1.0:
        raise DomainError("gamma_ratio_halfstep requires x >= 1")
    if x < 170.0:
        return math.gamma(x) / math.gamma(x - 0.5)
    if x < 1e4:
        k = int(math.ceil(x - 169.0))
        y = x - k
        ratio = math.gamma(y) / math.gamma(y - 0.5)
        for i in range(k):
            ratio *= (y + i) / (y + i - 0.5)
        return ratio
    # Gamma(z + 1/2) / Gamma(z) with z = x - 1/2
    z = x - 0.5
    t = 1.0 / z
    return math.sqrt(z) * (1.0 - t / 8.0 + t * t / 128.0 + 5.0 * t**3 / 1024.0 - 21.0 * t**4 / 32768.0)


def ball_volume(dim: int, radius: float = 1.0) -> float:
    """Volume of the Euclidean ball of given dimension (dim = 0 gives 1)."""
    return radius**dim * math.pi ** (dim / 2.0) / math.gamma(dim / 2.0 + 1.0)
