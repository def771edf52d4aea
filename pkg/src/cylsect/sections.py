"""Central hyperplane sections of the cylinder Z = 1/2 B_inf^n x r B_2^m.

Volumes come from the Fourier representation

    vol(H_a ∩ Z) = r^m pi^(m/2-1) / Gamma(m/2+1)
                   * int_0^inf prod_j sinc(a_j s / 2) * j_{m/2}(a_{n+1} r s) ds,

evaluated by panel quadrature on [0, S] plus a semi-analytic remainder on
[S, inf): each sinc factor is split into two complex exponentials and the
Bessel factor into its Hankel expansion, which reduces the remainder to
integrals of s^(-beta) exp(i omega s).
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import mpmath
import numpy as np

from . import quad, special

__all__ = [
    "CylinderSpec",
    "Direction",
    "SectionResult",
    "CylinderBound",
    "DegenerateSampleError",
    "canonicalize",
    "section_volume_fourier",
    "section_area_3d",
    "section_area_3d_derivative",
    "section_volume_mc",
    "holder_bound",
    "thm2_upper_bound",
    "special_direction_volume",
    "critical_radius",
]

_TINY = 1e-12  # direction coordinates below this are treated as zero
_IBP_MIN = 40.0  # |omega| S above which the integration-by-parts series is used
_MAX_PANELS = 40000
_MC_SHARDS = 16
_MC_CHUNK = 1 << 19


@dataclass(frozen=True)
class CylinderSpec:
    n: int
    m: int
    r: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise special.DomainError("n must be a positive integer")
        if int(self.m) != self.m or self.m < 1:
            raise special.DomainError("m must be a positive integer")
        if not (self.r > 0 and math.isfinite(self.r)):
            raise special.DomainError("r must be a positive finite number")


@dataclass(frozen=True)
class Direction:
    """Canonical normal (a_1 >= ... >= a_n >= 0, a_{n+1} >= 0) of unit length."""

    coords: tuple

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    @property
    def cube(self) -> np.ndarray:
        return np.array(self.coords[:-1], dtype=float)

    @property
    def ball(self) -> float:
        return float(self.coords[-1])

    def as_array(self) -> np.ndarray:
        return np.array(self.coords, dtype=float)


def canonicalize(raw: Sequence[float], n: int, m: int | None = None) -> Direction:
    """Map a raw normal of length n+m (or n+1) to its canonical Direction.

    Absolute values are taken, the ball block is replaced by its Euclidean
    norm, cube coordinates are sorted in descending order and the result is
    normalized to unit length.
    """
    v = np.abs(np.asarray(raw, dtype=float).ravel())
    if v.size < n + 1:
        raise special.DomainError(f"direction needs at least n+1={n + 1} entries, got {v.size}")
    if m is not None and v.size not in (n + 1, n + m):
        raise special.DomainError(f"direction must have n+1={n + 1} or n+m={n + m} entries, got {v.size}")
    if not np.all(np.isfinite(v)):
        raise special.DomainError("direction entries must be finite")
    cube = np.sort(v[:n])[::-1]
    # sorting first makes the norm independent of the order of the ball block
    ball = float(np.linalg.norm(np.sort(v[n:])))
    full = np.append(cube, ball)
    norm = float(np.linalg.norm(full))
    if norm == 0.0:
        raise special.DomainError("direction must be nonzero")
    if abs(norm - 1.0) > 4.0 * np.finfo(float).eps:  # keeps canonicalization idempotent
        full = full / norm
    return Direction(tuple(float(x) for x in full))


def _as_direction(a, n: int, m: int) -> Direction:
    if isinstance(a, Direction):
        if a.n != n:
            raise special.DomainError("direction does not match the cube dimension")
        return a
    return canonicalize(a, n, m)


@dataclass(frozen=True)
class SectionResult:
    volume: float
    method: str
    err_est: float
    details: dict = field(default_factory=dict, compare=False)


def _prefactor(m: int, r: float) -> float:
    return r**m * math.pi ** (m / 2.0 - 1.0) / math.gamma(m / 2.0 + 1.0)


def critical_radius(m: int) -> float:
    """Gamma(m/2+1) / (Gamma(m/2+1/2) sqrt(pi)), where the two regimes of the general bound meet."""
    return math.exp(math.lgamma(m / 2.0 + 1.0) - math.lgamma(m / 2.0 + 0.5)) / math.sqrt(math.pi)


# ---------------------------------------------------------------------------
# remainder integrals  T(beta, omega, S) = int_S^inf s^-beta e^{i omega s} ds
# ---------------------------------------------------------------------------

def _power_exp_tail(beta: float, omega: float, S: float) -> tuple[complex, float]:
    """Return (value, error bound) of int_S^inf s^(-beta) exp(i omega s) ds, beta > 0."""
    if omega == 0.0:
        if beta <= 1.0:
            raise quad.DivergenceError("non-oscillatory remainder term diverges")
        return complex(S ** (1.0 - beta) / (beta - 1.0)), 0.0
    w = abs(omega)
    if w * S >= _IBP_MIN:
        # T = -e^{i w S} sum_k (beta)_k S^{-beta-k} / (i omega)^{k+1} + R,  |R| <= (beta)_K S^{1-beta-K} / (w^K (beta+K-1))
        io = 1j * omega
        total = 0.0 + 0.0j
        poch = 1.0
        prev = math.inf
        k = 0
        while True:
            mag = poch * S ** (-beta - k) / w ** (k + 1)
            if mag > prev or k > 60:
                break
            total -= poch * S ** (-beta - k) / io ** (k + 1)
            prev = mag
            poch *= beta + k
            k += 1
            if mag < 1e-20 * abs(total):
                break
        rem = poch * S ** (1.0 - beta - k) / (w**k * (beta + k - 1.0))
        return complex(total * complex(math.cos(omega * S), math.sin(omega * S))), rem
    with mpmath.workdps(30):
        z = -1j * mpmath.mpf(omega)
        val = z ** (beta - 1) * mpmath.gammainc(1 - mpmath.mpf(beta), z * S)
        return complex(val), 1e-25 * abs(complex(val)) + 1e-300


def _hankel_terms(m: int, x0: float) -> tuple[int, float | None]:
    """Number of Hankel terms to use for arguments >= x0 and whether a remainder applies."""
    coeffs = special.hankel_coefficients(m)
    if m % 2 == 1:
        return (m + 1) // 2, None
    prev = math.inf
    for k in range(1, len(coeffs)):
        t = abs(coeffs[k]) * x0 ** (-k)
        if k > m / 2.0 and (t < 1e-18 or t > prev):
            return k, True
        prev = t
    return len(coeffs) - 1, True


def _hankel_start(m: int) -> float:
    return special.hankel_threshold(m) if m % 2 == 0 else max(2.0, 2.0 * m)


class _Tail:
    """Remainder of the section integral for s >= S."""

    def __init__(self, b: np.ndarray, c: float, m: int):
        self.b = np.asarray(b, dtype=float)
        self.c = float(c)
        self.m = m
        self.np = self.b.size
        self.kappa = (m + 1) / 2.0
        self.amp = special.asymptotic_amplitude(m)
        self.phase = (m / 4.0 + 0.25) * math.pi
        self.evaluations = 0

    # sinc product as sum_eps coef_eps s^-n' e^{i omega_eps s}; the first sign is fixed to +1
    # and the real part doubled, since eps and -eps carry conjugate coefficients
    def _sinc_terms(self):
        npr = self.np
        if npr == 0:
            return [(1.0 + 0.0j, 0.0)], 1.0
        scale = 1.0 / (np.prod(self.b) * (2j) ** npr)
        out = []
        for signs in itertools.product((1.0, -1.0), repeat=npr - 1):
            eps = np.array((1.0,) + signs)
            out.append((scale * np.prod(eps), float(np.dot(eps, self.b))))
        return out, 2.0

    def _bessel_terms(self, x0: float, c: float):
        """Hankel expansion of j(c s) as a list of (coef, extra power, frequency) plus the
        remainder bound constant: |j(cs) - sum| <= sum_t rem_t s^(-kappa-t)."""
        m = self.m
        count, has_rem = _hankel_terms(m, x0)
        coeffs = special.hankel_coefficients(m)
        terms = []
        for k in range(count):
            if coeffs[k] == 0.0:
                continue
            base = 0.5 * self.amp * coeffs[k] * c ** (-self.kappa - k)
            plus = base * (1j**k) * complex(math.cos(self.phase), -math.sin(self.phase))
            minus = base * ((-1j) ** k) * complex(math.cos(self.phase), math.sin(self.phase))
            terms.append((plus, self.kappa + k, c))
            terms.append((minus, self.kappa + k, -c))
        rem = []
        if has_rem:
            for t in (count, count + 1):
                rem.append((self.amp * abs(coeffs[t]) * c ** (-self.kappa - t), self.kappa + t))
        return terms, rem

    def hankel(self, S: float, c: float | None = None, power: float | None = None):
        """int_S^inf prod sinc(b s) s^(-power extra) j(c s) ds using the Hankel expansion of j."""
        c = self.c if c is None else c
        sinc_terms, mult = self._sinc_terms()
        npr = self.np if power is None else power
        if c == 0.0:
            bterms, rem = [(1.0 + 0.0j, 0.0, 0.0)], []
        else:
            bterms, rem = self._bessel_terms(c * S, c)
        total = 0.0 + 0.0j
        err = 0.0
        for coef, omega in sinc_terms:
            for bcoef, bpow, bfreq in bterms:
                val, e = _power_exp_tail(npr + bpow, omega + bfreq, S)
                total += coef * bcoef * val
                err += abs(coef * bcoef) * e
        bprod = float(np.prod(self.b)) if self.np else 1.0
        for const, pw in rem:
            beta = npr + pw
            err += const / bprod * S ** (1.0 - beta) / (beta - 1.0)
        return mult * total.real, mult * err

    def substituted(self, S: float, rel_tol: float):
        """Remainder for small c S: substitute u = c s and integrate in u.

        Each exponential term becomes c^(n'-1) int_{u0}^inf u^(-n') j(u) e^{i lambda u} du
        with lambda = omega / c, u0 = c S.
        """
        c, m, npr = self.c, self.m, self.np
        u0 = c * S
        u1 = max(u0, _hankel_start(m))
        sinc_terms, mult = self._sinc_terms()
        total = 0.0 + 0.0j
        err = 0.0
        one = _Tail(np.empty(0), 1.0, m)
        for coef, omega in sinc_terms:
            lam = omega / c
            val, e = self._u_integral(lam, u0, u1, one, rel_tol)
            total += coef * val
            err += abs(coef) * e
        scale = c ** (npr - 1)
        return mult * scale * total.real, mult * scale * err

    def _u_integral(self, lam: float, u0: float, u1: float, one: "_Tail", rel_tol: float):
        m, npr = self.m, self.np
        w = abs(lam)
        ibp = None
        if w > 0 and w * u0 >= 8.0:
            ibp = _ibp_bessel(m, npr, lam, u0)
            if ibp[1] <= 1e-3 * rel_tol * u0 ** (1.0 - npr):
                return ibp
        # numeric part on [u0, u1] plus Hankel remainder beyond u1
        val = 0.0 + 0.0j
        err = 0.0
        if u1 > u0:
            half = math.pi / (w + 1.0)
            count = int(math.ceil((u1 - u0) / half))
            if count > _MAX_PANELS:
                if ibp is not None:
                    return ibp
                raise quad.NonConvergenceError("remainder integral too oscillatory for the panel budget")
            edges = np.linspace(u0, u1, count + 1)
            for part, fn in ((1.0, np.cos), (1j, np.sin)):
                g = lambda u, fn=fn: u ** (-npr) * special.normalized_bessel(m, u) * fn(lam * u)
                res = quad.integrate_panels(g, edges, abs_tol=1e-15 * u0 ** (1 - npr), rel_tol=0.1 * rel_tol)
                val += part * res.value
                err += res.abs_err_est
                self.evaluations += res.evaluations
        # Hankel part: int_{u1}^inf u^-n' e^{i lam u} j(u) du
        bterms, rem = one._bessel_terms(u1, 1.0)
        for bcoef, bpow, bfreq in bterms:
            v, e = _power_exp_tail(npr + bpow, lam + bfreq, u1)
            val += bcoef * v
            err += abs(bcoef) * e
        for const, pw in rem:
            beta = npr + pw
            err += const * u1 ** (1.0 - beta) / (beta - 1.0)
        return val, err


def _bessel_abs_integral_bound(a: float, mm: int, u0: float) -> float:
    """Upper bound for int_{u0}^inf u^a |j_{mm/2}(u)| du (requires a - (mm+1)/2 < -1)."""
    t = max(u0, mm / 2.0 + 3.0)
    if t > u0:
        first = math.log(t / u0) if a == -1.0 else (t ** (a + 1) - u0 ** (a + 1)) / (a + 1)
    else:
        first = 0.0
    expo = a - (mm + 1) / 2.0
    return first + special.tail_envelope_constant(mm) * t ** (expo + 1) / (-expo - 1)


def _ibp_bessel(m: int, npr: int, lam: float, u0: float):
    """int_{u0}^inf u^(-n') j_{m/2}(u) e^{i lam u} du by repeated integration by parts.

    Derivatives are tracked as combinations of u^a j_{mm/2}(u), using
    d/du [u^a j_{mm/2}(u)] = a u^(a-1) j_{mm/2}(u) - u^(a+1) / (mm + 2) j_{mm/2+1}(u).
    """
    terms = {(-float(npr), m): 1.0}
    il = 1j * lam
    total = 0.0 + 0.0j
    phase = complex(math.cos(lam * u0), math.sin(lam * u0))
    best = None
    for k in range(0, 40):
        fk = sum(cf * u0**a * float(special.normalized_bessel(mm, u0)) for (a, mm), cf in terms.items())
        total -= phase * ((-1) ** k) * fk / il ** (k + 1)
        # derivative
        new: dict = {}
        for (a, mm), cf in terms.items():
            if a != 0.0:
                new[(a - 1.0, mm)] = new.get((a - 1.0, mm), 0.0) + cf * a
            new[(a + 1.0, mm + 2)] = new.get((a + 1.0, mm + 2), 0.0) - cf / (mm + 2.0)
        terms = new
        rem = sum(abs(cf) * _bessel_abs_integral_bound(a, mm, u0) for (a, mm), cf in terms.items())
        rem /= abs(lam) ** (k + 1)
        if best is None or rem < best[1]:
            best = (total, rem)
        elif rem > 4.0 * best[1]:
            break
        if rem < 1e-18 * max(abs(total), 1e-300):
            break
    return best


# ---------------------------------------------------------------------------
# Fourier formula
# ---------------------------------------------------------------------------

def _sinc(x):
    return np.sinc(x / math.pi)


def section_volume_fourier(z: CylinderSpec, a, rel_tol: float = 1e-10) -> SectionResult:
    """Section volume from the Fourier-Bessel integral."""
    d = _as_direction(a, z.n, z.m)
    m, r = z.m, z.r
    pref = _prefactor(m, r)
    cube = d.cube
    b = 0.5 * cube[cube > _TINY]
    c = d.ball * r if d.ball > _TINY else 0.0
    npr = b.size
    exponent = npr + ((m + 1) / 2.0 if c > 0 else 0.0)
    details = {"exponent": exponent, "direction": list(d.coords)}
    if exponent <= 1.0:
        if npr == 1:
            vol = r**m * math.pi ** (m / 2.0) / math.gamma(m / 2.0 + 1.0) / (2.0 * b[0])
        else:  # ball axis with m = 1: a cube face
            vol = special_direction_volume(z, "ball_axis")
        return SectionResult(vol, "closed_special", 0.0, details)

    w_max = float(b.sum()) + c
    period = math.pi / w_max
    S = 64.0 * period
    if npr:
        S = max(S, min(100.0 / float(b.min()), 2000.0 * period))
    x_start = _hankel_start(m)
    use_hankel = c == 0.0
    if c > 0.0:
        if c * S >= x_start:
            use_hankel = True
        elif x_start / c <= max(S, 4000.0 * period):
            S = x_start / c
            use_hankel = True
    S = period * math.ceil(S / period)

    def f(s):
        s = np.asarray(s, dtype=float)
        out = np.ones_like(s)
        for bj in b:
            out = out * _sinc(bj * s)
        if c > 0.0:
            out = out * special.normalized_bessel(m, c * s)
        return out

    edges = np.arange(0.0, S + 0.25 * period, 0.5 * period)
    edges[-1] = S
    body = quad.integrate_panels(f, edges, rel_tol=0.1 * rel_tol, abs_tol=1e-16)
    tail = _Tail(b, c, m)
    if use_hankel:
        t_val, t_err = tail.hankel(S)
    else:
        t_val, t_err = tail.substituted(S, rel_tol)
    integral = body.value + t_val
    err = body.abs_err_est + t_err
    details.update({"S": S, "panels": body.panels, "evaluations": body.evaluations + tail.evaluations,
                    "tail": t_val, "tail_err": t_err, "tail_method": "hankel" if use_hankel else "substituted"})
    return SectionResult(pref * integral, "fourier", pref * err, details)


# ---------------------------------------------------------------------------
# three-dimensional cylinder (n = 1, m = 2)
# ---------------------------------------------------------------------------

def _check_alpha(alpha: float, open_interval: bool = False):
    if not (0.0 <= alpha <= 1.0) or (open_interval and alpha in (0.0, 1.0)):
        raise special.DomainError("alpha must lie in " + ("(0, 1)" if open_interval else "[0, 1]"))


def section_area_3d(r: float, alpha: float) -> float:
    """Area of the section of [-1/2, 1/2] x r B_2^2 orthogonal to (sqrt(1-alpha^2), alpha, 0)."""
    if not r > 0:
        raise special.DomainError("r must be positive")
    _check_alpha(alpha)
    if alpha == 1.0:
        return 2.0 * r
    alpha_star = 1.0 / math.sqrt(1.0 + 4.0 * r * r)
    c = math.sqrt(1.0 - alpha * alpha)
    if alpha <= alpha_star:
        return math.pi * r * r / c
    x = c / (2.0 * alpha * r)
    return r / alpha * math.sqrt(1.0 - x * x) + 2.0 * r * r / c * math.asin(x)


def section_area_3d_derivative(r: float, alpha: float) -> float:
    """Derivative of :func:`section_area_3d` in alpha on (0, 1)."""
    if not r > 0:
        raise special.DomainError("r must be positive")
    _check_alpha(alpha, open_interval=True)
    alpha_star = 1.0 / math.sqrt(1.0 + 4.0 * r * r)
    one_m = 1.0 - alpha * alpha
    if alpha < alpha_star:
        return math.pi * r * r * alpha / one_m**1.5
    if alpha == alpha_star:
        return math.pi * (1.0 + 4.0 * r * r) / (8.0 * r)
    root = math.sqrt(1.0 + 1.0 / (4.0 * r * r) - 1.0 / (4.0 * r * r * alpha * alpha))
    x = math.sqrt(one_m) / (2.0 * alpha * r)
    return (1.0 / (4.0 * r * alpha**4) / root
            - r / alpha**2 * root
            + 2.0 * alpha * r * r / one_m**1.5 * math.asin(x)
            - r / (alpha**2 * one_m) / root)


# ---------------------------------------------------------------------------
# Monte Carlo slab estimator
# ---------------------------------------------------------------------------

class DegenerateSampleError(RuntimeError):
    """Too few samples landed in the slab for a meaningful estimate."""


def _thread_cap() -> int:
    raw = os.environ.get("CYLSECT_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return max(1, min(8, os.cpu_count() or 1))


def _mc_shard(seed_seq: np.random.SeedSequence, count: int, n: int, m: int, r: float,
              a_cube: np.ndarray, a_ball: float, eps: float) -> int:
    rng = np.random.Generator(np.random.Philox(seed_seq))
    hits = 0
    left = count
    while left > 0:
        k = min(left, _MC_CHUNK)
        left -= k
        xc = rng.random((k, n)) - 0.5
        yb = (2.0 * rng.random((k, m)) - 1.0) * r
        inside = np.einsum("ij,ij->i", yb, yb) <= r * r
        proj = xc @ a_cube + a_ball * yb[:, 0]
        hits += int(np.count_nonzero(inside & (np.abs(proj) <= eps)))
    return hits


def section_volume_mc(z: CylinderSpec, a, eps: float | None = None, samples: int = 10**7,
                      seed: int = 0, threads: int | None = None) -> SectionResult:
    """Slab estimate vol(Z ∩ {|<a,x>| <= eps}) / (2 eps) by rejection sampling in the bounding box.

    Samples are split over a fixed number of counter-based streams, so the
    result depends only on the seed, never on the thread count.
    """
    d = _as_direction(a, z.n, z.m)
    scale = min(1.0, z.r)
    if eps is None:
        eps = 0.01 * scale
    if not (0.0 < eps <= 0.05 * scale):
        raise special.DomainError(f"eps must lie in (0, {0.05 * scale:.4g}]")
    if samples < 1:
        raise special.DomainError("samples must be positive")
    children = np.random.SeedSequence(seed).spawn(_MC_SHARDS)
    base, extra = divmod(int(samples), _MC_SHARDS)
    counts = [base + (1 if i < extra else 0) for i in range(_MC_SHARDS)]
    args = [(children[i], counts[i], z.n, z.m, z.r, d.cube, d.ball, eps) for i in range(_MC_SHARDS)]
    workers = min(threads or _thread_cap(), _MC_SHARDS)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = list(pool.map(lambda t: _mc_shard(*t), args))
    else:
        hits = [_mc_shard(*t) for t in args]
    total = sum(hits)
    if total < 100:
        raise DegenerateSampleError(f"only {total} samples fell in the slab; increase samples or eps")
    q = total / samples
    box = (2.0 * z.r) ** z.m
    vol = box * q / (2.0 * eps)
    se = box / (2.0 * eps) * math.sqrt(q * (1.0 - q) / samples)
    # Parallel sections A(t) satisfy A(t) <= A(0) and, by Brunn's principle,
    # A(t) >= A(0) (1 - |t|/w)^(d-1) with w the support function in direction a.
    # The slab average therefore underestimates A(0) by at most a factor rho.
    w = 0.5 * float(np.sum(d.cube)) + z.r * d.ball
    k = z.n + z.m
    rho = w / (eps * k) * (1.0 - (1.0 - eps / w) ** k) if eps < w else 0.0
    bias = vol * (1.0 - rho) / rho if rho > 0 else math.inf
    return SectionResult(vol, "montecarlo", se, {"eps": eps, "samples": int(samples), "hits": total,
                                                 "seed": seed, "bias_allowance": bias})


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------

_SMALL_SQ = 1e-6


def _upper_integral(m: int, p: float, rel_tol: float) -> float:
    """value + error of sqrt(p) int |j|^p, loosening the tolerance near the divergence threshold.

    Only an upper bound is needed here, and close to p = 2/(m+1) the slowly
    decaying tail makes tight tolerances unaffordable.
    """
    last = None
    for tol in (rel_tol, 1e-8, 1e-6, 1e-4, 1e-3):
        if tol < rel_tol:
            continue
        try:
            res = quad.ball_bessel_integral(m, p, rel_tol=tol)
        except quad.NonConvergenceError as exc:
            last = exc
            continue
        return res.value + res.total_error
    raise last


def holder_bound(z: CylinderSpec, a, rel_tol: float = 1e-10) -> float:
    """Hölder bound prod_j (2 J_1(1/a_j^2))^(a_j^2) * ((1/r) J_m(1/a_{n+1}^2))^(a_{n+1}^2) times the prefactor."""
    d = _as_direction(a, z.n, z.m)
    m, r = z.m, z.r
    log_total = math.log(_prefactor(m, r))
    for aj in d.cube:
        u = aj * aj
        if u == 0.0:
            continue
        if u < _SMALL_SQ:
            base = 2.0 * math.sqrt(1.5 * math.pi)
        else:
            p = 1.0 / u
            if p <= 1.0 + 1e-12:
                return math.inf
            base = 2.0 * _upper_integral(1, p, rel_tol)
        log_total += u * math.log(base)
    u = d.ball * d.ball
    if u > 0.0:
        if u < _SMALL_SQ:
            base = math.sqrt(math.pi) * math.sqrt(m / 2.0 + 1.0) / r
        else:
            p = 1.0 / u
            if p <= 2.0 / (m + 1) + 1e-12:
                return math.inf
            base = _upper_integral(m, p, rel_tol) / r
        log_total += u * math.log(base)
    return math.exp(log_total)


class CylinderBound(NamedTuple):
    bound: float
    regime: str
    threshold_r: float


def thm2_upper_bound(z: CylinderSpec) -> CylinderBound:
    """Upper bound for all central sections when n > 1 and m > 1."""
    if z.n <= 1 or z.m <= 1:
        raise special.DomainError("the general bound requires n > 1 and m > 1")
    m, r = z.m, z.r
    thr = critical_radius(m)
    if r >= thr:
        return CylinderBound(math.sqrt(2.0) * r**m * math.pi ** (m / 2.0) / math.gamma(m / 2.0 + 1.0),
                             "large_r", thr)
    return CylinderBound(math.sqrt(2.0) * r ** (m - 1) * math.pi ** ((m - 1) / 2.0) / math.gamma((m + 1) / 2.0),
                         "small_r", thr)


def special_direction_volume(z: CylinderSpec, which: str) -> float:
    """Section volume orthogonal to a cube axis ("cube_axis") or to the ball factor ("ball_axis")."""
    m, r = z.m, z.r
    if which == "cube_axis":
        return r**m * math.pi ** (m / 2.0) / math.gamma(m / 2.0 + 1.0)
    if which == "ball_axis":
        return r ** (m - 1) * math.pi ** ((m - 1) / 2.0) / math.gamma((m + 1) / 2.0)
    raise special.DomainError("which must be 'cube_axis' or 'ball_axis'")
