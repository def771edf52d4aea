"""Maximal central sections: exact solution for [-1/2, 1/2] x r B_2^2 and a direction search."""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from . import sections
from .sections import CylinderSpec, Direction

__all__ = [
    "CRITICAL_RADIUS_3D",
    "TruncationRoot",
    "MaxSection3D",
    "SearchResult",
    "truncation_condition",
    "truncation_root",
    "maximal_section_3d",
    "search_max_direction",
]

CRITICAL_RADIUS_3D = 1.0 / (2.0 * math.sqrt(3.0))
_SCAN_CELLS = 1000
_SERIES_CUT = 0.02


@dataclass(frozen=True)
class TruncationRoot:
    exists: bool
    x: float | None = None
    residual: float | None = None


@dataclass(frozen=True)
class MaxSection3D:
    shape: str
    alpha_star_lower: float
    alpha_max: float
    area: float
    x: float | None = None


def truncation_condition(r: float, x):
    """(arcsin(x)/x - (1 + 8 r^2 x^2) sqrt(1 - x^2)) / x^2 on [0, 1].

    Dividing by x^2 keeps the sign and removes the double zero at x = 0; near 0
    the Taylor polynomial 2/3 - 8r^2 + (1/5 + 4r^2) x^2 + (3/28 + r^2) x^4 is used.
    """
    x = np.asarray(x, dtype=float)
    r2 = r * r
    small = x < _SERIES_CUT
    out = np.empty_like(x)
    xs = x[small]
    out[small] = (2.0 / 3.0 - 8.0 * r2) + (0.2 + 4.0 * r2) * xs**2 + (3.0 / 28.0 + r2) * xs**4
    xl = x[~small]
    out[~small] = (np.arcsin(xl) / xl - (1.0 + 8.0 * r2 * xl**2) * np.sqrt(np.clip(1.0 - xl**2, 0.0, None))) / xl**2
    return out if out.ndim else float(out)


def truncation_root(r: float, tol: float = 1e-13) -> TruncationRoot:
    """Root x in (0, 1) of arcsin(x)/x = (1 + 8 r^2 x^2) sqrt(1 - x^2), if any."""
    if not r > 0:
        raise sections.special.DomainError("r must be positive")
    if r <= CRITICAL_RADIUS_3D:
        return TruncationRoot(False)
    grid = np.linspace(0.0, 1.0, _SCAN_CELLS + 1)
    vals = truncation_condition(r, grid)
    sign = np.sign(vals)
    idx = np.nonzero(sign[:-1] * sign[1:] < 0)[0]
    if idx.size == 0:
        zero = np.nonzero(vals == 0.0)[0]
        zero = zero[(zero > 0) & (zero < _SCAN_CELLS)]
        if zero.size:
            x = float(grid[zero[0]])
            return TruncationRoot(True, x, 0.0)
        return TruncationRoot(False)
    lo, hi = float(grid[idx[0]]), float(grid[idx[0] + 1])
    flo = truncation_condition(r, lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = truncation_condition(r, mid)
        if fm == 0.0:
            lo = hi = mid
            break
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    res = float(x * x * truncation_condition(r, x))
    if x <= 0.0 or x >= 1.0:
        return TruncationRoot(False)
    return TruncationRoot(True, x, res)


def maximal_section_3d(r: float) -> MaxSection3D:
    """Maximal central section of [-1/2, 1/2] x r B_2^2."""
    root = truncation_root(r)
    a_star = 1.0 / math.sqrt(1.0 + 4.0 * r * r)
    if root.exists:
        alpha = 1.0 / math.sqrt(1.0 + 4.0 * r * r * root.x * root.x)
        if alpha < 1.0:
            return MaxSection3D("truncated_ellipse", a_star, alpha, sections.section_area_3d(r, alpha), root.x)
    return MaxSection3D("rectangle", a_star, 1.0, 2.0 * r)


# ---------------------------------------------------------------------------
# general direction search on the simplex of squared coordinates
# ---------------------------------------------------------------------------

@dataclass
class SearchResult:
    direction: Direction
    volume: float
    err_est: float
    converged: bool
    evaluations: int
    restarts: int
    warning: str | None = None
    candidates: list = field(default_factory=list)

    def __iter__(self):
        yield self.direction
        yield self.volume


def _project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto {u >= 0, sum u = 1}."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    ind = np.arange(1, v.size + 1)
    rho = ind[u - css / ind > 0][-1]
    theta = css[rho - 1] / rho
    return np.maximum(v - theta, 0.0)


def _canonical_u(u: np.ndarray, n: int) -> tuple:
    cube = np.sort(u[:n])[::-1]
    return tuple(np.round(np.append(cube, u[n]), 15))


def _compass_directions(dim: int) -> list[np.ndarray]:
    out = []
    for i, j in itertools.permutations(range(dim), 2):
        e = np.zeros(dim)
        e[i], e[j] = 1.0, -1.0
        out.append(e)
    for i, j in itertools.combinations(range(dim), 2):
        for k in range(dim):
            if k in (i, j):
                continue
            e = np.zeros(dim)
            e[i] = e[j] = 0.5
            e[k] = -1.0
            out.append(e)
            out.append(-e)
    return out


def search_max_direction(z: CylinderSpec, restarts: int = 32, tol: float = 1e-8, seed: int = 0,
                         rel_tol: float = 1e-10, max_evals: int = 20000) -> SearchResult:
    """Multi-start local maximization of the section volume over canonical directions.

    Starts are a scrambled Sobol set mapped to the simplex of squared
    coordinates u_j = a_j^2, plus the cube axis, the ball axis and the
    two-coordinate diagonal.  Each start runs Nelder-Mead on the projected
    objective followed by a compass polish with moves e_i - e_j and
    (e_i + e_j)/2 - e_k.  Ties are broken by (volume, direction) ordering.
    """
    n, dim = z.n, z.n + 1
    if z.n + z.m > 8:
        raise sections.special.DomainError("direction search supports n + m <= 8")
    cache: dict = {}
    counter = {"evals": 0}

    def volume(u: np.ndarray) -> float:
        u = _project_simplex(np.asarray(u, dtype=float))
        key = _canonical_u(u, n)
        if key not in cache:
            counter["evals"] += 1
            res = sections.section_volume_fourier(z, np.sqrt(np.asarray(key)), rel_tol=rel_tol)
            cache[key] = (res.volume, res.err_est)
        return cache[key][0]

    starts = []
    fixed = [np.eye(dim)[0], np.eye(dim)[n]]
    if n >= 2:
        diag = np.zeros(dim)
        diag[:2] = 0.5
        fixed.append(diag)
    starts.extend(fixed)
    extra = max(0, restarts - len(fixed))
    if extra:
        sob = qmc.Sobol(d=dim - 1 if dim > 1 else 1, scramble=True, seed=seed)
        pts = sob.random(1 << max(0, math.ceil(math.log2(extra))))[:extra]
        for p in pts:
            cuts = np.sort(p[: dim - 1])
            starts.append(np.diff(np.concatenate([[0.0], cuts, [1.0]])))

    def local(u0: np.ndarray) -> tuple[np.ndarray, float, bool]:
        x0 = u0[:-1]

        def neg(x):
            full = np.append(x, 1.0 - np.sum(x))
            return -volume(full)

        if dim > 1:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                res = minimize(neg, x0, method="Nelder-Mead",
                               options={"xatol": max(tol, 1e-10), "fatol": 1e-13, "maxiter": 200 * dim,
                                        "initial_simplex": _initial_simplex(x0)})
            u = _project_simplex(np.append(res.x, 1.0 - np.sum(res.x)))
        else:
            u = u0.copy()
        best = volume(u)
        step = 0.05
        dirs = _compass_directions(dim)
        converged = False
        while counter["evals"] < max_evals:
            improved = False
            for e in dirs:
                cand = _project_simplex(u + step * e)
                v = volume(cand)
                if v > best + 1e-15 * max(1.0, abs(best)):
                    u, best, improved = cand, v, True
            if not improved:
                step *= 0.5
                if step < tol:
                    converged = True
                    break
        return u, best, converged

    results = []
    for u0 in starts:
        if counter["evals"] >= max_evals:
            break
        u, v, conv = local(np.asarray(u0, dtype=float))
        key = _canonical_u(u, n)
        results.append((v, key, conv))
    results.sort(key=lambda t: (-t[0], t[1]))
    v_best, key_best, conv_best = results[0]
    d = sections.canonicalize(np.sqrt(np.asarray(key_best)), n)
    err = cache[key_best][1]
    any_conv = any(c for _, _, c in results)
    warn = None if any_conv else "evaluation budget exhausted before any restart converged"
    return SearchResult(d, v_best, err, any_conv, counter["evals"], len(results), warn,
                        [(float(v), tuple(float(x) for x in k)) for v, k, _ in results[:5]])


def _initial_simplex(x0: np.ndarray) -> np.ndarray:
    k = x0.size
    pts = [x0]
    for i in range(k):
        p = x0.copy()
        p[i] = p[i] + 0.1 if p[i] + 0.1 <= 1.0 else p[i] - 0.1
        pts.append(p)
    return np.array(pts)
