"""Numerical verification of the Bessel integral inequalities and the lemmas behind them.

Every check compares two numbers A, B with their error budgets and passes iff
A <= B + err_A + err_B (or the analogous relation).  Reports collect the
checks, a list of violations, and a list of discrepancies.  A discrepancy
marks a reference constant or formula that disagrees with the computed one
even though the conclusion it is used for still holds.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import brentq
from scipy.special import hyp2f1

from . import quad, special

__all__ = [
    "Check",
    "Report",
    "DistributionCurve",
    "NPReport",
    "BALL_BOUND",
    "ball_limit",
    "default_p_grid",
    "distribution_curve",
    "verify_ball",
    "verify_thm4",
    "limit_check",
    "np_report_m2",
    "np_constants_m2",
    "np_report_highm",
    "verify_m34_chain",
    "verify_technical_lemmas",
    "oleszkiewicz_check",
]

BALL_BOUND = math.pi / math.sqrt(2.0)
DEAD_BAND = 1e-10


def ball_limit(m: int) -> float:
    """lim_{p -> inf} sqrt(p) int |j_{m/2}|^p = sqrt(pi) sqrt(m/2 + 1); equals sqrt(3 pi / 2) for m = 1."""
    return math.sqrt(math.pi) * math.sqrt(m / 2.0 + 1.0)


def default_p_grid(p_min: float = 2.0, p_max: float = 1e4, steps: int = 50) -> np.ndarray:
    return np.geomspace(p_min, p_max, steps)


# ---------------------------------------------------------------------------
# report plumbing
# ---------------------------------------------------------------------------

@dataclass
class Check:
    name: str
    value: float
    bound: float
    err: float = 0.0
    relation: str = "<="
    passed: bool = True
    note: str = ""

    @property
    def slack(self) -> float:
        if self.relation in ("<=", "<"):
            return self.bound - self.value
        if self.relation in (">=", ">"):
            return self.value - self.bound
        return -abs(self.value - self.bound)


def _holds(value: float, bound: float, err: float, relation: str) -> bool:
    if relation in ("<=", "<"):
        return value <= bound + err if relation == "<=" else value < bound + err
    if relation in (">=", ">"):
        return value >= bound - err if relation == ">=" else value > bound - err
    if relation == "~":
        return abs(value - bound) <= err
    raise ValueError(f"unknown relation {relation!r}")


@dataclass
class Report:
    name: str
    checks: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    discrepancies: list = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def check(self, name: str, value: float, bound: float, err: float = 0.0, relation: str = "<=",
              note: str = "") -> bool:
        ok = _holds(float(value), float(bound), float(err), relation)
        self.checks.append(Check(name, float(value), float(bound), float(err), relation, ok, note))
        if not ok:
            self.violations.append(f"{name}: {value:.12g} {relation} {bound:.12g} fails (budget {err:.3g})")
        return ok

    def flag(self, condition: bool, name: str, message: str) -> bool:
        self.checks.append(Check(name, float(bool(condition)), 1.0, 0.0, "~", bool(condition), message))
        if not condition:
            self.violations.append(f"{name}: {message}")
        return bool(condition)

    def discrepancy(self, message: str) -> None:
        self.discrepancies.append(message)

    def merge(self, other: "Report", prefix: str = "") -> None:
        for c in other.checks:
            c = Check(prefix + c.name, c.value, c.bound, c.err, c.relation, c.passed, c.note)
            self.checks.append(c)
        self.violations.extend(prefix + v for v in other.violations)
        self.discrepancies.extend(prefix + d for d in other.discrepancies)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "ok": self.ok,
            "checks": [dict(asdict(c), slack=c.slack) for c in self.checks],
            "violations": list(self.violations),
            "discrepancies": list(self.discrepancies),
            "data": _jsonable(self.data),
        }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


# ---------------------------------------------------------------------------
# Ball-type integrals
# ---------------------------------------------------------------------------

def _calJ(m: int, p: float, rel_tol: float = 1e-10) -> quad.QuadResult:
    return quad.ball_bessel_integral(m, p, rel_tol=rel_tol)


def verify_ball(p_grid: Sequence[float] | None = None, rel_tol: float = 1e-10) -> Report:
    """J_1(p) <= pi/sqrt(2) on the grid, equality at p = 2, limit sqrt(3 pi / 2)."""
    grid = default_p_grid() if p_grid is None else np.asarray(p_grid, dtype=float)
    if np.any(grid < 2.0):
        raise special.DomainError("verify_ball requires p >= 2")
    rep = Report("ball")
    values = []
    for p in grid:
        res = _calJ(1, p, rel_tol)
        values.append((float(p), res.value, res.total_error))
        rep.check(f"J1({p:.6g}) <= pi/sqrt2", res.value, BALL_BOUND, res.total_error)
    two = _calJ(1, 2.0, rel_tol)
    rep.check("J1(2) = pi/sqrt2", two.value, BALL_BOUND, max(two.total_error, 1e-12), "~")
    big = _calJ(1, 1e4, rel_tol)
    lim = ball_limit(1)
    rep.check("J1(1e4) within 1% of sqrt(3pi/2)", abs(big.value - lim) / lim, 0.01, big.total_error / lim)
    rep.data = {"rows": values, "max_value": max(v for _, v, _ in values),
                "max_slack": max(BALL_BOUND - v for _, v, _ in values),
                "min_slack": min(BALL_BOUND - v for _, v, _ in values), "limit": lim}
    return rep


def verify_thm4(m: int, p_grid: Sequence[float] | None = None, rel_tol: float = 1e-10) -> Report:
    """J_m(p) <= sqrt(pi) sqrt(m/2+1) for p on the grid, the limit at p = 1e4,
    and J_m(2) <= the limit."""
    if m < 2:
        raise special.DomainError("verify_thm4 requires m >= 2")
    grid = default_p_grid() if p_grid is None else np.asarray(p_grid, dtype=float)
    if np.any(grid < 2.0):
        raise special.DomainError("verify_thm4 requires p >= 2")
    bound = ball_limit(m)
    rep = Report(f"bessel_integral_m{m}")
    rows = []
    for p in grid:
        res = _calJ(m, p, rel_tol)
        rows.append((float(p), res.value, res.total_error))
        rep.check(f"J{m}({p:.6g}) <= sqrt(pi)sqrt(m/2+1)", res.value, bound, res.total_error)
    big = _calJ(m, 1e4, rel_tol)
    rep.check(f"J{m}(1e4) within 1% of limit", abs(big.value - bound) / bound, 0.01, big.total_error / bound)
    two = _calJ(m, 2.0, rel_tol)
    rep.check(f"J{m}(2) <= limit", two.value, bound, two.total_error)
    rep.data = {"rows": rows, "bound": bound, "max_value": max(v for _, v, _ in rows),
                "min_slack": min(bound - v for _, v, _ in rows)}
    return rep


def limit_check(m: int, p_list: Sequence[float] = (1e2, 1e3, 1e4), rel_tol: float = 1e-10) -> Report:
    """Distances of J_m(p) to its limit decrease along p_list and end below 1%."""
    p_list = np.asarray(p_list, dtype=float)
    if np.any(np.diff(p_list) <= 0):
        raise special.DomainError("p_list must be increasing")
    if p_list[-1] < 1e4:
        raise special.DomainError("the largest p must be at least 1e4")
    lim = ball_limit(m)
    rep = Report(f"limit_m{m}")
    dist = []
    for p in p_list:
        res = _calJ(m, p, rel_tol)
        dist.append((float(p), res.value, abs(res.value - lim), res.total_error))
    for (p0, _, d0, e0), (p1, _, d1, e1) in zip(dist, dist[1:]):
        rep.check(f"|J{m}({p1:.6g}) - lim| <= |J{m}({p0:.6g}) - lim|", d1, d0, e0 + e1)
    rep.check(f"|J{m}({p_list[-1]:.6g}) - lim| / lim < 1%", dist[-1][2] / lim, 0.01, dist[-1][3] / lim, "<")
    rep.data = {"limit": lim, "rows": dist}
    return rep


# ---------------------------------------------------------------------------
# distribution functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DistributionCurve:
    grid: np.ndarray
    values: np.ndarray
    kind: str
    m: int


def _abs_j(m: int, s):
    return np.abs(special.normalized_bessel(m, s))


def _gaussian_G(m: int, y: np.ndarray) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    out = np.zeros_like(y)
    mask = y < 1.0
    out[mask] = np.sqrt((2.0 * m + 4.0) * np.log(1.0 / y[mask]))
    return out


def _envelope_large(m: int, s):
    return special.bessel_envelope("large", m, s)


def _pieces(m: int, upper: float):
    """Monotone pieces [a, b] of |j_{m/2}| on [0, upper] with endpoint values."""
    count = 8
    while True:
        zeros = special.bessel_zeros(m, count)
        if zeros[-1] >= upper:
            break
        count *= 2
    ext = special.bessel_extrema(m, count)
    pts = [0.0]
    for k in range(count):
        pts.append(float(zeros[k]))
        if ext[k] > zeros[k] and (k + 1 >= count or ext[k] < zeros[k + 1]):
            pts.append(float(ext[k]))
        elif ext[k] > zeros[k]:
            raise ArithmeticError("extrema do not interlace with zeros")
    pts = np.array(sorted(p for p in pts if p < upper) + [upper])
    pts = np.unique(pts)
    a, b = pts[:-1], pts[1:]
    fa, fb = _abs_j(m, a), _abs_j(m, b)
    return a, b, fa, fb


def _solve_level(m: int, a, b, y, increasing, func=None, iters: int = 80):
    """Vectorized Illinois iteration for f(s) = y on monotone brackets [a, b]."""
    f = (lambda s: _abs_j(m, s)) if func is None else func
    lo, hi = a.astype(float).copy(), b.astype(float).copy()
    flo = f(lo) - y
    fhi = f(hi) - y
    side = np.zeros(lo.size, dtype=int)
    active = np.ones(lo.size, dtype=bool)
    for _ in range(iters):
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        l, h, fl, fh = lo[idx], hi[idx], flo[idx], fhi[idx]
        denom = fh - fl
        with np.errstate(divide="ignore", invalid="ignore"):
            x = np.where(denom != 0, h - fh * (h - l) / denom, 0.5 * (l + h))
        bad = ~((x > l) & (x < h)) | ~np.isfinite(x)
        x = np.where(bad, 0.5 * (l + h), x)
        fx = f(x) - y[idx]
        same_lo = np.sign(fx) == np.sign(fl)
        # update bracket
        new_l = np.where(same_lo, x, l)
        new_h = np.where(same_lo, h, x)
        new_fl = np.where(same_lo, fx, fl)
        new_fh = np.where(same_lo, fh, fx)
        s_i = side[idx]
        # Illinois modification: halve the stale endpoint value
        new_fh = np.where(same_lo & (s_i == 1), new_fh * 0.5, new_fh)
        new_fl = np.where(~same_lo & (s_i == -1), new_fl * 0.5, new_fl)
        side[idx] = np.where(same_lo, 1, -1)
        lo[idx], hi[idx], flo[idx], fhi[idx] = new_l, new_h, new_fl, new_fh
        done = (np.abs(fx) <= 1e-15 * np.maximum(y[idx], 1e-300)) | (new_h - new_l <= 1e-13 * np.maximum(1.0, new_h))
        hit = np.abs(fx) <= 1e-15 * np.maximum(y[idx], 1e-300)
        lo[idx] = np.where(hit, x, lo[idx])
        hi[idx] = np.where(hit, x, hi[idx])
        active[idx] = ~done
    return 0.5 * (lo + hi)


def _measure_pieces(m: int, pieces, y_grid: np.ndarray) -> np.ndarray:
    """sum over monotone pieces of |{s in piece : |j(s)| > y}| for each y."""
    a, b, fa, fb = pieces
    inc = fb > fa
    low = np.minimum(fa, fb)
    high = np.maximum(fa, fb)
    width = b - a
    out = np.zeros(y_grid.size)
    full = y_grid[:, None] < low[None, :]
    out += (full * width[None, :]).sum(axis=1)
    part = (y_grid[:, None] >= low[None, :]) & (y_grid[:, None] < high[None, :])
    yi, pi = np.nonzero(part)
    if yi.size:
        roots = _solve_level(m, a[pi], b[pi], y_grid[yi], inc[pi])
        length = np.where(inc[pi], b[pi] - roots, roots - a[pi])
        np.add.at(out, yi, length)
    return out


def _abs_j_upper(m: int, y_min: float) -> float:
    """Beyond this point |j_{m/2}| < y_min (tail envelope)."""
    c = special.tail_envelope_constant(m)
    return max(m / 2.0 + 3.0, (c / y_min) ** (2.0 / (m + 1))) * (1.0 + 1e-9)


def _jt_envelope_inverse(m: int, y: np.ndarray) -> np.ndarray:
    """s >= m with large-envelope(s) = y, or m when the envelope at m is already <= y."""
    env_m = float(_envelope_large(m, float(m)))
    c = special._large_constant(m)
    out = np.full(y.size, float(m))
    mask = y < env_m
    if mask.any():
        yy = y[mask]
        hi = np.maximum(2.0 * m, (c * (4.0 / 3.0) ** 0.25 / yy) ** (2.0 / (m + 1)) * 1.01)
        lo = np.full(yy.size, float(m))
        out[mask] = _solve_level(m, lo, hi, yy, np.zeros(yy.size, bool),
                                 func=lambda s: _envelope_large(m, s))
    return out


def distribution_curve(kind: str, m: int, y_grid: Sequence[float]) -> DistributionCurve:
    """Distribution function y -> |{s >= 0 : f(s) > y}| for f in {abs_j, gaussian, j_tilde}."""
    y = np.asarray(y_grid, dtype=float)
    if y.ndim != 1 or np.any((y <= 0) | (y >= 1)):
        raise special.DomainError("y_grid must lie in (0, 1)")
    if kind == "gaussian":
        vals = _gaussian_G(m, y)
    elif kind == "abs_j":
        upper = _abs_j_upper(m, float(y.min()))
        vals = _measure_pieces(m, _pieces(m, upper), y)
    elif kind == "j_tilde":
        if m < 5:
            raise special.DomainError("j_tilde requires m >= 5")
        vals = _measure_pieces(m, _pieces(m, float(m)), y) + (_jt_envelope_inverse(m, y) - m)
    else:
        raise special.DomainError("kind must be 'abs_j', 'gaussian' or 'j_tilde'")
    return DistributionCurve(y, vals, kind, m)


def _sign_changes(diff: np.ndarray, grid: np.ndarray) -> tuple[int, list]:
    sign = np.where(diff > DEAD_BAND, 1, np.where(diff < -DEAD_BAND, -1, 0))
    nz = np.nonzero(sign)[0]
    changes = []
    for i, j in zip(nz, nz[1:]):
        if sign[i] != sign[j]:
            changes.append({"y0": float(math.sqrt(grid[i] * grid[j])), "from": int(sign[i]), "to": int(sign[j])})
    return len(changes), changes


# ---------------------------------------------------------------------------
# m = 2
# ---------------------------------------------------------------------------

@dataclass
class NPReport:
    m: int
    sign_changes: int
    y0: float | None
    p0: float | None
    p0_bracket: tuple
    condition_n1_ok: bool
    condition_n2_ok: bool
    report: Report

    @property
    def ok(self) -> bool:
        return self.condition_n1_ok and self.condition_n2_ok and self.report.ok

    def to_dict(self) -> dict:
        return {"m": self.m, "G_minus_H_sign_changes": self.sign_changes, "y0": self.y0, "p0": self.p0,
                "p0_bracket": list(self.p0_bracket), "condition_n1_ok": self.condition_n1_ok,
                "condition_n2_ok": self.condition_n2_ok, "ok": self.ok, "report": self.report.to_dict()}


def _find_p0(func, lo: float, hi: float, target: float, rel_tol: float):
    """Root of func(p) = target by Brent's method; returns (p0, residual) or (None, None)."""
    phi = lambda p: func(p) - target
    f_lo, f_hi = phi(lo), phi(hi)
    if f_lo == 0:
        return lo, 0.0, f_lo, f_hi
    if f_hi == 0:
        return hi, 0.0, f_lo, f_hi
    if (f_lo > 0) == (f_hi > 0):
        return None, None, f_lo, f_hi
    p0 = brentq(phi, lo, hi, xtol=1e-12, rtol=4 * np.finfo(float).eps, maxiter=200)
    return p0, phi(p0), f_lo, f_hi


def np_report_m2(y_points: int = 1000, y_min: float = 1e-6, rel_tol: float = 1e-10) -> NPReport:
    """Conditions of the distribution-function lemma for h = |j_1| and g = exp(-s^2/8)."""
    m = 2
    rep = Report("np_m2")
    y = np.geomspace(y_min, 1.0, y_points + 1)[:-1]
    H = distribution_curve("abs_j", m, y).values
    G = distribution_curve("gaussian", m, y).values
    rep.flag(bool(np.all(np.diff(H) <= 1e-12)), "H nonincreasing", "distribution of |j_1| must be nonincreasing")
    count, changes = _sign_changes(G - H, y)
    y1 = float(_abs_j(m, special.bessel_extrema(m, 1)[0]))
    above = y > y1
    rep.flag(bool(np.all(G[above] - H[above] >= -DEAD_BAND)), "G - H >= 0 above y1",
             "distribution of g must dominate above the first local maximum")
    rep.flag(count == 1, "N1 single sign change", f"found {count} sign changes of G - H")
    direction_ok = bool(changes) and changes[0]["from"] == -1 and changes[0]["to"] == 1
    rep.flag(count == 1 and direction_ok, "N1 sign change from - to +", "sign change must go from - to +")
    n1 = rep.ok

    # N2: root of sqrt(p) int h^p = sqrt(2 pi)
    target = math.sqrt(2.0 * math.pi)
    lo, hi = 2.0 / 3.0 + 1e-3, 2.0

    def calj(p):
        # the integrand decays like s^{-3p/2}; tolerances are loosened far from the root
        tol = 1e-3 if p < 0.75 else 1e-6 if p < 1.2 else max(rel_tol, 1e-8)
        return _calJ(m, p, tol).value

    p0, resid, f_lo, f_hi = _find_p0(calj, lo, hi, target, rel_tol)
    at2 = _calJ(m, 2.0, rel_tol)
    rep.check("sqrt2 int h^2 < sqrt(2 pi)", at2.value, target, at2.total_error, "<")
    closed = 16.0 * math.sqrt(2.0) / (3.0 * math.pi)
    rep.check("sqrt2 int h^2 = 16 sqrt2 / (3 pi)", at2.value, closed, max(at2.total_error, 1e-12), "~")
    printed = 8.0 * math.sqrt(2.0) / (3.0 * math.pi)
    rep.discrepancy(
        f"sqrt2 int |j_1|^2 = {at2.value:.10f} = 16 sqrt2/(3 pi); the stated constant 8 sqrt2/(3 pi) = "
        f"{printed:.10f} is half of it (int J_1^2 / s^2 ds = 4/(3 pi)); the inequality with sqrt(2 pi) "
        "still holds")
    rep.check("divergent end exceeds sqrt(2 pi)", f_lo + target, target, 0.0, ">")
    n2 = p0 is not None and lo < p0 < hi
    rep.flag(n2, "p0 in (2/3, 2)", f"p0 = {p0}")
    if p0 is not None:
        rep.check("|J2(p0) - sqrt(2 pi)|", abs(resid), 1e-6)
    rep.data = {"y_grid_points": int(y.size), "y_min": y_min, "y1": y1, "changes": changes,
                "J2_at_2": at2.value, "J2_at_2_err": at2.total_error, "p0": p0, "p0_residual": resid}
    return NPReport(m, count, changes[0]["y0"] if changes else None, p0, (2.0 / 3.0, 2.0),
                    n1, bool(n2 and rep.ok), rep)


def fubini_identity_m2(y_cut: float = 1e-3, nodes: int = 24, rel_tol: float = 1e-10) -> Report:
    """int (g^2 - h^2) ds against 2 int_0^1 y (G(y) - H(y)) dy for m = 2.

    On [y_cut, 1) the y-integral is computed from the numerically constructed
    distribution functions, piecewise between successive local maxima y_k of h
    with the substitution y = y_k - (y_k - y_{k+1}) t^2 that removes the square
    root behaviour of H below each y_k.  Below y_cut the layer-cake identity
    int_0^c 2 y H(y) dy = int min(h, c)^2 ds is used.
    """
    m = 2
    rep = Report("fubini_m2")
    lhs_g = math.sqrt(math.pi)  # int exp(-s^2/4)
    lhs_h = _calJ(m, 2.0, rel_tol).scaled(1.0 / math.sqrt(2.0))
    lhs = lhs_g - lhs_h.value
    upper = _abs_j_upper(m, y_cut)
    count = 8
    while special.bessel_extrema(m, count)[-1] < upper:
        count *= 2
    yk = _abs_j(m, special.bessel_extrema(m, count))
    levels = np.concatenate([[1.0], yk[yk > y_cut], [y_cut]])
    t, w = np.polynomial.legendre.leggauss(nodes)
    t = 0.5 * (t + 1.0)
    w = 0.5 * w
    ys, ws = [], []
    for top, bot in zip(levels[:-1], levels[1:]):
        yy = top - (top - bot) * t * t
        ys.append(yy)
        ws.append(w * 2.0 * (top - bot) * t)
    ys = np.concatenate(ys)
    ws = np.concatenate(ws)
    H = distribution_curve("abs_j", m, ys).values
    G = _gaussian_G(m, ys)
    upper_part = float(np.sum(ws * 2.0 * ys * (G - H)))
    # below y_cut: int_0^c 2 y G dy exact, int_0^c 2 y H dy = int min(h, c)^2 ds
    c = y_cut
    g_part = _int_2y_gauss(m, c)
    zeros = special.bessel_zeros(m, int(upper / math.pi) + 4)
    s_end = upper
    edges = np.concatenate([[0.0], zeros[zeros < s_end], [s_end]])
    minsq = quad.integrate_panels(lambda s: np.minimum(_abs_j(m, s), c) ** 2, edges, rel_tol=1e-12)
    tail = quad.power_bessel_integral(m, 2.0, lower=s_end, rel_tol=1e-8)
    h_part = minsq.value + tail.value
    rhs = upper_part + g_part - h_part
    rep.check("int(g^2 - h^2) = 2 int y (G - H) dy", lhs, rhs, 1e-4, "~")
    rep.data = {"lhs": lhs, "rhs": rhs, "difference": lhs - rhs, "y_cut": y_cut}
    return rep


def _int_2y_gauss(m: int, c: float) -> float:
    """int_0^c 2 y sqrt((2m+4) ln(1/y)) dy in closed form via the incomplete gamma function."""
    from scipy.special import gammaincc, gamma
    # substitute y = e^{-u}: int_{ln(1/c)}^inf 2 e^{-2u} sqrt(K u) du
    K = 2.0 * m + 4.0
    a = math.log(1.0 / c)
    # int_a^inf e^{-2u} u^{1/2} du = 2^{-3/2} Gamma(3/2, 2a)
    return 2.0 * math.sqrt(K) * 2.0 ** -1.5 * gamma(1.5) * gammaincc(1.5, 2.0 * a)


def _h_prime_abs(s):
    """|h'(s)| for h = |j_1|: 2 |J_2(s)| / s = s/4 |j_2(s)|."""
    s = np.asarray(s, dtype=float)
    return np.abs(special.normalized_bessel_derivative(2, s))


def _Q(k: int) -> float:
    y = math.pi**2 / (2.0 * math.sqrt(2.0)) * (k + 2.25) ** 1.5
    total = sum(l**1.5 for l in range(1, k + 1))
    return (2.5 + math.pi**1.5 * total) * 2.0 / (math.pi**2 * (k + 2.25) ** 1.5) * math.sqrt(math.log(y))


def np_constants_m2(k_max: int = 10) -> Report:
    """Constants used for the single-crossing argument with h = |j_1|, g = exp(-s^2/8)."""
    m = 2
    rep = Report("np_constants_m2")
    zeros = special.bessel_zeros(m, k_max + 2)
    ext = special.bessel_extrema(m, k_max + 1)
    yk = _abs_j(m, ext)
    c0 = 2.0 * math.sqrt(2.0) / math.pi**2
    for k in range(1, k_max + 1):
        s_k = zeros[k - 1]
        rep.check(f"s_{k} in (k pi, (k+1/4) pi) lower", s_k, k * math.pi, 0.0, ">")
        rep.check(f"s_{k} in (k pi, (k+1/4) pi) upper", s_k, (k + 0.25) * math.pi, 0.0, "<")
        rep.check(f"y_{k} lower bound", yk[k - 1], c0 * (k + 1.25) ** -1.5, 0.0, ">=")
        rep.check(f"y_{k} upper bound", yk[k - 1], c0 * k**-1.5, 0.0, "<=")
        rep.check(f"y_{k} >= 2 sqrt(2/pi) s_(k+1)^-3/2", yk[k - 1],
                  2.0 * math.sqrt(2.0 / math.pi) * zeros[k] ** -1.5, 0.0, ">=")
        rep.check(f"y_{k} <= 2 sqrt(2/pi) s_k^-3/2", yk[k - 1],
                  2.0 * math.sqrt(2.0 / math.pi) * s_k ** -1.5, 0.0, "<=")
    grid = np.linspace(3.0, 50.0, 20001)
    ratio = _h_prime_abs(grid) * grid**1.5
    rep.check("max |h'(s)| s^{3/2} on [3, 50] <= 2", float(ratio.max()), 2.0)
    s1 = float(zeros[0])
    g0 = np.linspace(0.0, s1, 20001)[:-1]
    hp_max = float(_h_prime_abs(g0).max())
    rep.check("max |h'| on [0, s1) <= 0.4", hp_max, 0.4)
    q1, q2 = _Q(1), _Q(2)
    rep.check("Q(2) > 1", q2, 1.0, 0.0, ">")
    rep.check("Q(1) < 1", q1, 1.0, 0.0, "<")
    qs = [_Q(k) for k in range(2, 201)]
    rep.check("min Q(k) over k = 2..200 > 1", min(qs), 1.0, 0.0, ">")
    rep.flag(bool(np.all(np.diff(qs) > 0)), "Q increasing on 2..200", "Q(k) must increase")

    # roots of h = y on (0, s1) and (s1, s2) for the extreme levels y1, y2
    y1, y2 = float(yk[0]), float(yk[1])
    e1 = float(ext[0])
    s2 = float(zeros[1])

    def root(lo, hi, level):
        return float(brentq(lambda s: float(_abs_j(m, s)) - level, lo, hi, xtol=1e-14))

    sig1_lo, sig1_hi = root(1e-9, s1, y1), root(1e-9, s1, y2)
    sig2_lo, sig2_hi = root(s1, e1, y2), e1
    sig3_lo, sig3_hi = e1, root(e1, s2, y2)
    rep.check("sigma_1 range lower end > 3.3050", sig1_lo, 3.3050, 0.0, ">")
    rep.check("sigma_1 range inside (.., s1)", sig1_hi, s1, 0.0, "<")
    rep.check("sigma_2 range lower end > 4.1896", sig2_lo, 4.1896, 0.0, ">")
    rep.check("sigma_3 range upper end < s2", sig3_hi, s2, 0.0, "<")
    rep.discrepancy(
        f"sigma_2 and sigma_3 lie in different monotone pieces: sigma_2 in ({sig2_lo:.5f}, {sig2_hi:.5f}) and "
        f"sigma_3 in ({sig3_lo:.5f}, {sig3_hi:.5f}); the common bracket (4.1896, s_2) is correct but coarse")
    fine = lambda lo, hi: np.linspace(lo, hi, 4001)
    hp1 = float(_h_prime_abs(fine(sig1_lo, sig1_hi)).max())
    hp23 = float(_h_prime_abs(fine(4.1896, s2)).max())
    rep.check("max |h'| over sigma_1 range <= 0.298", hp1, 0.298)
    rep.check("max |h'| over (4.1896, s2) <= 0.199", hp23, 0.199)
    inv_g_true = y2 * math.sqrt(math.log(1.0 / y2)) / math.sqrt(2.0)
    inv_g_printed = y2 * math.log(1.0 / y2) / math.sqrt(2.0)
    rep.check("1/|G'(y2)| >= 0.077 with G' as displayed", inv_g_printed, 0.077, 0.0, ">=")
    rep.discrepancy(
        f"G(y) = sqrt(8 ln(1/y)) has G'(y) = -sqrt2 / (y sqrt(ln(1/y))); the displayed derivative lacks the square "
        f"root. With the true derivative 1/|G'(y2)| = {inv_g_true:.5f} < 0.077 (displayed form gives "
        f"{inv_g_printed:.5f}); the conclusion is checked directly below")
    combined = (1.0 / 0.298 + 2.0 / 0.199) * inv_g_true
    rep.check("(1/0.298 + 2/0.199) / |G'(y2)| > 1 with true G'", combined, 1.0, 0.0, ">")
    # direct check of |H'|/|G'| > 1 on (y2, y1) at numerically located roots
    ys = np.linspace(y2, y1, 402)[1:-1]
    q = []
    for level in ys:
        r1 = root(1e-9, s1, level)
        r2 = root(s1, e1, level)
        r3 = root(e1, s2, level)
        hsum = sum(1.0 / float(_h_prime_abs(x)) for x in (r1, r2, r3))
        q.append(hsum * level * math.sqrt(math.log(1.0 / level)) / math.sqrt(2.0))
    rep.check("min |H'|/|G'| on (y2, y1) > 1", min(q), 1.0, 0.0, ">")
    rep.check("y1 < 1/sqrt(e)", y1, math.exp(-0.5), 0.0, "<")
    rep.data = {"zeros": zeros[:3].tolist(), "extrema": ext[:2].tolist(), "y1": y1, "y2": y2,
                "max_hprime_0_s1": hp_max, "Q1": q1, "Q2": q2,
                "sigma_ranges": [[sig1_lo, sig1_hi], [sig2_lo, sig2_hi], [sig3_lo, sig3_hi]],
                "max_hprime_sigma1": hp1, "max_hprime_sigma23": hp23,
                "inv_Gprime_y2_true": inv_g_true, "inv_Gprime_y2_displayed": inv_g_printed,
                "min_H_over_G_prime_ratio_y2_y1": min(q)}
    return rep


# ---------------------------------------------------------------------------
# m >= 5
# ---------------------------------------------------------------------------

def _jt_integral(m: int, p: float, rel_tol: float = 1e-10) -> tuple[float, float]:
    """int_0^inf j_tilde(s)^p ds: quadrature on [0, m) plus the closed form on [m, inf)."""
    zeros = special.bessel_zeros(m, 8)
    edges = np.concatenate([[0.0], zeros[zeros < m], [float(m)]])
    f = lambda s: _abs_j(m, s) ** p
    head = quad.integrate_panels(f, edges, rel_tol=rel_tol)
    # int_m^inf C^p (s^2 - m^2/4)^{-p/4} s^{-pm/2} ds
    #   = C^p (m/2)^{1 - p(m+1)/2} / 2 * B(1/4; a, b),  a = p(m+1)/4 - 1/2, b = 1 - p/4
    a = p * (m + 1) / 4.0 - 0.5
    b = 1.0 - p / 4.0
    if a <= 0:
        raise quad.DivergenceError("j_tilde^p is not integrable for p <= 2/(m+1)")
    x = 0.25
    inc_beta = x**a / a * hyp2f1(a, 1.0 - b, a + 1.0, x)
    log_c = (m + 1) / 2.0 * math.log(2.0) + math.lgamma(m / 2.0 + 1.0) - 0.5 * math.log(math.pi)
    tail = math.exp(p * log_c + (1.0 - p * (m + 1) / 2.0) * math.log(m / 2.0)) * 0.5 * inc_beta
    return head.value + tail, head.abs_err_est + 1e-14 * tail


def np_report_highm(m: int, y_points: int = 1000, y_min: float = 1e-6, rel_tol: float = 1e-10) -> NPReport:
    """Conditions of the distribution-function lemma for j_tilde and g = exp(-s^2/(2m+4)), m >= 5."""
    if m < 5:
        raise special.DomainError("np_report_highm requires m >= 5")
    rep = Report(f"np_m{m}")
    g = lambda s: np.exp(-np.asarray(s) ** 2 / (2.0 * m + 4.0))
    s_a = np.linspace(0.0, m, 4001)[1:]
    jt_a = special.j_tilde(m, s_a)
    rep.check("max (j_tilde - g) on (0, m] < 0", float(np.max(jt_a - g(s_a))), 0.0, 0.0, "<")
    s_b = np.linspace(m + 2.0, m + 50.0, 20001)[1:]
    rep.check("min (j_tilde - g) on (m+2, m+50] > 0", float(np.min(special.j_tilde(m, s_b) - g(s_b))), 0.0, 0.0, ">")
    s_c = np.linspace(m, m + 2.0, 20001)[1:-1]
    d_c = special.j_tilde(m, s_c) - g(s_c)
    crossings, cross_info = _sign_changes(d_c, s_c)
    rep.flag(crossings == 1, "single crossing in (m, m+2)", f"found {crossings} crossings")
    crossing_s = cross_info[0]["y0"] if cross_info else None

    y = np.geomspace(y_min, 1.0, y_points + 1)[:-1]
    Hj = distribution_curve("j_tilde", m, y).values
    G = distribution_curve("gaussian", m, y).values
    count, changes = _sign_changes(G - Hj, y)
    rep.flag(count == 1, "distribution functions change sign once", f"found {count} sign changes")
    n1 = rep.ok

    bound = ball_limit(m)
    i2, e2 = _jt_integral(m, 2.0, rel_tol)
    rep.check("sqrt2 int j_tilde^2 < sqrt(pi) sqrt(m/2+1)", math.sqrt(2.0) * i2, bound, math.sqrt(2.0) * e2, "<")
    lhs_m = 3.65 * math.exp(-m)
    rhs_m = math.sqrt(math.pi) * (math.sqrt(m / 2.0 + 1.0) - (m + 2.0) / (m + 1.0) * math.sqrt(m) / 2.0)
    rep.check("3.65 e^-m <= sqrt(pi)(sqrt(m/2+1) - (m+2)/(m+1) sqrt(m)/2)", lhs_m, rhs_m)
    lo, hi = 2.0 / (m + 1) + 1e-3, 2.0
    func = lambda p: math.sqrt(p) * _jt_integral(m, p, rel_tol)[0]
    p0, resid, f_lo, f_hi = _find_p0(func, lo, hi, bound, rel_tol)
    n2 = p0 is not None and 2.0 / (m + 1) < p0 <= 2.0
    rep.flag(n2, "p0 in (2/(m+1), 2]", f"p0 = {p0}")
    if p0 is not None:
        rep.check("|sqrt(p0) int j_tilde^p0 - bound|", abs(resid), 1e-6)
    rep.data = {"crossings": crossings, "crossing_s": crossing_s, "changes": changes, "sqrt2_int_jt2": math.sqrt(2.0) * i2,
                "bound": bound, "p0": p0, "p0_residual": resid}
    return NPReport(m, count, changes[0]["y0"] if changes else None, p0, (2.0 / (m + 1), 2.0),
                    n1, bool(n2 and rep.ok), rep)


# ---------------------------------------------------------------------------
# m in {3, 4}
# ---------------------------------------------------------------------------

def _part1_rhs(m: int, p: float) -> float:
    return (math.sqrt(math.pi) / math.sqrt(p) * math.sqrt(m / 2.0 + 1.0)
            * (1.0 - 0.75 / (p * (m + 4.0)) + 105.0 / 16.0 / (2.0 * p * p * (m + 4.0) ** 2)))


def _part2_rhs(m: int, p: float) -> float:
    c = special.tail_envelope_constant(m)
    s0 = m / 2.0 + 3.0
    return c**p * 2.0 / ((m + 1.0) * p - 2.0) * s0 ** (1.0 - (m + 1.0) / 2.0 * p)


def m3_reduction(p: float, coefficient: float | None = None) -> float:
    """-(3/7) c p^2 + (27/56) c p - (30/224) c + 9 p^{5/2} (4 / (9 2^{1/4} sqrt6))^p with c = sqrt(5 pi / 2)."""
    c = math.sqrt(2.5 * math.pi) if coefficient is None else coefficient
    return -3.0 / 7.0 * c * p * p + 27.0 / 56.0 * c * p - 30.0 / 224.0 * c + m3_last_summand(p)


def m3_last_summand(p: float) -> float:
    return 9.0 * p**2.5 * (4.0 / (9.0 * 2.0**0.25 * math.sqrt(6.0))) ** p


def m3_quadratic(p: float, coefficient: float | None = None) -> float:
    c = math.sqrt(2.5 * math.pi) if coefficient is None else coefficient
    return -3.0 / 7.0 * c * p * p + 27.0 / 56.0 * c * p - 30.0 / 224.0 * c + 32.0 / 27.0


def m3_final_value() -> float:
    return -99.0 / 224.0 * math.sqrt(10.0) * math.sqrt(math.pi) + 32.0 / 27.0


def verify_m34_chain(m: int, p_grid: Sequence[float] = (2.0, 3.0, 5.0, 10.0), rel_tol: float = 1e-10) -> Report:
    """Split estimate of int |j_{m/2}|^p at m/2 + 3 for m in {3, 4}."""
    if m not in (3, 4):
        raise special.DomainError("verify_m34_chain requires m in {3, 4}")
    grid = np.asarray(p_grid, dtype=float)
    if np.any(grid < 2.0):
        raise special.DomainError("verify_m34_chain requires p >= 2")
    rep = Report(f"chain_m{m}")
    s0 = m / 2.0 + 3.0
    zeros = special.bessel_zeros(m, 4)
    edges = np.concatenate([[0.0], zeros[zeros < s0], [s0]])
    rows = []
    for p in grid:
        part1 = quad.integrate_panels(lambda s: _abs_j(m, s) ** p, edges, rel_tol=rel_tol)
        part2 = quad.power_bessel_integral(m, p, lower=s0, rel_tol=rel_tol)
        b1, b2 = _part1_rhs(m, p), _part2_rhs(m, p)
        rep.check(f"int_0^{s0:g} |j|^{p:g} <= part-1 bound", part1.value, b1, part1.abs_err_est)
        rep.check(f"int_{s0:g}^inf |j|^{p:g} <= part-2 bound", part2.value, b2, part2.total_error)
        target = math.sqrt(math.pi) / math.sqrt(p) * math.sqrt(m / 2.0 + 1.0)
        rep.check(f"sum of bounds <= sqrt(pi/p) sqrt(m/2+1) at p={p:g}", b1 + b2, target, 1e-15 * target)
        rows.append({"p": float(p), "part1": part1.value, "part1_bound": b1, "part2": part2.value,
                     "part2_bound": b2, "target": target})
        if m == 3:
            rep.check(f"reduced inequality <= 0 at p={p:g}", m3_reduction(p), 0.0, 1e-14)
            rep.check(f"quadratic majorant <= 0 at p={p:g}", m3_quadratic(p), 0.0, 1e-14)
            rep.check(f"last summand <= 32/27 at p={p:g}", m3_last_summand(p), 32.0 / 27.0, 1e-13)
    if m == 3:
        rep.check("quadratic at p=2 equals -(99/224) sqrt10 sqrt(pi) + 32/27", m3_quadratic(2.0),
                  m3_final_value(), 1e-10, "~")
        rep.check("-(99/224) sqrt10 sqrt(pi) + 32/27 < 0", m3_final_value(), 0.0, 0.0, "<")
        rep.check("last summand at p=2 equals 32/27", m3_last_summand(2.0), 32.0 / 27.0, 1e-12, "~")
        pp = np.linspace(2.0, 60.0, 5801)
        last = np.array([m3_last_summand(p) for p in pp])
        rep.flag(bool(np.all(np.diff(last) < 0)), "last summand decreasing on [2, 60]",
                 "the last summand must decrease for p >= 2")
        rep.check("vertex of the quadratic", 27.0 / 56.0 / (2.0 * 3.0 / 7.0), 9.0 / 16.0, 1e-15, "~")
        printed = m3_quadratic(2.0, math.sqrt(0.4 * math.pi))
        rep.discrepancy(
            "after multiplying by p^{5/2}(4p - 2) the polynomial part carries the factor sqrt(5 pi / 2); with the "
            f"displayed sqrt(2 pi / 5) the quadratic majorant at p = 2 would be {printed:+.6f} > 0, while the "
            f"stated final value {m3_final_value():+.10f} matches sqrt(5 pi / 2)")
        rep.discrepancy("the last summand at p = 2 equals 32/27 exactly rather than being strictly below it")
    rep.data = {"rows": rows}
    return rep


# ---------------------------------------------------------------------------
# gamma and envelope lemmas
# ---------------------------------------------------------------------------

def _gamma_functions_ratio(m: int) -> float:
    lg = math.lgamma
    return math.exp(2 * lg(m / 2.0 + 1.0) + lg(m) - 2 * lg(m / 2.0 + 0.5) - lg(m + 0.5))


def _estimate_integral_lhs(p: float, m: int) -> float:
    f = lambda s: np.exp(-p * s * s / (2.0 * m + 4.0) - p * s**4 / (4.0 * (m + 2.0) ** 2 * (m + 4.0)))
    res = quad.integrate_semiaxis(f, quad.DecayHint(math.inf, math.sqrt((2.0 * m + 4.0) / p)), rel_tol=1e-13)
    return res.value, res.total_error


def verify_technical_lemmas(envelope_m_max: int = 12) -> Report:
    """Grid checks of the gamma-function inequalities and the pointwise Bessel envelopes."""
    rep = Report("technical_lemmas")
    xs = np.linspace(2.0, 100.0, 981)
    ratio = np.array([special.gamma_ratio_halfstep(x) for x in xs])
    rep.check("min Gamma(x)/Gamma(x-1/2) - sqrt(x)/2 on [2, 100] > 0", float(np.min(ratio - np.sqrt(xs) / 2.0)),
              0.0, 0.0, ">")
    worst_b = -math.inf
    for m in range(5, 61):
        lhs = _gamma_functions_ratio(m)
        rhs = (m + 2.0) / (m + 1.0) * math.sqrt(m) / 2.0
        worst_b = max(worst_b, lhs - rhs)
        rep.check(f"gamma ratio <= (m+2)/(m+1) sqrt(m)/2 at m={m}", lhs, rhs, 1e-14 * rhs)
    for p in (2.0, 3.0, 5.0, 10.0):
        for m in range(2, 9):
            lhs, err = _estimate_integral_lhs(p, m)
            rhs = (1.0 / math.sqrt(p) * math.sqrt(m / 2.0 + 1.0) * math.sqrt(math.pi)
                   * (1.0 - 0.75 / (p * (m + 4.0)) + 105.0 / 16.0 / (2.0 * p * p * (m + 4.0) ** 2)))
            rep.check(f"quartic-Gaussian integral bound at p={p:g}, m={m}", lhs, rhs, err)
    for m in range(2, 61):
        from .sections import critical_radius
        rep.check(f"critical radius > sqrt(m/2+1)/sqrt(2 pi) at m={m}", critical_radius(m),
                  math.sqrt(m / 2.0 + 1.0) / math.sqrt(2.0 * math.pi), 0.0, ">")
    env = _envelope_checks(rep, envelope_m_max)
    rep.data = {"gamma_functions_worst_gap": worst_b, "envelopes": env}
    return rep


def _envelope_checks(rep: Report, m_max: int) -> dict:
    out = {}
    for kind in special.EnvelopeKind:
        worst = -math.inf
        for m in range(1, m_max + 1):
            dom = special.envelope_domain(kind, m)
            if dom is None:
                continue
            lo, hi, lo_open = dom
            if math.isinf(hi):
                grid = np.concatenate([np.linspace(lo, lo + 60.0, 3001), np.geomspace(lo + 60.0, 1e4, 400)])
            else:
                grid = np.linspace(lo, hi, 2001)
            if lo_open:
                grid = grid[grid > lo]
            diff = np.abs(special.normalized_bessel(m, grid)) - special.bessel_envelope(kind, m, grid)
            worst = max(worst, float(diff.max()))
            rep.check(f"|j| <= {kind.value} envelope, m={m}", float(diff.max()), 0.0, 1e-12)
        out[kind.value] = worst
    worst_low = -math.inf
    for m in range(1, m_max + 1):
        s = np.linspace(0.0, 1.0, 1001)
        diff = special.bessel_lower_envelope(m, s) - np.abs(special.normalized_bessel(m, s))
        worst_low = max(worst_low, float(diff.max()))
        rep.check(f"lower envelope <= |j|, m={m}", float(diff.max()), 0.0, 1e-12)
    out["lower"] = worst_low
    # the quartic term with (m^2 + 2m + 4) in place of (m + 2)^2
    printed_worst = {}
    for m in range(1, m_max + 1):
        hi = 3.38 if m == 1 else m / 2.0 + 3.0
        s = np.linspace(0.0, hi, 4001)
        printed = np.exp(-s * s / (2.0 * m + 4.0) - s**4 / (4.0 * (m * m + 2.0 * m + 4.0) * (m + 4.0)))
        gap = float(np.max(np.abs(special.normalized_bessel(m, s)) - printed))
        printed_worst[m] = gap
    bad = {m: g for m, g in printed_worst.items() if g > 1e-12}
    if bad:
        rep.discrepancy(
            "small-argument envelope: with 4 (m^2 + 2m + 4)(m + 4) in the quartic term the bound fails for m in "
            f"{sorted(bad)} (largest excess {max(bad.values()):.3g} at m={max(bad, key=bad.get)}); the Taylor "
            "expansion log j = -s^2/(2m+4) - s^4/(4 (m+2)^2 (m+4)) + ... gives (m+2)^2, which holds and is used")
    out["small_printed_excess"] = printed_worst
    return out


# ---------------------------------------------------------------------------
# complex-cube integral
# ---------------------------------------------------------------------------

def oleszkiewicz_check(p_grid: Sequence[float] = (2.0, 3.0, 4.0, 6.0, 10.0, 20.0), rel_tol: float = 1e-10) -> Report:
    """I(p) = int |j_1(s)|^p s ds against 4/p, with and without a sqrt(p) prefactor.

    Only the form without the prefactor is asserted; the prefixed form is reported.
    """
    grid = np.asarray(p_grid, dtype=float)
    if np.any(grid < 2.0):
        raise special.DomainError("oleszkiewicz_check requires p >= 2")
    rep = Report("complex_cube")
    rows = []
    for p in grid:
        res = quad.weighted_j1_integral(p, rel_tol=rel_tol)
        plain_ok = res.value <= 4.0 / p + res.total_error
        pref_ok = math.sqrt(p) * res.value <= 4.0 / p + math.sqrt(p) * res.total_error
        rows.append({"p": float(p), "I": res.value, "err": res.total_error, "four_over_p": 4.0 / p,
                     "plain_form_holds": plain_ok, "sqrt_p_form_holds": pref_ok,
                     "sqrt_p_I": math.sqrt(p) * res.value})
        rep.check(f"I({p:g}) <= 4/p", res.value, 4.0 / p, res.total_error)
    two = quad.weighted_j1_integral(2.0, rel_tol=rel_tol)
    rep.check("I(2) = 2", two.value, 2.0, max(two.total_error, 1e-12), "~")
    failing = [r["p"] for r in rows if not r["sqrt_p_form_holds"]]
    if failing:
        rep.discrepancy(
            f"with the sqrt(p) prefactor the inequality fails at p in {failing} (e.g. sqrt2 I(2) = "
            f"{math.sqrt(2.0) * two.value:.6f} > 2); without it, equality holds at p = 2")
    rep.data = {"rows": rows}
    return rep
