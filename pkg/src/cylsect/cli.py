"""Command-line interface: ``cylsect <command> [options]``.

Every command writes one JSON document {command, config, results, violations,
versions}; ``inequality`` can alternatively write a CSV sweep.  Exit codes: 0
when there are no violations, 1 when a check fails or a computation does not
converge, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import platform
import sys
from typing import Sequence

import numpy as np

from . import __version__, extremal, ineq, quad, sections, special

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _versions() -> dict:
    import mpmath
    import scipy

    return {"cylsect": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "mpmath": mpmath.__version__, "python": platform.python_version()}


def _clean(obj):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return "inf" if obj > 0 else "-inf" if obj < 0 else "nan"
    return obj


def _parse_direction(text: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"cannot parse direction {text!r}; expected comma-separated numbers")
    if not vals:
        raise UsageError("direction is empty")
    return vals


def _rel_tol(text: str) -> float:
    v = float(text)
    if not (0.0 < v <= 1e-2):
        raise argparse.ArgumentTypeError("rel-tol must lie in (0, 1e-2]")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cylsect", description="Sections of generalized cylinders and Bessel integral checks.")
    common = _Parser(add_help=False)
    common.add_argument("--rel-tol", type=_rel_tol, default=1e-10)
    common.add_argument("--format", choices=("json", "csv"), default="json", dest="output_format")
    common.add_argument("--output", default=None, dest="output_path", help="write to this file instead of stdout")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    body = _Parser(add_help=False)
    body.add_argument("--n", type=int, required=True)
    body.add_argument("--m", type=int, required=True)
    body.add_argument("--r", type=float, required=True)

    p = sub.add_parser("volume", parents=[common, body], help="central section volume (Fourier formula + MC)")
    p.add_argument("--direction", type=_parse_direction, required=True)
    p.add_argument("--samples", type=int, default=10**6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-mc", action="store_true", help="skip the Monte-Carlo cross-check")

    p = sub.add_parser("area3d", parents=[common], help="piecewise area of [-1/2,1/2] x rB_2^2 over alpha")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--alpha-steps", type=int, default=50)

    p = sub.add_parser("maximize", parents=[common, body], help="maximal central section")
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--search", action="store_true", help="run the direction search also for n=1, m=2")

    p = sub.add_parser("bound", parents=[common, body], help="upper bound and Holder bound")
    p.add_argument("--direction", type=_parse_direction, default=None)

    p = sub.add_parser("inequality", parents=[common], help="sweep of the Bessel integral over p")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--p-min", type=float, default=2.0)
    p.add_argument("--p-max", type=float, default=1e4)
    p.add_argument("--p-steps", type=int, default=50)
    p.add_argument("--limit", action="store_true", help="also check convergence along p = 1e2, 1e3, 1e4")

    p = sub.add_parser("np", parents=[common], help="distribution-function conditions")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--y-points", type=int, default=1000)

    p = sub.add_parser("lemmas", parents=[common], help="technical lemmas, the m in {3,4} chain, complex-cube check")
    return parser


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cmd_volume(args) -> tuple[list, list, dict]:
    z = sections.CylinderSpec(args.n, args.m, args.r)
    d = sections.canonicalize(args.direction, z.n, z.m)
    extra = {"direction_raw": list(args.direction), "direction_canonical": list(d.coords)}
    res = sections.section_volume_fourier(z, d, rel_tol=args.rel_tol)
    results = [{"method": res.method, "volume": res.volume, "err": res.err_est}]
    violations = []
    if not args.no_mc:
        mc = sections.section_volume_mc(z, d, samples=args.samples, seed=args.seed)
        bias = mc.details.get("bias_allowance", 0.0)
        results.append({"method": mc.method, "volume": mc.volume, "err": mc.err_est,
                        "eps": mc.details.get("eps"), "brunn_bias_bound": bias, "samples": args.samples,
                        "seed": args.seed})
        eps = mc.details["eps"]
        allowed = 3.0 * (mc.err_est + res.err_est) + 10.0 * eps * eps
        if abs(res.volume - mc.volume) > allowed:
            violations.append(f"Fourier {res.volume:.10g} and Monte-Carlo {mc.volume:.10g} differ by more "
                              f"than {allowed:.3g}")
    return results, violations, extra


def _cmd_area3d(args):
    r = args.r
    if args.alpha_steps < 2:
        raise special.DomainError("alpha-steps must be at least 2")
    z = sections.CylinderSpec(1, 2, r)
    results, violations = [], []
    for alpha in np.linspace(0.0, 1.0, args.alpha_steps):
        alpha = float(alpha)
        closed = sections.section_area_3d(r, alpha)
        a = [math.sqrt(max(0.0, 1.0 - alpha * alpha)), alpha]
        four = sections.section_volume_fourier(z, a, rel_tol=args.rel_tol)
        diff = abs(closed - four.volume)
        results.append({"alpha": alpha, "area": closed, "err": 0.0, "fourier": four.volume,
                        "fourier_err": four.err_est, "difference": diff})
        if diff > 1e-6 + four.err_est:
            violations.append(f"alpha={alpha:.6g}: closed form {closed:.12g} vs Fourier {four.volume:.12g}")
    return results, violations, {}


def _cmd_maximize(args):
    z = sections.CylinderSpec(args.n, args.m, args.r)
    results = []
    if z.n == 1 and z.m == 2:
        mx = extremal.maximal_section_3d(z.r)
        results.append({"method": "exact", "shape": mx.shape, "alpha_max": mx.alpha_max,
                        "alpha_star_lower": mx.alpha_star_lower, "area": mx.area, "err": 1e-12 * mx.area,
                        "x": mx.x, "critical_radius": extremal.CRITICAL_RADIUS_3D})
        if not args.search:
            return results, [], {}
    sr = extremal.search_max_direction(z, restarts=args.restarts, seed=args.seed, rel_tol=args.rel_tol)
    results.append({"method": "search", "direction": list(sr.direction.coords), "volume": sr.volume,
                    "err": sr.err_est, "converged": sr.converged, "evaluations": sr.evaluations,
                    "restarts": sr.restarts, "warning": sr.warning})
    violations = [] if sr.converged else [sr.warning or "search did not converge"]
    return results, violations, {}


def _cmd_bound(args):
    z = sections.CylinderSpec(args.n, args.m, args.r)
    results, violations = [], []
    for which in ("cube_axis", "ball_axis"):
        results.append({"quantity": which, "volume": sections.special_direction_volume(z, which), "err": 0.0})
    bound = None
    if z.n > 1 and z.m > 1:
        b = sections.thm2_upper_bound(z)
        bound = b.bound
        results.append({"quantity": "upper_bound", "bound": b.bound, "regime": b.regime,
                        "threshold_r": b.threshold_r, "err": 0.0})
    if args.direction is not None:
        d = sections.canonicalize(args.direction, z.n, z.m)
        hb = sections.holder_bound(z, d, rel_tol=args.rel_tol)
        vol = sections.section_volume_fourier(z, d, rel_tol=args.rel_tol)
        results.append({"quantity": "holder_bound", "direction": list(d.coords), "bound": hb, "err": 0.0})
        results.append({"quantity": "section_volume", "direction": list(d.coords), "volume": vol.volume,
                        "err": vol.err_est})
        if vol.volume > hb + vol.err_est:
            violations.append(f"section volume {vol.volume:.12g} exceeds Holder bound {hb:.12g}")
        if bound is not None and vol.volume > bound + vol.err_est:
            violations.append(f"section volume {vol.volume:.12g} exceeds the upper bound {bound:.12g}")
    return results, violations, {}


def _sweep_rows(rep: ineq.Report, bound: float) -> list:
    rows = []
    for p, value, err in rep.data["rows"]:
        rows.append({"p": p, "value": value, "err": err, "bound": bound, "slack": bound - value})
    return rows


def _cmd_inequality(args):
    if args.p_steps < 1:
        raise special.DomainError("p-steps must be positive")
    if args.p_min < 2.0:
        raise special.DomainError("p-min must be at least 2")
    if args.p_max < args.p_min:
        raise special.DomainError("p-max must be at least p-min")
    grid = np.geomspace(args.p_min, args.p_max, args.p_steps)
    if args.m == 1:
        rep = ineq.verify_ball(grid, rel_tol=args.rel_tol)
        bound = ineq.BALL_BOUND
    else:
        rep = ineq.verify_thm4(args.m, grid, rel_tol=args.rel_tol)
        bound = ineq.ball_limit(args.m)
    results = _sweep_rows(rep, bound)
    violations = list(rep.violations)
    extra = {"checks": [_check_dict(c) for c in rep.checks if not c.name.startswith(("J1(", f"J{args.m}("))
                        or "limit" in c.name or "=" in c.name]}
    if args.limit:
        lim = ineq.limit_check(args.m, rel_tol=args.rel_tol)
        violations.extend(lim.violations)
        extra["limit"] = [{"p": p, "value": v, "distance": d, "err": e} for p, v, d, e in lim.data["rows"]]
    return results, violations, extra


def _check_dict(c: ineq.Check) -> dict:
    return {"name": c.name, "value": c.value, "bound": c.bound, "err": c.err, "relation": c.relation,
            "passed": c.passed, "slack": c.slack}


def _report_entry(rep: ineq.Report) -> dict:
    d = rep.to_dict()
    d.pop("violations")
    return d


def _cmd_np(args):
    results, violations = [], []
    if args.m == 2:
        nr = ineq.np_report_m2(y_points=args.y_points, rel_tol=args.rel_tol)
        results.append(nr.to_dict())
        violations.extend(nr.report.violations)
        consts = ineq.np_constants_m2()
        results.append(_report_entry(consts))
        violations.extend(consts.violations)
    elif args.m >= 5:
        nr = ineq.np_report_highm(args.m, y_points=args.y_points, rel_tol=args.rel_tol)
        results.append(nr.to_dict())
        violations.extend(nr.report.violations)
    else:
        raise special.DomainError("np is available for m = 2 and m >= 5")
    return results, violations, {}


def _cmd_lemmas(args):
    results, violations = [], []
    reports = [ineq.verify_technical_lemmas(), ineq.verify_m34_chain(3, rel_tol=args.rel_tol),
               ineq.verify_m34_chain(4, rel_tol=args.rel_tol), ineq.oleszkiewicz_check(rel_tol=args.rel_tol)]
    for rep in reports:
        results.append(_report_entry(rep))
        violations.extend(f"{rep.name}: {v}" for v in rep.violations)
    return results, violations, {}


_COMMANDS = {"volume": _cmd_volume, "area3d": _cmd_area3d, "maximize": _cmd_maximize, "bound": _cmd_bound,
             "inequality": _cmd_inequality, "np": _cmd_np, "lemmas": _cmd_lemmas}


def _config(args) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("output_path",)}
    return cfg


def _render_csv(results: list) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["p", "value", "err", "bound", "slack"])
    for row in results:
        writer.writerow([repr(float(row[k])) for k in ("p", "value", "err", "bound", "slack")])
    return buf.getvalue()


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        args = build_parser().parse_args(list(argv) if argv is not None else None)
        if args.output_format == "csv" and args.command != "inequality":
            raise UsageError("csv output is available for the inequality sweep only")
    except UsageError as exc:
        print(str(exc), file=stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    try:
        results, violations, extra = _COMMANDS[args.command](args)
    except (special.DomainError, quad.DivergenceError) as exc:
        print(f"cylsect {args.command}: {exc}", file=stderr)
        return EXIT_USAGE
    except (quad.QuadratureError, sections.DegenerateSampleError, ArithmeticError) as exc:
        print(f"cylsect {args.command}: computation failed: {exc}", file=stderr)
        return EXIT_VIOLATION
    if args.output_format == "csv":
        text = _render_csv(results)
    else:
        doc = {"command": args.command, "config": _config(args), "results": results,
               "violations": violations, "versions": _versions()}
        doc.update({k: v for k, v in extra.items()})
        text = json.dumps(_clean(doc), indent=2, sort_keys=True) + "\n"
    if args.output_path:
        with open(args.output_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return EXIT_VIOLATION if violations else EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
