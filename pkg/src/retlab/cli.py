"""Command-line front end.

Subcommands reproduce the headline numerical experiments and write
machine-readable reports: ``verify`` sweeps reconstruction points,
``slice`` grids a field diagnostic over the x-z plane, ``converge`` runs
a refinement study, ``counterexample`` exercises the sourced/sourceless
shell dichotomy and ``collapse`` the light-cone delta collapse.  Every
run writes a key/value report plus delimited data and a rendered figure
into the output directory.  Exit codes: 0 pass, 1 tolerance breach,
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import reporting
from .fields import (SpaceTimePoint, field_partials_many, field_values,
                     shell_wave, static_bump, translated_bump)
from .identity import (DecayConditionError, counterexample_spec,
                       counterexample_study, delta_shell_collapse,
                       verify_pointwise)
from .kernel import KernelConfig
from .quadrature import QuadratureConfig, convergence_study, support_radius
from .kernel import dalembertian_integrand

_FIELD_CHOICES = ("bump", "static", "shell")
_SLICE_KINDS = ("field", "retarded-field", "dalembertian",
                "retarded-dalembertian")


def _parse_triple(text):
    parts = [float(v) for v in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"expected three comma-separated values, got {text!r}")
    return tuple(parts)


def _parse_range(text):
    parts = [float(v) for v in text.split(":")]
    if len(parts) != 3 or parts[2] <= 0:
        raise ValueError(f"expected lo:hi:step with step > 0, got {text!r}")
    lo, hi, step = parts
    return np.round(np.arange(lo, hi + 0.5 * step, step), 10)


def _parse_pair(text):
    parts = [float(v) for v in text.split(":")]
    if len(parts) != 2 or parts[1] <= parts[0]:
        raise ValueError(f"expected lo:hi with hi > lo, got {text!r}")
    return parts


def _build_spec(args):
    if args.field == "bump":
        return translated_bump(v=args.v, c=args.c)
    if args.field == "static":
        return static_bump(center=_parse_triple(args.center), c=args.c)
    switch = None if args.switch is None else tuple(_parse_pair(args.switch))
    return shell_wave(radius=args.shell_radius, width=args.shell_width,
                      c=args.c, switch_window=switch)


def _build_quadrature(args):
    return QuadratureConfig(n_radial=args.radial, n_theta=args.theta,
                            n_phi=args.phi, rho_max=args.rho_max,
                            refinement_levels=args.levels)


def _build_kernel(args):
    return KernelConfig(c=args.c, epsilon=args.epsilon,
                        propagator=args.propagator)


def _config_tree(args, spec, qcfg, kcfg):
    """Full resolved configuration embedded in every report."""
    return {
        "field": {
            "family": spec.family,
            "v": float(spec.v),
            "c": float(spec.c),
            "center": [float(v) for v in spec.center],
            "shell_radius": float(spec.shell_radius),
            "shell_width": float(spec.shell_width),
            "switch_window": (None if spec.switch_window is None
                              else [float(v) for v in spec.switch_window]),
        },
        "quadrature": {
            "n_radial": qcfg.n_radial,
            "n_theta": qcfg.n_theta,
            "n_phi": qcfg.n_phi,
            "rho_max": None if qcfg.rho_max is None else float(qcfg.rho_max),
            "refinement_levels": qcfg.refinement_levels,
        },
        "kernel": {
            "c": float(kcfg.c),
            "epsilon": float(kcfg.epsilon),
            "propagator": kcfg.propagator,
        },
        "tolerance": {"rel": float(args.tolerance),
                      "abs": float(args.abs_tolerance)},
        "seed": args.seed,
    }


def _point_record(p, report):
    return {
        "x": float(p.x), "y": float(p.y), "z": float(p.z), "t": float(p.t),
        "f_expected": float(report.f_expected),
        "f_calc": float(report.f_calc),
        "abs_error": float(report.abs_error),
        "rel_error": float(report.rel_error),
        "decay_ok": bool(report.decay_ok),
        "convergence": reporting.convergence_summary(report.convergence),
    }


def _verify_task(task):
    spec, point, qcfg, kcfg = task
    return verify_pointwise(spec, point, qcfg, kcfg)


def cmd_verify(args) -> int:
    spec = _build_spec(args)
    qcfg = _build_quadrature(args)
    kcfg = _build_kernel(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    if args.random_points is not None:
        rng = np.random.default_rng(args.seed)
        coords = rng.uniform(-1.2, 1.2, size=(args.random_points, 3))
        ts = rng.uniform(-0.3, 0.3, size=args.random_points)
        points = [SpaceTimePoint(*xyz, t) for xyz, t in zip(coords, ts)]
        sweep_label = "index"
        sweep_values = list(range(len(points)))
    else:
        zs = [args.z] if args.z is not None else list(_parse_range(args.z_range))
        points = [SpaceTimePoint(args.x, args.y, float(z), args.t) for z in zs]
        sweep_label = "z"
        sweep_values = [float(z) for z in zs]

    tasks = [(spec, p, qcfg, kcfg) for p in points]
    start = time.perf_counter()
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            reports = list(pool.map(_verify_task, tasks))
    else:
        reports = [_verify_task(t) for t in tasks]
    elapsed = time.perf_counter() - start

    records, rows, failures = [], [], []
    for sweep_v, p, rep in zip(sweep_values, points, reports):
        passed = (rep.rel_error <= args.tolerance
                  or rep.abs_error <= args.abs_tolerance)
        rec = _point_record(p, rep)
        rec["passed"] = bool(passed)
        records.append(rec)
        rows.append((sweep_v, rep.f_expected, rep.f_calc,
                     rep.abs_error, rep.rel_error, int(passed)))
        if not passed:
            failures.append(rec)

    tree = {
        "command": "verify",
        "config": _config_tree(args, spec, qcfg, kcfg),
        "sweep": {"coordinate": sweep_label, "n_points": len(points)},
        "points": records,
        "summary": {
            "n_points": len(points),
            "n_failed": len(failures),
            "max_abs_error": float(max(r.abs_error for r in reports)),
            "max_rel_error": float(max(r.rel_error for r in reports)),
            "passed": not failures,
        },
    }
    reporting.write_report(out / "verify.report.txt", tree)
    reporting.write_delimited(
        out / "verify.csv",
        (sweep_label, "f_expected", "f_calc", "abs_error", "rel_error",
         "passed"),
        rows)
    if not args.no_figures:
        reporting.figure_sweep(out / "verify.png", sweep_values,
                               [r.f_expected for r in reports],
                               [r.f_calc for r in reports],
                               xlabel=sweep_label)
    print(f"verify: {len(points)} points, {len(failures)} failed, "
          f"{elapsed:.1f}s", file=sys.stderr)
    for rec in failures:
        print(f"  breach at ({rec['x']}, {rec['y']}, {rec['z']}, t={rec['t']}): "
              f"rel={rec['rel_error']:.3e} abs={rec['abs_error']:.3e}",
              file=sys.stderr)
    return 0 if not failures else 1


def _slice_values(kind, spec, kcfg, obs, x_vals, z_vals, y_plane):
    xs, zs = np.meshgrid(x_vals, z_vals, indexing="ij")
    flat = np.column_stack([xs.ravel(), np.full(xs.size, y_plane), zs.ravel()])
    if kind in ("field", "dalembertian"):
        times = np.full(xs.size, obs.t)
    else:
        dist = np.linalg.norm(flat - obs.position[None, :], axis=1)
        times = obs.t + kcfg.time_sign * dist / kcfg.c
    if kind in ("field", "retarded-field"):
        vals = field_values(spec, flat, times)
    else:
        b = field_partials_many(spec, flat, times)
        vals = np.asarray(b.f_xx + b.f_yy + b.f_zz - b.f_tt / kcfg.c ** 2)
    return vals.reshape(xs.shape)


def cmd_slice(args) -> int:
    spec = _build_spec(args)
    kcfg = _build_kernel(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    lo, hi = _parse_pair(args.extent)
    axis = np.linspace(lo, hi, args.grid_n)
    obs = SpaceTimePoint(args.x, args.y, args.z if args.z is not None else 0.0,
                         args.t)
    grid = _slice_values(args.kind, spec, kcfg, obs, axis, axis, args.y)

    stem = f"slice_{args.kind.replace('-', '_')}"
    rows = [(float(axis[i]), float(axis[j]), float(grid[i, j]))
            for i in range(len(axis)) for j in range(len(axis))]
    reporting.write_delimited(out / f"{stem}.csv", ("x", "z", "value"), rows)
    qcfg = _build_quadrature(args)
    tree = {
        "command": "slice",
        "kind": args.kind,
        "config": _config_tree(args, spec, qcfg, kcfg),
        "grid": {"n": args.grid_n, "extent": [lo, hi],
                 "observation": {"x": obs.x, "y": obs.y, "z": obs.z,
                                 "t": obs.t}},
        "stats": {"min": float(grid.min()), "max": float(grid.max())},
    }
    reporting.write_report(out / f"{stem}.report.txt", tree)
    if not args.no_figures:
        reporting.figure_slice(out / f"{stem}.png", axis, axis, grid,
                               args.kind)
    return 0


def cmd_converge(args) -> int:
    spec = _build_spec(args)
    qcfg = _build_quadrature(args)
    kcfg = _build_kernel(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    p = SpaceTimePoint(args.x, args.y, args.z if args.z is not None else 0.0,
                       args.t)
    rho_max = qcfg.rho_max
    if rho_max is None:
        rho_max = support_radius(spec, p, kcfg)
    cfg = replace(qcfg, rho_max=rho_max)
    record = convergence_study(dalembertian_integrand(spec, kcfg), p, cfg,
                               kcfg, args.levels).scaled(-1.0 / (4.0 * np.pi))

    rows = []
    for i, (res, val) in enumerate(zip(record.resolutions, record.values)):
        change = "" if i == 0 else repr(abs(record.values[i]
                                            - record.values[i - 1]))
        rows.append((res[0], res[1], res[2], float(val), change))
    tree = {
        "command": "converge",
        "config": _config_tree(args, spec, cfg, kcfg),
        "point": {"x": p.x, "y": p.y, "z": p.z, "t": p.t},
        "convergence": reporting.convergence_summary(record),
    }
    reporting.write_report(out / "converge.report.txt", tree)
    reporting.write_delimited(out / "converge.csv",
                              ("n_radial", "n_theta", "n_phi", "value",
                               "change"), rows)
    if not args.no_figures and len(record.values) > 1:
        reporting.figure_convergence(out / "converge.png",
                                     record.resolutions, record.values)
    ok = record.status in ("converged", "exact")
    order = record.observed_order
    if record.status == "converged" and order is not None and order < 1.0:
        ok = False
    return 0 if ok else 1


def cmd_counterexample(args) -> int:
    qcfg = _build_quadrature(args)
    kcfg = _build_kernel(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    scenario = f"{args.scenario}_shell"
    try:
        report = counterexample_study(scenario, qcfg=qcfg, kcfg=kcfg)
    except DecayConditionError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2

    if args.scenario == "sourced":
        passed = report.rel_error <= args.tolerance
    else:
        plateau_floor = 1e-6
        calc_small = abs(report.f_calc) <= 1e-3 * abs(report.f_expected)
        plateau = abs(report.boundary_plateau[-1][1]) > plateau_floor
        passed = calc_small and (not report.decay_ok) and plateau

    p = report.point
    spec, _ = counterexample_spec(scenario, kcfg.c)
    tree = {
        "command": "counterexample",
        "scenario": args.scenario,
        "config": _config_tree(args, spec, qcfg, kcfg),
        "point": {"x": p.x, "y": p.y, "z": p.z, "t": p.t},
        "f_expected": float(report.f_expected),
        "f_calc": float(report.f_calc),
        "abs_error": float(report.abs_error),
        "rel_error": float(report.rel_error),
        "decay_ok": bool(report.decay_ok),
        "boundary_term": [{"radius": r, "value": v}
                          for r, v in report.boundary_plateau],
        "note": report.note,
        "passed": bool(passed),
    }
    stem = f"counterexample_{args.scenario}"
    reporting.write_report(out / f"{stem}.report.txt", tree)
    reporting.write_delimited(out / f"{stem}.csv", ("radius", "value"),
                              list(report.boundary_plateau))
    if not args.no_figures:
        reporting.figure_boundary(out / f"{stem}.png",
                                  [r for r, _ in report.boundary_plateau],
                                  [v for _, v in report.boundary_plateau])
    return 0 if passed else 1


def cmd_collapse(args) -> int:
    kcfg = _build_kernel(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    src = _parse_triple(args.src)
    obs = (args.x, args.y, args.z if args.z is not None else 0.0)
    d = float(np.linalg.norm(np.asarray(obs) - np.asarray(src)))
    if d == 0.0:
        print("error: source and observation coincide", file=sys.stderr)
        return 2
    limit = 1.0 / (2.0 * d)
    sigmas = sorted((float(s) for s in args.sigmas.split(",")), reverse=True)

    rows = []
    for sigma in sigmas:
        est = delta_shell_collapse(obs, src, args.t, sigma, kcfg)
        rows.append((sigma, est, abs(est - limit)))
    final_dev = rows[-1][2]
    passed = final_dev <= args.tolerance

    tree = {
        "command": "collapse",
        "config": {
            "kernel": {"c": float(kcfg.c), "epsilon": float(kcfg.epsilon),
                       "propagator": kcfg.propagator},
            "source": [float(v) for v in src],
            "observation": [float(v) for v in obs],
            "t": float(args.t),
            "sigmas": [float(s) for s in sigmas],
            "tolerance": float(args.tolerance),
            "seed": args.seed,
        },
        "separation": d,
        "limit": limit,
        "estimates": [{"sigma": s, "estimate": e, "deviation": v}
                      for s, e, v in rows],
        "final_deviation": float(final_dev),
        "passed": bool(passed),
    }
    reporting.write_report(out / "collapse.report.txt", tree)
    reporting.write_delimited(out / "collapse.csv",
                              ("sigma", "estimate", "deviation"), rows)
    if not args.no_figures:
        reporting.figure_collapse(out / "collapse.png",
                                  [r[0] for r in rows], [r[1] for r in rows],
                                  limit)
    return 0 if passed else 1


def _add_common(parser, radial=320, theta=64, phi=16, tol=1e-4):
    parser.add_argument("--field", choices=_FIELD_CHOICES, default="bump")
    parser.add_argument("--v", type=float, default=0.5,
                        help="translation speed of the moving bump")
    parser.add_argument("--c", type=float, default=1.0)
    parser.add_argument("--center", default="0,0,0",
                        help="static bump center as x,y,z")
    parser.add_argument("--shell-radius", type=float, default=6.0)
    parser.add_argument("--shell-width", type=float, default=1.0)
    parser.add_argument("--switch", default=None,
                        help="shell switch window as t_on:t_off")
    parser.add_argument("--x", type=float, default=0.0)
    parser.add_argument("--y", type=float, default=0.0)
    parser.add_argument("--z", type=float, default=None)
    parser.add_argument("--t", type=float, default=0.0)
    parser.add_argument("--radial", type=int, default=radial)
    parser.add_argument("--theta", type=int, default=theta)
    parser.add_argument("--phi", type=int, default=phi)
    parser.add_argument("--rho-max", type=float, default=None)
    parser.add_argument("--levels", type=int, default=2,
                        help="refinement levels for convergence evidence")
    parser.add_argument("--epsilon", type=float, default=0.0)
    parser.add_argument("--propagator", choices=("retarded", "advanced"),
                        default="retarded")
    parser.add_argument("--tolerance", type=float, default=tol)
    parser.add_argument("--abs-tolerance", type=float, default=1e-6)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="out")
    parser.add_argument("--no-figures", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="retlab",
        description="Reconstruct C2 fields from their retarded wave "
                    "operator and stress-test the underlying identity.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="point-wise reconstruction sweep")
    _add_common(p)
    p.add_argument("--z-range", default="-1.5:1.5:0.1",
                   help="sweep specification lo:hi:step")
    p.add_argument("--random-points", type=int, default=None,
                   help="verify at seeded random points instead of a sweep")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("slice", help="grid a diagnostic over the x-z plane")
    _add_common(p)
    p.add_argument("--kind", choices=_SLICE_KINDS, default="field")
    p.add_argument("--extent", default="-4:4", help="axis range lo:hi")
    p.add_argument("--grid-n", type=int, default=161)
    p.set_defaults(func=cmd_slice)

    p = sub.add_parser("converge", help="refinement study at one point")
    _add_common(p, radial=32, theta=24, phi=8)
    p.set_defaults(func=cmd_converge, levels=4)

    p = sub.add_parser("counterexample",
                       help="sourced vs sourceless shell study")
    _add_common(p, tol=1e-3)
    p.add_argument("--scenario", choices=("sourced", "sourceless"),
                   required=True)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("collapse", help="light-cone delta collapse sweep")
    _add_common(p, tol=1e-3)
    p.add_argument("--sigmas", default="0.2,0.1,0.05,0.025,0.0125")
    p.add_argument("--src", default="0,0,1", help="source point as x,y,z")
    p.set_defaults(func=cmd_collapse)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, DecayConditionError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
