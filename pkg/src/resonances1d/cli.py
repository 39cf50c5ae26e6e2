"""Batch command-line front end.

Each subcommand loads potentials from JSON, runs one library pipeline, and
writes its outputs atomically (temp file + rename).  Exit status: 0 on
success/PASS, 2 when a numerical check fails its threshold, 1 on usage
errors (bad flags, missing or malformed files).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
import warnings

import numpy as np

from . import asymptotics, czeros, inverse, plots, scattering, wavekernel
from .errors import LowCountWarning, Resonances1DError, UsageError
from .potential import Potential

PASS_EXIT, USAGE_EXIT, FAIL_EXIT = 0, 1, 2


# ---------------------------------------------------------------------------
# atomic output helpers


def _atomic_write_text(path, text):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _atomic_json(path, obj):
    _atomic_write_text(path, json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _atomic_via(path, writer):
    """Run a path-taking writer against a temp file, then rename."""
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix=".part")
    os.close(fd)
    try:
        writer(tmp)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_potential(path):
    if not os.path.exists(path):
        raise UsageError("no such file: %s" % path)
    try:
        with open(path) as fh:
            data = json.load(fh)
        return Potential.from_json(data)
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise UsageError("malformed potential file %s: %s" % (path, exc))


# ---------------------------------------------------------------------------
# subcommands


def _cmd_scattering_grid(args):
    V = _load_potential(args.potential)
    ks = np.linspace(args.k_min, args.k_max, args.n)
    samples = [scattering.sample(V, k) for k in ks]
    _atomic_via(args.out, lambda p: scattering.write_samples_csv(p, samples))
    if args.svg:
        grid_r = np.linspace(args.k_min, args.k_max, 160)
        grid_i = np.linspace(-4.0, 4.0, 120)
        K = grid_r[None, :] + 1j * grid_i[:, None]
        logx = scattering.log_abs_xhat(V, K)
        _atomic_via(
            args.svg,
            lambda p: plots.heatmap_svg(
                logx, (args.k_min, args.k_max, -4.0, 4.0), p,
                title="log|xhat(k)|",
            ),
        )
    return PASS_EXIT


def _cmd_kernels(args):
    V = _load_potential(args.potential)
    field = wavekernel.solve_kernels(V, args.ngrid)
    _atomic_via(args.out, lambda p: wavekernel.write_kernels_csv(field, p))
    return PASS_EXIT


def _cmd_resonances(args):
    V = _load_potential(args.potential)
    zs = czeros.resonances(V, args.radius)
    _atomic_json(args.out, zs.to_json(radius=args.radius))
    if args.svg:
        _atomic_via(
            args.svg,
            lambda p: plots.zero_scatter_svg(zs.locations, p, title="resonances"),
        )
    return PASS_EXIT


def _cmd_bound_states(args):
    V = _load_potential(args.potential)
    zs, energies = czeros.bound_states(V)
    out = zs.to_json()
    out["energies"] = energies
    _atomic_json(args.out, out)
    return PASS_EXIT


def _cmd_density(args):
    V = _load_potential(args.potential)
    zs = czeros.resonances(V, args.radius)
    sector = (args.alpha, args.beta)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LowCountWarning)
        rep = asymptotics.zero_density(zs, sector)
    out = {
        "sector": list(rep.sector),
        "delta": rep.delta,
        "width_d": rep.width_d,
        "fit_residual": rep.fit_residual,
        "n_in_sector": rep.n_in_sector,
    }
    _atomic_json(args.out, out)
    if args.csv:
        _atomic_via(args.csv, lambda p: asymptotics.write_density_csv(rep, p))
    if args.svg:
        _atomic_via(
            args.svg,
            lambda p: plots.density_fit_svg(
                rep.radii, rep.counts, rep.delta, p, title="n(r) and fitted slope"
            ),
        )
    return PASS_EXIT


def _cmd_indicator(args):
    V = _load_potential(args.potential)
    thetas = np.linspace(-np.pi, np.pi, args.n_theta)
    reps = asymptotics.indicator_profile(
        lambda k: scattering.log_abs_xhat(V, k), thetas, args.r_max, logabs=True
    )
    _atomic_via(args.out, lambda p: asymptotics.write_indicator_csv(reps, p))
    width = asymptotics.indicator_width(
        lambda k: scattering.log_abs_xhat(V, k), args.r_max, logabs=True
    )
    if args.report:
        _atomic_json(
            args.report,
            {"width": width, "expected_width": 2 * (V.b - V.a),
             "r_max": args.r_max},
        )
    return PASS_EXIT


def _cmd_cartwright_check(args):
    V = _load_potential(args.potential)
    cart = asymptotics.cartwright_integral(
        lambda k: scattering.log_abs_xhat(V, k), args.radius, logabs=True
    )
    width = asymptotics.indicator_width(
        lambda k: scattering.log_abs_xhat(V, k), args.radius, logabs=True
    )
    zs = czeros.resonances(V, args.radius)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", LowCountWarning)
        left = asymptotics.zero_density(zs, (-np.pi + 1e-9, -np.pi + 0.6))
        right = asymptotics.zero_density(zs, (-0.6, -1e-9))
    target = width / (2 * np.pi)
    ok = (
        cart.converged
        and abs(left.delta - target) <= 0.10 * target
        and abs(right.delta - target) <= 0.10 * target
    )
    report = {
        "cartwright_value": float(cart),
        "tail_converged": cart.converged,
        "indicator_width": width,
        "density_left_sector": left.delta,
        "density_right_sector": right.delta,
        "target_d_over_2pi": target,
        "pass": bool(ok),
    }
    if args.out:
        _atomic_json(args.out, report)
    else:
        print(json.dumps(report, indent=2, sort_keys=True))
    return PASS_EXIT if ok else FAIL_EXIT


def _cmd_nevanlinna_check(args):
    V = _load_potential(args.potential)
    f = lambda k: scattering.yhat(V, k)
    vmin = min(V.values)
    kmax = float(np.sqrt(max(0.0, -vmin))) + 1.0
    try:
        zs = czeros.find_zeros(
            f, czeros.Rect(complex(-kmax - 1, 1e-7), complex(kmax + 1, kmax + 1)),
            max_zeros=200, function_tag="yhat",
        )
        upper = tuple(zs.locations)
    except Resonances1DError:
        upper = ()
    sigma = asymptotics.indicator_estimate(
        lambda k: scattering.log_abs_yhat(V, k), np.pi / 2, 40.0, logabs=True
    ).h
    resid = asymptotics.nevanlinna_residual(
        f, upper, sigma, complex(args.z_re, args.z_im), args.cutoff
    )
    report = {
        "residual": resid,
        "sigma_plus": sigma,
        "n_upper_zeros": len(upper),
        "z": [args.z_re, args.z_im],
        "pass": bool(resid < 0.05),
    }
    if args.out:
        _atomic_json(args.out, report)
    else:
        print(json.dumps(report, indent=2, sort_keys=True))
    return PASS_EXIT if resid < 0.05 else FAIL_EXIT


def _cmd_g_experiment(args):
    V1 = _load_potential(args.potential1)
    V2 = _load_potential(args.potential2)
    rep = asymptotics.g_function_experiment(
        V1, V2, args.radius, r_window=args.r_window, n_grid=args.ngrid
    )
    _atomic_json(
        args.out,
        {
            "degenerate": rep.degenerate,
            "width_g": rep.width_g,
            "width_x": rep.width_x,
            "width_margin": rep.width_margin,
            "density_g": rep.density_g,
            "density_x": rep.density_x,
            "n_zeros_g": rep.n_zeros_g,
            "n_zeros_x": rep.n_zeros_x,
            "r_window": rep.r_window,
        },
    )
    return PASS_EXIT


def _cmd_distinguish(args):
    V1 = _load_potential(args.potential1)
    V2 = _load_potential(args.potential2)
    rep = inverse.uniqueness_report((V1, V2), args.radius)
    if args.out:
        _atomic_json(args.out, rep.to_json())
    else:
        print(json.dumps(rep.to_json(), indent=2, sort_keys=True))
    return PASS_EXIT if rep.implication_pass else FAIL_EXIT


def _cmd_inverse_recover(args):
    if not os.path.exists(args.spec):
        raise UsageError("no such file: %s" % args.spec)
    try:
        spec = inverse.InverseProblemSpec.load(args.spec)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise UsageError("malformed spec file %s: %s" % (args.spec, exc))
    rng = np.random.default_rng(args.seed)
    if args.init == "zeros":
        init = np.zeros(spec.n_params)
    else:
        init = rng.uniform(-1.0, 1.0, spec.n_params)
    result = inverse.recover_left(spec, init, max_iter=args.max_iter)
    if args.truth:
        truth = _load_potential(args.truth)
        tv = truth.value_at(
            (np.linspace(spec.a, 0.0, spec.n_params + 1)[:-1]
             + np.linspace(spec.a, 0.0, spec.n_params + 1)[1:]) / 2
        )
        err = float(np.linalg.norm(np.asarray(result.recovered_left) - tv))
        result = inverse.RecoveryResult(
            result.recovered_left, result.final_loss, result.iterations,
            result.converged, err, result.loss_trace,
        )
    _atomic_json(args.out, result.to_json())
    if args.trace:
        _atomic_via(args.trace, lambda p: inverse.write_loss_trace_csv(result, p))
    return PASS_EXIT if result.converged else FAIL_EXIT


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="resonances1d",
        description="Resonant-scattering toolbox for piecewise-constant 1D potentials",
    )
    ap.add_argument("--seed", type=int, default=0,
                    help="seed for any randomized initialization")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scattering-grid", help="sample scattering functions on a real k grid")
    p.add_argument("--potential", required=True)
    p.add_argument("--k-min", type=float, default=-10.0)
    p.add_argument("--k-max", type=float, default=10.0)
    p.add_argument("--n", type=int, default=201)
    p.add_argument("--out", required=True)
    p.add_argument("--svg", default=None)
    p.set_defaults(func=_cmd_scattering_grid)

    p = sub.add_parser("kernels", help="solve the characteristic kernels")
    p.add_argument("--potential", required=True)
    p.add_argument("--ngrid", type=int, default=1024)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_kernels)

    p = sub.add_parser("resonances", help="zeros of xhat in the lower half-plane")
    p.add_argument("--potential", required=True)
    p.add_argument("--radius", type=float, default=30.0)
    p.add_argument("--out", required=True)
    p.add_argument("--svg", default=None)
    p.set_defaults(func=_cmd_resonances)

    p = sub.add_parser("bound-states", help="zeros of xhat in the upper half-plane")
    p.add_argument("--potential", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_bound_states)

    p = sub.add_parser("density", help="sectorial zero-density fit")
    p.add_argument("--potential", required=True)
    p.add_argument("--radius", type=float, default=40.0)
    p.add_argument("--alpha", type=float, default=-np.pi + 1e-9)
    p.add_argument("--beta", type=float, default=-1e-9)
    p.add_argument("--out", required=True)
    p.add_argument("--csv", default=None)
    p.add_argument("--svg", default=None)
    p.set_defaults(func=_cmd_density)

    p = sub.add_parser("indicator", help="indicator-function sweep for xhat")
    p.add_argument("--potential", required=True)
    p.add_argument("--r-max", type=float, default=40.0)
    p.add_argument("--n-theta", type=int, default=25)
    p.add_argument("--out", required=True)
    p.add_argument("--report", default=None)
    p.set_defaults(func=_cmd_indicator)

    p = sub.add_parser("cartwright-check",
                       help="log-plus integrability and density vs d/(2 pi)")
    p.add_argument("--potential", required=True)
    p.add_argument("--radius", type=float, default=40.0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_cartwright_check)

    p = sub.add_parser("nevanlinna-check",
                       help="Poisson-representation residual for yhat")
    p.add_argument("--potential", required=True)
    p.add_argument("--z-re", type=float, default=0.0)
    p.add_argument("--z-im", type=float, default=2.0)
    p.add_argument("--cutoff", type=float, default=200.0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_nevanlinna_check)

    p = sub.add_parser("g-experiment",
                       help="windowed-difference function of a glued pair")
    p.add_argument("--potential1", required=True)
    p.add_argument("--potential2", required=True)
    p.add_argument("--radius", type=float, default=12.0)
    p.add_argument("--r-window", type=float, default=None)
    p.add_argument("--ngrid", type=int, default=1024)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_g_experiment)

    p = sub.add_parser("distinguish", help="uniqueness-experiment report for a pair")
    p.add_argument("--potential1", required=True)
    p.add_argument("--potential2", required=True)
    p.add_argument("--radius", type=float, default=20.0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_distinguish)

    p = sub.add_parser("inverse-recover", help="fit the left cells to det S data")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--init", choices=["zeros", "random"], default="zeros")
    p.add_argument("--max-iter", type=int, default=100)
    p.add_argument("--truth", default=None)
    p.add_argument("--trace", default=None)
    p.set_defaults(func=_cmd_inverse_recover)
    return ap


def main(argv=None):
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE_EXIT if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return USAGE_EXIT
    except OSError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return USAGE_EXIT
    except Resonances1DError as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return FAIL_EXIT


if __name__ == "__main__":
    sys.exit(main())
