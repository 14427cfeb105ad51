"""Command-line front end: ``roytest {cdf,quantile,roc,asympt,simulate,validate}``.

Every file written with ``--out`` gets a sibling ``<out>.manifest.json``
holding the command, all parameters, the seed, the library version and a
timestamp. The thread count for Monte Carlo runs comes from the
``ROYTEST_THREADS`` environment variable.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .asympt import (SpectrumParams, alt_cdf_approx, asympt_roc, edge_constants,
                     null_cdf_approx, spike_constants, supercritical)
from .errors import DimensionError, NumericRangeError, RegimeError
from .exactcdf import ModelDims, cdf, cdf_test_statistic, quantile
from .matint import series_consistency_residual
from .mcsim import (SignalModel, dkw_halfwidth, empirical_cdf, empirical_roc, samples_to_csv)
from .roc import RocCurve, RocPoint, logit_grid, roc_alpha0_closed, roc_curve
from .specfun import tw2_cdf, tw2_quantile


@dataclass
class RunManifest:
    command: str
    params: dict
    seed: int | None
    version: str = __version__
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())
    outputs: list = field(default_factory=list)

    def write(self, path):
        Path(path).write_text(json.dumps(asdict(self), indent=2, default=str) + "\n")


def parse_grid(text):
    """``start:stop:count``, inclusive and linearly spaced."""
    try:
        start, stop, count = text.split(":")
        start, stop, count = float(start), float(stop), int(count)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must be start:stop:count, got {text!r}") from None
    if count < 1 or (count > 1 and not stop > start):
        raise argparse.ArgumentTypeError(f"bad grid {text!r}: need count >= 1 and stop > start")
    return np.linspace(start, stop, count)


def _fmt(v):
    return format(float(v), ".17g")


def _table(columns, fmt):
    """Render a dict of equal-length columns as CSV or JSON."""
    if fmt == "json":
        return json.dumps({k: [float(x) for x in v] for k, v in columns.items()}, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(columns))
    for row in zip(*columns.values()):
        writer.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def _emit(args, text):
    if args.out:
        Path(args.out).write_text(text)
        params = {k: v for k, v in vars(args).items() if k not in ("func",)}
        params = {k: (v.tolist() if isinstance(v, np.ndarray) else v) for k, v in params.items()}
        manifest = RunManifest(" ".join(sys.argv[1:]) or args.command, params,
                               getattr(args, "seed", None), outputs=[str(args.out)])
        manifest.write(str(args.out) + ".manifest.json")
    else:
        sys.stdout.write(text)


def _dims(args):
    return ModelDims(args.m, args.n, args.p)


def _pf_grid(args):
    if args.pf_grid is not None:
        return args.pf_grid
    return logit_grid(args.logit)


def _spectrum(args):
    return SpectrumParams.from_dims(args.m, args.n, args.p, args.omega)


def cmd_cdf(args):
    dims = _dims(args)
    grid = args.t_grid
    if args.regime == "highdim":
        params = _spectrum(args)
        law = alt_cdf_approx if args.omega > 0 else null_cdf_approx
        values = law(params, args.m, grid)
        _emit(args, _table({"x": grid, "cdf": values}, args.format))
        return 0
    if args.scaled:
        values = cdf_test_statistic(dims, args.omega, grid)
        _emit(args, _table({"x": grid, "cdf": values}, args.format))
    else:
        values = cdf(dims, args.omega, grid)
        _emit(args, _table({"t": grid, "cdf": values}, args.format))
    return 0


def cmd_quantile(args):
    value = quantile(_dims(args), args.omega, args.q, scaled=args.scaled)
    if args.format == "json":
        _emit(args, json.dumps({"q": args.q, "quantile": value}) + "\n")
    else:
        _emit(args, _fmt(value) + "\n")
    return 0


def cmd_roc(args):
    pf = _pf_grid(args)
    if args.regime == "highdim":
        pd = asympt_roc(_spectrum(args), args.m, pf)
        points = [RocPoint(float(a), float(b), math.nan) for a, b in zip(pf, pd)]
        curve = RocCurve(points, _dims(args), args.omega, {"regime": "highdim"})
    else:
        curve = roc_curve(_dims(args), args.omega, pf)
    _emit(args, curve.to_json() + "\n" if args.format == "json" else curve.to_csv())
    return 0


def cmd_asympt(args):
    params = SpectrumParams(args.c1, args.c2, args.gamma)
    edge = edge_constants(params)
    doc = {"c1": args.c1, "c2": args.c2, "gamma": args.gamma, **asdict(edge)}
    if args.gamma > 0 and supercritical(params):
        doc.update(asdict(spike_constants(params)))
    if args.m is None:
        if args.format == "json":
            _emit(args, json.dumps(doc, indent=2) + "\n")
        else:
            _emit(args, _table({k: [v] for k, v in doc.items()}, "csv"))
        return 0
    pf = _pf_grid(args)
    _emit(args, _table({"pf": pf, "pd": asympt_roc(params, args.m, pf)}, args.format))
    return 0


def _model(args):
    if args.config:
        return SignalModel.from_config(Path(args.config).read_text())
    for name in ("m", "n", "p"):
        if getattr(args, name) is None:
            raise DimensionError(f"--{name} is required without --config")
    return SignalModel.from_omega(args.m, args.n, args.p, args.omega)


def cmd_simulate(args):
    model = _model(args)
    if args.what == "roc":
        curve = empirical_roc(model, args.trials, _pf_grid(args), args.seed, args.method)
        _emit(args, curve.to_json() + "\n" if args.format == "json" else curve.to_csv())
        return 0
    ecdf = empirical_cdf(model, args.hypothesis, args.trials, args.seed, args.method)
    if args.what == "samples":
        if args.format == "json":
            _emit(args, _table({"lambda_hat_max": ecdf.sorted_samples}, "json"))
        else:
            _emit(args, samples_to_csv(ecdf))
        return 0
    grid = args.t_grid if args.t_grid is not None else np.quantile(
        ecdf.sorted_samples, np.linspace(0.01, 0.99, 25))
    _emit(args, _table({"x": grid, "cdf": ecdf(grid)}, args.format))
    return 0


# -- validation suites ------------------------------------------------------

def _check_dkw(seed):
    dims, omega, trials = ModelDims(5, 8, 10), 2.0, 20000
    ecdf = empirical_cdf(SignalModel.from_omega(5, 8, 10, omega), "H1", trials, seed)
    xs = ecdf.quantile(np.linspace(0.02, 0.98, 25))
    gap = float(np.max(np.abs(ecdf(xs) - cdf_test_statistic(dims, omega, xs))))
    return gap, dkw_halfwidth(trials)


def _check_series(seed):
    worst = 0.0
    for dims, wa, z in [(ModelDims(2, 3, 4), 1.0, 0.4), (ModelDims(3, 5, 6), 3.0, 0.6),
                        (ModelDims(4, 7, 8), 5.0, 0.2)]:
        worst = max(worst, series_consistency_residual(dims, wa, z, 60))
    return worst, 1e-8


def _check_roc(seed):
    dims, omega = ModelDims(3, 3, 7), 4.0
    pf = np.linspace(0.01, 0.99, 21)
    curve = roc_curve(dims, omega, pf)
    gap = float(np.max(np.abs(curve.pd - roc_alpha0_closed(3, 4, omega, pf))))
    return gap, 1e-9


def _check_tw(seed):
    s = np.linspace(-5.013, 2.017, 15)
    back = np.array([tw2_quantile(float(v)) for v in tw2_cdf(s)])
    return float(np.max(np.abs(back - s))), 1e-6


def _check_regime(seed):
    m, trials = 60, 2000
    params = SpectrumParams(0.25, 0.5, 5.0)
    model = SignalModel.from_omega(m, 2 * m, 4 * m, 4 * m * 5.0)
    pf = [0.05, 0.1, 0.2, 0.5]
    curve = empirical_roc(model, trials, pf, seed, method="bartlett")
    return float(np.max(np.abs(curve.pd - asympt_roc(params, m, pf)))), 0.05


SUITES = {
    "cdf": ("exact CDF inside the 99% DKW band (m=5, n=8, p=10, omega=2)", _check_dkw),
    "series": ("series identity residual at truncation 60", _check_series),
    "roc": ("closed-form n=m ROC vs quantile-path ROC", _check_roc),
    "tw": ("Tracy-Widom quantile round trip", _check_tw),
    "regime": ("supercritical Gaussian power vs Monte Carlo (m=60)", _check_regime),
}


def cmd_validate(args):
    names = list(SUITES) if args.suite == "all" else [args.suite]
    failed = 0
    lines = []
    for name in names:
        label, check = SUITES[name]
        value, tol = check(args.seed)
        ok = value < tol
        failed += not ok
        lines.append(f"{'PASS' if ok else 'FAIL'} {name}: {label}: {value:.3g} (tol {tol:.3g})")
    lines.append(f"{len(names) - failed}/{len(names)} checks passed")
    _emit(args, "\n".join(lines) + "\n")
    return 1 if failed else 0


# -- parser -------------------------------------------------------------------

def _add_dims(p, required=True):
    p.add_argument("--m", type=int, required=required)
    p.add_argument("--n", type=int, required=required)
    p.add_argument("--p", type=int, required=required)
    p.add_argument("--omega", type=float, default=0.0)


def _add_pf(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--pf-grid", type=parse_grid, help="linear pf grid start:stop:count")
    g.add_argument("--logit", type=int, default=199, metavar="COUNT",
                   help="COUNT pf values evenly spaced in logit(pf) (default)")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="write here (plus a .manifest.json) instead of stdout")
    common.add_argument("--seed", type=int, default=0)

    parser = argparse.ArgumentParser(prog="roytest", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cdf", parents=[common], help="CDF of the largest root on a grid")
    _add_dims(p)
    p.add_argument("--t-grid", type=parse_grid, required=True)
    p.add_argument("--scaled", action="store_true",
                   help="grid is in lambda_hat = (n/p) lambda (implied by --regime highdim)")
    p.add_argument("--regime", choices=("exact", "highdim"), default="exact")
    p.set_defaults(func=cmd_cdf)

    p = sub.add_parser("quantile", parents=[common], help="solve CDF = q")
    _add_dims(p)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--scaled", action="store_true")
    p.set_defaults(func=cmd_quantile)

    p = sub.add_parser("roc", parents=[common], help="ROC curve of the largest-root test")
    _add_dims(p)
    _add_pf(p)
    p.add_argument("--regime", choices=("exact", "highdim"), default="exact")
    p.set_defaults(func=cmd_roc)

    p = sub.add_parser("asympt", parents=[common], help="high-dimensional constants and power")
    p.add_argument("--c1", type=float, required=True)
    p.add_argument("--c2", type=float, required=True)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--m", type=int, help="emit the power curve for this m")
    _add_pf(p)
    p.set_defaults(func=cmd_asympt)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo oracle")
    p.add_argument("what", choices=("samples", "cdf", "roc"))
    _add_dims(p, required=False)
    p.add_argument("--config", help="JSON model document (overrides --m/--n/--p/--omega)")
    p.add_argument("--hypothesis", choices=("H0", "H1"), default="H1")
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--method", choices=("direct", "bartlett"), default="direct")
    p.add_argument("--t-grid", type=parse_grid)
    _add_pf(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("validate", parents=[common], help="run the oracle suites")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--suite", choices=("all", *SUITES), default="all")
    g.add_argument("--identity", dest="suite", choices=("series",))
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericRangeError as exc:
        print(f"roytest: numeric range error: {exc}", file=sys.stderr)
        return 3
    except (DimensionError, RegimeError, ValueError) as exc:
        print(f"roytest: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
