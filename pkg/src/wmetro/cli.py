"""Command-line front end.

Each subcommand writes one table to stdout (or ``--out``). With
``--format json`` the metadata block is embedded in the document; with CSV it
goes to stderr as a single JSON line so stdout stays a plain RFC-4180 table.

Exit status: 0 on success, 2 on usage or configuration errors, 1 on
numerical failure.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import math
import secrets
import sys

import numpy as np

from . import __version__, analytic, dephasing, estimation, fisher, meters
from .errors import NumericalError
from .table import SweepTable, clean_metadata

PRESETS = {
    # Fig. 1 does not list its N values; {10, 30, 120} is a stand-in.
    "fig1": {"n_list": [10.0, 30.0, 120.0], "g_max": 0.2, "points": 401},
    "fig3": {"n_list": [120.0], "g_max": math.pi / 240, "points": 201, "g": 0.005, "trials": 10_000, "reps": 500},
}
PRESET_COMMANDS = {"overlap": {"fig1"}, "postselect": {"fig1", "fig3"}, "estimate": {"fig3"}}


class UsageError(Exception):
    pass


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _label(x: float) -> str:
    return format(x, "g")


def _n_values(args, required=True) -> list[float]:
    values = args.n_list if args.n_list is not None else ([args.n] if args.n is not None else None)
    if values is None:
        if required:
            raise UsageError("--n or --n-list is required")
        return []
    if not values or any(v < 0 for v in values):
        raise UsageError("photon numbers must be non-negative")
    return values


def _g_grid(args) -> np.ndarray:
    if args.g_max is None:
        raise UsageError("--g-max is required")
    if not args.g_max > 0:
        raise UsageError("--g-max must be > 0")
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    return np.linspace(0.0, args.g_max, args.points)


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise UsageError(f"--{name.replace('_', '-')} is required for this mode")


def cmd_overlap(args) -> SweepTable:
    g = _g_grid(args)
    fn = analytic.overlap_exact if args.mode == "exact" else analytic.overlap_leading
    cols = {"g": g}
    for N in _n_values(args):
        cols[f"overlap_N{_label(N)}"] = fn(N, g)
    return SweepTable(cols)


def cmd_postselect(args) -> SweepTable:
    g = _g_grid(args)
    cols = {"g": g}
    for N in _n_values(args):
        p_plus, p_minus = analytic.postselect_probs(N, g)
        cols[f"p_plus_N{_label(N)}"] = p_plus
        cols[f"p_minus_N{_label(N)}"] = p_minus
        cols[f"p_plus_smallg_N{_label(N)}"] = analytic.postselect_prob_smallg(N, g)
    return SweepTable(cols)


def cmd_qfi(args) -> SweepTable:
    if args.mode is None:
        raise UsageError("--mode is required")
    _require(args, "n")
    N, g = args.n, (args.g if args.g is not None else 0.0)
    if args.mode == "pure-cat":
        rep = fisher.qfi_pure(fisher.cat_family(N), g, fisher.default_step(N))
        closed = 4 * (N**2 + N)
    elif args.mode == "coherent-only":
        rep = fisher.qfi_pure(fisher.coherent_family(N), g, fisher.default_step(N))
        closed = 4 * N
    elif args.mode == "gaussian-meter":
        _require(args, "sigma")
        rep = fisher.qfi_gaussian_meter(N, args.sigma)
        closed = rep.fisher
    elif args.mode == "dephased":
        _require(args, "phi2")
        rep = fisher.qfi_mixed_sld(lambda x: dephasing.dephased_qubit(N, x, args.phi2), g, fisher.default_step(N))
        closed = dephasing.dephased_qfi(N, args.phi2)
    elif args.mode == "postselection":
        _require(args, "g")
        rep = fisher.cfi_postselection(N, g)
        closed = 4 * N**2
    else:
        raise UsageError(f"unknown qfi mode {args.mode!r}")
    table = SweepTable({"N": N, "g": g, "fisher": rep.fisher, "crb": rep.crb, "closed_form": closed})
    table.metadata["method"] = rep.method.value
    return table


def cmd_estimate(args) -> SweepTable:
    _require(args, "n", "g")
    run = estimation.EstimationRun(args.n, args.g, args.trials, args.reps, args.seed, args.model)
    rep = estimation.estimate(run, workers=args.workers)
    cols = {"N": run.N, "g_true": run.g_true, "trials": run.trials, "repetitions": run.repetitions}
    cols.update(rep.as_dict())
    cols["sigma_ratio"] = rep.g_hat_std / rep.sigma_g_binomial
    table = SweepTable(cols)
    table.metadata["model"] = run.model.value
    return table


def cmd_scaling(args) -> SweepTable:
    _require(args, "gn")
    out = estimation.scaling_sweep(
        _n_values(args), args.gn, args.trials, args.reps, args.seed, args.model, workers=args.workers
    )
    slope = out.pop("slope")
    table = SweepTable(out)
    table.metadata["slope"] = slope
    return table


def cmd_dephasing(args) -> SweepTable:
    _require(args, "n", "phi2_list")
    g = args.g if args.g is not None else 0.0
    return SweepTable(dephasing.dephasing_sweep(args.n, g, args.phi2_list, workers=args.workers))


def cmd_meter(args) -> SweepTable:
    if args.type == "gaussian":
        _require(args, "sigma")
        if args.criterion is not None:
            Ns = _n_values(args)
            return SweepTable({
                "N": Ns,
                "d_min": [meters.gaussian_dmin(args.sigma, N, args.criterion) for N in Ns],
            }, {"criterion": args.criterion})
        _require(args, "d_max")
        d = _d_grid(args)
        cols = {"d": d}
        for N in _n_values(args):
            cols[f"overlap_N{_label(N)}"] = [meters.gaussian_overlap(meters.GaussianMeter(args.sigma, x), N) for x in d]
        return SweepTable(cols)

    meter = meters.PlaneWaveMeter(args.wavelength)
    if args.sweep == "n":
        Ns = _n_values(args)
        zeros = [meters.planewave_first_zero(meter, N) for N in Ns]
        slope = estimation.loglog_slope(Ns, zeros) if len(Ns) > 1 else math.nan
        return SweepTable({"N": Ns, "d_first_zero": zeros}, {"slope": slope})
    if args.d is not None:
        Ns = _n_values(args)
        return SweepTable({
            "N": Ns,
            "d": [args.d] * len(Ns),
            "phase": [meters.planewave_phase(meter, args.d) * N for N in Ns],
            "P_plus": [meters.planewave_postselect(meter, args.d, N) for N in Ns],
        })
    _require(args, "d_max")
    d = _d_grid(args)
    cols = {"d": d}
    for N in _n_values(args):
        cols[f"P_plus_N{_label(N)}"] = meters.planewave_postselect(meter, d, N)
    return SweepTable(cols)


def _d_grid(args) -> np.ndarray:
    if not args.d_max > 0:
        raise UsageError("--d-max must be > 0")
    if args.points < 2:
        raise UsageError("--points must be >= 2")
    return np.linspace(0.0, args.d_max, args.points)


COMMANDS = {
    "overlap": cmd_overlap,
    "postselect": cmd_postselect,
    "qfi": cmd_qfi,
    "estimate": cmd_estimate,
    "scaling": cmd_scaling,
    "dephasing": cmd_dephasing,
    "meter": cmd_meter,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wmetro", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--out", metavar="FILE")

    photons = argparse.ArgumentParser(add_help=False)
    photons.add_argument("--n", type=float, help="mean photon number N")
    photons.add_argument("--n-list", type=_floats, help="comma-separated photon numbers")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--g-max", type=float)
    grid.add_argument("--points", type=int, default=201)
    grid.add_argument("--preset", choices=sorted(PRESETS))

    mc = argparse.ArgumentParser(add_help=False)
    mc.add_argument("--trials", type=int, default=10_000)
    mc.add_argument("--reps", type=int, default=500)
    mc.add_argument("--seed", type=int, help="master seed; random if omitted")
    mc.add_argument("--model", choices=[m.value for m in estimation.Model], default="smallg_cos2")
    mc.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("overlap", parents=[common, photons, grid], help="overlap of the cat state with the initial state")
    p.add_argument("--mode", choices=["exact", "leading"], default="exact")

    sub.add_parser("postselect", parents=[common, photons, grid], help="post-selection probabilities against g")

    p = sub.add_parser("qfi", parents=[common], help="Fisher information and Cramér–Rao bound")
    p.add_argument("--mode", choices=["pure-cat", "coherent-only", "gaussian-meter", "dephased", "postselection"])
    p.add_argument("--n", type=float)
    p.add_argument("--g", type=float)
    p.add_argument("--sigma", type=float)
    p.add_argument("--phi2", type=float)

    p = sub.add_parser("estimate", parents=[common, mc], help="Monte Carlo estimation of g")
    p.add_argument("--n", type=float)
    p.add_argument("--g", type=float)
    p.add_argument("--preset", choices=["fig3"])

    p = sub.add_parser("scaling", parents=[common, photons, mc], help="estimator spread against N at fixed gN")
    p.add_argument("--gn", type=float, help="fixed product g*N")
    p.set_defaults(reps=200)

    p = sub.add_parser("dephasing", parents=[common], help="overlap and QFI against phase-noise variance")
    p.add_argument("--n", type=float)
    p.add_argument("--g", type=float)
    p.add_argument("--phi2", dest="phi2_list", type=_floats, help="comma-separated sorted variances")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("meter", parents=[common, photons], help="Gaussian and plane-wave von Neumann meters")
    p.add_argument("--type", choices=["gaussian", "plane"], required=True)
    p.add_argument("--sigma", type=float)
    p.add_argument("--wavelength", type=float, default=1.0)
    p.add_argument("--d", type=float)
    p.add_argument("--d-max", type=float)
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--criterion", choices=["overlap", "crb"])
    p.add_argument("--sweep", choices=["d", "n"], default="d")
    return parser


def _apply_preset(args):
    preset = getattr(args, "preset", None)
    if preset is None:
        return
    if preset not in PRESET_COMMANDS.get(args.command, ()):
        raise UsageError(f"preset {preset!r} does not apply to {args.command!r}")
    values = PRESETS[preset]
    if args.command == "estimate":
        args.n, args.g, args.trials, args.reps = values["n_list"][0], values["g"], values["trials"], values["reps"]
    else:
        args.n_list, args.g_max, args.points = values["n_list"], values["g_max"], values["points"]


def _metadata(args) -> dict:
    params = {k: v for k, v in vars(args).items() if k not in ("command", "format", "out")}
    return {
        "command": args.command,
        "parameters": params,
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
    }


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_preset(args)
        if hasattr(args, "seed") and args.seed is None:
            args.seed = secrets.randbits(64)
        table = COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        parser.exit(2, f"wmetro {args.command}: error: {exc}\n")
    except NumericalError as exc:
        parser.exit(1, f"wmetro {args.command}: numerical failure: {type(exc).__name__}: {exc}\n")

    table.metadata = {**_metadata(args), **table.metadata}
    text = table.dumps(args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.format == "csv":
        sys.stderr.write("# metadata " + json.dumps(clean_metadata(table.metadata), sort_keys=True, allow_nan=False) + "\n")
    return 0


def main():
    sys.exit(run())
