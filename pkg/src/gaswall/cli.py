"""Command-line front end.

Subcommands: equilibrium (density table plus scalars at one wall radius),
sweep (free-energy curve over a radius grid), identities (the four formula
suites), mc (finite-N Metropolis run), presets (the built-in models).

Output contract: every subcommand takes --format csv|json and --out PATH.
CSV has a lowercase header row, comma delimiter, 17-significant-digit
numbers; scalars accompanying a CSV table go to a .json sidecar next to
--out, or to stderr when the table goes to stdout.  JSON output is a
single flat object with snake_case keys.

Exit codes: 0 success, 1 identity failure, 2 invalid input, 3 numerical
failure.  GASWALL_THREADS caps the thread pool the identities subcommand
fans its suites over.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import BracketError, ConvergenceError
from .identities import (
    log_moment_suite,
    multipole_suite,
    shell_suite,
    wronskian_suite,
)
from .loggas import SINGLE_WALL_MODELS, LogGas
from .montecarlo import GasConfig, density_distance, metropolis_run
from .potentials import monomial_sum
from .transition import sweep as sweep_model
from .yukawa import YukawaGas, YukawaParams

EXIT_OK = 0
EXIT_IDENTITY = 1
EXIT_INPUT = 2
EXIT_NUMERICAL = 3

PRESETS = {
    "gue": ("loggas", None, None, None, "quadratic:0.5"),
    "ginue": ("coulomb", 2, 1.0, None, "quadratic:0.5"),
    "wishart_c1": ("single_wall", None, None, None, None),
    "tf1": ("thomas_fermi", 1, None, 1.0, "quadratic:0.5"),
}


def _fmt(x):
    return format(float(x), ".17g")


def parse_potential(text):
    """Monomial-sum grammar: "quadratic:0.5", "quartic:0.25+monomial:6,0.1"."""
    terms = []
    for part in text.split("+"):
        name, _, arg = part.strip().partition(":")
        if name == "quadratic":
            terms.append((float(arg) if arg else 0.5, 2))
        elif name == "quartic":
            terms.append((float(arg) if arg else 0.25, 4))
        elif name == "monomial":
            p_text, _, k_text = arg.partition(",")
            if not p_text or not k_text:
                raise ValueError("monomial term needs exponent,coefficient")
            terms.append((float(k_text), int(p_text)))
        else:
            raise ValueError(f"unknown potential term {name!r}")
    return monomial_sum(terms)


def parse_grid(text):
    """Either "start:stop:count" (inclusive linspace) or "r1,r2,...\"."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError("grid range must be start:stop:count")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 2:
            raise ValueError("grid range needs at least 2 points")
        return np.linspace(start, stop, count)
    return np.array([float(tok) for tok in text.split(",")])


def build_model(args):
    """Model object from --preset or the --family flag group."""
    if args.preset is not None:
        family, d, a, m, pot_text = PRESETS[args.preset]
        if family == "single_wall":
            return SINGLE_WALL_MODELS["wishart_c1"]
        pot = parse_potential(pot_text)
        if family == "loggas":
            return LogGas(pot)
        if family == "coulomb":
            return YukawaGas(YukawaParams(d=d, a=a, m=0.0), pot)
        return YukawaGas(YukawaParams(d=d, a=0.0, m=m), pot)
    if args.family is None:
        raise ValueError("need --preset or --family")
    pot = parse_potential(args.pot)
    if args.family == "loggas":
        return LogGas(pot)
    d = args.d if args.d is not None else 2
    if args.family == "yukawa":
        params = YukawaParams(d=d, a=args.a, m=args.m)
    elif args.family == "coulomb":
        params = YukawaParams(d=d, a=args.a, m=0.0)
    else:
        params = YukawaParams(d=d, a=0.0, m=args.m)
    return YukawaGas(params, pot)


# -- output plumbing -----------------------------------------------------------


def _csv_text(header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(
            cell if isinstance(cell, str) else _fmt(cell) for cell in row))
    return "\n".join(lines) + "\n"


def _sidecar_path(out):
    root, _ = os.path.splitext(out)
    return root + ".json"


def emit(args, header, rows, scalars):
    """Write the table and the scalar block per the output contract."""
    if args.format == "json":
        obj = dict(scalars)
        columns = list(zip(*rows)) if rows else [[] for _ in header]
        for name, col in zip(header, columns):
            obj[name] = [c if isinstance(c, str) else float(c) for c in col]
        text = json.dumps(obj, indent=2) + "\n"
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return
    csv_text = _csv_text(header, rows)
    scalar_text = json.dumps(scalars, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(csv_text)
        with open(_sidecar_path(args.out), "w") as fh:
            fh.write(scalar_text)
    else:
        sys.stdout.write(csv_text)
        sys.stderr.write(scalar_text)


# -- subcommands ---------------------------------------------------------------


def cmd_equilibrium(args):
    model = build_model(args)
    R = args.radius
    if R is not None and R <= 0:
        raise ValueError("--radius must be positive")
    n = args.points
    if isinstance(model, LogGas):
        rs = model.r_star
        R = rs if R is None else R
        eq = model.equilibrium(R)
        grid = np.linspace(-eq.support, eq.support, n + 2)[1:-1]
        dens = eq.density(grid)
        header = ["x", "density"]
        scalars = {"model": model.label, "phase": eq.phase, "r_star": rs,
                   "mu": eq.mu, "wall": R}
    elif isinstance(model, YukawaGas):
        rs = model.r_star
        R = rs if R is None else R
        support = min(R, rs)
        grid = np.linspace(0.0, support, n)
        dens = model.bulk_density(R, grid)
        header = ["r", "density"]
        scalars = {"model": model.label,
                   "phase": "pushed" if R < rs else "pulled",
                   "r_star": rs, "mu": model.chemical_potential(R),
                   "c": model.excess_charge(R), "wall": R}
    else:
        rs = model.r_star
        R = rs if R is None else R
        beff = min(R, rs)
        grid = np.linspace(0.0, beff, n + 2)[1:-1]
        dens = np.array([model.density(beff, x) for x in grid])
        header = ["x", "density"]
        scalars = {"model": model.label,
                   "phase": "pushed" if R < rs else "pulled",
                   "r_star": rs, "free_energy": model.free_energy(R),
                   "wall": R}
    rows = list(zip(grid, dens))
    emit(args, header, rows, scalars)
    return EXIT_OK


def cmd_sweep(args):
    model = build_model(args)
    grid = parse_grid(args.grid)
    curve = sweep_model(model, grid)
    header = ["r", "f", "df", "d2f", "d3f", "phase"]
    rows = [(R, f, df, d2, d3, "pushed" if R < curve.r_star else "pulled")
            for R, f, df, d2, d3
            in zip(curve.grid, curve.f, curve.df, curve.d2f, curve.d3f)]
    scalars = {"model": curve.model_id, "r_star": curve.r_star,
               "jump": curve.jump, "c_star": curve.c_star}
    emit(args, header, rows, scalars)
    return EXIT_OK


def _thread_cap(n_tasks):
    raw = os.environ.get("GASWALL_THREADS", "")
    try:
        cap = int(raw)
    except ValueError:
        cap = 0
    if cap < 1:
        cap = min(4, os.cpu_count() or 1)
    return max(1, min(cap, n_tasks))


def cmd_identities(args):
    dims = (args.d,) if args.d is not None else None
    n_pairs = args.pairs if args.pairs is not None else 5
    calls = {
        "multipole": lambda: multipole_suite(),
        "log_moment": lambda: log_moment_suite(),
        "shell": lambda: shell_suite(dims=dims or (2, 3), n_pairs=n_pairs),
        "wronskian": lambda: wronskian_suite(dims=dims or (1, 2, 3, 4)),
    }
    names = [args.suite] if args.suite else list(calls)
    with ThreadPoolExecutor(max_workers=_thread_cap(len(names))) as pool:
        results = list(pool.map(lambda name: calls[name](), names))
    header = ["suite", "max_dev", "threshold", "cases", "passed"]
    rows = [(r.name, r.max_dev, r.threshold, float(r.n_cases),
             "true" if r.passed else "false") for r in results]
    scalars = {"all_passed": all(r.passed for r in results)}
    emit(args, header, rows, scalars)
    for r in results:
        print(str(r), file=sys.stderr)
    return EXIT_OK if scalars["all_passed"] else EXIT_IDENTITY


def _mc_kernel_and_pot(args):
    if args.preset is not None:
        if args.preset == "gue":
            return "log_1d", parse_potential("quadratic:0.5")
        if args.preset == "ginue":
            return YukawaParams(d=2, a=1.0, m=0.0), parse_potential("quadratic:0.5")
        raise ValueError(
            f"preset {args.preset!r} has no finite-N pair Hamiltonian to sample")
    if args.family is None:
        raise ValueError("need --preset or --family")
    pot = parse_potential(args.pot)
    if args.family == "loggas":
        return "log_1d", pot
    d = args.d if args.d is not None else 2
    if args.family == "yukawa":
        return YukawaParams(d=d, a=args.a, m=args.m), pot
    if args.family == "coulomb":
        return YukawaParams(d=d, a=args.a, m=0.0), pot
    raise ValueError("the Thomas-Fermi gas has no finite-N pair Hamiltonian")


def _mc_prediction(kernel, pot, wall):
    """Predicted density and excluded spots, where theory supplies them."""
    try:
        if kernel == "log_1d":
            gas = LogGas(pot)
            R = wall if wall is not None else gas.r_star
            eq = gas.equilibrium(R)

            def predicted(x):
                return eq.density(x) if abs(x) <= eq.wall else 0.0

            return predicted, (-eq.support, eq.support)
        gas = YukawaGas(kernel, pot)
        R = wall if wall is not None else gas.r_star
        support = min(R, gas.r_star)

        def predicted(r):
            return gas.bulk_density(R, r) if r <= support else 0.0

        return predicted, (support,)
    except BracketError:
        return None, ()


def cmd_mc(args):
    kernel, pot = _mc_kernel_and_pot(args)
    burn_in = args.burn_in if args.burn_in is not None else min(
        5000, args.sweeps // 10)
    config = GasConfig(
        n_particles=args.n, beta=args.beta, kernel=kernel, pot=pot,
        steps=args.sweeps, burn_in=burn_in, wall=args.wall, seed=args.seed,
        step_scale=args.step_scale, bins=args.bins, extent=args.extent)
    result = metropolis_run(config)
    hist = result.histogram
    predicted, spots = _mc_prediction(kernel, pot, args.wall)
    l1 = None
    if predicted is not None:
        l1 = density_distance(hist, predicted, exclude_near=spots)
    header = ["bin_lo", "bin_hi", "mass"]
    rows = list(zip(hist.edges[:-1], hist.edges[1:], hist.mass))
    scalars = {
        "kernel": kernel if isinstance(kernel, str) else kernel.label,
        "potential": pot.label, "n": args.n, "beta": args.beta,
        "sweeps": args.sweeps, "burn_in": burn_in, "seed": args.seed,
        "wall": args.wall, "acceptance_rate": result.acceptance_rate,
        "energy_drift": result.energy_drift, "l1_distance": l1,
        "n_samples": hist.n_samples,
    }
    emit(args, header, rows, scalars)
    return EXIT_OK


def cmd_presets(args):
    header = ["name", "family", "d", "a", "m", "potential", "r_star"]
    rows = []
    for name, (family, d, a, m, pot_text) in PRESETS.items():
        ns = argparse.Namespace(preset=name, family=None, pot=None,
                                d=None, a=None, m=None)
        model = build_model(ns)
        rows.append((name, family, str(d if d is not None else ""),
                     "" if a is None else _fmt(a),
                     "" if m is None else _fmt(m),
                     pot_text or "", model.r_star))
    emit(args, header, rows, {"count": len(rows)})
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def _add_model_flags(p):
    p.add_argument("--preset", choices=sorted(PRESETS))
    p.add_argument("--family",
                   choices=["loggas", "yukawa", "coulomb", "thomas_fermi"])
    p.add_argument("--pot", default="quadratic:0.5",
                   help="monomial sum, e.g. quadratic:0.5+quartic:0.25")
    p.add_argument("--d", type=int)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--m", type=float, default=1.0)


def _add_output_flags(p):
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")


def make_parser():
    parser = argparse.ArgumentParser(
        prog="gaswall",
        description="Constrained equilibrium measures and third-order wall "
                    "transitions for repulsive gases")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("equilibrium", help="density profile at one wall radius")
    _add_model_flags(p)
    _add_output_flags(p)
    p.add_argument("--radius", type=float, help="wall radius (default: R*)")
    p.add_argument("--points", type=int, default=201)
    p.set_defaults(func=cmd_equilibrium)

    p = sub.add_parser("sweep", help="free-energy curve over a radius grid")
    _add_model_flags(p)
    _add_output_flags(p)
    p.add_argument("--grid", required=True,
                   help='"start:stop:count" or comma list of radii')
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("identities", help="run the formula verification suites")
    _add_output_flags(p)
    p.add_argument("--suite",
                   choices=["multipole", "log_moment", "shell", "wronskian"])
    p.add_argument("--d", type=int)
    p.add_argument("--pairs", type=int)
    p.set_defaults(func=cmd_identities)

    p = sub.add_parser("mc", help="finite-N Metropolis run")
    _add_model_flags(p)
    _add_output_flags(p)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--beta", type=float, default=2.0)
    p.add_argument("--sweeps", type=int, default=100_000)
    p.add_argument("--burn-in", dest="burn_in", type=int)
    p.add_argument("--wall", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bins", type=int, default=64)
    p.add_argument("--step-scale", dest="step_scale", type=float, default=0.1)
    p.add_argument("--extent", type=float)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("presets", help="list the built-in models")
    _add_output_flags(p)
    p.set_defaults(func=cmd_presets)

    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ConvergenceError, BracketError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
