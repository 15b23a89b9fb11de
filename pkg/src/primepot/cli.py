"""Command-line interface wiring every subsystem.

Exit codes: 0 success, 1 validation failure, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from .eigensolver import bound_states, compare_spectrum
from .grid import PotentialGrid
from .hologram import (
    TargetMap,
    make_state,
    optimize_phase,
    potential_to_target,
    propagate,
    sr_intensity_error,
    uniform_illumination,
)
from .pipeline import (
    ADMIT_EDGE_WINDOW,
    PipelineConfig,
    PipelineStageError,
    kinetic_from_name,
    parse_sequence_spec,
    run_pipeline,
)
from .scattering import (
    build_filter_apparatus,
    filter_lucky_prime,
    transmission_scan,
)
from .semiclassical import invert_to_potential, prime_density_of_states, profile_to_potential
from .sequences import counting_estimates, first_lucky, first_primes, sieve_lucky, sieve_primes
from .susy import ChainError, design_potential
from .grid import default_grid
from .units import PhysicalContext, energy_scale

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2


def _print_json(payload) -> None:
    print(json.dumps(payload, indent=2, sort_keys=True))


def _cmd_primes(args) -> int:
    values = sieve_primes(args.limit) if args.limit is not None else first_primes(args.count)
    for v in values:
        print(int(v))
    return EXIT_OK


def _cmd_lucky(args) -> int:
    values = sieve_lucky(args.limit) if args.limit is not None else first_lucky(args.count)
    for v in values:
        print(int(v))
    return EXIT_OK


def _cmd_pi(args) -> int:
    est = counting_estimates(args.x, args.terms)
    _print_json(est.as_dict())
    return EXIT_OK


def _cmd_design(args) -> int:
    levels = parse_sequence_spec(args.levels)
    grid = default_grid(args.half_width, args.spacing)
    pot = design_potential(levels, grid, kinetic_from_name(args.kinetic))
    pot.write_csv(args.out)
    print(f"wrote {args.out} ({pot.grid.points} nodes, asymptote {pot.asymptote})")
    return EXIT_OK


def _cmd_solve(args) -> int:
    pot = PotentialGrid.read_csv(args.potential)
    kinetic = kinetic_from_name(args.kinetic)
    spectrum = bound_states(pot, kinetic, margin=args.margin)
    payload = {
        "eigenvalues": spectrum.eigenvalues.tolist(),
        "continuum_edge": spectrum.continuum_edge,
        "targets": [],
    }
    if args.targets:
        targets = parse_sequence_spec(args.targets)
        if targets.size != spectrum.eigenvalues.size:
            raise ValueError(
                f"found {spectrum.eigenvalues.size} levels but {targets.size} targets"
            )
        report = compare_spectrum(spectrum, targets)
        payload["targets"] = targets.tolist()
        payload.update(report.as_dict())
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    _print_json(payload)
    return EXIT_OK


def _cmd_semiclassical(args) -> int:
    dos = lambda e: prime_density_of_states(e, args.terms)
    profile = invert_to_potential(dos, args.e0, args.vmax, args.samples)
    pot = profile_to_potential(profile)
    pot.write_csv(args.out)
    print(f"wrote {args.out} ({pot.grid.points} nodes, edge {pot.asymptote})")
    return EXIT_OK


def _cmd_scatter(args) -> int:
    pot = PotentialGrid.read_csv(args.potential)
    energies = np.linspace(args.emin, args.emax, args.steps)
    scan = transmission_scan(pot, energies, kinetic_from_name(args.kinetic))
    payload = scan.as_dict()
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"wrote {args.json} ({len(scan.resonances)} resonances)")
    else:
        _print_json(payload)
    return EXIT_OK


def _cmd_filter(args) -> int:
    apparatus = build_filter_apparatus(
        lucky_count=args.lucky_count,
        prime_count=args.prime_count,
        separation=args.separation,
    )
    result = filter_lucky_prime(args.w, apparatus, threshold=args.threshold)
    _print_json(result.as_dict())
    return EXIT_OK


def _cmd_holo_synth(args) -> int:
    pot = PotentialGrid.read_csv(args.potential)
    amp, tmap = potential_to_target(pot, args.sr)
    state = make_state(args.m, amp, seed=args.seed, steepness_d=args.d, target_map=tmap)
    illumination = uniform_illumination(args.m)
    result = optimize_phase(state, illumination, max_iters=args.iters)
    field = propagate(result.state, illumination)
    err = sr_intensity_error(field, result.state)
    phase_out, intensity_out = args.out.split(",")
    np.savetxt(phase_out, result.state.phase, delimiter=",")
    from .pipeline import _write_intensity_csv

    intensity = np.abs(field.values[result.state.signal_mask]) ** 2
    x_sr = np.linspace(-tmap.span, tmap.span, tmap.sr_length)
    _write_intensity_csv(intensity_out, x_sr, intensity, tmap)
    if args.cost_out:
        with open(args.cost_out, "w") as fh:
            json.dump(result.history.tolist(), fh)
            fh.write("\n")
    print(
        f"wrote {phase_out}, {intensity_out}; iterations {result.history.size - 1}, "
        f"SR intensity rms error {err:.4f}"
    )
    if result.line_search_failed:
        print("warning: line search stalled; best-so-far returned", file=sys.stderr)
    return EXIT_OK


def _cmd_holo_extract(args) -> int:
    meta = {}
    xs, vals = [], []
    with open(args.intensity) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                meta[key.strip()] = value
                continue
            if line.lower().startswith("x,"):
                continue
            sx, _, sv = line.partition(",")
            xs.append(float(sx))
            vals.append(float(sv))
    required = {"ceiling", "span", "norm", "asymptote", "sr_length", "grid_half_width", "grid_points"}
    missing = required - meta.keys()
    if missing:
        raise ValueError(f"{args.intensity}: missing metadata {sorted(missing)}")
    tmap = TargetMap(
        ceiling=float(meta["ceiling"]),
        span=float(meta["span"]),
        norm=float(meta["norm"]),
        asymptote=float(meta["asymptote"]),
        sr_length=int(meta["sr_length"]),
        grid_half_width=float(meta["grid_half_width"]),
        grid_points=int(meta["grid_points"]),
    )
    intensity = np.asarray(vals)
    if intensity.size != tmap.sr_length:
        raise ValueError("intensity row length does not match its declared sr_length")
    total = intensity.sum()
    v_sr = tmap.ceiling - intensity / total * tmap.norm
    from scipy.interpolate import CubicSpline

    from .grid import Grid

    x_sr = np.linspace(-tmap.span, tmap.span, tmap.sr_length)
    grid = Grid(half_width=tmap.grid_half_width, points=tmap.grid_points)
    spline = CubicSpline(x_sr, v_sr, bc_type="natural")
    values = np.where(np.abs(grid.x) <= tmap.span, spline(grid.x), tmap.asymptote)
    pot = PotentialGrid(
        grid=grid,
        values=values,
        asymptote=tmap.asymptote,
        even_symmetric=bool(np.array_equal(values, values[::-1])),
    )
    pot.write_csv(args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


def _cmd_units(args) -> int:
    try:
        mass = float(args.mass)
        ctx = PhysicalContext(mass=mass, l=args.l, L=args.L)
    except ValueError:
        ctx = PhysicalContext.for_atom(args.mass, l=args.l, L=args.L)
    _print_json(energy_scale(ctx).as_dict())
    return EXIT_OK


def _cmd_pipeline(args) -> int:
    if args.config:
        config = PipelineConfig.read(args.config)
    else:
        config = PipelineConfig()
    for name in (
        "sequence",
        "half_width",
        "spacing",
        "kinetic",
        "holo_m",
        "holo_sr",
        "holo_d",
        "holo_iters",
        "seed",
        "outdir",
    ):
        value = getattr(args, name, None)
        if value is not None:
            setattr(config, name, value)
    if args.hologram:
        config.hologram = True
    report = run_pipeline(config)
    for target, value, flag in zip(
        report.targets, report.eigenvalues, report.report.rounds_to_target
    ):
        status = "ok" if flag else "MISS"
        print(f"target {target:g}: eigenvalue {value:.4f} [{status}]")
    print(f"report: {report.files['report']}")
    return EXIT_OK if report.all_round else EXIT_NUMERICAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="primepot",
        description="1D quantum potentials with prescribed integer spectra",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("primes", help="list primes")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--limit", type=int)
    group.add_argument("--count", type=int)
    p.set_defaults(func=_cmd_primes)

    p = sub.add_parser("lucky", help="list lucky numbers")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--limit", type=int)
    group.add_argument("--count", type=int)
    p.set_defaults(func=_cmd_lucky)

    p = sub.add_parser("pi", help="prime counting estimates at x")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--terms", type=int, default=25)
    p.set_defaults(func=_cmd_pi)

    p = sub.add_parser("design", help="build a potential for a level sequence")
    p.add_argument("--levels", required=True, help="primes:N | lucky:N | file:path")
    p.add_argument("--half-width", type=float, default=12.0, dest="half_width")
    p.add_argument("--spacing", type=float, default=0.005)
    p.add_argument("--kinetic", choices=("half", "unit"), default="half")
    p.add_argument("--out", default="pot.csv")
    p.set_defaults(func=_cmd_design)

    p = sub.add_parser("solve", help="bound states of a potential CSV")
    p.add_argument("potential")
    p.add_argument("--kinetic", choices=("half", "unit"), default="half")
    p.add_argument("--margin", type=float, default=-ADMIT_EDGE_WINDOW)
    p.add_argument("--targets", help="primes:N | lucky:N | file:path")
    p.add_argument("--json")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("semiclassical", help="smooth prime potential by inversion")
    p.add_argument("--e0", type=float, default=2.0)
    p.add_argument("--vmax", type=float, default=100.0)
    p.add_argument("--samples", type=int, default=400)
    p.add_argument("--terms", type=int, default=25)
    p.add_argument("--out", default="sc.csv")
    p.set_defaults(func=_cmd_semiclassical)

    p = sub.add_parser("scatter", help="transmission scan of a truncated potential")
    p.add_argument("potential")
    p.add_argument("--emin", type=float, required=True)
    p.add_argument("--emax", type=float, required=True)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--kinetic", choices=("half", "unit"), default="half")
    p.add_argument("--json")
    p.set_defaults(func=_cmd_scatter)

    p = sub.add_parser("filter", help="test whether w is both lucky and prime")
    p.add_argument("--w", type=int, required=True)
    p.add_argument("--lucky-count", type=int, default=10, dest="lucky_count")
    p.add_argument("--prime-count", type=int, default=10, dest="prime_count")
    p.add_argument("--separation", type=float, default=2.0)
    p.add_argument("--threshold", type=float, default=0.5)
    p.set_defaults(func=_cmd_filter)

    p = sub.add_parser("holo", help="holographic synthesis and extraction")
    holo_sub = p.add_subparsers(dest="holo_command", required=True)
    ps = holo_sub.add_parser("synth", help="optimize a phase hologram for a potential")
    ps.add_argument("potential")
    ps.add_argument("--m", type=int, default=64)
    ps.add_argument("--sr", type=int, default=100)
    ps.add_argument("--d", type=int, default=9)
    ps.add_argument("--iters", type=int, default=500)
    ps.add_argument("--seed", type=int, default=1)
    ps.add_argument("--out", default="phase.csv,intensity.csv")
    ps.add_argument("--cost-out", dest="cost_out")
    ps.set_defaults(func=_cmd_holo_synth)
    pe = holo_sub.add_parser("extract", help="read a potential back from an intensity row")
    pe.add_argument("intensity")
    pe.add_argument("--out", default="pot_rec.csv")
    pe.set_defaults(func=_cmd_holo_extract)

    p = sub.add_parser("units", help="dimensionless-to-physical energy scale")
    p.add_argument("--mass", required=True, help="atom key (rb87, ...) or mass in kg")
    p.add_argument("--l", type=float, required=True)
    p.add_argument("--L", type=float, required=True)
    p.set_defaults(func=_cmd_units)

    p = sub.add_parser("pipeline", help="design -> (hologram) -> solve -> compare")
    p.add_argument("--config")
    p.add_argument("--sequence")
    p.add_argument("--half-width", type=float, dest="half_width")
    p.add_argument("--spacing", type=float)
    p.add_argument("--kinetic", choices=("half", "unit"))
    p.add_argument("--hologram", action="store_true")
    p.add_argument("--holo-m", type=int, dest="holo_m")
    p.add_argument("--holo-sr", type=int, dest="holo_sr")
    p.add_argument("--holo-d", type=int, dest="holo_d")
    p.add_argument("--holo-iters", type=int, dest="holo_iters")
    p.add_argument("--seed", type=int)
    p.add_argument("--outdir")
    p.set_defaults(func=_cmd_pipeline)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PipelineStageError as err:
        print(f"error: {err}", file=sys.stderr)
        if isinstance(err.original, (ValueError, OSError)):
            return EXIT_VALIDATION
        return EXIT_NUMERICAL
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ChainError, ArithmeticError, RuntimeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
