"""Command-line front end.

Subcommands: spectrum, scan-angle, hom-dip, perturb, figures, backend.
Exit codes: 0 success, 1 validation error, 2 numerical failure (a
requested quantity was undefined or flagged points appeared in a scan).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from contextlib import contextmanager

import numpy as np

from . import core
from .delays import angle_scan, write_scan_csv
from .errors import ComputationError, ValidationError
from .experiments import (
    DEFAULT_DESIGN_NM,
    default_mirror,
    ensemble_summary_json,
    reproduce_figures,
    run_perturbation_ensemble,
)
from .hom import PhotonPairSpectrum, barrier_arm_transfer, trace_dip
from .stacks import LayerStack, OperatingPoint, Polarization, load_stack
from .transfer import transmission_spectrum, write_spectrum_csv

THREADS_ENV_VAR = "BANDGAP_DELAY_THREADS"


def _resolve_threads(value: int | None) -> int:
    if value is not None:
        if value < 1:
            raise ValidationError(f"--threads must be >= 1, got {value}")
        return value
    env = os.environ.get(THREADS_ENV_VAR, "").strip()
    if env:
        try:
            threads = int(env)
        except ValueError:
            raise ValidationError(f"{THREADS_ENV_VAR}={env!r} is not an integer") from None
        if threads < 1:
            raise ValidationError(f"{THREADS_ENV_VAR} must be >= 1, got {threads}")
        return threads
    return os.cpu_count() or 1


def _stack_from_args(args) -> LayerStack:
    if args.stack is not None:
        return load_stack(args.stack)
    return default_mirror(args.design_nm)


@contextmanager
def _open_output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            yield fh


def _add_stack_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--stack", metavar="FILE", default=None, help="stack description JSON (explicit layers or quarter_wave shorthand)")
    parser.add_argument("--design-nm", type=float, default=DEFAULT_DESIGN_NM, help="design wavelength of the built-in 11-layer quarter-wave mirror, used when --stack is omitted (default: %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bandgap-delay", description="Tunneling-delay simulator for multilayer dielectric mirrors.")
    parser.add_argument("--threads", type=int, default=None, help=f"worker threads for scans/ensembles (default: {THREADS_ENV_VAR} or CPU count)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="transmittance and unwrapped phase over a wavelength sweep")
    _add_stack_arguments(p)
    p.add_argument("--from-nm", type=float, default=550.0)
    p.add_argument("--to-nm", type=float, default=850.0)
    p.add_argument("--points", type=int, default=600)
    p.add_argument("--angle-deg", type=float, default=0.0)
    p.add_argument("--pol", default="p", help="p or s")
    p.add_argument("-o", "--output", default=None, help="CSV path (default: stdout)")

    p = sub.add_parser("scan-angle", help="delay theories versus angle of incidence")
    _add_stack_arguments(p)
    p.add_argument("--lambda-nm", type=float, default=702.0)
    p.add_argument("--pol", default="p")
    p.add_argument("--from", dest="from_deg", type=float, default=0.0)
    p.add_argument("--to", dest="to_deg", type=float, default=70.0)
    p.add_argument("--step", type=float, default=1.0)
    p.add_argument("-o", "--output", default=None)

    p = sub.add_parser("hom-dip", help="two-photon coincidence dip for one barrier configuration")
    _add_stack_arguments(p)
    p.add_argument("--lambda-nm", type=float, default=702.0)
    p.add_argument("--angle-deg", type=float, default=0.0)
    p.add_argument("--pol", default="p")
    p.add_argument("--tc-fs", type=float, default=15.0, help="pair correlation time (RMS dip width), fs")
    p.add_argument("--shape", default="gaussian", choices=("gaussian", "sinc2"))
    p.add_argument("--from-fs", type=float, default=-40.0)
    p.add_argument("--to-fs", type=float, default=40.0)
    p.add_argument("--step-fs", type=float, default=0.25)
    p.add_argument("--prism-microns", action="store_true", help="add a trombone-position column (double pass, tau*c/2)")
    p.add_argument("-o", "--output", default=None, help="CSV path (default: stdout)")
    p.add_argument("--summary", default=None, help="write dip summary JSON here (default: stderr)")

    p = sub.add_parser("perturb", help="Monte-Carlo ensemble of random thickness errors")
    _add_stack_arguments(p)
    p.add_argument("--sigma", type=float, default=0.02, help="relative thickness sigma")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--lambda-nm", type=float, default=702.0)
    p.add_argument("--angle-deg", type=float, default=0.0)
    p.add_argument("--pol", default="p")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default=None, help="summary JSON path (default: stdout)")
    p.add_argument("--samples-csv", default=None, help="optionally write per-sample deviations here")

    p = sub.add_parser("figures", help="emit the standard figure-ready CSV set")
    p.add_argument("--out-dir", default="figures")
    p.add_argument("--design-nm", type=float, default=DEFAULT_DESIGN_NM)

    sub.add_parser("backend", help="print which matrix kernel is active")
    return parser


def _cmd_spectrum(args, threads: int) -> int:
    stack = _stack_from_args(args)
    if args.points < 2:
        raise ValidationError(f"--points must be >= 2, got {args.points}")
    wavelengths = np.linspace(args.from_nm, args.to_nm, args.points)
    samples = transmission_spectrum(stack, wavelengths, math.radians(args.angle_deg), Polarization.parse(args.pol))
    with _open_output(args.output) as fh:
        write_spectrum_csv(samples, fh)
    return 0


def _cmd_scan_angle(args, threads: int) -> int:
    stack = _stack_from_args(args)
    if args.step <= 0:
        raise ValidationError(f"--step must be > 0, got {args.step}")
    degrees = np.arange(args.from_deg, args.to_deg + 1.0e-9, args.step)
    reports = angle_scan(stack, args.lambda_nm, Polarization.parse(args.pol), np.radians(degrees), threads=threads)
    with _open_output(args.output) as fh:
        write_scan_csv(reports, fh)
    failed = sum(1 for r in reports if "opaque" in r.flags or any(f.endswith("unconverged") for f in r.flags))
    return 2 if failed else 0


def _cmd_hom_dip(args, threads: int) -> int:
    stack = _stack_from_args(args)
    point = OperatingPoint(args.lambda_nm, math.radians(args.angle_deg), Polarization.parse(args.pol))
    spectrum = PhotonPairSpectrum(center_wavelength=args.lambda_nm, correlation_time=args.tc_fs, shape=args.shape)
    if args.step_fs <= 0:
        raise ValidationError(f"--step-fs must be > 0, got {args.step_fs}")
    taus = np.arange(args.from_fs, args.to_fs + 1.0e-9, args.step_fs)
    dip = trace_dip(spectrum, barrier_arm_transfer(stack, point), taus)

    with _open_output(args.output) as fh:
        if args.prism_microns:
            fh.write("tau_fs,prism_um,rate\n")
            for tau, pos, rate in zip(dip.delays_fs, dip.prism_positions_um, dip.rates):
                fh.write(f"{tau:.12g},{pos:.12g},{rate:.12g}\n")
        else:
            fh.write("tau_fs,rate\n")
            for tau, rate in zip(dip.delays_fs, dip.rates):
                fh.write(f"{tau:.12g},{rate:.12g}\n")

    summary = json.dumps({"dip_center_fs": dip.dip_center, "visibility": dip.visibility}, indent=2)
    if args.summary:
        with open(args.summary, "w", encoding="utf-8") as fh:
            fh.write(summary + "\n")
    else:
        print(summary, file=sys.stderr)
    return 0


def _cmd_perturb(args, threads: int) -> int:
    stack = _stack_from_args(args)
    point = OperatingPoint(args.lambda_nm, math.radians(args.angle_deg), Polarization.parse(args.pol))
    summary, deviations = run_perturbation_ensemble(
        stack, args.sigma, args.samples, point, base_seed=args.seed, threads=threads
    )
    with _open_output(args.output) as fh:
        fh.write(ensemble_summary_json(summary) + "\n")
    if args.samples_csv:
        with open(args.samples_csv, "w", encoding="utf-8", newline="") as fh:
            fh.write("sample,deviation_fs\n")
            for i, dev in enumerate(deviations):
                fh.write(f"{i},{'' if math.isnan(dev) else format(dev, '.12g')}\n")
    return 0


def _cmd_figures(args, threads: int) -> int:
    written = reproduce_figures(args.out_dir, design_nm=args.design_nm, threads=threads)
    for path in written:
        print(path)
    return 0


def _cmd_backend(args, threads: int) -> int:
    print(core.BACKEND)
    return 0


_COMMANDS = {
    "spectrum": _cmd_spectrum,
    "scan-angle": _cmd_scan_angle,
    "hom-dip": _cmd_hom_dip,
    "perturb": _cmd_perturb,
    "figures": _cmd_figures,
    "backend": _cmd_backend,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        threads = _resolve_threads(args.threads)
        return _COMMANDS[args.command](args, threads)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ComputationError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
