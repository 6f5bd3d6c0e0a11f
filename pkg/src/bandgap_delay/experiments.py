"""Batch experiments: thickness-perturbation ensembles and the canned
figure-ready outputs (coincidence dips at two angles, P- and S-pol angle
scans for the default mirror)."""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .delays import angle_scan, delay_report, write_scan_csv
from .errors import OpaquePointError, ValidationError
from .hom import PhotonPairSpectrum, barrier_arm_transfer, trace_dip
from .stacks import LayerStack, OperatingPoint, Polarization, build_quarter_wave_stack, perturb_thicknesses


def sample_seed(base_seed: int, index: int) -> int:
    """Counter-mode per-sample seed: well-mixed, independent of thread
    scheduling, reproducible from (base_seed, index) alone."""
    return int(np.random.SeedSequence([int(base_seed), int(index)]).generate_state(1)[0])


@dataclass(frozen=True)
class EnsembleSummary:
    sigma: float
    n_samples: int
    n_excluded: int
    base_seed: int
    baseline_relative_delay: float  # fs, unperturbed stack
    mean_deviation: float  # fs, mean of (perturbed - baseline)
    std_deviation: float  # fs, sample standard deviation
    min_deviation: float
    max_deviation: float


def run_perturbation_ensemble(
    stack: LayerStack,
    sigma: float,
    n_samples: int,
    point: OperatingPoint,
    base_seed: int = 0,
    threads: int | None = None,
) -> tuple[EnsembleSummary, list[float]]:
    """Relative group delay scatter under random thickness errors.

    Returns the summary plus the per-sample deviations (NaN where a sample
    went opaque and was excluded from the statistics).
    """
    if n_samples < 2:
        raise ValidationError(f"n_samples must be >= 2, got {n_samples!r}")
    if not (0.0 <= sigma <= 0.1):
        raise ValidationError(f"sigma must lie in [0, 0.1], got {sigma!r}")

    baseline = delay_report(stack, point).relative_group_delay

    def one(index: int) -> float:
        perturbed = perturb_thicknesses(stack, sigma, seed=sample_seed(base_seed, index))
        try:
            return delay_report(perturbed, point).relative_group_delay - baseline
        except OpaquePointError:
            return float("nan")

    indices = range(n_samples)
    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            deviations = list(pool.map(one, indices))
    else:
        deviations = [one(i) for i in indices]

    arr = np.asarray(deviations, dtype=np.float64)
    good = arr[np.isfinite(arr)]
    if good.size < 2:
        raise ValidationError("fewer than 2 usable samples: nearly all perturbed stacks were opaque")
    summary = EnsembleSummary(
        sigma=float(sigma),
        n_samples=int(n_samples),
        n_excluded=int(arr.size - good.size),
        base_seed=int(base_seed),
        baseline_relative_delay=float(baseline),
        mean_deviation=float(np.mean(good)),
        std_deviation=float(np.std(good, ddof=1)),
        min_deviation=float(np.min(good)),
        max_deviation=float(np.max(good)),
    )
    return summary, deviations


def ensemble_summary_json(summary: EnsembleSummary) -> str:
    return json.dumps(asdict(summary), indent=2)


# ---------------------------------------------------------------------------
# Figure-ready outputs for the default 692 nm mirror and 702 nm photons.
# ---------------------------------------------------------------------------

DEFAULT_DESIGN_NM = 692.0
DEFAULT_PHOTON_NM = 702.0
DEFAULT_CORRELATION_FS = 15.0
DIP_ANGLES_DEG = (0.0, 55.0)
SCAN_STEP_DEG = 1.0
SCAN_MAX_DEG = 70.0


def default_mirror(design_nm: float = DEFAULT_DESIGN_NM) -> LayerStack:
    return build_quarter_wave_stack(design_nm, 2.22, 1.41, 11, "high")


def _write_dip_csv(path: Path, taus, mirror_rates, air_rates) -> None:
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("tau_fs", "rate_mirror", "rate_air"))
        for tau, rm, ra in zip(taus, mirror_rates, air_rates):
            writer.writerow([f"{tau:.12g}", f"{rm:.12g}", f"{ra:.12g}"])


def reproduce_figures(
    out_dir,
    design_nm: float = DEFAULT_DESIGN_NM,
    photon_nm: float = DEFAULT_PHOTON_NM,
    threads: int | None = None,
) -> list[Path]:
    """Emit fig2a.csv, fig2b.csv (dips at 0 and 55 degrees, with the
    equal-air trace alongside), fig3_theory.csv (P-pol angle scan),
    fig4_theory.csv (S-pol), and a summary JSON with the dip extractions.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    mirror = default_mirror(design_nm)
    spectrum = PhotonPairSpectrum(center_wavelength=photon_nm, correlation_time=DEFAULT_CORRELATION_FS)
    written: list[Path] = []
    summary: dict = {"design_nm": design_nm, "photon_nm": photon_nm, "dips": {}}

    taus = np.arange(-40.0, 40.0 + 1.0e-9, 0.25)

    def unit_transfer(detuning):
        return np.ones_like(np.asarray(detuning, dtype=np.float64), dtype=np.complex128)

    for name, angle_deg in zip(("fig2a", "fig2b"), DIP_ANGLES_DEG):
        point = OperatingPoint(photon_nm, math.radians(angle_deg), Polarization.P)
        mirror_trace = trace_dip(spectrum, barrier_arm_transfer(mirror, point), taus)
        air_trace = trace_dip(spectrum, unit_transfer, taus)
        path = out / f"{name}.csv"
        _write_dip_csv(path, taus, mirror_trace.rates, air_trace.rates)
        written.append(path)
        summary["dips"][name] = {
            "angle_deg": angle_deg,
            "dip_center_fs": mirror_trace.dip_center,
            "visibility": mirror_trace.visibility,
            "relative_group_delay_fs": delay_report(mirror, point).relative_group_delay,
        }

    angles = np.radians(np.arange(0.0, SCAN_MAX_DEG + 1.0e-9, SCAN_STEP_DEG))
    for name, pol in (("fig3_theory", Polarization.P), ("fig4_theory", Polarization.S)):
        reports = angle_scan(mirror, photon_nm, pol, angles, threads=threads)
        path = out / f"{name}.csv"
        with path.open("w", encoding="utf-8", newline="") as fh:
            write_scan_csv(reports, fh)
        written.append(path)

    summary_path = out / "figures_summary.json"
    summary_path.write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    written.append(summary_path)
    return written
