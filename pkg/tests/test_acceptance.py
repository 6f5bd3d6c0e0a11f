"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with  pytest -s tests/test_acceptance.py  to see the per-criterion
report.  Tolerances are fixed here, not calibrated elsewhere.
"""

import math
import time

import numpy as np

from bandgap_delay import (
    Layer,
    LayerStack,
    OperatingPoint,
    PhotonPairSpectrum,
    barrier_arm_transfer,
    delay_report,
    scattering,
    semiclassical_time,
    trace_dip,
    transmission_spectrum,
)
from bandgap_delay.delays import angle_scan
from bandgap_delay.experiments import run_perturbation_ensemble

import oracles
from conftest import DESIGN_NM, PHOTON_NM, point


def _report(number: int, ok: bool, text: str) -> None:
    print(f"[criterion {number}] {'PASS' if ok else 'FAIL'}: {text}")
    assert ok, f"criterion {number} failed: {text}"


def test_criterion_1_midgap_transmission(mirror):
    amps = scattering(mirror, point(DESIGN_NM, 0.0, "p"))
    ok = 0.005 <= amps.transmittance <= 0.02
    _report(1, ok, f"midgap transmittance {amps.transmittance:.6f} in [0.005, 0.02]")


def test_criterion_2_stopband_extent(mirror):
    start = time.perf_counter()
    wavelengths = np.linspace(550.0, 850.0, 600)
    samples = transmission_spectrum(mirror, wavelengths)
    elapsed = time.perf_counter() - start
    trans = np.array([s.transmittance for s in samples])
    inside = (wavelengths >= 620.0) & (wavelengths <= 780.0)
    ok = trans[inside].max() < 0.05 and trans[0] > 0.5 and trans[-1] > 0.5 and elapsed < 1.0
    _report(
        2,
        ok,
        f"max T in [620,780] = {trans[inside].max():.4f} < 0.05, "
        f"T(550) = {trans[0]:.3f}, T(850) = {trans[-1]:.3f} > 0.5 ({elapsed * 1e3:.0f} ms)",
    )


def test_criterion_3_analytic_midgap_oracle(mirror):
    expected = oracles.qw_midgap_transmittance([l.refractive_index.real for l in mirror.layers])
    got = scattering(mirror, point(DESIGN_NM, 0.0, "p")).transmittance
    rel = abs(got - expected) / expected
    _report(3, rel < 1e-10, f"matrix vs quarter-wave admittance oracle: rel diff {rel:.2e} < 1e-10")


def test_criterion_4_energy_conservation_sweep():
    rng = np.random.default_rng(20260810)
    start = time.perf_counter()
    worst = 0.0
    n_cases = 10_000
    for _ in range(n_cases):
        count = int(rng.integers(1, 21))
        layers = tuple(
            Layer(rng.uniform(1.0, 3.0), rng.uniform(10.0, 500.0)) for _ in range(count)
        )
        stack = LayerStack(layers=layers)
        pt = OperatingPoint(
            rng.uniform(300.0, 2000.0),
            rng.uniform(0.0, math.radians(89.0)),
            "p" if rng.integers(2) else "s",
        )
        amps = scattering(stack, pt)
        worst = max(worst, abs(amps.transmittance + amps.reflectance - 1.0))
    elapsed = time.perf_counter() - start
    ok = worst < 1e-12 and elapsed < 30.0
    _report(4, ok, f"{n_cases} random lossless stacks: worst |T+R-1| = {worst:.2e} < 1e-12 ({elapsed:.1f} s)")


def test_criterion_5_superluminal_sign_and_crossover(mirror):
    reports = angle_scan(mirror, PHOTON_NM, "p", np.radians(np.arange(0.0, 71.0, 1.0)))
    rel = [r.relative_group_delay for r in reports]
    at_zero = rel[0]
    at_55 = rel[55]
    changes = sum(1 for a, b in zip(rel, rel[1:]) if (a > 0) != (b > 0))
    ok = at_zero < 0.0 and at_55 > 0.0 and changes == 1
    _report(
        5,
        ok,
        f"rel group delay {at_zero:+.3f} fs at 0 deg, {at_55:+.3f} fs at 55 deg, "
        f"{changes} sign change(s) in [0, 70] deg",
    )


def test_criterion_6_hom_matches_group_delay(mirror):
    worst = {150.0: 0.0, 15.0: 0.0}
    slowest = 0.0
    for tc, tolerance in ((150.0, 0.05), (15.0, 0.2)):
        spectrum = PhotonPairSpectrum(center_wavelength=PHOTON_NM, correlation_time=tc)
        for deg in (0.0, 30.0, 55.0):
            start = time.perf_counter()
            pt = point(PHOTON_NM, deg, "p")
            rel = delay_report(mirror, pt).relative_group_delay
            taus = np.linspace(rel - 4 * tc, rel + 4 * tc, 401)
            dip = trace_dip(spectrum, barrier_arm_transfer(mirror, pt), taus)
            slowest = max(slowest, time.perf_counter() - start)
            worst[tc] = max(worst[tc], abs(dip.dip_center - rel))
    ok = worst[150.0] < 0.05 and worst[15.0] < 0.2 and slowest < 10.0
    _report(
        6,
        ok,
        f"dip vs group delay at 0/30/55 deg: worst |diff| {worst[150.0]:.4f} fs @150 fs (<0.05), "
        f"{worst[15.0]:.4f} fs @15 fs (<0.2); slowest point {slowest:.1f} s",
    )


def test_criterion_7_derivative_integrity(mirror):
    reports = angle_scan(mirror, PHOTON_NM, "p", np.radians(np.arange(0.0, 71.0, 1.0)))
    unconverged = [r.angle_deg for r in reports if r.flags]
    worst_residual = 0.0
    for r in reports:
        residual = abs(r.larmor_time**2 - r.group_delay**2 - r.larmor_out_of_plane**2)
        worst_residual = max(worst_residual, residual / max(r.larmor_time**2, 1.0))
    ok = not unconverged and worst_residual < 1e-12
    _report(
        7,
        ok,
        f"all 71 scan points pass the Richardson cross-check (flags at {unconverged}); "
        f"worst quadrature residual {worst_residual:.2e} < 1e-12",
    )


def test_criterion_8_ordering_of_theories(mirror):
    reports = angle_scan(mirror, PHOTON_NM, "p", np.radians(np.arange(0.0, 71.0, 1.0)))
    pointwise = all(r.larmor_time >= abs(r.group_delay) for r in reports)
    midgap = point(DESIGN_NM, 0.0, "p")
    rep = delay_report(mirror, midgap)
    tau_sc = semiclassical_time(mirror, midgap)
    exceeds = tau_sc > rep.larmor_time and tau_sc > abs(rep.group_delay)
    ok = pointwise and exceeds
    _report(
        8,
        ok,
        f"larmor >= |group delay| at every scan angle; midgap semiclassical {tau_sc:.2f} fs "
        f"exceeds larmor {rep.larmor_time:.2f} fs and |group| {abs(rep.group_delay):.2f} fs",
    )


def test_criterion_9_ensemble_reproducibility(mirror):
    pt = point(PHOTON_NM, 0.0, "p")
    runs = [
        run_perturbation_ensemble(mirror, 0.02, 64, pt, base_seed=11, threads=threads)
        for threads in (1, 1, 4)
    ]
    identical = runs[0] == runs[1] == runs[2]
    summary, _ = run_perturbation_ensemble(mirror, 0.02, 300, pt, base_seed=5)
    spread_ok = 0.0 < summary.std_deviation < 1.0
    ok = identical and spread_ok
    _report(
        9,
        ok,
        f"fixed-seed ensembles bit-identical across runs and thread counts; "
        f"sigma=0.02 spread {summary.std_deviation * 1e3:.1f} as (sub-femtosecond, nonzero)",
    )
