"""The compiled kernel and the NumPy fallback must be interchangeable."""

import math
import subprocess
import sys

import numpy as np
import pytest

from bandgap_delay import _core_py

_core_cy = pytest.importorskip(
    "bandgap_delay._core_cy", reason="compiled kernel not built in this environment"
)


def _random_inputs(seed: int, layers: int, points: int):
    rng = np.random.default_rng(seed)
    n = rng.uniform(1.0, 3.0, layers) + 1j * rng.uniform(0.0, 0.3, layers)
    d = rng.uniform(5.0, 500.0, layers)
    k0 = 2 * math.pi / rng.uniform(300.0, 2000.0, points)
    alpha = rng.uniform(0.0, 1.4, points)
    return n, d, k0, alpha


@pytest.mark.parametrize("pol", [0, 1])
@pytest.mark.parametrize("seed", [1, 2, 3])
def test_amplitudes_agree(pol, seed):
    n, d, k0, alpha = _random_inputs(seed, layers=13, points=64)
    for n_in, n_out in ((1.0, 1.0), (1.5, 1.0), (1.0, 2.0 + 0.1j)):
        t_py, r_py = _core_py.amplitudes(n, d, n_in, n_out, k0, alpha, pol)
        t_cy, r_cy = _core_cy.amplitudes(n, d, n_in, n_out, k0, alpha, pol)
        np.testing.assert_allclose(t_cy, t_py, rtol=1e-12, atol=1e-15)
        np.testing.assert_allclose(r_cy, r_py, rtol=1e-12, atol=1e-15)


@pytest.mark.parametrize("pol", [0, 1])
def test_half_trace_agrees(pol):
    n, d, k0, alpha = _random_inputs(7, layers=2, points=64)
    h_py = _core_py.half_trace(n, d, k0, alpha, pol)
    h_cy = _core_cy.half_trace(n, d, k0, alpha, pol)
    np.testing.assert_allclose(h_cy, h_py, rtol=1e-12, atol=1e-15)


def test_empty_stack_handled_by_both():
    n = np.zeros(0, dtype=complex)
    d = np.zeros(0, dtype=float)
    k0 = np.array([2 * math.pi / 700.0])
    alpha = np.array([0.3])
    for impl in (_core_py, _core_cy):
        t, r = impl.amplitudes(n, d, 1.0, 1.0, k0, alpha, 1)
        assert t[0] == pytest.approx(1.0, abs=1e-15)
        assert r[0] == pytest.approx(0.0, abs=1e-15)


def _backend_reported(env_value: str | None) -> str:
    code = "import bandgap_delay; print(bandgap_delay.BACKEND)"
    env = dict(__import__("os").environ)
    if env_value is None:
        env.pop("BANDGAP_DELAY_BACKEND", None)
    else:
        env["BANDGAP_DELAY_BACKEND"] = env_value
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env)
    assert out.returncode == 0, out.stderr
    return out.stdout.strip()


def test_backend_selection_env_override():
    assert _backend_reported(None) == "compiled"
    assert _backend_reported("python") == "python"
    assert _backend_reported("compiled") == "compiled"


def test_physics_identical_through_public_api():
    # one end-to-end number per backend, bit-comparable
    code = (
        "import math, bandgap_delay as bd;"
        "m = bd.default_mirror();"
        "rep = bd.delay_report(m, bd.OperatingPoint(702.0, math.radians(40.0), 'p'));"
        "print(repr(rep.relative_group_delay), repr(rep.larmor_time))"
    )
    import os

    env = dict(os.environ)
    env["BANDGAP_DELAY_BACKEND"] = "python"
    py = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env)
    env["BANDGAP_DELAY_BACKEND"] = "compiled"
    cy = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env)
    assert py.returncode == 0 and cy.returncode == 0, py.stderr + cy.stderr
    vals_py = [float(x) for x in py.stdout.split()]
    vals_cy = [float(x) for x in cy.stdout.split()]
    assert vals_cy == pytest.approx(vals_py, rel=1e-10)
