"""Adaptive symmetric differentiation with a built-in cross-check.

Every derivative this package reports must survive comparison between the
plain central difference at step h and the Richardson extrapolation of the
(h, h/2) pair, to 1e-6 relative.  The step is halved automatically until
the pair agrees; a point that reaches the step floor without agreeing is
returned unconverged so callers can flag it instead of trusting it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

RICHARDSON_RTOL = 1.0e-6


@dataclass(frozen=True)
class DiffResult:
    value: complex | float
    step: float
    converged: bool
    abs_err: float  # |central(h) - richardson|


def adaptive_richardson(
    quotient: Callable[[float], complex | float],
    h0: float,
    h_floor: float,
    rtol: float = RICHARDSON_RTOL,
    atol: float = 0.0,
) -> DiffResult:
    """Differentiate via a caller-supplied symmetric difference quotient.

    ``quotient(h)`` must return [f(x+h) - f(x-h)] / (2h) with whatever
    branch handling f needs (phases reduced mod 2pi, complex logs taken of
    the principal ratio).  The fourth-order Richardson value is returned;
    convergence means central(h) and Richardson agree to rtol (relative)
    or atol (absolute, for derivatives that vanish).
    """
    h = float(h0)
    best: DiffResult | None = None
    while True:
        d1 = quotient(h)
        d2 = quotient(h / 2.0)
        rich = (4.0 * d2 - d1) / 3.0
        err = abs(d1 - rich)
        ok = err <= max(rtol * abs(rich), atol)
        result = DiffResult(value=rich, step=h, converged=bool(ok), abs_err=float(err))
        if ok:
            return result
        if best is None or err < best.abs_err:
            best = result
        h /= 2.0
        if h < h_floor:
            return best
