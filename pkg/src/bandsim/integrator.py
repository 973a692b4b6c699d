"""Adaptive integration of Hamilton's equations in complex phase space.

The complex system x' = dH/dp, p' = -V'(x) is advanced as four coupled
real ODEs (Re x, Im x, Re p, Im p) with an embedded Dormand-Prince 5(4)
pair.  Step control is the plain accept/reject rule: accept when the
embedded error estimate is below tolerance, grow with the standard
0.9*(tol/err)^(1/5) factor, halve on rejection.  Energy is never
renormalized; the drift |H - E| is monitored as a diagnostic and becomes
a termination reason when it exceeds ``energy_tol``.

The hot loop uses scalar ``complex`` arithmetic on purpose: per-step cost
is a few microseconds, which keeps million-step runs in seconds without
compiled extensions.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, NamedTuple, Optional

from .potentials import Potential

__all__ = [
    "PhaseState",
    "Termination",
    "IntegratorConfig",
    "TrajectoryRecord",
    "StepSizeUnderflowError",
    "step_embedded",
    "integrate",
    "thin_samples",
]


class PhaseState(NamedTuple):
    """One point of a trajectory: real time, complex position and momentum."""

    t: float
    x: complex
    p: complex


class Termination(Enum):
    """Why an integration stopped."""

    TIME_BUDGET = "time_budget"
    STEP_BUDGET = "step_budget"
    ESCAPED = "escaped"
    ENERGY_DRIFT = "energy_drift"
    OBSERVER_STOP = "observer_stop"


class StepSizeUnderflowError(RuntimeError):
    """The controller hit h_min and still could not meet the error tolerance."""


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances, step bounds and termination limits for :func:`integrate`.

    ``energy_tol`` is the user-facing accuracy contract: a trajectory whose
    Hamiltonian drifts from its nominal energy by more than this terminates
    with :attr:`Termination.ENERGY_DRIFT`.  ``escape_bound`` caps |x|.
    """

    rel_tol: float = 1e-12
    abs_tol: float = 1e-12
    h_init: float = 1e-3
    h_min: float = 1e-12
    h_max: float = 0.1
    max_steps: int = 10**8
    energy_tol: float = 1e-8
    escape_bound: float = 50.0

    def __post_init__(self) -> None:
        if not (0.0 < self.h_min <= self.h_init <= self.h_max):
            raise ValueError("need 0 < h_min <= h_init <= h_max")
        if self.rel_tol <= 0.0 or self.abs_tol <= 0.0 or self.energy_tol <= 0.0:
            raise ValueError("rel_tol, abs_tol and energy_tol must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")
        if self.escape_bound <= 0.0:
            raise ValueError("escape_bound must be positive")


@dataclass
class TrajectoryRecord:
    """Accepted samples plus how and why the run ended.

    ``samples`` always contains the initial state and the last retained
    state; with full recording it holds every accepted step (optionally
    decimated).  ``max_energy_drift`` includes the drift of a step that
    triggered :attr:`Termination.ENERGY_DRIFT`, even though that step is
    excluded from ``samples``.
    """

    samples: list[PhaseState]
    termination: Termination
    max_energy_drift: float
    n_accepted: int


# Dormand-Prince 5(4): the fifth-order solution is propagated, the
# embedded fourth-order difference provides the error estimate.
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71 / 57600,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)


def _dp54(
    two_k: float,
    grad: Callable[[complex], complex],
    x: complex,
    p: complex,
    h: float,
    dx1: complex,
    dp1: complex,
):
    """One Dormand-Prince attempt from (x, p) with first-stage derivatives given.

    Returns (xn, pn, err, dx7, dp7); dx7/dp7 are the derivatives at the new
    point (FSAL), err the max-norm of the embedded 4th/5th-order difference.
    """
    x2 = x + h * (_A21 * dx1)
    p2 = p + h * (_A21 * dp1)
    dx2 = two_k * p2
    dp2 = -grad(x2)

    x3 = x + h * (_A31 * dx1 + _A32 * dx2)
    p3 = p + h * (_A31 * dp1 + _A32 * dp2)
    dx3 = two_k * p3
    dp3 = -grad(x3)

    x4 = x + h * (_A41 * dx1 + _A42 * dx2 + _A43 * dx3)
    p4 = p + h * (_A41 * dp1 + _A42 * dp2 + _A43 * dp3)
    dx4 = two_k * p4
    dp4 = -grad(x4)

    x5 = x + h * (_A51 * dx1 + _A52 * dx2 + _A53 * dx3 + _A54 * dx4)
    p5 = p + h * (_A51 * dp1 + _A52 * dp2 + _A53 * dp3 + _A54 * dp4)
    dx5 = two_k * p5
    dp5 = -grad(x5)

    x6 = x + h * (_A61 * dx1 + _A62 * dx2 + _A63 * dx3 + _A64 * dx4 + _A65 * dx5)
    p6 = p + h * (_A61 * dp1 + _A62 * dp2 + _A63 * dp3 + _A64 * dp4 + _A65 * dp5)
    dx6 = two_k * p6
    dp6 = -grad(x6)

    xn = x + h * (_B1 * dx1 + _B3 * dx3 + _B4 * dx4 + _B5 * dx5 + _B6 * dx6)
    pn = p + h * (_B1 * dp1 + _B3 * dp3 + _B4 * dp4 + _B5 * dp5 + _B6 * dp6)
    dx7 = two_k * pn
    dp7 = -grad(xn)

    ex = h * (_E1 * dx1 + _E3 * dx3 + _E4 * dx4 + _E5 * dx5 + _E6 * dx6 + _E7 * dx7)
    ep = h * (_E1 * dp1 + _E3 * dp3 + _E4 * dp4 + _E5 * dp5 + _E6 * dp6 + _E7 * dp7)
    err = abs(ex)
    ea = abs(ep)
    if ea > err:
        err = ea
    return xn, pn, err, dx7, dp7


def step_embedded(pot: Potential, state: PhaseState, h: float) -> tuple[PhaseState, float]:
    """Take one embedded RK 4(5) step of size h; no step-size control.

    Returns the advanced state and the error estimate (max-norm of the
    order-4/order-5 difference).  A non-finite derivative or state flags
    failure by returning an infinite error estimate.
    """
    if h <= 0.0:
        raise ValueError("step size must be positive")
    two_k = 2.0 * pot.kinetic_coeff
    grad = pot.gradient
    dx1 = two_k * state.p
    dp1 = -grad(state.x)
    xn, pn, err, _, _ = _dp54(two_k, grad, state.x, state.p, h, dx1, dp1)
    if not (cmath.isfinite(xn) and cmath.isfinite(pn) and math.isfinite(err)):
        err = math.inf
    return PhaseState(state.t + h, xn, pn), err


def integrate(
    pot: Potential,
    energy: complex,
    state0: PhaseState,
    cfg: IntegratorConfig,
    t_max: float,
    observer: Optional[Callable[[PhaseState], object]] = None,
    record: bool = True,
    max_samples: Optional[int] = None,
) -> TrajectoryRecord:
    """Integrate a trajectory of nominal energy ``energy`` until it terminates.

    Parameters
    ----------
    pot:
        Potential (with its kinetic convention).
    energy:
        Conserved value H should hold; drift is measured against it.
    state0:
        Initial state; H(state0) must already match ``energy`` within
        ``cfg.energy_tol``.
    cfg:
        Tolerances and limits.
    t_max:
        Time budget; the last step is clamped to land on it exactly.
    observer:
        Called with every accepted :class:`PhaseState`; a truthy return
        stops the run with :attr:`Termination.OBSERVER_STOP`.
    record:
        When False only the initial and final states are kept.
    max_samples:
        Online uniform-in-index decimation bound for the sample list
        (the list may transiently hold up to twice this many entries).

    Raises
    ------
    StepSizeUnderflowError
        When the tolerance cannot be met even at ``h_min``.
    """
    k_coef = pot.kinetic_coeff
    two_k = 2.0 * k_coef
    grad = pot.gradient
    val = pot.value

    t = float(state0.t)
    x = complex(state0.x)
    p = complex(state0.p)

    drift0 = abs(k_coef * p * p + val(x) - energy)
    if not drift0 <= cfg.energy_tol:
        raise ValueError(
            f"initial state off the energy shell: |H - E| = {drift0:.3e} "
            f"exceeds energy_tol = {cfg.energy_tol:.3e}"
        )

    rel = cfg.rel_tol
    atol = cfg.abs_tol
    h_min = cfg.h_min
    h_max = cfg.h_max
    escape = cfg.escape_bound
    energy_tol = cfg.energy_tol
    max_steps = cfg.max_steps

    samples = [PhaseState(t, x, p)]
    max_drift = drift0
    n_acc = 0
    last_t, last_x, last_p = t, x, p

    # decimation state: append every `stride`-th accepted step
    stride = 1
    acc_idx = 0

    if t >= t_max:
        return TrajectoryRecord(samples, Termination.TIME_BUDGET, max_drift, 0)

    h = min(cfg.h_init, h_max)
    dx1 = two_k * p
    dp1 = -grad(x)

    termination: Optional[Termination] = None
    while termination is None:
        if n_acc >= max_steps:
            termination = Termination.STEP_BUDGET
            break

        # attempt, halving on rejection
        while True:
            clamped = t + h >= t_max
            hh = (t_max - t) if clamped else h
            xn, pn, err, dx7, dp7 = _dp54(two_k, grad, x, p, hh, dx1, dp1)

            # Error scale: momentum magnitude floored at 1.  Position is
            # deliberately excluded so the tolerance is invariant under
            # lattice translation and does not loosen as |x| grows.
            sc = 1.0
            for v in (p, pn):
                a = abs(v)
                if a > sc:
                    sc = a
            tol = atol + rel * sc

            if err <= tol and cmath.isfinite(xn) and cmath.isfinite(pn):
                break  # accepted
            if not (cmath.isfinite(xn) and cmath.isfinite(pn) and math.isfinite(err)):
                if hh <= h_min * (1.0 + 1e-9):
                    # overflow at the smallest step: the flow left the domain
                    termination = Termination.ESCAPED
                    break
            elif hh <= h_min * (1.0 + 1e-9):
                raise StepSizeUnderflowError(
                    f"error {err:.3e} > tol {tol:.3e} at h_min = {h_min:.3e} (t = {t:.6g})"
                )
            h = max(0.5 * hh, h_min)
        if termination is not None:
            break

        t = t_max if clamped else t + hh
        x = xn
        p = pn
        dx1 = dx7
        dp1 = dp7
        n_acc += 1

        if err == 0.0:
            h = h_max
        else:
            h_new = 0.9 * hh * (tol / err) ** 0.2
            h = h_max if h_new > h_max else (h_min if h_new < h_min else h_new)

        drift = abs(k_coef * pn * pn + val(xn) - energy)
        if drift > max_drift:
            max_drift = drift
        if drift > energy_tol:
            # keep the energy contract on samples: drop the violating state
            termination = Termination.ENERGY_DRIFT
            break

        last_t, last_x, last_p = t, x, p
        if record:
            acc_idx += 1
            if acc_idx % stride == 0:
                samples.append(PhaseState(t, x, p))
                if max_samples is not None and len(samples) >= 2 * max_samples:
                    samples = samples[::2]
                    stride *= 2

        if abs(xn) > escape:
            termination = Termination.ESCAPED
            break

        if observer is not None and observer(PhaseState(t, x, p)):
            termination = Termination.OBSERVER_STOP
            break

        if t >= t_max:
            termination = Termination.TIME_BUDGET
            break

    if samples[-1].t != last_t:
        samples.append(PhaseState(last_t, last_x, last_p))
    return TrajectoryRecord(samples, termination, max_drift, n_acc)


def thin_samples(samples: list[PhaseState], max_samples: int) -> list[PhaseState]:
    """Uniform-in-index thinning to at most ``max_samples`` entries, keeping the endpoints."""
    if max_samples < 2:
        raise ValueError("max_samples must be at least 2")
    n = len(samples)
    if n <= max_samples:
        return list(samples)
    stride = math.ceil((n - 1) / (max_samples - 1))
    out = samples[::stride]
    if out[-1].t != samples[-1].t:
        out.append(samples[-1])
    return out
