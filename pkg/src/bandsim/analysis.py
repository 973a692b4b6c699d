"""Closed-orbit periods, action integrals, turning points and the tunneling hyperbola.

Real energies give closed periodic orbits; their period is found by watching
the phase-space distance back to the starting state and polishing the closest
approach with a bounded scalar minimization.  The Bohr-Sommerfeld action
along a closed loop feeds the quantization diagnostic oint p dx ~ (n + 1/2) pi.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .integrator import IntegratorConfig, PhaseState, Termination, TrajectoryRecord, integrate
from .potentials import CosineLattice, DoubleWell, Polynomial, Potential, Quartic

__all__ = [
    "OrbitResult",
    "ActionResult",
    "HyperbolaFit",
    "NoClosureError",
    "orbit_period",
    "action_integral",
    "turning_points",
    "hyperbola_fit",
]


class NoClosureError(RuntimeError):
    """The trajectory never returned to its starting state within the budget."""

    def __init__(self, t_max: float, best_distance: float) -> None:
        super().__init__(
            f"orbit did not close within t_max = {t_max:g} "
            f"(closest approach {best_distance:.3e})"
        )
        self.t_max = t_max
        self.best_distance = best_distance


@dataclass(frozen=True)
class OrbitResult:
    """A closed orbit: its period, how exactly it closed, and the loop samples."""

    period: float
    closure_error: float
    closure_tol: float
    samples: TrajectoryRecord


class ActionResult(NamedTuple):
    """Loop action oint p dx and the effective quantum number action/pi - 1/2."""

    action: complex
    n_eff: complex


class HyperbolaFit(NamedTuple):
    """Fit of T * |Im E| = c over (im_e, mean_time) samples."""

    c: float
    relative_residual: float
    samples: list[tuple[float, float]]


def _distance(x: complex, p: complex, x0: complex, p0: complex) -> float:
    return math.hypot(abs(x - x0), abs(p - p0))


def _default_orbit_config() -> IntegratorConfig:
    # h_max = 0.05 keeps accepted samples dense enough that a close pass of
    # the starting state is never stepped over unnoticed.
    return IntegratorConfig(h_max=0.05)


def orbit_period(
    pot: Potential,
    energy: complex,
    state0: PhaseState,
    closure_tol: float = 1e-6,
    t_max: float = 50.0,
    cfg: Optional[IntegratorConfig] = None,
    leave_radius: float = 0.25,
) -> OrbitResult:
    """Period of the closed orbit through ``state0`` at the given energy.

    The trajectory must first leave a ball of ``leave_radius`` around the
    start; each subsequent local minimum of the phase-space distance below
    that radius is polished by re-integration, and the first polished
    minimum below ``closure_tol`` is reported as the closure.  Orbits
    smaller than ``leave_radius`` are not resolvable; pass a smaller radius
    for them.

    Raises :class:`NoClosureError` when no such minimum exists before
    ``t_max``, as for the open trajectories of complex energy.
    """
    if closure_tol <= 0.0:
        raise ValueError("closure_tol must be positive")
    if leave_radius <= closure_tol:
        raise ValueError("leave_radius must exceed closure_tol")
    if cfg is None:
        cfg = _default_orbit_config()

    x0, p0 = state0.x, state0.p
    t0 = state0.t
    all_samples: list[PhaseState] = []
    best_seen = math.inf
    state = state0

    while state.t - t0 < t_max:
        # one excursion: leave the start ball, stop on the first sampled
        # local minimum of the distance inside the candidate gate
        left = False
        d_prev = math.inf
        falling = False

        def watch(s: PhaseState) -> bool:
            nonlocal left, d_prev, falling, best_seen
            d = _distance(s.x, s.p, x0, p0)
            if d < best_seen and left:
                best_seen = d
            if not left:
                if d > leave_radius:
                    left = True
                d_prev = d
                return False
            if d < d_prev:
                falling = d_prev < leave_radius or d < leave_radius
            elif falling and d_prev < leave_radius:
                return True  # passed a candidate minimum one sample ago
            else:
                falling = False
            d_prev = d
            return False

        rec = integrate(
            pot, energy, state, cfg, t_max=t0 + t_max, observer=watch, record=True
        )
        if all_samples:
            all_samples.extend(rec.samples[1:])
        else:
            all_samples.extend(rec.samples)

        if rec.termination is not Termination.OBSERVER_STOP:
            raise NoClosureError(t_max, best_seen)

        # the sampled minimum sits one sample back; bracket it by neighbors
        k = len(all_samples) - 2
        if k < 1:
            raise NoClosureError(t_max, best_seen)
        anchor = all_samples[k - 1]
        lo, hi = anchor.t, all_samples[k + 1].t

        def miss(t: float) -> float:
            if t <= anchor.t:
                sx, sp = anchor.x, anchor.p
            else:
                r = integrate(pot, energy, anchor, cfg, t_max=t, record=False)
                sx, sp = r.samples[-1].x, r.samples[-1].p
            return _distance(sx, sp, x0, p0)

        res = minimize_scalar(miss, bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12})
        d_star = float(res.fun)
        if d_star < best_seen:
            best_seen = d_star
        if d_star < closure_tol:
            period = float(res.x) - t0
            full = TrajectoryRecord(
                samples=all_samples,
                termination=rec.termination,
                max_energy_drift=rec.max_energy_drift,
                n_accepted=len(all_samples) - 1,
            )
            return OrbitResult(
                period=period,
                closure_error=d_star,
                closure_tol=closure_tol,
                samples=full,
            )
        # near miss: continue the walk from where the run stopped
        state = all_samples[-1]

    raise NoClosureError(t_max, best_seen)


def action_integral(orbit: OrbitResult) -> ActionResult:
    """Trapezoidal oint p dx around one closed loop of ``orbit``.

    The loop uses the recorded samples up to the period and closes the
    polygon back onto the starting state; the closure error contributes
    at most |p| * closure_error to the action.
    """
    if not orbit.closure_error < orbit.closure_tol:
        raise ValueError(
            f"orbit is not closed: closure_error {orbit.closure_error:.3e} "
            f">= tolerance {orbit.closure_tol:.3e}"
        )
    samples = orbit.samples.samples
    t_end = samples[0].t + orbit.period
    loop = [s for s in samples if s.t <= t_end]
    if len(loop) < 3:
        raise ValueError("too few samples on the loop for a trapezoidal action")
    loop.append(samples[0])

    action = 0j
    prev = loop[0]
    for s in loop[1:]:
        action += 0.5 * (prev.p + s.p) * (s.x - prev.x)
        prev = s
    return ActionResult(action=action, n_eff=action / math.pi - 0.5)


def _poly_coefficients(pot: Potential) -> Optional[tuple[float, ...]]:
    """Ascending coefficients of V for the polynomial potentials, else None."""
    if isinstance(pot, Polynomial):
        return pot.coeffs
    if isinstance(pot, Quartic):
        return (0.0, 0.0, 0.0, 0.0, 1.0)
    if isinstance(pot, DoubleWell):
        return (0.0, 0.0, -5.0, 0.0, 1.0)
    return None


def turning_points(pot: Potential, energy: complex) -> list[complex]:
    """All solutions of V(x) = E for the potential.

    Polynomial potentials solve the companion-matrix eigenproblem and
    Newton-polish each root to |V(x) - E| <= 1e-12.  The cosine lattice
    returns the principal pair +/- arccos(-E); the full turning-point set
    is that pair translated by 2*pi*n for every integer n and is not
    enumerated.  Roots are sorted by (Re, Im).
    """
    coeffs = _poly_coefficients(pot)
    if coeffs is None:
        if not isinstance(pot, CosineLattice):
            raise ValueError(f"no turning-point rule for {type(pot).__name__}")
        principal = cmath.acos(-complex(energy))
        roots = [principal, -principal]
    else:
        shifted = [complex(c) for c in coeffs]
        shifted[0] -= complex(energy)
        raw = np.roots(np.array(shifted[::-1], dtype=complex))
        roots = [_newton_polish(pot, complex(z), complex(energy)) for z in raw]
    return sorted(roots, key=lambda z: (z.real, z.imag))


def _newton_polish(pot: Potential, z: complex, energy: complex,
                   tol: float = 1e-12, max_iter: int = 50) -> complex:
    for _ in range(max_iter):
        f = pot.value(z) - energy
        if abs(f) <= tol:
            return z
        df = pot.gradient(z)
        if df == 0:
            break
        z = z - f / df
    return z


def hyperbola_fit(samples: Sequence[tuple[float, float]]) -> HyperbolaFit:
    """Fit T * |Im E| = c by the geometric mean of the products.

    ``samples`` are (im_e, mean_time) pairs; the residual is the largest
    relative deviation of any product from c, which directly measures how
    constant the product is.
    """
    pts = [(float(im), float(t)) for im, t in samples]
    if len(pts) < 3:
        raise ValueError(f"need at least 3 samples, got {len(pts)}")
    for im, t in pts:
        if im == 0.0:
            raise ValueError("im_e values must be nonzero")
        if not t > 0.0:
            raise ValueError("mean_time values must be positive")
    products = [abs(im) * t for im, t in pts]
    c = math.exp(math.fsum(math.log(p) for p in products) / len(products))
    residual = max(abs(p - c) / c for p in products)
    return HyperbolaFit(c=c, relative_residual=residual, samples=pts)
