"""Well tracking, hop detection and behavior classification on the cosine lattice.

A trajectory with complex energy spirals inside one well of V = -cos(x)
between tunneling events.  The detector below watches Re(x): a hop is
confirmed only after the particle crosses a barrier into an adjacent well
AND reaches that well's interior (|Re x - 2*pi*m| < margin), so a grazing
crossing that retreats is never counted.  Classification follows the
ten-incident rule: an energy whose particle keeps tunneling the same way
lies in a conduction band, a single direction reversal marks hopping, and
no tunneling at all marks a localized energy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple, Optional

from .integrator import IntegratorConfig, PhaseState, Termination, integrate
from .potentials import CosineLattice, Potential

__all__ = [
    "TWO_PI",
    "Direction",
    "Kind",
    "HopEvent",
    "NonAdjacentWellJump",
    "HopDetector",
    "ClassifyConfig",
    "VerdictRecord",
    "HopSurvey",
    "well_of",
    "classify_energy",
    "survey_hops",
    "inter_hop_times",
]

TWO_PI = 2.0 * math.pi


class Direction(Enum):
    """Which way a hop moved; values are the well-index increment."""

    LEFT = -1
    RIGHT = 1

    @property
    def symbol(self) -> str:
        return "L" if self is Direction.LEFT else "R"


class Kind(Enum):
    """Behavior of one complex energy under the hop-quota rule."""

    CONDUCTION = "conduction"
    HOPPING = "hopping"
    LOCALIZED = "localized"
    UNDECIDED = "undecided"
    ESCAPED = "escaped"

    @property
    def symbol(self) -> str:
        """One-letter code used in grid CSV files."""
        return {
            Kind.CONDUCTION: "C",
            Kind.HOPPING: "H",
            Kind.LOCALIZED: "L",
            Kind.UNDECIDED: "U",
            Kind.ESCAPED: "X",
        }[self]


class HopEvent(NamedTuple):
    """One confirmed tunneling event between adjacent wells.

    ``t_cross`` is when the barrier crossing was first seen, ``t_confirm``
    when the particle reached the target well's interior.
    """

    t_cross: float
    t_confirm: float
    from_well: int
    to_well: int
    direction: Direction


class NonAdjacentWellJump(RuntimeError):
    """The well index moved by more than one between accepted steps.

    Consecutive samples of a well-resolved trajectory land densely; a jump
    across a whole well means the step size was pathologically large.
    """


def well_of(x: complex) -> int:
    """Index of the lattice well containing Re(x).

    Well n is centered at 2*pi*n and spans ((2n-1)*pi, (2n+1)*pi); the
    boundary Re x = (2n+1)*pi belongs to well n+1 (round half up).
    """
    return math.floor(x.real / TWO_PI + 0.5)


class HopDetector:
    """Hysteresis detector for confirmed well-to-well hops.

    Feed every accepted state to :meth:`update`.  A crossing into an
    adjacent well is held pending until the particle reaches the interior
    of the new well (|Re x - 2*pi*m| < ``confirm_margin``); retreating to
    the confirmed well wipes the pending crossing.
    """

    def __init__(self, x0: complex, confirm_margin: float = math.pi / 2) -> None:
        if not 0.0 < confirm_margin < math.pi:
            raise ValueError("confirm_margin must lie in (0, pi)")
        self.confirmed = well_of(x0)
        self.margin = confirm_margin
        self._pending: Optional[tuple[int, float]] = None

    def update(self, s: PhaseState) -> Optional[HopEvent]:
        """Advance the detector by one accepted state; return a hop if confirmed."""
        w = well_of(s.x)
        if w == self.confirmed:
            self._pending = None
            return None
        if self._pending is None or w != self._pending[0]:
            if abs(w - self.confirmed) != 1:
                raise NonAdjacentWellJump(
                    f"well index jumped from {self.confirmed} to {w} "
                    f"in one accepted step (t = {s.t:.6g})"
                )
            self._pending = (w, s.t)
        m, t_cross = self._pending
        if abs(s.x.real - TWO_PI * m) < self.margin:
            event = HopEvent(
                t_cross=t_cross,
                t_confirm=s.t,
                from_well=self.confirmed,
                to_well=m,
                direction=Direction.RIGHT if m > self.confirmed else Direction.LEFT,
            )
            self.confirmed = m
            self._pending = None
            return event
        return None


def _default_classify_integrator() -> IntegratorConfig:
    # A ten-hop conduction run reaches |x| ~ 20*pi + margin, so the stock
    # escape bound of 50 would cut it off; classification widens it.
    return IntegratorConfig(escape_bound=150.0)


@dataclass(frozen=True)
class ClassifyConfig:
    """Knobs for :func:`classify_energy`.

    ``hop_quota`` consecutive same-direction hops decide conduction;
    ``t_max`` bounds the integration; the trajectory starts at ``x0`` with
    the momentum branch selected by ``branch``.
    """

    hop_quota: int = 10
    t_max: float = 2000.0
    confirm_margin: float = math.pi / 2
    x0: complex = 0j
    branch: int = 1
    integrator: IntegratorConfig = field(default_factory=_default_classify_integrator)

    def __post_init__(self) -> None:
        if self.hop_quota < 2:
            raise ValueError("hop_quota must be at least 2")
        if not 0.0 < self.confirm_margin < math.pi:
            raise ValueError("confirm_margin must lie in (0, pi)")
        if self.t_max <= 0.0:
            raise ValueError("t_max must be positive")
        if self.branch not in (1, -1):
            raise ValueError("branch must be +1 or -1")


@dataclass(frozen=True)
class VerdictRecord:
    """Outcome of classifying one complex energy."""

    energy: complex
    kind: Kind
    direction: Optional[Direction]
    hops: tuple[HopEvent, ...]
    t_elapsed: float
    max_energy_drift: float

    @property
    def n_hops(self) -> int:
        return len(self.hops)


@dataclass(frozen=True)
class HopSurvey:
    """Hop record collected without the early hopping/conduction stop.

    Unlike classification, a survey keeps integrating through direction
    reversals until ``max_hops`` events are seen or the run terminates;
    it feeds tunneling-time statistics.
    """

    energy: complex
    hops: tuple[HopEvent, ...]
    t_elapsed: float
    max_energy_drift: float
    termination: Termination


def _require_lattice(pot: Potential) -> CosineLattice:
    if not isinstance(pot, CosineLattice):
        raise ValueError(
            "classification is lattice-specific: expected CosineLattice, "
            f"got {type(pot).__name__}"
        )
    return pot


class _HopRun:
    """Observer shared by classification and surveys: detect hops, decide early stops."""

    def __init__(self, cfg: ClassifyConfig, stop_on_reversal: bool, max_hops: int) -> None:
        self.detector = HopDetector(cfg.x0, cfg.confirm_margin)
        self.stop_on_reversal = stop_on_reversal
        self.max_hops = max_hops
        self.hops: list[HopEvent] = []
        self.reversed = False
        self.t_last = 0.0
        self.saw_state = False

    def __call__(self, s: PhaseState) -> bool:
        self.t_last = s.t
        self.saw_state = True
        event = self.detector.update(s)
        if event is None:
            return False
        self.hops.append(event)
        if self.stop_on_reversal and event.direction is not self.hops[0].direction:
            self.reversed = True
            return True
        return len(self.hops) >= self.max_hops


def _run(pot: Potential, energy: complex, cfg: ClassifyConfig, run: _HopRun):
    x0 = cfg.x0
    p0 = pot.initial_momentum(energy, x0, cfg.branch)
    state0 = PhaseState(0.0, x0, p0)
    return integrate(
        pot, energy, state0, cfg.integrator, cfg.t_max, observer=run, record=False
    )


def classify_energy(
    pot: Potential, energy: complex, cfg: Optional[ClassifyConfig] = None
) -> VerdictRecord:
    """Classify a complex energy by the behavior of its trajectory.

    Rules, in priority order: Escaped when the integration terminates by
    escape or energy drift; Hopping at the first direction reversal;
    Conduction once ``hop_quota`` consecutive same-direction hops occur;
    Localized when ``t_max`` elapses with no hop at all; Undecided when the
    budget runs out mid-streak (including a step-budget exhaustion).
    """
    pot = _require_lattice(pot)
    if cfg is None:
        cfg = ClassifyConfig()
    run = _HopRun(cfg, stop_on_reversal=True, max_hops=cfg.hop_quota)
    rec = _run(pot, energy, cfg, run)
    t_elapsed = run.t_last if run.saw_state else 0.0

    if rec.termination in (Termination.ESCAPED, Termination.ENERGY_DRIFT):
        kind, direction = Kind.ESCAPED, None
    elif run.reversed:
        kind, direction = Kind.HOPPING, None
    elif len(run.hops) >= cfg.hop_quota:
        kind, direction = Kind.CONDUCTION, run.hops[0].direction
    elif rec.termination is Termination.TIME_BUDGET and not run.hops:
        kind, direction = Kind.LOCALIZED, None
    else:
        kind, direction = Kind.UNDECIDED, None

    return VerdictRecord(
        energy=energy,
        kind=kind,
        direction=direction,
        hops=tuple(run.hops),
        t_elapsed=t_elapsed,
        max_energy_drift=rec.max_energy_drift,
    )


def survey_hops(
    pot: Potential,
    energy: complex,
    cfg: Optional[ClassifyConfig] = None,
    max_hops: int = 20,
) -> HopSurvey:
    """Collect up to ``max_hops`` hops at one energy, ignoring reversals.

    Used for tunneling-time statistics, where the walk must run past the
    first direction change.
    """
    pot = _require_lattice(pot)
    if cfg is None:
        cfg = ClassifyConfig()
    if max_hops < 1:
        raise ValueError("max_hops must be at least 1")
    run = _HopRun(cfg, stop_on_reversal=False, max_hops=max_hops)
    rec = _run(pot, energy, cfg, run)
    return HopSurvey(
        energy=energy,
        hops=tuple(run.hops),
        t_elapsed=run.t_last if run.saw_state else 0.0,
        max_energy_drift=rec.max_energy_drift,
        termination=rec.termination,
    )


class HopTiming(NamedTuple):
    """Inter-hop intervals with their mean and population standard deviation."""

    times: list[float]
    mean: float
    std: float


def inter_hop_times(hops, discard_first: int = 1) -> HopTiming:
    """Successive t_cross differences after dropping an initial transient.

    ``hops`` is any sequence of :class:`HopEvent` (or an object with a
    ``hops`` attribute).  At least ``discard_first + 2`` hops are needed to
    produce one interval.
    """
    events = getattr(hops, "hops", hops)
    if discard_first < 0:
        raise ValueError("discard_first must be non-negative")
    need = discard_first + 2
    if len(events) < need:
        raise ValueError(
            f"need at least {need} hops ({discard_first} discarded + 2), "
            f"got {len(events)}"
        )
    crossings = [e.t_cross for e in events[discard_first:]]
    times = [b - a for a, b in zip(crossings, crossings[1:])]
    mean = math.fsum(times) / len(times)
    var = math.fsum((dt - mean) ** 2 for dt in times) / len(times)
    return HopTiming(times, mean, math.sqrt(var))
