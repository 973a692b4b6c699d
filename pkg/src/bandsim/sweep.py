"""Grid sweeps over the complex-energy plane and conduction-band extraction.

A sweep classifies every point of a rectangular grid (row-major, Re fastest)
and is resumable through an append-only checkpoint file.  Output order and
content are independent of the worker count: cells are keyed by grid index
and merged deterministically.

Band extraction scans one horizontal line, finds maximal runs of Conduction
cells, and bisects each outer edge down to a requested resolution.  Undecided
verdicts never widen a band; they shrink the bracket toward the conduction
side and set a flag instead.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

from .events import ClassifyConfig, Direction, Kind, VerdictRecord, classify_energy
from .potentials import CosineLattice, Polynomial, Potential

__all__ = [
    "GridSpec",
    "GridCell",
    "BandInterval",
    "EdgeResult",
    "CheckpointMismatchError",
    "sweep",
    "bands_on_line",
    "refine_edge",
]

_CHECKPOINT_MAGIC = "# bandsim-checkpoint "
_CHECKPOINT_COLUMNS = (
    "index,re_e,im_e,kind,direction,hop_count,first_hop_time,mean_hop_time"
)


class CheckpointMismatchError(RuntimeError):
    """The checkpoint on disk was written for a different run setup."""


@dataclass(frozen=True)
class GridSpec:
    """Rectangular grid in the complex-energy plane, inclusive of both ends."""

    re_min: float
    re_max: float
    re_step: float
    im_min: float
    im_max: float
    im_step: float

    def __post_init__(self) -> None:
        if self.re_step <= 0.0 or self.im_step <= 0.0:
            raise ValueError("grid steps must be positive")
        if self.re_min > self.re_max or self.im_min > self.im_max:
            raise ValueError("grid needs min <= max on both axes")

    @property
    def n_re(self) -> int:
        return int(math.floor((self.re_max - self.re_min) / self.re_step + 1.0 + 1e-9))

    @property
    def n_im(self) -> int:
        return int(math.floor((self.im_max - self.im_min) / self.im_step + 1.0 + 1e-9))

    @property
    def n_cells(self) -> int:
        return self.n_re * self.n_im

    def energy_at(self, index: int) -> complex:
        """Grid point for a row-major index (Re fastest, Im rows ascending)."""
        if not 0 <= index < self.n_cells:
            raise IndexError(f"index {index} outside grid of {self.n_cells} cells")
        row, col = divmod(index, self.n_re)
        return complex(self.re_min + col * self.re_step,
                       self.im_min + row * self.im_step)


@dataclass(frozen=True)
class GridCell:
    """Classification summary of one grid point."""

    energy: complex
    kind: Kind
    direction: Optional[Direction]
    hop_count: int
    first_hop_time: Optional[float]
    mean_hop_time: Optional[float]

    @classmethod
    def from_verdict(cls, v: VerdictRecord) -> "GridCell":
        first = v.hops[0].t_cross if v.hops else None
        mean = None
        if len(v.hops) >= 2:
            crossings = [h.t_cross for h in v.hops]
            mean = (crossings[-1] - crossings[0]) / (len(crossings) - 1)
        return cls(
            energy=v.energy,
            kind=v.kind,
            direction=v.direction,
            hop_count=v.n_hops,
            first_hop_time=first,
            mean_hop_time=mean,
        )


@dataclass(frozen=True)
class BandInterval:
    """One conduction band on a horizontal line of the energy plane."""

    im: float
    re_lo: float
    re_hi: float
    direction: Optional[Direction]
    edge_resolution: float
    flagged: bool

    def __post_init__(self) -> None:
        if not self.re_lo < self.re_hi:
            raise ValueError("band needs re_lo < re_hi")

    @property
    def center(self) -> float:
        return 0.5 * (self.re_lo + self.re_hi)


class EdgeResult(NamedTuple):
    """A bisected band edge: its position, Undecided flag and round count."""

    position: float
    flagged: bool
    rounds: int


def _g17(x: Optional[float]) -> str:
    return "" if x is None else format(float(x), ".17g")


def _potential_echo(pot: Potential) -> dict:
    echo: dict = {
        "name": type(pot).__name__.lower(),
        "kinetic": "half" if pot.kinetic_half else "full",
    }
    if isinstance(pot, Polynomial):
        echo["coeffs"] = list(pot.coeffs)
    return echo


def _config_echo(pot: Potential, grid: GridSpec, cfg: ClassifyConfig) -> dict:
    """What a checkpoint must agree on.  Worker counts and paths are
    deliberately excluded: they must not affect output."""
    ic = cfg.integrator
    return {
        "grid": {
            "re_min": grid.re_min, "re_max": grid.re_max, "re_step": grid.re_step,
            "im_min": grid.im_min, "im_max": grid.im_max, "im_step": grid.im_step,
        },
        "potential": _potential_echo(pot),
        "classify": {
            "hop_quota": cfg.hop_quota,
            "t_max": cfg.t_max,
            "confirm_margin": cfg.confirm_margin,
            "x0": [cfg.x0.real, cfg.x0.imag],
            "branch": cfg.branch,
            "integrator": {
                "rel_tol": ic.rel_tol, "abs_tol": ic.abs_tol,
                "h_init": ic.h_init, "h_min": ic.h_min, "h_max": ic.h_max,
                "max_steps": ic.max_steps, "energy_tol": ic.energy_tol,
                "escape_bound": ic.escape_bound,
            },
        },
    }


def _cell_row(index: int, cell: GridCell) -> str:
    return ",".join((
        str(index),
        _g17(cell.energy.real),
        _g17(cell.energy.imag),
        cell.kind.symbol,
        cell.direction.symbol if cell.direction is not None else "-",
        str(cell.hop_count),
        _g17(cell.first_hop_time),
        _g17(cell.mean_hop_time),
    ))


def _parse_cell_row(line: str) -> tuple[int, GridCell]:
    tok = line.rstrip("\n").split(",")
    if len(tok) != 8:
        raise ValueError(f"malformed checkpoint row: {line!r}")
    index = int(tok[0])
    kind = {k.symbol: k for k in Kind}[tok[3]]
    direction = {"R": Direction.RIGHT, "L": Direction.LEFT, "-": None}[tok[4]]
    cell = GridCell(
        energy=complex(float(tok[1]), float(tok[2])),
        kind=kind,
        direction=direction,
        hop_count=int(tok[5]),
        first_hop_time=float(tok[6]) if tok[6] else None,
        mean_hop_time=float(tok[7]) if tok[7] else None,
    )
    return index, cell


def _read_checkpoint(path: str, echo: dict) -> dict[int, GridCell]:
    """Validate a checkpoint's run echo and return its completed cells.

    A torn final line (killed mid-append) is ignored; any other malformed
    content is an error.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    if not lines:
        return {}
    if not lines[0].startswith(_CHECKPOINT_MAGIC):
        raise CheckpointMismatchError(f"{path} is not a sweep checkpoint")
    try:
        found = json.loads(lines[0][len(_CHECKPOINT_MAGIC):])
    except json.JSONDecodeError as exc:
        raise CheckpointMismatchError(f"unreadable checkpoint header in {path}") from exc
    if found != echo:
        raise CheckpointMismatchError(
            "checkpoint was written for a different run:\n"
            f"  on disk: {json.dumps(found, sort_keys=True)}\n"
            f"  requested: {json.dumps(echo, sort_keys=True)}"
        )
    done: dict[int, GridCell] = {}
    body = lines[1:]
    if body and body[0].rstrip("\n") == _CHECKPOINT_COLUMNS:
        body = body[1:]
    for i, line in enumerate(body):
        if not line.strip():
            continue
        try:
            index, cell = _parse_cell_row(line)
        except (ValueError, KeyError):
            if i == len(body) - 1 and not line.endswith("\n"):
                break  # torn tail from an interrupted append
            raise
        done[index] = cell
    return done


_WORKER_POT: Optional[Potential] = None
_WORKER_CFG: Optional[ClassifyConfig] = None


def _init_worker(pot: Potential, cfg: ClassifyConfig) -> None:
    global _WORKER_POT, _WORKER_CFG
    _WORKER_POT = pot
    _WORKER_CFG = cfg


def _classify_index(job: tuple[int, complex]) -> tuple[int, GridCell]:
    index, energy = job
    verdict = classify_energy(_WORKER_POT, energy, _WORKER_CFG)
    return index, GridCell.from_verdict(verdict)


def sweep(
    pot: Potential,
    grid: GridSpec,
    cfg: Optional[ClassifyConfig] = None,
    workers: int = 1,
    checkpoint: Optional[str] = None,
) -> list[GridCell]:
    """Classify every grid point; returns cells in row-major order.

    With a ``checkpoint`` path, completed cells are appended as they finish
    and a restart skips them after validating that the checkpoint belongs
    to the same (grid, potential, classify-config) run.
    """
    if workers < 1:
        raise ValueError("workers must be at least 1")
    if not isinstance(pot, CosineLattice):
        raise ValueError("sweeps classify the cosine lattice only")
    if cfg is None:
        cfg = ClassifyConfig()

    echo = _config_echo(pot, grid, cfg)
    done: dict[int, GridCell] = {}
    ck = None
    if checkpoint is not None:
        if os.path.exists(checkpoint) and os.path.getsize(checkpoint) > 0:
            done = _read_checkpoint(checkpoint, echo)
        # Rewrite the clean prefix even on resume: a torn final line from an
        # interrupted append must not prepend itself to the next row.
        ck = open(checkpoint, "w", encoding="utf-8")
        ck.write(_CHECKPOINT_MAGIC + json.dumps(echo, sort_keys=True) + "\n")
        ck.write(_CHECKPOINT_COLUMNS + "\n")
        for index in sorted(done):
            ck.write(_cell_row(index, done[index]) + "\n")
        ck.flush()

    todo = [(i, grid.energy_at(i)) for i in range(grid.n_cells) if i not in done]
    try:
        if workers == 1 or not todo:
            _init_worker(pot, cfg)
            for job in todo:
                index, cell = _classify_index(job)
                done[index] = cell
                if ck is not None:
                    ck.write(_cell_row(index, cell) + "\n")
                    ck.flush()
        else:
            chunk = max(1, min(32, len(todo) // (workers * 4) or 1))
            with ProcessPoolExecutor(
                max_workers=workers, initializer=_init_worker, initargs=(pot, cfg)
            ) as pool:
                for index, cell in pool.map(_classify_index, todo, chunksize=chunk):
                    done[index] = cell
                    if ck is not None:
                        ck.write(_cell_row(index, cell) + "\n")
                        ck.flush()
    finally:
        if ck is not None:
            ck.close()

    return [done[i] for i in range(grid.n_cells)]


def refine_edge(
    pot: Potential,
    e_conduct: complex,
    e_other: complex,
    resolution: float,
    cfg: Optional[ClassifyConfig] = None,
    classify: Optional[Callable[[complex], Kind]] = None,
) -> EdgeResult:
    """Bisect the band edge between a Conduction energy and a non-Conduction one.

    The two energies must differ along exactly one axis.  Each round halves
    the bracket until its width drops below ``resolution``; the midpoint of
    the final bracket is the edge.  An Undecided verdict counts as
    non-conduction (never widening the band) and sets ``flagged``.

    ``classify`` overrides the verdict function (it receives an energy and
    returns a :class:`Kind`); by default :func:`classify_energy` runs with
    ``cfg``.
    """
    if resolution <= 0.0:
        raise ValueError("resolution must be positive")
    if classify is None:
        the_cfg = cfg if cfg is not None else ClassifyConfig()

        def classify(e: complex) -> Kind:
            return classify_energy(pot, e, the_cfg).kind

    re_same = e_conduct.real == e_other.real
    im_same = e_conduct.imag == e_other.imag
    if re_same == im_same:
        raise ValueError(
            f"bracket endpoints must differ along exactly one axis, "
            f"got {e_conduct} and {e_other}"
        )

    kc = classify(e_conduct)
    ko = classify(e_other)
    if kc is not Kind.CONDUCTION or ko is Kind.CONDUCTION:
        raise ValueError(
            f"bad bracket: classify({e_conduct}) = {kc.value}, "
            f"classify({e_other}) = {ko.value}; need conduction vs non-conduction"
        )
    return _bisect(e_conduct, e_other, resolution, classify, flagged=ko is Kind.UNDECIDED)


def _bisect(
    a: complex,
    b: complex,
    resolution: float,
    classify: Callable[[complex], Kind],
    flagged: bool = False,
) -> EdgeResult:
    """Shrink the bracket [a: conduction, b: other] to below ``resolution``."""
    rounds = 0
    while abs(b - a) >= resolution:
        mid = 0.5 * (a + b)
        kind = classify(mid)
        if kind is Kind.CONDUCTION:
            a = mid
        else:
            if kind is Kind.UNDECIDED:
                flagged = True
            b = mid
        rounds += 1
    m = 0.5 * (a + b)
    position = m.real if a.imag == b.imag else m.imag
    return EdgeResult(position=position, flagged=flagged, rounds=rounds)


def bands_on_line(
    pot: Potential,
    im: float,
    re_min: float,
    re_max: float,
    coarse_step: float,
    fine_resolution: float,
    cfg: Optional[ClassifyConfig] = None,
    workers: int = 1,
    checkpoint: Optional[str] = None,
) -> list[BandInterval]:
    """Conduction bands along the line Im E = ``im``.

    A coarse scan marks Conduction runs; each run's outer edges are bisected
    against the neighboring non-conduction cells down to
    ``fine_resolution``.  A direction change inside one coarse run splits it
    into separate flagged intervals; candidate bands separated only by
    Undecided cells are flagged rather than merged.  Runs touching the scan
    boundary keep the boundary as an unrefined, flagged edge.
    """
    if not coarse_step > fine_resolution > 0.0:
        raise ValueError("need coarse_step > fine_resolution > 0")
    if cfg is None:
        cfg = ClassifyConfig()
    grid = GridSpec(re_min, re_max, coarse_step, im, im, 1.0)
    cells = sweep(pot, grid, cfg, workers=workers, checkpoint=checkpoint)

    def classify(e: complex) -> Kind:
        return classify_energy(pot, e, cfg).kind

    # maximal conduction runs, split where the hop direction flips
    runs: list[tuple[int, int, Optional[Direction], bool]] = []
    i = 0
    n = len(cells)
    while i < n:
        if cells[i].kind is not Kind.CONDUCTION:
            i += 1
            continue
        j = i
        while j + 1 < n and cells[j + 1].kind is Kind.CONDUCTION:
            j += 1
        pieces: list[tuple[int, int]] = []
        start = i
        for k in range(i + 1, j + 1):
            if cells[k].direction is not cells[start].direction:
                pieces.append((start, k - 1))
                start = k
        pieces.append((start, j))
        anomalous = len(pieces) > 1
        for lo, hi in pieces:
            runs.append((lo, hi, cells[lo].direction, anomalous))
        i = j + 1

    intervals: list[BandInterval] = []
    gap_flags: list[bool] = []
    for r, (lo, hi, direction, anomalous) in enumerate(runs):
        flagged = anomalous
        if lo == 0:
            re_lo = cells[lo].energy.real
            flagged = True
        else:
            left = _bisect(cells[lo].energy, cells[lo - 1].energy,
                           fine_resolution, classify)
            re_lo = left.position
            flagged = flagged or left.flagged
        if hi == n - 1:
            re_hi = cells[hi].energy.real
            flagged = True
        else:
            right = _bisect(cells[hi].energy, cells[hi + 1].energy,
                            fine_resolution, classify)
            re_hi = right.position
            flagged = flagged or right.flagged
        intervals.append(BandInterval(
            im=im, re_lo=re_lo, re_hi=re_hi, direction=direction,
            edge_resolution=fine_resolution, flagged=flagged,
        ))
        gap_flags.append(False)

    # candidate bands separated by nothing but Undecided cells
    for r in range(len(runs) - 1):
        gap = cells[runs[r][1] + 1: runs[r + 1][0]]
        if gap and all(c.kind is Kind.UNDECIDED for c in gap):
            gap_flags[r] = gap_flags[r + 1] = True
    out = []
    for interval, gap_flag in zip(intervals, gap_flags):
        if gap_flag and not interval.flagged:
            interval = BandInterval(
                im=interval.im, re_lo=interval.re_lo, re_hi=interval.re_hi,
                direction=interval.direction,
                edge_resolution=interval.edge_resolution, flagged=True,
            )
        out.append(interval)
    return out
