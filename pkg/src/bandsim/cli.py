"""Command-line interface.

Every command resolves a flat run configuration in three layers
(built-in defaults, then an optional JSON ``--config`` file, then
explicit flags), builds the corresponding objects, and echoes the
fully-resolved configuration into a comment header at the top of every
output file, so each artifact is self-describing and reproducible.

Exit codes are part of the contract:

    0   success
    2   usage error (bad flags, unknown or ill-typed config keys,
        missing required values, unsupported potential)
    3   integration failure (step-size underflow, no orbit closure,
        ill-formed hop sequence)
    4   checkpoint/config mismatch on resume
    5   insufficient data for a requested statistic

Complex values are written as ``re,im`` pairs both on the command line
and in config files.  Worker counts and file paths are never part of
the echoed configuration: they affect where and how fast results are
produced, not what they are.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re as _re
import sys
from typing import Iterable, NamedTuple, Optional, Sequence

from . import __version__
from .analysis import (
    NoClosureError,
    action_integral,
    hyperbola_fit,
    orbit_period,
    turning_points,
)
from .events import (
    ClassifyConfig,
    NonAdjacentWellJump,
    classify_energy,
    inter_hop_times,
    survey_hops,
)
from .integrator import IntegratorConfig, PhaseState, StepSizeUnderflowError, integrate
from .potentials import Potential, make_potential
from .sweep import CheckpointMismatchError, GridSpec, bands_on_line, sweep

__all__ = ["main"]


class _UsageError(ValueError):
    """User input problem: maps to exit code 2."""


class _InsufficientData(RuntimeError):
    """Not enough hops/samples for a statistic: maps to exit code 5."""


# ---------------------------------------------------------------------------
# Flat config keys


_REQUIRED = object()


class _Key(NamedTuple):
    name: str
    kind: str  # float | int | str | complex | int_or_null | complex_or_null | str_or_null
    default: object


def _potential_keys(default: str = "cosine") -> list[_Key]:
    return [
        _Key("potential.name", "str", default),
        # null = keep the potential's own kinetic convention; the echo
        # always shows the resolved half/full value.
        _Key("potential.kinetic", "str_or_null", None),
    ]


def _integrator_keys(
    escape_bound: float = 50.0,
    energy_tol: float = 1e-8,
    h_max: float = 0.1,
) -> list[_Key]:
    return [
        _Key("integrator.rel_tol", "float", 1e-12),
        _Key("integrator.abs_tol", "float", 1e-12),
        _Key("integrator.h_init", "float", 1e-3),
        _Key("integrator.h_min", "float", 1e-12),
        _Key("integrator.h_max", "float", h_max),
        _Key("integrator.max_steps", "int", 10**8),
        _Key("integrator.energy_tol", "float", energy_tol),
        _Key("integrator.escape_bound", "float", escape_bound),
    ]


def _classify_keys(t_max: float = 2000.0) -> list[_Key]:
    return [
        _Key("classify.hop_quota", "int", 10),
        _Key("classify.t_max", "float", t_max),
        _Key("classify.confirm_margin", "float", math.pi / 2),
        _Key("classify.x0", "complex", "0.0,0.0"),
        _Key("classify.branch", "int", 1),
    ]


def _orbit_keys() -> list[_Key]:
    return [
        _Key("orbit.energy", "complex", _REQUIRED),
        # null = start from the largest real turning point with p = 0.
        _Key("orbit.x0", "complex_or_null", None),
        _Key("orbit.branch", "int", 1),
        _Key("orbit.closure_tol", "float", 1e-6),
        _Key("orbit.t_max", "float", 50.0),
        _Key("orbit.leave_radius", "float", 0.25),
    ]


_SCHEMAS: dict[str, list[_Key]] = {
    "trace": (
        _potential_keys()
        + _integrator_keys()
        + [
            _Key("trace.energy", "complex", _REQUIRED),
            _Key("trace.x0", "complex", "0.0,0.0"),
            _Key("trace.branch", "int", 1),
            _Key("trace.t_max", "float", 100.0),
            _Key("trace.max_samples", "int_or_null", None),
        ]
    ),
    "classify": (
        _potential_keys()
        + _integrator_keys(escape_bound=150.0)
        + _classify_keys()
        + [_Key("classify.energy", "complex", _REQUIRED)]
    ),
    "sweep": (
        _potential_keys()
        + _integrator_keys(escape_bound=150.0)
        + _classify_keys()
        + [
            _Key("grid.re_min", "float", _REQUIRED),
            _Key("grid.re_max", "float", _REQUIRED),
            _Key("grid.re_step", "float", _REQUIRED),
            _Key("grid.im_min", "float", _REQUIRED),
            _Key("grid.im_max", "float", _REQUIRED),
            _Key("grid.im_step", "float", _REQUIRED),
        ]
    ),
    "edges": (
        _potential_keys()
        + _integrator_keys(escape_bound=150.0)
        + _classify_keys()
        + [
            _Key("edges.im", "float", _REQUIRED),
            _Key("edges.re_min", "float", _REQUIRED),
            _Key("edges.re_max", "float", _REQUIRED),
            _Key("edges.coarse", "float", _REQUIRED),
            _Key("edges.fine", "float", _REQUIRED),
        ]
    ),
    "tuntime": (
        _potential_keys()
        # Long multi-hop surveys pass near lattice poles where roundoff
        # alone kicks |H - E| past the strict default, so the drift
        # budget is opened up; see the defaults table in the README.
        + _integrator_keys(escape_bound=150.0, energy_tol=1e-5)
        + _classify_keys(t_max=6000.0)
        + [
            _Key("tuntime.re", "float", 0.1),
            _Key("tuntime.im_list", "str", _REQUIRED),
            _Key("tuntime.discard", "int", 1),
            _Key("tuntime.max_hops", "int", 13),
        ]
    ),
    "period": _potential_keys() + _integrator_keys(h_max=0.05) + _orbit_keys(),
    "action": _potential_keys() + _integrator_keys(h_max=0.05) + _orbit_keys(),
    "turning": _potential_keys() + [_Key("turning.energy", "complex", _REQUIRED)],
}


# ---------------------------------------------------------------------------
# Value parsing and formatting


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected a 're,im' pair, got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise ValueError(f"expected a 're,im' pair, got {text!r}") from exc


def _fmt_complex(z: complex) -> str:
    return f"{z.real!r},{z.imag!r}"


def _canon_complex(text: str) -> str:
    return _fmt_complex(_parse_complex(text))


def _parse_pair(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected a 'lo,hi' pair, got {text!r}")
    return float(parts[0]), float(parts[1])


def _parse_float_list(text: str) -> list[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as exc:
        raise ValueError(f"expected a comma-separated float list, got {text!r}") from exc
    if not values:
        raise ValueError("expected at least one value in the list")
    return values


def _g17(x: Optional[float]) -> str:
    return "" if x is None else format(float(x), ".17g")


# argparse flag types: raise ArgumentTypeError -> usage error (exit 2).


def _t_float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def _t_int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")


def _t_complex(text: str) -> str:
    try:
        return _canon_complex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _t_pair(text: str) -> tuple[float, float]:
    try:
        return _parse_pair(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


# ---------------------------------------------------------------------------
# Config resolution


def _coerce(key: _Key, value: object) -> object:
    kind = key.kind
    null_ok = kind.endswith("_or_null")
    if value is None:
        if null_ok:
            return None
        raise _UsageError(f"config key {key.name!r} must not be null")
    base = kind.replace("_or_null", "")
    if base == "float":
        if isinstance(value, (int, float)) and not isinstance(value, bool):
            return float(value)
    elif base == "int":
        if isinstance(value, int) and not isinstance(value, bool):
            return value
    elif base == "str":
        if isinstance(value, str):
            return value
    elif base == "complex":
        if isinstance(value, str):
            try:
                return _canon_complex(value)
            except ValueError as exc:
                raise _UsageError(f"config key {key.name!r}: {exc}") from exc
    raise _UsageError(
        f"config key {key.name!r} expects {base}, got {json.dumps(value)}"
    )


def _resolve_config(
    command: str, config_path: Optional[str], flag_values: dict[str, object]
) -> dict:
    schema = _SCHEMAS[command]
    table = {k.name: k for k in schema}
    cfg: dict = {k.name: k.default for k in schema}

    if config_path is not None:
        try:
            with open(config_path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise _UsageError(f"cannot read config file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise _UsageError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise _UsageError("config file must hold a JSON object")
        unknown = sorted(set(data) - set(table))
        if unknown:
            raise _UsageError(
                f"unknown config keys for {command!r}: {', '.join(unknown)}"
            )
        for name, value in data.items():
            cfg[name] = _coerce(table[name], value)

    for name, value in flag_values.items():
        cfg[name] = value

    missing = sorted(name for name, value in cfg.items() if value is _REQUIRED)
    if missing:
        raise _UsageError(
            f"missing required config values: {', '.join(missing)} "
            f"(set via flags or --config)"
        )
    return cfg


def _flag_overrides(ns: argparse.Namespace) -> dict[str, object]:
    return {
        name: value
        for name, value in vars(ns).items()
        if "." in name and value is not None
    }


def _expand_ranges(ns: argparse.Namespace, overrides: dict, prefix: str) -> None:
    """Map --re-range/--im-range pair flags onto their min/max config keys."""
    re_range = getattr(ns, "_re_range", None)
    if re_range is not None:
        overrides[f"{prefix}.re_min"], overrides[f"{prefix}.re_max"] = re_range
    im_range = getattr(ns, "_im_range", None)
    if im_range is not None:
        overrides[f"{prefix}.im_min"], overrides[f"{prefix}.im_max"] = im_range


def _build_potential(cfg: dict) -> Potential:
    try:
        pot = make_potential(cfg["potential.name"], cfg["potential.kinetic"])
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    # Echo the resolved convention, not the "use the default" null.
    cfg["potential.name"] = cfg["potential.name"].strip().lower()
    cfg["potential.kinetic"] = "half" if pot.kinetic_half else "full"
    return pot


def _build_integrator(cfg: dict) -> IntegratorConfig:
    try:
        return IntegratorConfig(
            rel_tol=cfg["integrator.rel_tol"],
            abs_tol=cfg["integrator.abs_tol"],
            h_init=cfg["integrator.h_init"],
            h_min=cfg["integrator.h_min"],
            h_max=cfg["integrator.h_max"],
            max_steps=cfg["integrator.max_steps"],
            energy_tol=cfg["integrator.energy_tol"],
            escape_bound=cfg["integrator.escape_bound"],
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc


def _build_classify(cfg: dict) -> ClassifyConfig:
    try:
        return ClassifyConfig(
            hop_quota=cfg["classify.hop_quota"],
            t_max=cfg["classify.t_max"],
            confirm_margin=cfg["classify.confirm_margin"],
            x0=_parse_complex(cfg["classify.x0"]),
            branch=cfg["classify.branch"],
            integrator=_build_integrator(cfg),
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc


# ---------------------------------------------------------------------------
# Output plumbing


def _header_lines(cfg: dict) -> list[str]:
    return [
        f"# bandsim {__version__}",
        "# " + json.dumps(cfg, sort_keys=True),
    ]


def _write_csv(path: str, cfg: dict, columns: str, rows: Iterable[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in _header_lines(cfg):
            fh.write(line + "\n")
        fh.write(columns + "\n")
        for row in rows:
            fh.write(row + "\n")


def _json_doc(cfg: dict, payload: dict) -> str:
    doc: dict = {"version": __version__, "config": cfg}
    doc.update(payload)
    return json.dumps(doc, indent=2)


# ---------------------------------------------------------------------------
# Commands


def _cmd_trace(ns: argparse.Namespace) -> int:
    cfg = _resolve_config("trace", ns.config, _flag_overrides(ns))
    pot = _build_potential(cfg)
    icfg = _build_integrator(cfg)
    energy = _parse_complex(cfg["trace.energy"])
    x0 = _parse_complex(cfg["trace.x0"])
    p0 = pot.initial_momentum(energy, x0, cfg["trace.branch"])
    try:
        rec = integrate(
            pot,
            energy,
            PhaseState(0.0, x0, p0),
            icfg,
            t_max=cfg["trace.t_max"],
            record=True,
            max_samples=cfg["trace.max_samples"],
        )
    except ValueError as exc:
        # Initial state off the energy shell and similar input problems.
        raise _UsageError(str(exc)) from exc

    def rows() -> Iterable[str]:
        for s in rec.samples:
            drift = abs(pot.hamiltonian(s.x, s.p) - energy)
            yield ",".join((
                _g17(s.t),
                _g17(s.x.real), _g17(s.x.imag),
                _g17(s.p.real), _g17(s.p.imag),
                _g17(drift),
            ))

    _write_csv(ns.out, cfg, "t,re_x,im_x,re_p,im_p,energy_drift", rows())
    print(f"termination: {rec.termination.value}", file=sys.stderr)
    print(f"{len(rec.samples)} samples -> {ns.out}")
    return 0


def _cmd_classify(ns: argparse.Namespace) -> int:
    cfg = _resolve_config("classify", ns.config, _flag_overrides(ns))
    pot = _build_potential(cfg)
    ccfg = _build_classify(cfg)
    energy = _parse_complex(cfg["classify.energy"])
    verdict = classify_energy(pot, energy, ccfg)
    print(verdict.kind.value.capitalize())
    if ns.json_out is not None:
        payload = {
            "energy": [energy.real, energy.imag],
            "kind": verdict.kind.value,
            "direction": verdict.direction.symbol if verdict.direction else None,
            "hop_count": verdict.n_hops,
            "hops": [
                {
                    "t_cross": h.t_cross,
                    "t_confirm": h.t_confirm,
                    "from_well": h.from_well,
                    "to_well": h.to_well,
                    "direction": h.direction.symbol,
                }
                for h in verdict.hops
            ],
            "t_elapsed": verdict.t_elapsed,
            "max_energy_drift": verdict.max_energy_drift,
        }
        with open(ns.json_out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(_json_doc(cfg, payload) + "\n")
    return 0


def _grid_cell_rows(cells) -> Iterable[str]:
    for cell in cells:
        yield ",".join((
            _g17(cell.energy.real),
            _g17(cell.energy.imag),
            cell.kind.symbol,
            cell.direction.symbol if cell.direction is not None else "-",
            str(cell.hop_count),
            _g17(cell.first_hop_time),
            _g17(cell.mean_hop_time),
        ))


def _checkpoint_path(ns: argparse.Namespace) -> Optional[str]:
    """Apply the --checkpoint/--resume contract; returns the path to use."""
    if ns.resume and ns.checkpoint is None:
        raise _UsageError("--resume requires --checkpoint")
    if ns.checkpoint is not None and not ns.resume:
        # A fresh run must not silently continue from stale state.
        if os.path.exists(ns.checkpoint):
            os.remove(ns.checkpoint)
    return ns.checkpoint


def _cmd_sweep(ns: argparse.Namespace) -> int:
    overrides = _flag_overrides(ns)
    _expand_ranges(ns, overrides, "grid")
    cfg = _resolve_config("sweep", ns.config, overrides)
    pot = _build_potential(cfg)
    ccfg = _build_classify(cfg)
    try:
        grid = GridSpec(
            re_min=cfg["grid.re_min"],
            re_max=cfg["grid.re_max"],
            re_step=cfg["grid.re_step"],
            im_min=cfg["grid.im_min"],
            im_max=cfg["grid.im_max"],
            im_step=cfg["grid.im_step"],
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    try:
        cells = sweep(
            pot, grid, ccfg, workers=ns.workers, checkpoint=_checkpoint_path(ns)
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    _write_csv(
        ns.out,
        cfg,
        "re_e,im_e,kind,direction,hop_count,first_hop_time,mean_hop_time",
        _grid_cell_rows(cells),
    )
    print(f"{len(cells)} cells -> {ns.out}")
    return 0


def _cmd_edges(ns: argparse.Namespace) -> int:
    overrides = _flag_overrides(ns)
    _expand_ranges(ns, overrides, "edges")
    cfg = _resolve_config("edges", ns.config, overrides)
    pot = _build_potential(cfg)
    ccfg = _build_classify(cfg)
    try:
        bands = bands_on_line(
            pot,
            im=cfg["edges.im"],
            re_min=cfg["edges.re_min"],
            re_max=cfg["edges.re_max"],
            coarse_step=cfg["edges.coarse"],
            fine_resolution=cfg["edges.fine"],
            cfg=ccfg,
            workers=ns.workers,
            checkpoint=_checkpoint_path(ns),
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc

    def rows() -> Iterable[str]:
        for band in bands:
            yield ",".join((
                _g17(band.im),
                _g17(band.re_lo),
                _g17(band.re_hi),
                band.direction.symbol,
                "1" if band.flagged else "0",
            ))

    _write_csv(ns.out, cfg, "im_e,re_lo,re_hi,direction,flagged", rows())
    print(f"{len(bands)} bands -> {ns.out}")
    return 0


def _read_tuntime_csv(path: str) -> list[tuple[float, float]]:
    """Read (im_e, mean_time) pairs, matching columns by name."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = [ln.rstrip("\n") for ln in fh if not ln.startswith("#")]
    except OSError as exc:
        raise _UsageError(f"cannot read {path!r}: {exc}") from exc
    lines = [ln for ln in lines if ln.strip()]
    if not lines:
        raise _UsageError(f"{path!r} has no header row")
    header = [c.strip() for c in lines[0].split(",")]
    for col in ("im_e", "mean_time"):
        if col not in header:
            raise _UsageError(f"{path!r} is missing required column {col!r}")
    i_im, i_mean = header.index("im_e"), header.index("mean_time")
    samples = []
    for ln in lines[1:]:
        tok = ln.split(",")
        if len(tok) != len(header):
            raise _UsageError(f"row has {len(tok)} fields, header has {len(header)}")
        samples.append((float(tok[i_im]), float(tok[i_mean])))
    return samples


def _cmd_tuntime(ns: argparse.Namespace) -> int:
    overrides = _flag_overrides(ns)
    if ns.from_csv is not None:
        # Passthrough: fit existing measurements, no simulation.
        overrides.setdefault("tuntime.im_list", "")
        cfg = _resolve_config("tuntime", ns.config, overrides)
        samples = _read_tuntime_csv(ns.from_csv)
    else:
        cfg = _resolve_config("tuntime", ns.config, overrides)
        pot = _build_potential(cfg)
        ccfg = _build_classify(cfg)
        try:
            im_values = _parse_float_list(cfg["tuntime.im_list"])
        except ValueError as exc:
            raise _UsageError(f"tuntime.im_list: {exc}") from exc
        cfg["tuntime.im_list"] = ",".join(repr(v) for v in im_values)
        discard = cfg["tuntime.discard"]
        max_hops = cfg["tuntime.max_hops"]
        samples = []
        for im in im_values:
            energy = complex(cfg["tuntime.re"], im)
            survey = survey_hops(pot, energy, ccfg, max_hops=max_hops)
            try:
                timing = inter_hop_times(survey, discard_first=discard)
            except ValueError as exc:
                raise _InsufficientData(
                    f"im={im!r}: {exc} (termination: {survey.termination.value})"
                ) from exc
            samples.append((im, timing.mean))

    if ns.out is not None:
        def rows() -> Iterable[str]:
            for im, mean in samples:
                yield ",".join((_g17(im), _g17(mean), _g17(mean * abs(im))))

        _write_csv(ns.out, cfg, "im_e,mean_time,product", rows())

    try:
        fit = hyperbola_fit(samples)
    except ValueError as exc:
        raise _InsufficientData(str(exc)) from exc
    print(
        f"c={_g17(fit.c)} relative_residual={_g17(fit.relative_residual)} "
        f"samples={len(samples)}"
    )
    return 0


def _resolve_orbit_start(pot: Potential, cfg: dict) -> complex:
    if cfg["orbit.x0"] is not None:
        return _parse_complex(cfg["orbit.x0"])
    energy = _parse_complex(cfg["orbit.energy"])
    try:
        candidates = turning_points(pot, energy)
    except ValueError as exc:
        raise _UsageError(
            f"cannot pick a default start ({exc}); pass --x0"
        ) from exc
    real = [z.real for z in candidates if abs(z.imag) < 1e-9]
    if not real:
        raise _UsageError("no real turning point to start from; pass --x0")
    return complex(max(real), 0.0)


def _run_orbit(cfg: dict, pot: Potential):
    energy = _parse_complex(cfg["orbit.energy"])
    x0 = _resolve_orbit_start(pot, cfg)
    cfg["orbit.x0"] = _fmt_complex(x0)
    p0 = pot.initial_momentum(energy, x0, cfg["orbit.branch"])
    try:
        return orbit_period(
            pot,
            energy,
            PhaseState(0.0, x0, p0),
            closure_tol=cfg["orbit.closure_tol"],
            t_max=cfg["orbit.t_max"],
            cfg=_build_integrator(cfg),
            leave_radius=cfg["orbit.leave_radius"],
        )
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc


def _cmd_period(ns: argparse.Namespace) -> int:
    cfg = _resolve_config("period", ns.config, _flag_overrides(ns))
    pot = _build_potential(cfg)
    orbit = _run_orbit(cfg, pot)
    print(_json_doc(cfg, {
        "period": orbit.period,
        "closure_error": orbit.closure_error,
        "closure_tol": orbit.closure_tol,
    }))
    return 0


def _cmd_action(ns: argparse.Namespace) -> int:
    cfg = _resolve_config("action", ns.config, _flag_overrides(ns))
    pot = _build_potential(cfg)
    orbit = _run_orbit(cfg, pot)
    result = action_integral(orbit)
    print(_json_doc(cfg, {
        "period": orbit.period,
        "action": [result.action.real, result.action.imag],
        "n_eff": [result.n_eff.real, result.n_eff.imag],
    }))
    return 0


def _cmd_turning(ns: argparse.Namespace) -> int:
    cfg = _resolve_config("turning", ns.config, _flag_overrides(ns))
    pot = _build_potential(cfg)
    energy = _parse_complex(cfg["turning.energy"])
    try:
        points = turning_points(pot, energy)
    except ValueError as exc:
        raise _UsageError(str(exc)) from exc
    print(_json_doc(cfg, {
        "turning_points": [[z.real, z.imag] for z in points],
    }))
    return 0


# ---------------------------------------------------------------------------
# Parser


def _allow_negative_values(parser: argparse.ArgumentParser) -> None:
    # Lets values like "-0.95,-0.9" or "-0.1,-0.15,-0.2" parse as option
    # arguments instead of being mistaken for flags.
    parser._negative_number_matcher = _re.compile(r"^-\d|^-\.\d")


def _add_common(sub: argparse.ArgumentParser, potential: bool = True) -> None:
    sub.add_argument("--config", metavar="PATH", help="JSON config file")
    if potential:
        sub.add_argument(
            "--potential", dest="potential.name", metavar="NAME",
            help="cosine | quartic | doublewell | poly:<c0,c1,...>",
        )
        sub.add_argument(
            "--kinetic", dest="potential.kinetic", choices=("half", "full"),
            help="kinetic convention: p^2/2 or p^2",
        )


def _add_integrator_flags(sub: argparse.ArgumentParser) -> None:
    for flag, key, typ in (
        ("--rel-tol", "integrator.rel_tol", _t_float),
        ("--abs-tol", "integrator.abs_tol", _t_float),
        ("--h-init", "integrator.h_init", _t_float),
        ("--h-min", "integrator.h_min", _t_float),
        ("--h-max", "integrator.h_max", _t_float),
        ("--max-steps", "integrator.max_steps", _t_int),
        ("--energy-tol", "integrator.energy_tol", _t_float),
        ("--escape-bound", "integrator.escape_bound", _t_float),
    ):
        sub.add_argument(flag, dest=key, type=typ, metavar="V")


def _add_classify_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--quota", dest="classify.hop_quota", type=_t_int, metavar="N",
                     help="consecutive same-direction hops that decide conduction")
    sub.add_argument("--tmax", dest="classify.t_max", type=_t_float, metavar="T")
    sub.add_argument("--confirm-margin", dest="classify.confirm_margin",
                     type=_t_float, metavar="RAD")
    sub.add_argument("--x0", dest="classify.x0", type=_t_complex, metavar="RE,IM")
    sub.add_argument("--branch", dest="classify.branch", type=_t_int,
                     choices=(1, -1), metavar="{1,-1}")


def _add_pool_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--workers", type=int, default=1, metavar="N")
    sub.add_argument("--checkpoint", metavar="PATH")
    sub.add_argument("--resume", action="store_true",
                     help="continue from an existing checkpoint")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bandsim",
        description="Complex-energy classical dynamics: trajectories, hop "
                    "classification, conduction-band maps and orbit analysis.",
    )
    parser.add_argument("--version", action="version", version=f"bandsim {__version__}")
    _allow_negative_values(parser)
    subs = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def new(name: str, help_text: str) -> argparse.ArgumentParser:
        sub = subs.add_parser(name, help=help_text)
        _allow_negative_values(sub)
        return sub

    sub = new("trace", "integrate one trajectory and write it as CSV")
    _add_common(sub)
    _add_integrator_flags(sub)
    sub.add_argument("--energy", dest="trace.energy", type=_t_complex, metavar="RE,IM")
    sub.add_argument("--x0", dest="trace.x0", type=_t_complex, metavar="RE,IM")
    sub.add_argument("--branch", dest="trace.branch", type=_t_int,
                     choices=(1, -1), metavar="{1,-1}")
    sub.add_argument("--tmax", dest="trace.t_max", type=_t_float, metavar="T")
    sub.add_argument("--max-samples", dest="trace.max_samples", type=_t_int, metavar="N")
    sub.add_argument("--out", required=True, metavar="PATH")
    sub.set_defaults(func=_cmd_trace)

    sub = new("classify", "label one complex energy by trajectory behavior")
    _add_common(sub)
    _add_integrator_flags(sub)
    _add_classify_flags(sub)
    sub.add_argument("--energy", dest="classify.energy", type=_t_complex, metavar="RE,IM")
    sub.add_argument("--json", dest="json_out", metavar="PATH",
                     help="also write the full verdict (hop list included)")
    sub.set_defaults(func=_cmd_classify)

    sub = new("sweep", "classify a complex-energy grid and write it as CSV")
    _add_common(sub)
    _add_integrator_flags(sub)
    _add_classify_flags(sub)
    sub.add_argument("--re-range", dest="_re_range", type=_t_pair, metavar="LO,HI")
    sub.add_argument("--re-step", dest="grid.re_step", type=_t_float, metavar="S")
    sub.add_argument("--im-range", dest="_im_range", type=_t_pair, metavar="LO,HI")
    sub.add_argument("--im-step", dest="grid.im_step", type=_t_float, metavar="S")
    _add_pool_flags(sub)
    sub.add_argument("--out", required=True, metavar="PATH")
    sub.set_defaults(func=_cmd_sweep)

    sub = new("edges", "locate conduction bands on a horizontal energy line")
    _add_common(sub)
    _add_integrator_flags(sub)
    _add_classify_flags(sub)
    sub.add_argument("--im", dest="edges.im", type=_t_float, metavar="IM")
    sub.add_argument("--re-range", dest="_re_range", type=_t_pair, metavar="LO,HI")
    sub.add_argument("--coarse", dest="edges.coarse", type=_t_float, metavar="S")
    sub.add_argument("--fine", dest="edges.fine", type=_t_float, metavar="S")
    _add_pool_flags(sub)
    sub.add_argument("--out", required=True, metavar="PATH")
    sub.set_defaults(func=_cmd_edges)

    sub = new("tuntime", "mean tunneling times vs Im E, with hyperbola fit")
    _add_common(sub)
    _add_integrator_flags(sub)
    _add_classify_flags(sub)
    sub.add_argument("--re", dest="tuntime.re", type=_t_float, metavar="RE")
    sub.add_argument("--im-list", dest="tuntime.im_list", metavar="IM1,IM2,...")
    sub.add_argument("--discard", dest="tuntime.discard", type=_t_int, metavar="N")
    sub.add_argument("--max-hops", dest="tuntime.max_hops", type=_t_int, metavar="N")
    sub.add_argument("--from-csv", dest="from_csv", metavar="PATH",
                     help="fit existing im_e/mean_time rows instead of simulating")
    sub.add_argument("--out", metavar="PATH")
    sub.set_defaults(func=_cmd_tuntime)

    def add_orbit_flags(sub: argparse.ArgumentParser) -> None:
        _add_common(sub)
        _add_integrator_flags(sub)
        sub.add_argument("--energy", dest="orbit.energy", type=_t_complex, metavar="RE,IM")
        sub.add_argument("--x0", dest="orbit.x0", type=_t_complex, metavar="RE,IM")
        sub.add_argument("--branch", dest="orbit.branch", type=_t_int,
                         choices=(1, -1), metavar="{1,-1}")
        sub.add_argument("--closure-tol", dest="orbit.closure_tol", type=_t_float,
                         metavar="TOL")
        sub.add_argument("--tmax", dest="orbit.t_max", type=_t_float, metavar="T")
        sub.add_argument("--leave-radius", dest="orbit.leave_radius", type=_t_float,
                         metavar="R")

    sub = new("period", "closed-orbit period at one energy")
    add_orbit_flags(sub)
    sub.set_defaults(func=_cmd_period)

    sub = new("action", "loop action integral over one closed orbit")
    add_orbit_flags(sub)
    sub.set_defaults(func=_cmd_action)

    sub = new("turning", "turning points V(x) = E")
    _add_common(sub)
    sub.add_argument("--energy", dest="turning.energy", type=_t_complex, metavar="RE,IM")
    sub.set_defaults(func=_cmd_turning)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return ns.func(ns)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CheckpointMismatchError as exc:
        print(f"error: checkpoint mismatch: {exc}", file=sys.stderr)
        return 4
    except _InsufficientData as exc:
        print(f"error: insufficient data: {exc}", file=sys.stderr)
        return 5
    except (StepSizeUnderflowError, NoClosureError, NonAdjacentWellJump) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
