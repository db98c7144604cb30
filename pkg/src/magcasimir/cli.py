"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 numerical failure (non-convergence
or no sign change to trace), 1 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import __version__
from .energy import (
    ball_force_coefficient,
    classify,
    conductor_vs_material_energy,
    crossover_temperature,
    energy_per_area_si,
    high_temperature_free_energy,
    impedance_energy,
    pair_potential,
    pressure_si,
    slab_energy,
    uvl_energy,
)
from .media import Material, Polarizability
from .output import FORMATS, serialize_boundary, serialize_phase_map, serialize_record
from .phase import (
    AXIS_PARAMETERS,
    BOUNDARY_PRESETS,
    ENGINES,
    FIXED_PARAMETERS,
    PRESETS,
    BoundaryError,
    SweepAxis,
    check_parameters,
    sweep,
    trace_boundary,
)
from .quadrature import ConvergenceError, QuadratureSpec

EXIT_OK, EXIT_IO, EXIT_VALIDATION, EXIT_NUMERICS = 0, 1, 2, 3

MATERIAL_KEYS = ("eps1", "mu1", "eps2", "mu2")
POINT_COMMANDS = {
    "pair": ("alpha_e_a", "alpha_m_a", "alpha_e_b", "alpha_m_b", "r"),
    "balls": MATERIAL_KEYS,
    "slab": MATERIAL_KEYS,
    "uvl": ("mu1", "mu2"),
    "impedance": ("z1", "z2"),
    "conductor": ("z1",),
    "hight": MATERIAL_KEYS,
    "crossover": ("a_meters",),
}
COMMANDS = tuple(POINT_COMMANDS) + ("phase-map", "boundary")
NON_NEGATIVE = {"alpha_e_a", "alpha_m_a", "alpha_e_b", "alpha_m_b"}
DEFAULT_COUNT = 101


class ValidationError(ValueError):
    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key


@dataclass
class RunConfig:
    command: str
    parameters: dict = field(default_factory=dict)
    format: str = "json"
    path: Optional[str] = None

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        if not isinstance(d, dict) or "command" not in d:
            raise ValidationError("command", "each config entry needs a command")
        out = d.get("output", {})
        return cls(d["command"], dict(d.get("parameters", {})), out.get("format", "json"), out.get("path"))


def _float(params: dict, key: str) -> float:
    if key not in params or params[key] is None:
        raise ValidationError(key, "required parameter missing")
    try:
        value = float(params[key])
    except (TypeError, ValueError):
        raise ValidationError(key, f"not a number: {params[key]!r}") from None
    if not math.isfinite(value):
        raise ValidationError(key, "must be finite")
    if key in NON_NEGATIVE:
        if value < 0.0:
            raise ValidationError(key, "must be >= 0")
    elif value <= 0.0:
        raise ValidationError(key, "must be > 0")
    return value


def _quad_spec(params: dict) -> QuadratureSpec:
    kwargs = {}
    if params.get("quad_nodes") is not None:
        kwargs["initial_nodes"] = int(params["quad_nodes"])
    if params.get("quad_max_nodes") is not None:
        kwargs["max_nodes"] = int(params["quad_max_nodes"])
    if params.get("quad_tol") is not None:
        kwargs["tolerance"] = float(params["quad_tol"])
    try:
        return QuadratureSpec(**kwargs)
    except ValueError as exc:
        key = "quad_tol" if "tolerance" in str(exc) else "quad_max_nodes" if "max" in str(exc) else "quad_nodes"
        raise ValidationError(key, str(exc)) from None


def _materials(values: dict) -> tuple[Material, Material]:
    return Material(values["eps1"], values["mu1"]), Material(values["eps2"], values["mu2"])


def _material_warnings(m1: Material, m2: Material) -> list[str]:
    return m1.warnings("material 1") + m2.warnings("material 2")


def _ranges(params: dict) -> list[str]:
    """Parameters that carry a --<p>-min/--<p>-max range."""
    out = []
    for p in AXIS_PARAMETERS:
        lo, hi = params.get(f"{p}_min"), params.get(f"{p}_max")
        if lo is None and hi is None:
            continue
        if lo is None or hi is None:
            raise ValidationError(f"{p}_min" if lo is None else f"{p}_max", "range needs both min and max")
        out.append(p)
    return out


def _axis(params: dict, p: str) -> SweepAxis:
    count = params.get(f"{p}_count", DEFAULT_COUNT)
    scale = params.get(f"{p}_scale", "linear") or "linear"
    if scale == "log":
        scale = "logarithmic"
    try:
        return SweepAxis(p, float(params[f"{p}_min"]), float(params[f"{p}_max"]), int(count), scale)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{p}_min", str(exc)) from None


def _fixed(params: dict, ranged) -> dict:
    fixed = {}
    for key in FIXED_PARAMETERS:
        if params.get(key) is not None:
            if key in ranged:
                raise ValidationError(key, "given both as a value and as a range")
            fixed[key] = _float(params, key)
    return fixed


def _engine(params: dict) -> str:
    engine = params.get("engine")
    if engine not in ENGINES:
        raise ValidationError("engine", f"choose one of {', '.join(ENGINES)}")
    return engine


def _check_engine(engine: str, probe: dict, key: str) -> None:
    try:
        check_parameters(engine, probe)
    except ValueError as exc:
        raise ValidationError(key, str(exc)) from None


def plan_phase_map(params: dict) -> dict:
    preset = params.get("preset")
    if preset is not None:
        if preset not in PRESETS:
            raise ValidationError("preset", f"choose one of {', '.join(PRESETS)}")
        return dict(PRESETS[preset], preset=preset)
    engine = _engine(params)
    ranged = _ranges(params)
    if len(ranged) != 2:
        raise ValidationError("axes", f"phase-map needs exactly two ranged parameters, got {len(ranged)}")
    x = params.get("x") or ranged[0]
    y = params.get("y") or next(p for p in ranged if p != x)
    if {x, y} != set(ranged):
        raise ValidationError("x", f"--x/--y must name the ranged parameters {ranged}")
    ax, ay = _axis(params, x), _axis(params, y)
    fixed = _fixed(params, ranged)
    _check_engine(engine, dict(fixed, **{x: ax.min, y: ay.min}), "engine")
    return dict(engine=engine, axis_x=ax, axis_y=ay, fixed=fixed, preset=None)


def plan_boundary(params: dict) -> dict:
    preset = params.get("preset")
    if preset is not None:
        if preset not in BOUNDARY_PRESETS:
            raise ValidationError("preset", f"choose one of {', '.join(BOUNDARY_PRESETS)}")
        return dict(BOUNDARY_PRESETS[preset])
    engine = _engine(params)
    ranged = _ranges(params)
    if len(ranged) == 1:
        bracket_p, axis = ranged[0], None
    elif len(ranged) == 2:
        bracket_p = params.get("bracket")
        if bracket_p not in ranged:
            raise ValidationError("bracket", f"name which of {ranged} is bracketed")
        axis = _axis(params, next(p for p in ranged if p != bracket_p))
    else:
        raise ValidationError("bracket", "boundary needs one bracket range and at most one sweep range")
    lo, hi = float(params[f"{bracket_p}_min"]), float(params[f"{bracket_p}_max"])
    if not 0.0 < lo < hi:
        raise ValidationError(f"{bracket_p}_min", "bracket needs 0 < min < max")
    fixed = _fixed(params, ranged)
    probe = dict(fixed, **{bracket_p: lo})
    if axis is not None:
        probe[axis.parameter] = axis.min
    _check_engine(engine, probe, "engine")
    return dict(engine=engine, axis=axis, fixed=fixed, bracket_parameter=bracket_p, bracket=(lo, hi))


def validate(cfg: RunConfig) -> None:
    """Raise ValidationError naming the first bad key; computes nothing."""
    if cfg.command not in COMMANDS:
        raise ValidationError("command", f"unknown command {cfg.command!r}")
    if cfg.format not in FORMATS:
        raise ValidationError("format", "must be csv or json")
    params = cfg.parameters
    _quad_spec(params)
    if cfg.command in POINT_COMMANDS:
        values = {k: _float(params, k) for k in POINT_COMMANDS[cfg.command]}
        if cfg.command == "slab" and params.get("si"):
            _float(params, "a_meters")
        if cfg.command in ("balls", "slab", "hight"):
            _materials(values)
    elif cfg.command == "phase-map":
        plan_phase_map(params)
    else:
        plan_boundary(params)


def _point_record(cfg: RunConfig) -> dict:
    params = cfg.parameters
    cmd = cfg.command
    values = {k: _float(params, k) for k in POINT_COMMANDS[cmd]}
    warnings: list[str] = []
    si = None
    sign = None

    if cmd == "pair":
        pa = Polarizability(values["alpha_e_a"], values["alpha_m_a"])
        pb = Polarizability(values["alpha_e_b"], values["alpha_m_b"])
        c = pair_potential(pa, pb, values["r"])
    elif cmd == "balls":
        m1, m2 = _materials(values)
        warnings = _material_warnings(m1, m2)
        c = ball_force_coefficient(m1, m2)
    elif cmd == "slab":
        m1, m2 = _materials(values)
        warnings = _material_warnings(m1, m2)
        c = slab_energy(m1, m2, quad_spec=_quad_spec(params)).c
        if params.get("si"):
            a = _float(params, "a_meters")
            values["a_meters"] = a
            si = {"energy_per_area_J_m2": energy_per_area_si(c, a), "pressure_Pa": pressure_si(c, a)}
    elif cmd == "uvl":
        m1, m2 = Material.uvl(values["mu1"]), Material.uvl(values["mu2"])
        warnings = _material_warnings(m1, m2)
        c = uvl_energy(values["mu1"], values["mu2"])
    elif cmd == "impedance":
        c = impedance_energy(values["z1"], values["z2"])
    elif cmd == "conductor":
        c = conductor_vs_material_energy(values["z1"])
    elif cmd == "hight":
        m1, m2 = _materials(values)
        warnings = _material_warnings(m1, m2)
        c = high_temperature_free_energy(m1, m2).c
    else:  # crossover: coefficient is a temperature in kelvin
        c = crossover_temperature(values["a_meters"])

    if cmd != "crossover":
        sign = classify(c).value
    record = {"command": cmd, "inputs": values, "coefficient": c, "sign": sign, "warnings": warnings}
    if si is not None:
        record["si"] = si
    return record


def execute(cfg: RunConfig) -> bytes:
    """Validate and run one configuration, returning the serialised output."""
    validate(cfg)
    params = cfg.parameters
    if cfg.command in POINT_COMMANDS:
        record = _point_record(cfg)
        for w in record["warnings"]:
            print(f"warning: {w}", file=sys.stderr)
        return serialize_record(record, cfg.format)

    quad = _quad_spec(params)
    if cfg.command == "phase-map":
        plan = plan_phase_map(params)
        preset = plan.pop("preset")
        workers = int(params.get("workers") or 1)
        pm = sweep(quad_spec=quad, workers=workers, strict=bool(params.get("strict")), **plan)
        for hole in pm.holes:
            print(f"warning: quadrature did not converge at {hole}", file=sys.stderr)
        return serialize_phase_map(pm, cfg.format, preset)

    plan = plan_boundary(params)
    bc = trace_boundary(quad_spec=quad, **plan)
    for x, reason in bc.skipped:
        print(f"note: skipped {bc.sweep_parameter}={x!r}: {reason}", file=sys.stderr)
    return serialize_boundary(bc, cfg.format, quad)


def _write(data: bytes, path: Optional[str]) -> None:
    if path is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        return
    with open(path, "wb") as fh:
        fh.write(data)


def run(cfg: RunConfig) -> int:
    try:
        data = execute(cfg)
    except ValidationError as exc:
        print(f"error: invalid parameter {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (ConvergenceError, BoundaryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICS
    try:
        _write(data, cfg.path)
    except OSError as exc:
        print(f"error: cannot write {cfg.path}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def run_batch(path: str) -> int:
    try:
        with open(path) as fh:
            entries = json.load(fh)
    except OSError as exc:
        print(f"error: cannot read {path}: {exc.strerror}", file=sys.stderr)
        return EXIT_IO
    except json.JSONDecodeError as exc:
        print(f"error: {path} is not valid JSON: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    if not isinstance(entries, list):
        print(f"error: {path} must hold a JSON array of run configs", file=sys.stderr)
        return EXIT_VALIDATION

    configs = []
    try:
        for i, entry in enumerate(entries):
            cfg = RunConfig.from_dict(entry)
            if not cfg.path:
                raise ValidationError(f"[{i}].output.path", "batch entries need an output path")
            validate(cfg)
            configs.append(cfg)
    except ValidationError as exc:
        print(f"error: invalid parameter {exc}", file=sys.stderr)
        return EXIT_VALIDATION

    for cfg in configs:
        status = run(cfg)
        if status != EXIT_OK:
            return status
    return EXIT_OK


def _add_output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=FORMATS, default="json")
    p.add_argument("--out", dest="path", default=None, help="output file (default stdout)")


def _add_quad(p: argparse.ArgumentParser) -> None:
    p.add_argument("--quad-nodes", type=int, help="initial Gauss-Legendre nodes per panel (default 16)")
    p.add_argument("--quad-max-nodes", type=int, help="node cap per panel before giving up (default 2048)")
    p.add_argument("--quad-tol", type=float, help="node-doubling tolerance (default 1e-10)")


def _add_floats(p: argparse.ArgumentParser, keys) -> None:
    for key in keys:
        p.add_argument("--" + key.replace("_", "-"), dest=key, type=float)


def _add_ranges(p: argparse.ArgumentParser) -> None:
    for key in AXIS_PARAMETERS:
        p.add_argument(f"--{key}-min", dest=f"{key}_min", type=float)
        p.add_argument(f"--{key}-max", dest=f"{key}_max", type=float)
        p.add_argument(f"--{key}-count", dest=f"{key}_count", type=int)
        p.add_argument(f"--{key}-scale", dest=f"{key}_scale", choices=("linear", "logarithmic", "log"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="magcasimir",
        description="Casimir energies between magnetodielectric half-spaces (hbar = c = 1).",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="JSON array of run configs, executed in order")
    sub = parser.add_subparsers(dest="command")

    helps = {
        "pair": "Casimir-Polder potential U(r) of two point particles",
        "balls": "pairwise-summation force coefficient of two polarizable balls",
        "slab": "exact zero-temperature coefficient C = E a^3 of two half-spaces",
        "uvl": "coefficient for two media with eps * mu = 1",
        "impedance": "large eps, mu approximation in terms of the impedances",
        "conductor": "perfect conductor against a body of impedance z1",
        "hight": "leading high-temperature coefficient F a^2 / (k_B T)",
        "crossover": "temperature scale hbar c / (4 pi a k_B) in kelvin",
    }
    for name, keys in POINT_COMMANDS.items():
        p = sub.add_parser(name, help=helps[name])
        _add_floats(p, keys)
        if name == "slab":
            p.add_argument("--si", action="store_true", help="also report J/m^2 and Pa (needs --a-meters)")
            p.add_argument("--a-meters", dest="a_meters", type=float)
        _add_quad(p)
        _add_output(p)

    for name in ("phase-map", "boundary"):
        p = sub.add_parser(name, help="sign map over two parameters" if name == "phase-map" else "zero-energy boundary")
        presets = PRESETS if name == "phase-map" else BOUNDARY_PRESETS
        p.add_argument("--preset", choices=tuple(presets))
        p.add_argument("--engine", choices=ENGINES)
        _add_floats(p, FIXED_PARAMETERS)
        _add_ranges(p)
        if name == "phase-map":
            p.add_argument("--x", choices=AXIS_PARAMETERS)
            p.add_argument("--y", choices=AXIS_PARAMETERS)
            p.add_argument("--workers", type=int, default=1)
            p.add_argument("--strict", action="store_true", help="abort on the first non-converged cell")
        else:
            p.add_argument("--bracket", choices=AXIS_PARAMETERS, help="parameter searched for the root")
        _add_quad(p)
        _add_output(p)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        return run_batch(args.config)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_VALIDATION
    ns = vars(args)
    fmt, path = ns.pop("format"), ns.pop("path")
    command = ns.pop("command")
    ns.pop("config")
    params = {k: v for k, v in ns.items() if v is not None and v is not False}
    return run(RunConfig(command, params, fmt, path))


if __name__ == "__main__":
    sys.exit(main())
