"""Parameter-plane sign maps and zero-energy boundary tracing."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .energy import (
    ConvergenceError,
    Sign,
    classify,
    conductor_vs_material_energy,
    high_temperature_free_energy,
    impedance_energy,
    slab_energy,
)
from .media import Material
from .quadrature import DEFAULT_QUADRATURE, QuadratureSpec

AXIS_PARAMETERS = ("eps1", "mu1", "eps2", "mu2", "z1", "z2")
# n_i = sqrt(eps_i mu_i); with z_i it fixes a material on a constant-index ray
FIXED_PARAMETERS = AXIS_PARAMETERS + ("n1", "n2")
ENGINES = ("exact", "impedance", "conductor", "high_temperature")

INDETERMINATE = "indeterminate"
ROOT_RESIDUAL = 1e-9
# aim well below the residual contract so it holds with margin
ROOT_TARGET = 1e-12
BISECTION_WIDTH = 1e-6
SECANT_STEPS = 5


class BoundaryError(ValueError):
    """No sign change found anywhere along a sweep."""


@dataclass(frozen=True)
class SweepAxis:
    parameter: str
    min: float
    max: float
    count: int
    scale: str = "linear"

    def __post_init__(self) -> None:
        if self.parameter not in AXIS_PARAMETERS:
            raise ValueError(f"unknown sweep parameter {self.parameter!r}")
        if not (math.isfinite(self.min) and math.isfinite(self.max)) or self.min >= self.max:
            raise ValueError(f"axis {self.parameter}: need finite min < max")
        if int(self.count) != self.count or self.count < 2:
            raise ValueError(f"axis {self.parameter}: count must be an integer >= 2")
        if self.scale not in ("linear", "logarithmic"):
            raise ValueError(f"axis {self.parameter}: scale must be linear or logarithmic")
        if self.scale == "logarithmic" and self.min <= 0.0:
            raise ValueError(f"axis {self.parameter}: logarithmic scale needs min > 0")

    def values(self) -> np.ndarray:
        if self.scale == "logarithmic":
            return np.geomspace(self.min, self.max, self.count)
        return np.linspace(self.min, self.max, self.count)

    def as_dict(self) -> dict:
        return {
            "parameter": self.parameter,
            "min": self.min,
            "max": self.max,
            "count": self.count,
            "scale": self.scale,
        }


def _material(params: Mapping[str, float], i: int) -> Material:
    e, m, z, n = (params.get(f"{k}{i}") for k in ("eps", "mu", "z", "n"))
    if e is not None and m is not None:
        return Material(e, m)
    if z is not None and n is not None:
        return Material.from_impedance(z, n)
    raise ValueError(f"material {i} needs eps{i} and mu{i}, or z{i} and n{i}")


def required_parameters(engine: str) -> tuple[str, ...]:
    if engine == "impedance":
        return ("z1", "z2")
    if engine == "conductor":
        return ("z1",)
    if engine in ("exact", "high_temperature"):
        return ()
    raise ValueError(f"unknown engine {engine!r}; choose from {', '.join(ENGINES)}")


def check_parameters(engine: str, params: Mapping[str, float]) -> None:
    """Fail fast if ``params`` cannot define the engine's inputs."""
    for key in params:
        if key not in FIXED_PARAMETERS:
            raise ValueError(f"unknown parameter {key!r}")
    for key in required_parameters(engine):
        if key not in params:
            raise ValueError(f"engine {engine!r} needs parameter {key!r}")
    if engine in ("exact", "high_temperature"):
        _material(params, 1)
        _material(params, 2)


def coefficient(
    engine: str,
    params: Mapping[str, float],
    quad_spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> float:
    """Energy coefficient of the selected engine at one parameter point."""
    if engine == "exact":
        return slab_energy(_material(params, 1), _material(params, 2), quad_spec).c
    if engine == "high_temperature":
        return high_temperature_free_energy(_material(params, 1), _material(params, 2)).c
    if engine == "impedance":
        return impedance_energy(params["z1"], params["z2"])
    if engine == "conductor":
        return conductor_vs_material_energy(params["z1"])
    raise ValueError(f"unknown engine {engine!r}; choose from {', '.join(ENGINES)}")


@dataclass
class PhaseMap:
    """Coefficients on a grid; ``coefficients[j, i]`` sits at (x[i], y[j])."""

    engine: str
    axis_x: SweepAxis
    axis_y: SweepAxis
    fixed: dict
    coefficients: np.ndarray
    holes: list = field(default_factory=list)
    quadrature: QuadratureSpec = DEFAULT_QUADRATURE

    @property
    def x(self) -> np.ndarray:
        return self.axis_x.values()

    @property
    def y(self) -> np.ndarray:
        return self.axis_y.values()

    @property
    def signs(self) -> np.ndarray:
        out = np.empty(self.coefficients.shape, dtype=object)
        for idx, c in np.ndenumerate(self.coefficients):
            out[idx] = INDETERMINATE if math.isnan(c) else classify(c).value
        return out

    def sign_counts(self) -> dict:
        vals, counts = np.unique(self.signs.astype(str), return_counts=True)
        return dict(zip(vals.tolist(), counts.tolist()))


def _row(engine, axis_x, y_param, y, fixed, quad_spec, strict):
    coeffs, holes = [], []
    for x in axis_x.values():
        params = dict(fixed)
        params[axis_x.parameter] = float(x)
        params[y_param] = float(y)
        try:
            coeffs.append(coefficient(engine, params, quad_spec))
        except ConvergenceError as exc:
            where = f"{axis_x.parameter}={float(x)!r}, {y_param}={float(y)!r}"
            if strict:
                raise ConvergenceError(f"cell {where}: {exc}") from exc
            coeffs.append(math.nan)
            holes.append(where)
    return coeffs, holes


def sweep(
    engine: str,
    axis_x: SweepAxis,
    axis_y: SweepAxis,
    fixed: Mapping[str, float],
    quad_spec: QuadratureSpec = DEFAULT_QUADRATURE,
    workers: int = 1,
    strict: bool = False,
) -> PhaseMap:
    """Evaluate ``engine`` on the grid spanned by the two axes.

    Cells that fail to converge become NaN holes unless ``strict`` is set.
    ``workers > 1`` evaluates rows in separate processes; the result does
    not depend on the worker count.
    """
    if axis_x.parameter == axis_y.parameter:
        raise ValueError("the two sweep axes must use different parameters")
    fixed = {k: float(v) for k, v in fixed.items()}
    for ax in (axis_x, axis_y):
        if ax.parameter in fixed:
            raise ValueError(f"{ax.parameter!r} is both swept and fixed")
    probe = dict(fixed, **{axis_x.parameter: axis_x.min, axis_y.parameter: axis_y.min})
    check_parameters(engine, probe)

    ys = axis_y.values()
    args = [(engine, axis_x, axis_y.parameter, float(y), fixed, quad_spec, strict) for y in ys]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_row, *zip(*args)))
    else:
        rows = [_row(*a) for a in args]

    coeffs = np.array([r[0] for r in rows], dtype=float)
    holes = [h for r in rows for h in r[1]]
    return PhaseMap(engine, axis_x, axis_y, fixed, coeffs, holes, quad_spec)


@dataclass
class BoundaryCurve:
    """Zero crossings of the coefficient, one per sweep value at most."""

    engine: str
    bracket_parameter: str
    sweep_parameter: Optional[str]
    fixed: dict
    points: list  # (x, y); x is None without a sweep axis
    coefficients: list
    skipped: list = field(default_factory=list)  # (x, reason)

    @property
    def residual(self) -> float:
        return max((abs(c) for c in self.coefficients), default=0.0)

    @property
    def connected(self) -> bool:
        """True when no sweep value strictly between two roots was skipped."""
        if self.sweep_parameter is None or len(self.points) < 2:
            return bool(self.points)
        xs = [p[0] for p in self.points]
        lo, hi = min(xs), max(xs)
        return not any(lo < s[0] < hi for s in self.skipped)


def find_root(f, lo: float, hi: float, flo: Optional[float] = None, fhi: Optional[float] = None):
    """Bisection down to ``BISECTION_WIDTH``, then bracketed secant steps.

    Continues bisecting while |f| exceeds ``ROOT_TARGET`` and the bracket
    can still shrink. Returns (root, f(root)).
    """
    flo = f(lo) if flo is None else flo
    fhi = f(hi) if fhi is None else fhi
    if flo == 0.0:
        return lo, flo
    if fhi == 0.0:
        return hi, fhi
    if (flo > 0) == (fhi > 0):
        raise ValueError("bracket endpoints have the same sign")

    def width_ok(a, b):
        return b - a <= BISECTION_WIDTH * max(1.0, abs(a), abs(b))

    while not width_ok(lo, hi):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0:
            return mid, fm
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm

    best, fbest = (lo, flo) if abs(flo) < abs(fhi) else (hi, fhi)
    a, fa, b, fb = lo, flo, hi, fhi
    for _ in range(SECANT_STEPS):
        if abs(fbest) < ROOT_TARGET or fb == fa:
            break
        x = b - fb * (b - a) / (fb - fa)
        if not (lo < x < hi):
            break
        fx = f(x)
        if abs(fx) < abs(fbest):
            best, fbest = x, fx
        if (fx > 0) == (flo > 0):
            lo, flo = x, fx
        else:
            hi, fhi = x, fx
        a, fa, b, fb = b, fb, x, fx

    while abs(fbest) >= ROOT_TARGET:
        mid = 0.5 * (lo + hi)
        if not (lo < mid < hi):
            break
        fm = f(mid)
        if abs(fm) < abs(fbest):
            best, fbest = mid, fm
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    return best, fbest


def trace_boundary(
    engine: str,
    axis: Optional[SweepAxis],
    fixed: Mapping[str, float],
    bracket_parameter: str,
    bracket: Sequence[float],
    quad_spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> BoundaryCurve:
    """Locate the zero of the coefficient in ``bracket`` for each sweep value.

    Without a sweep axis a single root is sought. Sweep values whose bracket
    endpoints share a sign (or fail to converge) are listed as skipped.
    """
    if bracket_parameter not in AXIS_PARAMETERS:
        raise ValueError(f"unknown bracket parameter {bracket_parameter!r}")
    lo, hi = (float(b) for b in bracket)
    if not lo < hi:
        raise ValueError("bracket needs lo < hi")
    fixed = {k: float(v) for k, v in fixed.items()}
    if bracket_parameter in fixed or (axis is not None and axis.parameter in fixed):
        raise ValueError("swept or bracketed parameters cannot also be fixed")
    if axis is not None and axis.parameter == bracket_parameter:
        raise ValueError("sweep and bracket parameters must differ")

    xs = [None] if axis is None else [float(x) for x in axis.values()]
    probe = dict(fixed, **{bracket_parameter: lo})
    if axis is not None:
        probe[axis.parameter] = xs[0]
    check_parameters(engine, probe)

    points, coeffs, skipped = [], [], []
    for x in xs:
        base = dict(fixed)
        if axis is not None:
            base[axis.parameter] = x

        def f(y, base=base):
            return coefficient(engine, dict(base, **{bracket_parameter: y}), quad_spec)

        try:
            flo, fhi = f(lo), f(hi)
            if classify(flo) == Sign.ZERO or classify(fhi) == Sign.ZERO or (flo > 0) == (fhi > 0):
                skipped.append((x, "no sign change in bracket"))
                continue
            root, froot = find_root(f, lo, hi, flo, fhi)
        except ConvergenceError as exc:
            skipped.append((x, f"non-convergence: {exc}"))
            continue
        points.append((x, root))
        coeffs.append(froot)

    if not points:
        raise BoundaryError(f"no sign change of the {engine} coefficient in {bracket_parameter} in [{lo}, {hi}]")
    return BoundaryCurve(engine, bracket_parameter, None if axis is None else axis.parameter, fixed, points, coeffs, skipped)


# Figure set-ups. Axis ranges and resolutions are not given with the
# figures, so these are choices.
PRESETS = {
    "fig1a": dict(
        engine="exact",
        axis_x=SweepAxis("eps2", 1.0, 100.0, 101),
        axis_y=SweepAxis("mu2", 1.0, 100.0, 101),
        fixed={"eps1": 2.0, "mu1": 1.0},
    ),
    "fig1b": dict(
        engine="exact",
        axis_x=SweepAxis("eps1", 1.0, 100.0, 101),
        axis_y=SweepAxis("eps2", 1.0, 100.0, 101),
        fixed={"mu1": 1.0, "mu2": 20.0},
    ),
    "fig2": dict(
        engine="impedance",
        axis_x=SweepAxis("z1", 0.01, 100.0, 101, "logarithmic"),
        axis_y=SweepAxis("z2", 0.01, 100.0, 101, "logarithmic"),
        fixed={},
    ),
}

BOUNDARY_PRESETS = {
    "fig2": dict(
        engine="impedance",
        axis=SweepAxis("z1", 0.01, 0.8, 101, "logarithmic"),
        fixed={},
        bracket_parameter="z2",
        bracket=(1.0, 1e3),
    ),
    "conductor": dict(
        engine="conductor",
        axis=None,
        fixed={},
        bracket_parameter="z1",
        bracket=(0.5, 2.0),
    ),
}
