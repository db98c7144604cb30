"""Material descriptions and vacuum/half-space reflection coefficients.

Angles follow the Wick-rotated convention: cos(theta) = k_t / |k|, with
theta in [0, pi]. Every coefficient depends on theta only through
cos(theta)**2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

ArrayLike = Union[float, np.ndarray]

# finite stand-in for "infinite" epsilon or mu
LARGE = 1e8


def _positive_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise ValueError(f"{name} must be positive and finite, got {value!r}")
    return value


@dataclass(frozen=True)
class Impedance:
    """Wave impedance Z = sqrt(mu / epsilon) relative to vacuum."""

    z: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "z", _positive_finite("impedance", self.z))

    @property
    def inverse(self) -> "Impedance":
        return Impedance(1.0 / self.z)


@dataclass(frozen=True)
class Material:
    """Half-space with constant relative permittivity and permeability.

    epsilon below 1 is accepted but flagged through ``physical``: on the
    imaginary frequency axis a causal permittivity cannot drop below 1.
    """

    epsilon: float
    mu: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "epsilon", _positive_finite("epsilon", self.epsilon))
        object.__setattr__(self, "mu", _positive_finite("mu", self.mu))

    @classmethod
    def vacuum(cls) -> "Material":
        return cls(1.0, 1.0)

    @classmethod
    def perfect_conductor(cls, large: float = LARGE) -> "Material":
        return cls(large, 1.0)

    @classmethod
    def perfect_permeable(cls, large: float = LARGE) -> "Material":
        return cls(1.0, large)

    @classmethod
    def from_impedance(cls, z: float, index: float) -> "Material":
        """Material with impedance ``z`` and sqrt(epsilon*mu) equal to ``index``."""
        z = _positive_finite("impedance", z)
        index = _positive_finite("index", index)
        return cls(index / z, index * z)

    @classmethod
    def uvl(cls, mu: float) -> "Material":
        """Uniform velocity of light medium, epsilon * mu = 1."""
        mu = _positive_finite("mu", mu)
        return cls(1.0 / mu, mu)

    @property
    def physical(self) -> bool:
        return self.epsilon >= 1.0

    @property
    def impedance(self) -> Impedance:
        return Impedance(math.sqrt(self.mu / self.epsilon))

    @property
    def swapped(self) -> "Material":
        return Material(self.mu, self.epsilon)

    def warnings(self, label: str = "material") -> list[str]:
        if self.physical:
            return []
        return [f"{label}: epsilon={self.epsilon!r} < 1 on the imaginary axis is not realisable by a causal medium"]


@dataclass(frozen=True)
class Polarizability:
    """Electric and magnetic polarizability of a point particle (volume units)."""

    alpha_e: float = 0.0
    alpha_m: float = 0.0

    def __post_init__(self) -> None:
        for name in ("alpha_e", "alpha_m"):
            value = float(getattr(self, name))
            if not math.isfinite(value) or value < 0.0:
                raise ValueError(f"{name} must be finite and non-negative, got {value!r}")
            object.__setattr__(self, name, value)


def _check_theta(theta: ArrayLike) -> np.ndarray:
    th = np.asarray(theta, dtype=float)
    if not np.all(np.isfinite(th)):
        raise ValueError("theta must be finite")
    if np.any(th < 0.0) or np.any(th > math.pi):
        raise ValueError("theta must lie in [0, pi]")
    return th


def _as_output(values: np.ndarray, like: np.ndarray) -> ArrayLike:
    return float(values) if like.ndim == 0 else values


def te_coefficient(epsilon: float, mu: float, cos_theta: ArrayLike) -> np.ndarray:
    """TE reflection coefficient as a function of u = cos(theta).

    Vectorised kernel shared by the energy quadratures; no validation.
    """
    u2 = np.square(cos_theta)
    q = _index_excess(epsilon, mu)
    root = np.sqrt(1.0 + q * u2)
    return _te_ratio(q * u2, root, mu)


def _index_excess(epsilon: float, mu: float) -> float:
    # eps mu - 1 without cancellation when both are close to 1
    de, dm = epsilon - 1.0, mu - 1.0
    return de + dm + de * dm


def _te_ratio(qu2, root, mu: float):
    # root - mu written as (root^2 - 1)/(root + 1) - (mu - 1), so near-vacuum
    # media keep full relative precision instead of rounding to a step
    return (qu2 / (root + 1.0) - (mu - 1.0)) / (root + mu)


def tm_coefficient(epsilon: float, mu: float, cos_theta: ArrayLike) -> np.ndarray:
    return te_coefficient(mu, epsilon, cos_theta)


def reflection_te(m: Material, theta: ArrayLike) -> ArrayLike:
    """TE coefficient (sqrt(eps mu cos^2 + sin^2) - mu) / (sqrt(...) + mu)."""
    th = _check_theta(theta)
    # sin^2 computed directly keeps full precision near theta = 0
    c2 = np.square(np.cos(th))
    s2 = np.square(np.sin(th))
    root = np.sqrt(m.epsilon * m.mu * c2 + s2)
    return _as_output(_te_ratio(_index_excess(m.epsilon, m.mu) * c2, root, m.mu), th)


def reflection_tm(m: Material, theta: ArrayLike) -> ArrayLike:
    return reflection_te(m.swapped, theta)


def reflection_impedance_limit(z: Union[Impedance, float], theta: ArrayLike) -> ArrayLike:
    """TE coefficient for epsilon, mu -> infinity at fixed Z = sqrt(mu/eps).

    (|cos theta| / Z - 1) / (|cos theta| / Z + 1); the TM counterpart is the
    same function evaluated at 1/Z.
    """
    zval = z.z if isinstance(z, Impedance) else _positive_finite("impedance", z)
    th = _check_theta(theta)
    c = np.abs(np.cos(th))
    return _as_output((c - zval) / (c + zval), th)
