"""Interaction energies between polarizable particles and half-spaces.

Natural units hbar = c = 1 throughout. Slab energies are reported as the
dimensionless coefficient C = E * a**3, so the force per unit area is
F = -dE/da = 3 C / a**4: C < 0 means attraction, C > 0 repulsion.
The only SI quantity is the crossover temperature.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import constants
from scipy.integrate import quad

from .media import Impedance, Material, Polarizability, te_coefficient
from .quadrature import (
    DEFAULT_QUADRATURE,
    ConvergenceError,
    QuadratureSpec,
    gauss_legendre,
    graded_breaks,
    integrate,
)
from .specfun import li3, li4

SIGN_TOL = 1e-12
# products of reflection coefficients may overshoot +-1 by rounding
CLAMP_TOL = 1e-12

HBAR = constants.hbar
C_LIGHT = constants.c
K_B = constants.k


class Sign(str, enum.Enum):
    ATTRACTIVE = "attractive"
    REPULSIVE = "repulsive"
    ZERO = "zero"


class Regime(str, enum.Enum):
    ZERO_TEMPERATURE = "zero_temperature"
    HIGH_TEMPERATURE = "high_temperature"


def classify(c: float, tol: float = SIGN_TOL) -> Sign:
    if c < -tol:
        return Sign.ATTRACTIVE
    if c > tol:
        return Sign.REPULSIVE
    return Sign.ZERO


@dataclass(frozen=True)
class EnergyCoefficient:
    """C = E a^3 at zero temperature, or C_T = F a^2 / (k_B T) at high T."""

    c: float
    regime: Regime = Regime.ZERO_TEMPERATURE
    sign: Sign = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "sign", classify(self.c))

    def __float__(self) -> float:
        return self.c


@dataclass(frozen=True)
class SlabConfig:
    m1: Material
    m2: Material
    a: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.a) and self.a > 0.0):
            raise ValueError(f"separation a must be positive, got {self.a!r}")


def _as_config(cfg, m2: Material | None) -> SlabConfig:
    if isinstance(cfg, SlabConfig):
        return cfg
    if m2 is None:
        raise TypeError("pass a SlabConfig or two materials")
    return SlabConfig(cfg, m2)


def pair_potential(pa: Polarizability, pb: Polarizability, r: float) -> float:
    """Retarded Casimir-Polder potential U(r) between two point particles."""
    if not (math.isfinite(r) and r > 0.0):
        raise ValueError(f"separation r must be positive, got {r!r}")
    same = pa.alpha_e * pb.alpha_e + pa.alpha_m * pb.alpha_m
    mixed = pa.alpha_e * pb.alpha_m + pa.alpha_m * pb.alpha_e
    return -(23.0 * same - 7.0 * mixed) / (4.0 * math.pi * r**7)


def _cm(x: float) -> float:
    return (x - 1.0) / (x + 2.0)


def ball_force_coefficient(m1: Material, m2: Material) -> float:
    """Pairwise-summation force coefficient of two polarizable balls.

    Only the bracket is returned; the positive normalisation is unknown.
    Positive means repulsion.
    """
    e1, e2 = _cm(m1.epsilon), _cm(m2.epsilon)
    h1, h2 = _cm(m1.mu), _cm(m2.mu)
    return -23.0 * e1 * e2 - 23.0 * h1 * h2 + 7.0 * e1 * h2 + 7.0 * e2 * h1


def _clamp_product(p: np.ndarray) -> np.ndarray:
    excess = np.abs(p) - 1.0
    if np.any(excess > CLAMP_TOL):
        raise ValueError(f"reflection product outside [-1, 1] by {float(np.max(excess)):.3g}")
    return np.clip(p, -1.0, 1.0)


def _singular_scales(materials) -> tuple[list[float], list[float]]:
    # sqrt(1 + (eps mu - 1) u^2) branches at u = i/sqrt(q) (q > 0) or u = 1/sqrt(-q)
    near_zero, near_one = [], []
    for m in materials:
        q = m.epsilon * m.mu - 1.0
        if q > 1.0:
            near_zero.append(1.0 / math.sqrt(q))
        elif q < 0.0:
            d = 1.0 / math.sqrt(-q) - 1.0
            if d < 1.0:
                near_one.append(max(d, 1e-14))
    return near_zero, near_one


def mode_products(m1: Material, m2: Material, u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """TE and TM reflection products at u = cos(theta)."""
    te = te_coefficient(m1.epsilon, m1.mu, u) * te_coefficient(m2.epsilon, m2.mu, u)
    tm = te_coefficient(m1.mu, m1.epsilon, u) * te_coefficient(m2.mu, m2.epsilon, u)
    return _clamp_product(te), _clamp_product(tm)


def slab_energy(
    cfg: SlabConfig | Material,
    m2: Material | None = None,
    quad_spec: QuadratureSpec = DEFAULT_QUADRATURE,
) -> EnergyCoefficient:
    """Zero-temperature energy coefficient of two half-spaces.

    C = -(1/32 pi^2) int_0^pi [Li4(rTE1 rTE2) + Li4(rTM1 rTM2)] sin(theta) dtheta,
    integrated in u = cos(theta) over [0, 1] (the integrand is even in u).
    """
    cfg = _as_config(cfg, m2)
    m1, m2 = cfg.m1, cfg.m2

    def integrand(u: np.ndarray) -> np.ndarray:
        te, tm = mode_products(m1, m2, u)
        return li4(te) + li4(tm)

    near_zero, near_one = _singular_scales((m1, m2))
    total = integrate(integrand, graded_breaks(near_zero, near_one), quad_spec)
    return EnergyCoefficient(-total / (16.0 * math.pi**2))


# k-mesh for the oracle, in units of 1/a: geometric near k = 0, then uniform
_K_CUTOFF = 10.0 * math.log(10.0)  # exp(-2 k) < 1e-20
_K_BREAKS = np.unique(
    np.concatenate([[0.0], 1e-9 * 4.0 ** np.arange(15), np.arange(1.0, _K_CUTOFF, 2.0), [_K_CUTOFF]])
)
_K_BREAKS = _K_BREAKS[_K_BREAKS <= _K_CUTOFF]
_K_ORDER = 24


def _k_mesh(a: float) -> tuple[np.ndarray, np.ndarray]:
    x, w = gauss_legendre(_K_ORDER)
    lo, hi = _K_BREAKS[:-1, None] / a, _K_BREAKS[1:, None] / a
    half = 0.5 * (hi - lo)
    return (lo + half * (x + 1.0)).ravel(), (half * w).ravel()


def slab_energy_oracle(
    cfg: SlabConfig | Material,
    m2: Material | None = None,
    epsrel: float = 1e-12,
) -> EnergyCoefficient:
    """Independent check of :func:`slab_energy` from the unreduced k-integral.

    Evaluates (1/4 pi^2) a^3 int_0^1 du int_0^inf dk k^2 [ln(1 - pTE e^{-2ak})
    + ln(1 - pTM e^{-2ak})] with adaptive QUADPACK in u and a fixed
    composite Gauss-Legendre mesh in k. No polylogarithm is involved.
    """
    cfg = _as_config(cfg, m2)
    m1, m2, a = cfg.m1, cfg.m2, cfg.a
    k, wk = _k_mesh(a)
    k2w = k * k * wk
    decay = np.exp(-2.0 * a * k)

    def inner(u: float) -> float:
        te, tm = mode_products(m1, m2, np.array([u]))
        return float(np.dot(k2w, np.log1p(-te[0] * decay) + np.log1p(-tm[0] * decay)))

    val, err = quad(inner, 0.0, 1.0, epsabs=1e-15, epsrel=epsrel, limit=500)
    if not math.isfinite(val) or err > max(1e3 * epsrel * abs(val), 1e-13):
        raise ConvergenceError(f"oracle quadrature error estimate {err:.3g} too large")
    return EnergyCoefficient(a**3 * val / (4.0 * math.pi**2))


def _impedance_value(z) -> float:
    return z.z if isinstance(z, Impedance) else Impedance(z).z


def _i_function(z1: float, z2: float) -> float:
    """I(Z1, Z2) with the removable singularity at Z1 = Z2 filled in."""
    if abs(z1 - z2) < 1e-6 * (z1 + z2):
        z = 0.5 * (z1 + z2)
        return -4.0 * z * (math.log1p(1.0 / z) - 1.0 / (z + 1.0))
    f1 = z1 * math.log1p(1.0 / z1)
    f2 = z2 * math.log1p(1.0 / z2)
    return 2.0 * (z2 + z1) / (z2 - z1) * (f1 - f2)


def impedance_energy(z1, z2) -> float:
    """Large-epsilon, large-mu coefficient from the first Li4 term.

    -(1/16 pi^2) (2 + I(Z1, Z2) + I(1/Z1, 1/Z2)).
    """
    a, b = _impedance_value(z1), _impedance_value(z2)
    return -(2.0 + _i_function(a, b) + _i_function(1.0 / a, 1.0 / b)) / (16.0 * math.pi**2)


def conductor_vs_material_energy(z1) -> float:
    """Perfect conductor facing a large-epsilon, large-mu body of impedance Z1.

    Two-term truncation of the Li4 series, evaluated exactly as
    -(1/16 pi^2) [(14 / 8 Z1) ln(Z1 + 1) + (3/8)(1 - 6 Z1 ln(1 + 1/Z1))].
    """
    z = _impedance_value(z1)
    bracket = 14.0 / (8.0 * z) * math.log1p(z) + 3.0 / 8.0 * (1.0 - 6.0 * z * math.log1p(1.0 / z))
    return -bracket / (16.0 * math.pi**2)


def uvl_energy(mu1: float, mu2: float) -> float:
    """Coefficient for two media with epsilon * mu = 1.

    Both reflection coefficients are angle independent, so the angular
    integral of the general formula is trivial and
    C = -Li4(x) / (8 pi^2) with x = ((1-mu1)/(1+mu1)) ((1-mu2)/(1+mu2)).
    """
    m1, m2 = Material.uvl(mu1), Material.uvl(mu2)
    te, tm = mode_products(m1, m2, np.array([1.0]))
    # int_0^pi sin(theta) dtheta = 2
    return float(-2.0 * (li4(te[0]) + li4(tm[0])) / (32.0 * math.pi**2))


def high_temperature_free_energy(m1: Material, m2: Material) -> EnergyCoefficient:
    """Leading high-temperature term, C_T = F a^2 / (k_B T).

    C_T = -(1/16 pi) [Li3(m1 m2) + Li3(e1 e2)] with m_i = (1-mu_i)/(1+mu_i)
    and e_i = (1-eps_i)/(1+eps_i). Only static (zero-frequency) modes
    survive, so electric and magnetic responses no longer mix.
    """
    mm = (1.0 - m1.mu) / (1.0 + m1.mu) * (1.0 - m2.mu) / (1.0 + m2.mu)
    ee = (1.0 - m1.epsilon) / (1.0 + m1.epsilon) * (1.0 - m2.epsilon) / (1.0 + m2.epsilon)
    c = -(li3(mm) + li3(ee)) / (16.0 * math.pi)
    return EnergyCoefficient(c, Regime.HIGH_TEMPERATURE)


def crossover_temperature(a_meters: float) -> float:
    """Temperature hbar c / (4 pi a k_B), in kelvin, above which the
    high-temperature term dominates."""
    if not (math.isfinite(a_meters) and a_meters > 0.0):
        raise ValueError(f"separation must be positive, got {a_meters!r}")
    return HBAR * C_LIGHT / (4.0 * math.pi * a_meters * K_B)


def energy_per_area_si(c: float, a_meters: float) -> float:
    """E = C hbar c / a^3 in J/m^2."""
    return c * HBAR * C_LIGHT / a_meters**3


def pressure_si(c: float, a_meters: float) -> float:
    """F/A = 3 C hbar c / a^4 in Pa; positive pushes the plates apart."""
    return 3.0 * c * HBAR * C_LIGHT / a_meters**4
