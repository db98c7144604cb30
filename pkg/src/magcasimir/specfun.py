"""Polylogarithms Li_3 and Li_4 on the closed interval [-1, 1].

Direct power-series summation is used for |x| <= 0.95. Beyond that the
series converges too slowly, so

* for 0.95 < x < 1 the expansion of Li_s(e^mu) in mu = ln x is summed
  (convergent for |mu| < 2 pi, here |mu| < 0.052);
* for -1 < x < -0.95 the duplication formula
  Li_s(-y) = 2^(1-s) Li_s(y^2) - Li_s(y) maps the argument back to the
  positive axis.

The endpoints return stored constants.
"""

from __future__ import annotations

import math
from typing import Literal, Union

import numpy as np
from scipy.special import bernoulli, zeta

PolylogOrder = Literal[3, 4]
SUPPORTED_ORDERS = (3, 4)

ZETA3 = 1.2020569031595942
ZETA4 = math.pi**4 / 90.0
ETA3 = 0.75 * ZETA3
ETA4 = 7.0 * math.pi**4 / 720.0

_ENDPOINT = {3: (ZETA3, -ETA3), 4: (ZETA4, -ETA4)}

SERIES_CUTOFF = 1e-17
DIRECT_LIMIT = 0.95
_LOG_TERMS = 18

ArrayLike = Union[float, np.ndarray]


def _zeta_int(n: int) -> float:
    """Riemann zeta at an integer n != 1."""
    if n >= 2:
        return float(zeta(n))
    if n == 0:
        return -0.5
    m = -n
    return -float(bernoulli(m + 1)[m + 1]) / (m + 1)


def _log_coefficients(s: int) -> np.ndarray:
    coeffs = np.zeros(_LOG_TERMS)
    for k in range(_LOG_TERMS):
        if k != s - 1:
            coeffs[k] = _zeta_int(s - k) / math.factorial(k)
    return coeffs


_LOG_COEFFS = {s: _log_coefficients(s) for s in SUPPORTED_ORDERS}
_HARMONIC = {s: sum(1.0 / j for j in range(1, s)) for s in SUPPORTED_ORDERS}


def _check_order(s: int) -> int:
    if s not in SUPPORTED_ORDERS:
        raise ValueError(f"polylog order must be 3 or 4, got {s!r}")
    return int(s)


def _direct_series(s: int, x: np.ndarray) -> np.ndarray:
    if x.size == 0:
        return np.zeros(0)
    amax = float(np.max(np.abs(x)))
    if amax == 0.0:
        return np.zeros_like(x)
    # smallest N with amax**N / N**s below the cutoff
    n = 1
    while amax**n / n**s >= SERIES_CUTOFF:
        n += 1
    orders = np.arange(1, n + 1, dtype=float)
    terms = np.power(x[np.newaxis, :], orders[:, np.newaxis]) / orders[:, np.newaxis] ** s
    # reverse so the pairwise sum starts from the smallest terms
    return np.sum(terms[::-1], axis=0)


def _log_series(s: int, x: np.ndarray) -> np.ndarray:
    mu = np.log(x)
    coeffs = _LOG_COEFFS[s]
    acc = np.zeros_like(mu)
    for c in coeffs[::-1]:
        acc = acc * mu + c
    singular = mu ** (s - 1) / math.factorial(s - 1) * (_HARMONIC[s] - np.log(-mu))
    return acc + singular


def _positive_tail(s: int, y: np.ndarray) -> np.ndarray:
    """Li_s(y) for y in (0, 1]."""
    out = np.empty_like(y)
    one = y == 1.0
    small = (y <= DIRECT_LIMIT) & ~one
    big = ~small & ~one
    out[one] = _ENDPOINT[s][0]
    out[small] = _direct_series(s, y[small])
    out[big] = _log_series(s, y[big])
    return out


def polylog(s: PolylogOrder, x: ArrayLike) -> ArrayLike:
    """Li_s(x) = sum_{n>=1} x**n / n**s for s in {3, 4} and -1 <= x <= 1.

    Accepts a scalar or an array; scalars come back as Python floats.
    Raises ValueError for any argument outside [-1, 1].
    """
    s = _check_order(s)
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    flat = np.atleast_1d(arr).ravel()
    if not np.all(np.isfinite(flat)) or np.any(np.abs(flat) > 1.0):
        bad = flat[~(np.abs(flat) <= 1.0)][0]
        raise ValueError(f"polylog argument must lie in [-1, 1], got {bad!r}")

    out = np.empty_like(flat)
    direct = np.abs(flat) <= DIRECT_LIMIT
    upper = flat > DIRECT_LIMIT
    lower = flat < -DIRECT_LIMIT

    out[direct] = _direct_series(s, flat[direct])
    out[upper] = _positive_tail(s, flat[upper])
    if np.any(lower):
        y = -flat[lower]
        out[lower] = 2.0 ** (1 - s) * _positive_tail(s, y * y) - _positive_tail(s, y)
    minus_one = flat == -1.0
    out[minus_one] = _ENDPOINT[s][1]

    if scalar:
        return float(out[0])
    return out.reshape(arr.shape)


def li3(x: ArrayLike) -> ArrayLike:
    return polylog(3, x)


def li4(x: ArrayLike) -> ArrayLike:
    return polylog(4, x)
