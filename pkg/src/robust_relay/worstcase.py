"""Worst-case interference allocation on the source-relay streams.

Given the source products sigma2_1[i] * gamma_s[i] and the relay powers
coupled to each stream, the adversary spreads its budget T over the
stream interference variances so as to minimize the source-relay rate.
Stationarity gives a closed form per stream in terms of a single
multiplier, which is bisected to meet the budget with equality (spending
less than T is never optimal for the adversary).
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import InvalidInputError


@dataclass
class RsiSpectrum:
    """Interference variances per stream plus the multiplier that set them.

    ``vacuous`` marks the case where a positive budget meets no attackable
    stream (every stream has zero relay power or zero signal product), so
    the interference cannot affect the rate at all.
    """

    sigma2: np.ndarray
    water_level: float
    vacuous: bool = field(default=False)

    @property
    def total(self) -> float:
        return float(np.sum(self.sigma2))


def worst_case_rsi(gamma_s, gamma_r, sigma2_1, T: float) -> RsiSpectrum:
    """Rate-minimizing interference split of the budget T.

    Parameters are paired index-wise on the descending-spectrum stream
    order: ``sigma2_1`` the raw squared singular values, ``gamma_s`` the
    source powers, ``gamma_r`` the relay powers coupled to each stream.
    Streams with zero relay power or zero signal receive nothing (mass
    there has no effect on the objective).
    """
    gamma_s = np.asarray(gamma_s, dtype=float)
    gamma_r = np.asarray(gamma_r, dtype=float)
    sigma2_1 = np.asarray(sigma2_1, dtype=float)
    if not (gamma_s.shape == gamma_r.shape == sigma2_1.shape):
        raise InvalidInputError("stream vectors must have matching lengths")
    for vec, name in ((gamma_s, "gamma_s"), (gamma_r, "gamma_r"), (sigma2_1, "sigma2_1")):
        if not np.all(np.isfinite(vec)) or np.any(vec < 0.0):
            raise InvalidInputError(f"{name} must be finite and non-negative")
    if T < 0.0 or not np.isfinite(T):
        raise InvalidInputError("T must be finite and non-negative")

    products = sigma2_1 * gamma_s
    sigma2, lam, vacuous = _kernels.worst_case_rsi(products, gamma_r, float(T))
    return RsiSpectrum(sigma2=sigma2, water_level=float(lam), vacuous=bool(vacuous))


def interference_rate(gamma_s, gamma_r, sigma2_1, sigma2_r) -> float:
    """Source-relay sum rate under a given interference spectrum (bits)."""
    gamma_s = np.asarray(gamma_s, dtype=float)
    gamma_r = np.asarray(gamma_r, dtype=float)
    sigma2_1 = np.asarray(sigma2_1, dtype=float)
    sigma2_r = np.asarray(sigma2_r, dtype=float)
    return float(np.sum(np.log2(1.0 + sigma2_1 * gamma_s / (1.0 + gamma_r * sigma2_r))))


def check_ordering_redundancy(gamma_s, gamma_r, sigma2_1, rsi: RsiSpectrum,
                              tol: float = 1e-9) -> bool:
    """Verify that the interference ordering comes for free.

    True iff the relay powers are descending, the signal products
    sigma2_1[i]*gamma_s[i] are descending, and the implied interference
    products gamma_r[i]*sigma2[i] are then descending as well.
    """
    gamma_s = np.asarray(gamma_s, dtype=float)
    gamma_r = np.asarray(gamma_r, dtype=float)
    sigma2_1 = np.asarray(sigma2_1, dtype=float)

    def descending(v):
        return bool(np.all(v[:-1] >= v[1:] - tol)) if v.size > 1 else True

    products = sigma2_1 * gamma_s
    implied = gamma_r * rsi.sigma2
    return descending(gamma_r) and descending(products) and descending(implied)
