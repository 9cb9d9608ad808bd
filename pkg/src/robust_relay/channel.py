"""System configuration, channel sampling and spectral decompositions.

The link under study is source -> relay -> destination.  H1 is the
source-to-relay channel (relay receive frontend, Kr x M) and H2 the
relay-to-destination channel (relay transmit frontend, N x Kt).  Noise
variance is unity everywhere, so power budgets are SNR-like quantities.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfigError, InvalidInputError

# Squared singular values below this fraction of the largest one are
# clamped to exactly zero: water-filling over numerically-zero gains is
# ill-posed and rank decisions must be stable.
SPECTRUM_CLAMP_REL = 1e-12


@dataclass
class SystemConfig:
    """Antenna counts, power budgets and the interference-uncertainty bound.

    Attributes
    ----------
    M, Kt, Kr, N : int
        Source, relay-transmit, relay-receive and destination antennas.
    Ps, Pr : float
        Source and relay transmit power budgets (linear units).
    T : float
        Residual self-interference uncertainty bound (squared Frobenius
        norm of the unknown interference channel).
    """

    M: int
    Kt: int
    Kr: int
    N: int
    Ps: float
    Pr: float
    T: float = 0.0

    def __post_init__(self):
        for name in ("M", "Kt", "Kr", "N"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise InvalidConfigError(f"{name} must be a positive integer, got {value!r}")
            setattr(self, name, int(value))
        for name in ("Ps", "Pr", "T"):
            value = float(getattr(self, name))
            if not np.isfinite(value) or value < 0.0:
                raise InvalidConfigError(f"{name} must be finite and >= 0, got {value!r}")
            setattr(self, name, value)

    @property
    def source_streams(self) -> int:
        return min(self.M, self.Kr)

    @property
    def relay_streams(self) -> int:
        return min(self.Kt, self.N)


@dataclass
class ChannelRealization:
    """One draw of the two link matrices."""

    H1: np.ndarray  # Kr x M, source -> relay
    H2: np.ndarray  # N x Kt, relay -> destination


@dataclass
class Spectrum:
    """Descending squared singular values of a channel matrix."""

    values: np.ndarray
    source_rank: int


@dataclass
class CovarianceDesign:
    """Eigenbasis (right singular vectors of the channel) plus eigenvalues."""

    eigvecs: np.ndarray
    eigvals: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        return (self.eigvecs * self.eigvals) @ self.eigvecs.conj().T


def sample_channel(cfg: SystemConfig, rng_seed: int) -> ChannelRealization:
    """Draw H1 and H2 with i.i.d. unit-variance complex Gaussian entries.

    Each entry is circularly symmetric with total variance 1 (real and
    imaginary parts carry variance 1/2 each).  The draw is a pure function
    of the seed; the generator is owned here and never shared.
    """
    rng = np.random.default_rng(rng_seed)
    h1 = _complex_gaussian(rng, (cfg.Kr, cfg.M))
    h2 = _complex_gaussian(rng, (cfg.N, cfg.Kt))
    return ChannelRealization(H1=h1, H2=h2)


def _complex_gaussian(rng, shape):
    scale = np.sqrt(0.5)
    return rng.standard_normal(shape) * scale + 1j * rng.standard_normal(shape) * scale


def spectrum(H: np.ndarray) -> Spectrum:
    """Descending squared singular values of H.

    Values below SPECTRUM_CLAMP_REL times the largest are clamped to
    exactly zero.  The sum of the values equals ||H||_F^2 up to the
    clamped mass.
    """
    H = np.asarray(H)
    if not np.all(np.isfinite(H.real)) or not np.all(np.isfinite(H.imag)):
        raise InvalidInputError("channel matrix contains non-finite entries")
    sv = np.linalg.svd(H, compute_uv=False)
    values = sv * sv
    if values.size and values[0] > 0.0:
        values[values < SPECTRUM_CLAMP_REL * values[0]] = 0.0
    return Spectrum(values=values, source_rank=int(np.count_nonzero(values)))


def reconstruct_covariance(H: np.ndarray, alloc: np.ndarray) -> CovarianceDesign:
    """Pair the right singular vectors of H with a power allocation.

    The allocation indexes the channel's singular values in decreasing
    order, so the resulting covariance puts alloc[i] on the i-th strongest
    eigendirection.  Its trace equals sum(alloc).
    """
    H = np.asarray(H)
    alloc = np.asarray(alloc, dtype=float)
    k = min(H.shape)
    if alloc.shape != (k,):
        raise InvalidInputError(
            f"allocation length {alloc.shape} does not match min dimension {k} of the channel"
        )
    if np.any(alloc < 0.0) or not np.all(np.isfinite(alloc)):
        raise InvalidInputError("allocation must be finite and non-negative")
    _, _, vh = np.linalg.svd(H)
    return CovarianceDesign(eigvecs=vh.conj().T[:, :k], eigvals=alloc.copy())
