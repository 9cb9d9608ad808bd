"""Worst-case achievable rates for a decode-and-forward MIMO relay link.

The library computes the half-duplex baseline (per-hop water-filling with
optimal time sharing) and the robust full-duplex rate, where the source
and relay powers play a min-max game against the worst interference
spectrum allowed by an uncertainty budget.  A Monte Carlo harness and the
``robust-relay`` CLI average the rates over random channel draws.
"""

from .channel import (
    ChannelRealization,
    CovarianceDesign,
    Spectrum,
    SystemConfig,
    reconstruct_covariance,
    sample_channel,
    spectrum,
)
from .errors import InvalidConfigError, InvalidInputError
from .fullduplex import FdResult, Mode, evaluate_g, fd_rate, mode_select
from .halfduplex import HdResult, hd_rate
from .harness import ExperimentSpec, RateReport, SweepPoint, emit_csv, run_sweep
from .majorize import (
    MajorizationReport,
    fiedler_bounds,
    majorization_report,
    spectral_reduction_equiv,
    common_basis_covariance,
)
from .waterfill import Allocation, capped_water_fill, water_fill
from .worstcase import RsiSpectrum, check_ordering_redundancy, interference_rate, worst_case_rsi

__version__ = "0.1.0"

__all__ = [
    "Allocation",
    "ChannelRealization",
    "CovarianceDesign",
    "ExperimentSpec",
    "FdResult",
    "HdResult",
    "InvalidConfigError",
    "InvalidInputError",
    "MajorizationReport",
    "Mode",
    "RateReport",
    "RsiSpectrum",
    "Spectrum",
    "SweepPoint",
    "SystemConfig",
    "capped_water_fill",
    "check_ordering_redundancy",
    "emit_csv",
    "evaluate_g",
    "fd_rate",
    "fiedler_bounds",
    "hd_rate",
    "interference_rate",
    "majorization_report",
    "mode_select",
    "reconstruct_covariance",
    "run_sweep",
    "sample_channel",
    "spectrum",
    "spectral_reduction_equiv",
    "common_basis_covariance",
    "water_fill",
    "worst_case_rsi",
]
