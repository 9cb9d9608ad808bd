"""Robust full-duplex rate: saddle-point inner loop plus relay-power bisection.

For a fixed relay power P, the relay-destination rate is plain
water-filling while the source-relay rate is the value of a min-max game
between the source powers (capped water-filling) and the worst-case
interference (closed-form budget split); best responses are alternated
until the interference spectrum stops moving.  R_sr falls and R_rd rises
with P, so g(P) = R_sr - R_rd has a single zero which bisection finds;
if even the full relay budget leaves g >= 0, the relay spends all of it.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels
from .channel import ChannelRealization, SystemConfig, spectrum
from .errors import InvalidInputError
from .halfduplex import HdResult
from .waterfill import Allocation, capped_water_fill, water_fill
from .worstcase import RsiSpectrum


class Mode(Enum):
    HD = "HD"
    FD = "FD"


@dataclass
class FdResult:
    """Worst-case full-duplex rate and the allocations achieving it."""

    rate: float
    r_sr: float
    r_rd: float
    relay_power_used: float
    gamma_s: Allocation
    gamma_r: Allocation
    rsi: RsiSpectrum
    inner_iterations: int
    outer_iterations: int
    converged: bool


def evaluate_g(P: float, ch: ChannelRealization, cfg: SystemConfig):
    """g(P) = R_sr(P) - R_rd(P) together with the solution at that power.

    The strongest min(source streams, relay streams) relay powers enter
    the interference coupling; the remaining relay streams still count
    toward R_rd.
    """
    if not 0.0 <= P <= cfg.Pr:
        raise InvalidInputError(f"relay power {P} outside [0, {cfg.Pr}]")
    s2_src = spectrum(ch.H1).values
    s2_rel = spectrum(ch.H2).values
    g, r_sr, r_rd, gamma_s, gamma_r, coupled, sigma2, lam, sweeps, conv = _kernels.evaluate_g(
        s2_src, s2_rel, cfg.Ps, cfg.T, float(P)
    )
    result = FdResult(
        rate=min(r_sr, r_rd),
        r_sr=r_sr,
        r_rd=r_rd,
        relay_power_used=float(P),
        gamma_s=_source_allocation(s2_src, coupled, sigma2, gamma_s, cfg.Ps),
        gamma_r=_relay_allocation(s2_rel, gamma_r, float(P)),
        rsi=RsiSpectrum(sigma2=sigma2, water_level=lam),
        inner_iterations=int(sweeps),
        outer_iterations=0,
        converged=bool(conv),
    )
    return g, result


def _relay_allocation(s2_rel, powers, P) -> Allocation:
    # Re-derive the water level; the kernel returns only the powers.
    level = water_fill(s2_rel, P).water_level
    return Allocation(powers, level, int(np.count_nonzero(powers)))


def _source_allocation(s2_src, coupled, sigma2, powers, ps) -> Allocation:
    eff = s2_src / (1.0 + coupled * sigma2)
    level = capped_water_fill(eff, s2_src, ps).water_level if ps > 0 else 0.0
    return Allocation(powers, level, int(np.count_nonzero(powers)))


def fd_rate(ch: ChannelRealization, cfg: SystemConfig) -> FdResult:
    """Worst-case full-duplex rate min(R_sr, R_rd) at the best relay power."""
    s2_src = spectrum(ch.H1).values
    s2_rel = spectrum(ch.H2).values
    rate, r_sr, r_rd, p_used, gamma_s, gamma_r, sigma2, lam, sweeps, outer, conv = (
        _kernels.fd_solve(s2_src, s2_rel, cfg.Ps, cfg.Pr, cfg.T)
    )
    coupled = np.zeros(len(s2_src))
    m = min(len(s2_src), len(gamma_r))
    coupled[:m] = gamma_r[:m]
    return FdResult(
        rate=rate,
        r_sr=r_sr,
        r_rd=r_rd,
        relay_power_used=float(p_used),
        gamma_s=_source_allocation(s2_src, coupled, sigma2, gamma_s, cfg.Ps),
        gamma_r=_relay_allocation(s2_rel, gamma_r, float(p_used)),
        rsi=RsiSpectrum(sigma2=sigma2, water_level=float(lam)),
        inner_iterations=int(sweeps),
        outer_iterations=int(outer),
        converged=bool(conv),
    )


def mode_select(hd: HdResult, fd: FdResult):
    """Pick the operating mode with the larger rate; ties go full-duplex."""
    if fd.rate >= hd.rate:
        return Mode.FD, fd.rate
    return Mode.HD, hd.rate
