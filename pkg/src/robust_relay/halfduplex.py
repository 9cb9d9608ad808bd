"""Half-duplex baseline: per-hop water-filling plus optimal time sharing."""

from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization, SystemConfig, spectrum
from .waterfill import Allocation, water_fill


@dataclass
class HdResult:
    """Half-duplex rate with the time-share that equalizes the two hops."""

    rate: float
    r_sr: float
    r_rd: float
    alpha: float
    source_alloc: Allocation
    relay_alloc: Allocation


def hd_rate(ch: ChannelRealization, cfg: SystemConfig) -> HdResult:
    """Rate of the two-phase relay link with optimal time sharing.

    Each hop water-fills its own budget; the time-share alpha equalizes
    alpha * r_sr = (1 - alpha) * r_rd, giving the harmonic-style combined
    rate r_sr * r_rd / (r_sr + r_rd).  The uncertainty bound plays no role
    here: the relay never transmits while receiving.
    """
    s2_src = spectrum(ch.H1).values
    s2_rel = spectrum(ch.H2).values
    src = water_fill(s2_src, cfg.Ps)
    rel = water_fill(s2_rel, cfg.Pr)
    r_sr = _sum_rate(s2_src, src.powers)
    r_rd = _sum_rate(s2_rel, rel.powers)
    total = r_sr + r_rd
    if total > 0.0:
        rate = r_sr * r_rd / total
        alpha = r_rd / total
    else:
        rate = 0.0
        alpha = 0.5
    return HdResult(rate=rate, r_sr=r_sr, r_rd=r_rd, alpha=alpha,
                    source_alloc=src, relay_alloc=rel)


def _sum_rate(gains: np.ndarray, powers: np.ndarray) -> float:
    return float(np.sum(np.log2(1.0 + gains * powers)))
