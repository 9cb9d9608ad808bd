"""Water-filling power allocation, plain and under descending product caps.

The plain solver maximizes sum(log2(1 + g_i p_i)) on a power budget.  The
capped variant additionally enforces raw_i * p_i >= raw_{i+1} * p_{i+1}
between consecutive streams, the ordering needed so that the allocation
stays consistent with a common-eigenbasis transmit design; the caps act
like lids on top of the water, so pooled streams share a product level
and the water level is no longer common to all active streams.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import InvalidInputError


@dataclass
class Allocation:
    """Non-negative stream powers plus the water level that produced them.

    For the plain solver, every active stream satisfies
    1/gain + power == water_level.  For the capped solver the reported
    level is the budget-multiplier level: streams whose cap binds sit
    below it.  ``degenerate`` marks the all-zero allocation returned when
    there is nothing to fill (zero budget or all-zero gains).
    """

    powers: np.ndarray
    water_level: float
    active_count: int
    degenerate: bool = field(default=False)

    @property
    def total(self) -> float:
        return float(np.sum(self.powers))


def _check_gains(gains) -> np.ndarray:
    gains = np.asarray(gains, dtype=float)
    if gains.ndim != 1:
        raise InvalidInputError("gains must be a 1-D vector")
    if not np.all(np.isfinite(gains)) or np.any(gains < 0.0):
        raise InvalidInputError("gains must be finite and non-negative")
    if np.any(np.diff(gains) > 0.0):
        raise InvalidInputError("gains must be sorted in descending order")
    return gains


def water_fill(gains, budget: float) -> Allocation:
    """Classical water-filling: powers = max(water_level - 1/gain, 0).

    The water level solves the budget equality over the active set, found
    with the sorted-prefix closed form.  Empty or all-zero gains with a
    positive budget yield a degenerate all-zero allocation rather than an
    error.
    """
    gains = _check_gains(gains)
    if budget < 0.0 or not np.isfinite(budget):
        raise InvalidInputError("budget must be finite and non-negative")
    if gains.size == 0:
        return Allocation(np.zeros(0), 0.0, 0, degenerate=True)
    powers, tau, active = _kernels.water_fill(gains, float(budget))
    return Allocation(powers, float(tau), int(active), degenerate=active == 0)


def capped_water_fill(effective_gains, raw_gains, budget: float) -> Allocation:
    """Water-filling with descending caps raw_i*p_i >= raw_{i+1}*p_{i+1}.

    ``raw_gains`` is the descending channel spectrum that defines the
    caps; ``effective_gains`` is the interference-degraded gain actually
    seen by each stream.  When no cap binds the result coincides with
    plain water-filling on the effective gains; otherwise the exact
    optimum is found in product space (pool-adjacent-violators under a
    bisected budget multiplier).  If a stream gets zero power, every
    later stream does too.
    """
    raw = _check_gains(raw_gains)
    eff = np.asarray(effective_gains, dtype=float)
    if eff.shape != raw.shape:
        raise InvalidInputError("effective and raw gain vectors must have the same length")
    if not np.all(np.isfinite(eff)) or np.any(eff < 0.0):
        raise InvalidInputError("effective gains must be finite and non-negative")
    if np.any((eff > 0.0) != (raw > 0.0)):
        raise InvalidInputError("effective gains must vanish exactly where raw gains do")
    if budget < 0.0 or not np.isfinite(budget):
        raise InvalidInputError("budget must be finite and non-negative")
    if raw.size == 0:
        return Allocation(np.zeros(0), 0.0, 0, degenerate=True)
    powers, level, active = _kernels.capped_water_fill(eff, raw, float(budget))
    return Allocation(powers, float(level), int(active), degenerate=active == 0)
