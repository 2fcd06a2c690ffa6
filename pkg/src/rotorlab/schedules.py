"""Kick-interval sequences for the three rotor variants.

All intervals are dimensionless (the same units as the Floquet step's tau).
The periodic rotor repeats one interval; the random variant draws each
interval uniformly from a window around the base period; the quasi-periodic
double rotor merges two pulse trains whose periods stand in an irrational
ratio, which yields a deterministic but non-repeating interval sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0

# Two merged kick times closer than this (relative to the base period) are
# treated as a coincidence and collapse into a single kick.
_COINCIDENCE_TOLERANCE = 1e-12

_KINDS = ("periodic", "random", "quasi_periodic")


@dataclass(frozen=True)
class KickSchedule:
    """Deterministic generator of kick intervals.

    ``intervals(count, trajectory_index)`` returns the first ``count``
    intervals for one trajectory.  Periodic and quasi-periodic schedules
    ignore the trajectory index; the random schedule derives an independent,
    reproducible stream per trajectory from a counter-based generator keyed
    on (seed, trajectory_index), so ensembles are bit-reproducible for any
    worker layout.
    """

    kind: str
    base_period: float
    jitter: float = 0.0
    ratio: float = GOLDEN_RATIO
    seed: int = 0
    horizon: int = 1

    def intervals(self, count: int, trajectory_index: int = 0) -> np.ndarray:
        if count < 1:
            raise ValueError("count must be at least 1")
        if self.kind == "periodic":
            return np.full(count, self.base_period)
        if self.kind == "random":
            key = np.array([self.seed, trajectory_index], dtype=np.uint64)
            gen = np.random.Generator(np.random.Philox(key=key))
            low = self.base_period * (1.0 - self.jitter)
            high = self.base_period * (1.0 + self.jitter)
            return gen.uniform(low, high, count)
        return _merged_train_intervals(self.base_period, self.ratio, count)


def periodic_schedule(period: float) -> KickSchedule:
    """Constant interval sequence."""
    _require_positive(period, "period")
    return KickSchedule("periodic", float(period))


def random_schedule(period: float, half_width_fraction: float = 0.5,
                    seed: int = 0) -> KickSchedule:
    """Intervals drawn independently and uniformly from
    [period (1 - f), period (1 + f)] with f = half_width_fraction.

    f must lie strictly inside (0, 1), which keeps every interval positive
    and the mean equal to the base period.
    """
    _require_positive(period, "period")
    if not (0.0 < half_width_fraction < 1.0):
        raise ValueError("half_width_fraction must lie strictly between 0 and 1")
    if seed < 0:
        raise ValueError("seed must be non-negative")
    return KickSchedule("random", float(period), jitter=float(half_width_fraction),
                        seed=int(seed))


def quasiperiodic_schedule(period1: float, ratio: float = GOLDEN_RATIO,
                           horizon: int = 1) -> KickSchedule:
    """Merge of two pulse trains with periods period1 and period1 * ratio.

    Kick times {n period1} and {m period1 ratio} are merged in ascending
    order; coincidences collapse to a single kick.  An irrational ratio
    (default the golden ratio) makes the interval sequence non-repeating;
    rational ratios are accepted for testing and give an eventually
    periodic merge.
    """
    _require_positive(period1, "period1")
    _require_positive(ratio, "ratio")
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    return KickSchedule("quasi_periodic", float(period1), ratio=float(ratio),
                        horizon=int(horizon))


def _merged_train_intervals(period1: float, ratio: float, count: int) -> np.ndarray:
    # Train 1 alone supplies count + 2 events by time (count + 2) * period1,
    # so generating both trains up to that horizon always suffices.
    n1 = count + 2
    period2 = period1 * ratio
    n2 = int(math.floor(n1 * period1 / period2)) + 2
    times = np.concatenate([
        period1 * np.arange(1, n1 + 1, dtype=np.float64),
        period2 * np.arange(1, n2 + 1, dtype=np.float64),
    ])
    times.sort(kind="stable")
    gaps = np.diff(times)
    keep = np.concatenate([[True], gaps > _COINCIDENCE_TOLERANCE * period1])
    times = times[keep]
    intervals = np.diff(times, prepend=0.0)
    return intervals[:count]


def _require_positive(value: float, name: str) -> None:
    if not (math.isfinite(value) and value > 0.0):
        raise ValueError(f"{name} must be a finite positive real")
