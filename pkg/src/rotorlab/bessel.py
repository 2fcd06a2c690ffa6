"""Integer-order Bessel functions of the first kind on a symmetric band.

The kick part of the rotor's one-period evolution operator scatters
angular-momentum amplitudes with weights ``i**(-s) * J_s(kappa)``, so the
only special function this package needs is J_s at a fixed real argument,
for every integer order whose magnitude is non-negligible.

Values are generated by Miller's downward recurrence

    J_{s-1}(x) = (2 s / x) J_s(x) - J_{s+1}(x),

seeded far above the kept band and normalised with the even-order sum rule
``J_0(x) + 2 * sum_{m>=1} J_{2m}(x) = 1``.  Downward recurrence is stable
for all orders; the upward direction loses all accuracy once the order
exceeds the argument.  The band is trimmed so the discarded probability
``sum_{|s| > order_max} J_s(x)**2`` stays below a caller-chosen tolerance,
which is meaningful because ``sum_s J_s(x)**2 = 1`` exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Rescaling guard for the un-normalised recurrence values.
_RESCALE_LIMIT = 1e250
_RESCALE_FACTOR = 1e-250


@dataclass(frozen=True)
class BesselBand:
    """J_s(argument) for s = -order_max .. order_max.

    ``values[order_max + s]`` holds J_s.  The reflection symmetry
    J_{-s} = (-1)**s J_s is enforced by construction (the negative-order
    half is a signed copy of the positive half, so it is bit-identical).
    ``tail_tolerance`` is the bound the discarded probability satisfied
    when the band was trimmed.
    """

    argument: float
    order_max: int
    values: np.ndarray
    tail_tolerance: float

    def value(self, s: int) -> float:
        """J_s, zero outside the kept band."""
        if abs(s) > self.order_max:
            return 0.0
        return float(self.values[self.order_max + s])

    def orders(self) -> np.ndarray:
        return np.arange(-self.order_max, self.order_max + 1)

    def half(self) -> np.ndarray:
        """The non-negative orders J_0 .. J_order_max."""
        return self.values[self.order_max:]


def _band_heuristics(argument: float) -> tuple[int, int]:
    """Initial kept-band guess and recurrence start order.

    The decay turnover of J_s(x) sits near s = x, so the guess is
    x + 12 (x**(1/3) + 1); the recurrence starts enough orders above the
    band that the arbitrary seed has damped out by the time the kept
    orders are reached.
    """
    cbrt = argument ** (1.0 / 3.0)
    guess = int(math.ceil(argument + 12.0 * (cbrt + 1.0)))
    margin = max(15, int(math.ceil(5.0 * cbrt)))
    return guess, guess + margin


def _miller_half(argument: float, start: int) -> np.ndarray:
    """Normalised J_0 .. J_start by downward recurrence."""
    raw = np.zeros(start + 2)
    raw[start] = 1e-30
    two_over_x = 2.0 / argument
    for s in range(start, 0, -1):
        raw[s - 1] = s * two_over_x * raw[s] - raw[s + 1]
        if abs(raw[s - 1]) > _RESCALE_LIMIT:
            raw[s - 1:] *= _RESCALE_FACTOR
    # Sum the even-order rule from the small high orders up, then divide.
    norm = raw[0] + 2.0 * np.sum(raw[2::2][::-1])
    return raw[: start + 1] / norm


def bessel_band(argument: float, tail_tolerance: float) -> BesselBand:
    """Build the band of J_s(argument) with discarded probability below
    ``tail_tolerance``.

    Parameters
    ----------
    argument :
        Non-negative real argument (the dimensionless kick strength).
    tail_tolerance :
        Bound, in (0, 1), on ``sum_{|s| > order_max} J_s(argument)**2``.

    Raises
    ------
    ValueError
        If ``argument`` is negative or ``tail_tolerance`` is outside (0, 1).
    """
    if not math.isfinite(argument) or argument < 0.0:
        raise ValueError("argument must be a finite non-negative real")
    if not (0.0 < tail_tolerance < 1.0):
        raise ValueError("tail_tolerance must lie strictly between 0 and 1")
    if argument == 0.0:
        # J_s(0) is the Kronecker delta at s = 0.
        return BesselBand(0.0, 0, np.array([1.0]), tail_tolerance)

    guess, start = _band_heuristics(argument)
    for attempt in range(6):
        half = _miller_half(argument, start)
        squares = half * half
        # discarded[i] = 2 * sum_{s >= i} J_s**2, the probability lost if the
        # band were trimmed at order i - 1 (both signs counted).
        discarded = 2.0 * np.cumsum(squares[::-1])[::-1]
        below = np.nonzero(discarded < tail_tolerance)[0]
        if below.size:
            order_max = int(below[0]) - 1
            if order_max < 0:
                order_max = 0
            # The top kept order must sit well below the recurrence seed or
            # its relative accuracy is not guaranteed.
            if start - order_max >= 15:
                return _assemble(argument, order_max, half, tail_tolerance)
        start += 40 + 20 * attempt
    raise ValueError(
        f"could not satisfy tail_tolerance={tail_tolerance:g} at "
        f"argument={argument:g} with a stable recurrence"
    )


def _assemble(argument: float, order_max: int, half: np.ndarray,
              tail_tolerance: float) -> BesselBand:
    full = np.empty(2 * order_max + 1)
    full[order_max:] = half[: order_max + 1]
    for s in range(1, order_max + 1):
        full[order_max - s] = half[s] if s % 2 == 0 else -half[s]
    return BesselBand(float(argument), order_max, full, float(tail_tolerance))
