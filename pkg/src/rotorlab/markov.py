"""Markov decomposition of the quantum probability update.

Writing P_k(n+1) = sum_l T_kl P_l(n) + beta_k(n) with T_kl = |U_kl|**2
splits each step's probability flow into a doubly-stochastic Markov chain
and an interference residual beta.  For the kicked rotor the free-rotation
phase has unit modulus, so T_kl = J_{l-k}(kappa)**2 depends only on l - k
and the Markov step is a symmetric band convolution.

The residual is computed as exactly that, a residual: the defining double
sum over amplitude pairs is O(N**3) per kick and algebraically identical,
so it survives only as a small-basis test oracle.

Transition rates W_s = (T_s - delta_s0) / dt turn the chain into a master
equation whose continuum limit is a diffusion equation with coefficient
D = kappa**2 / (2 dt); :func:`gaussian_reference` materialises its
spreading-gaussian solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bessel import BesselBand, bessel_band
from .rotor import Distribution


@dataclass(frozen=True)
class TransitionMatrix:
    """Translation-invariant transition band T_s = J_s(kappa)**2.

    ``band_values[order_max + s]`` holds the probability of a momentum jump
    by s in one kick.  The implied matrix T_kl = T_{l-k} is doubly
    stochastic up to the band's tail tolerance, and T_s = T_{-s}.
    """

    kappa: float
    order_max: int
    band_values: np.ndarray
    tail_tolerance: float

    @classmethod
    def from_bessel(cls, band: BesselBand) -> "TransitionMatrix":
        return cls(band.argument, band.order_max,
                   band.values * band.values, band.tail_tolerance)

    def half(self) -> np.ndarray:
        """T_0 .. T_order_max."""
        return self.band_values[self.order_max:]

    def total(self) -> float:
        return float(np.sum(self.band_values))

    def jump_second_moment(self) -> float:
        """sum_s s**2 T_s, the per-kick growth of the second moment."""
        s = np.arange(-self.order_max, self.order_max + 1, dtype=np.float64)
        return float(np.sum(s * s * self.band_values))


@dataclass(frozen=True)
class InterferenceVector:
    """Interference residual beta_k of one step, over k in [-N, N].

    beta is real (it differences two real probability vectors) and sums to
    zero whenever no probability escaped the basis during the step.
    """

    beta: np.ndarray
    basis_halfwidth: int

    def total(self) -> float:
        return float(np.sum(self.beta))


def transition_band(kappa: float, tail_tolerance: float) -> TransitionMatrix:
    """Transition band at kick strength kappa; see :func:`bessel_band` for
    the tail criterion and domain errors."""
    return TransitionMatrix.from_bessel(bessel_band(kappa, tail_tolerance))


def band_convolve_same(values: np.ndarray, band: np.ndarray) -> np.ndarray:
    """Convolve with an odd-length band, keeping the input window.

    Contributions that would land outside the window are dropped and
    values outside it read as zero.  Padding first keeps numpy's 'same'
    mode centred on the data even when the band is wider than the basis.
    """
    if band.size % 2 != 1:
        raise ValueError("band length must be odd (2S + 1)")
    half = band.size // 2
    padded = np.concatenate([np.zeros(half), values, np.zeros(half)])
    return np.convolve(padded, band, mode="same")[half:half + values.size]


def _convolve(probabilities: np.ndarray, t: TransitionMatrix) -> np.ndarray:
    # Symmetric kernel, so convolution and correlation coincide.
    return band_convolve_same(probabilities, t.band_values)


def markov_step(p: Distribution, t: TransitionMatrix) -> Distribution:
    """One Markov-chain step: P'_k = sum_l T_{l-k} P_l.

    A doubly-stochastic map, so it can only raise the entropy (H-theorem)
    and leaves the uniform distribution fixed.  Normalisation is preserved
    up to the band tail as long as the input keeps clear of the basis
    boundary.
    """
    return Distribution(_convolve(p.probabilities, t), p.basis_halfwidth)


def interference_residual(p_next: Distribution, p_prev: Distribution,
                          t: TransitionMatrix) -> InterferenceVector:
    """beta = p_next - (Markov prediction from p_prev).

    ``p_next`` must be the exact quantum occupation one step after the
    state whose occupation is ``p_prev``; beta then equals the pair sum
    over distinct amplitude products, without the O(N**3) cost.
    """
    if p_next.basis_halfwidth != p_prev.basis_halfwidth:
        raise ValueError("occupation vectors live on different bases")
    beta = p_next.probabilities - _convolve(p_prev.probabilities, t)
    return InterferenceVector(beta, p_next.basis_halfwidth)


def rate_band(t: TransitionMatrix, delta_t: float) -> np.ndarray:
    """Transition rates W_s = (T_s - delta_s0) / delta_t.

    Off-diagonal rates are non-negative and the band sums to zero up to
    the tail tolerance, the generator structure of a master equation.
    """
    if not (math.isfinite(delta_t) and delta_t > 0.0):
        raise ValueError("delta_t must be a finite positive real")
    w = t.band_values.copy()
    w[t.order_max] -= 1.0
    w /= delta_t
    return w


def diffusion_coefficient(t: TransitionMatrix, delta_t: float) -> float:
    """Continuum diffusion coefficient D = 2 sum_{l>=1} W_l l**2.

    For the kicked-rotor band this equals kappa**2 / (2 delta_t) up to the
    band tail, by the Bessel second-moment identity.
    """
    w = rate_band(t, delta_t)
    l = np.arange(1, t.order_max + 1, dtype=np.float64)
    return float(2.0 * np.sum(w[t.order_max + 1:] * l * l))


def gaussian_reference(d: float, kicks: int, k0: int, basis_halfwidth: int,
                       delta_t: float = 1.0) -> Distribution:
    """Spreading-gaussian solution of the diffusion equation after n kicks.

    Variance is d * kicks * delta_t; with d the per-interval coefficient
    kappa**2 / (2 dt) this is kappa**2 n / 2 regardless of the interval.
    The profile is sampled on the integer basis and normalised over it.
    Zero variance degenerates to the point distribution at k0.
    """
    if d < 0.0:
        raise ValueError("diffusion coefficient d must be non-negative")
    if kicks < 1:
        raise ValueError("kicks must be at least 1")
    if abs(k0) > basis_halfwidth:
        raise ValueError("center k0 lies outside the basis")
    n = basis_halfwidth
    variance = d * kicks * delta_t
    p = np.zeros(2 * n + 1)
    if variance == 0.0:
        p[n + k0] = 1.0
        return Distribution(p, n)
    k = np.arange(-n, n + 1, dtype=np.float64)
    p = np.exp(-0.5 * (k - k0) ** 2 / variance)
    p /= p.sum()
    return Distribution(p, n)
