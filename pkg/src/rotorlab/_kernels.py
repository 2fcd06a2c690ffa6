"""Batched propagation kernels for ensemble runs.

Both kernels exploit the reflection symmetry of the one-kick bands
(c_{-s} = c_s for the complex kick coefficients, T_{-s} = T_s for the
transition probabilities), so they take only the non-negative half of each
band and halve the inner-loop work.  Rows are independent trajectories;
parallel scheduling never changes results because each row is written by
exactly one iteration.

Falls back to numpy slice arithmetic when numba is unavailable (slower,
identical contracts).
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit, prange
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False


if HAVE_NUMBA:

    @njit(parallel=True, cache=True)
    def banded_step_batch(amps, phases, coeffs_half, order_max, out):
        """out[t, k] = sum_s c_s phase[t, k+s] amps[t, k+s], |s| <= order_max.

        ``phases`` may have a single row shared by every trajectory.
        """
        ntraj, m = amps.shape
        nphase = phases.shape[0]
        for t in prange(ntraj):
            row = phases[t % nphase]
            tmp = np.empty(m, dtype=np.complex128)
            for l in range(m):
                tmp[l] = row[l] * amps[t, l]
            for k in range(m):
                lo = k if k < order_max else order_max
                hi = (m - 1 - k) if (m - 1 - k) < order_max else order_max
                pair = lo if lo < hi else hi
                acc = coeffs_half[0] * tmp[k]
                for s in range(1, pair + 1):
                    acc += coeffs_half[s] * (tmp[k + s] + tmp[k - s])
                for s in range(pair + 1, hi + 1):
                    acc += coeffs_half[s] * tmp[k + s]
                for s in range(pair + 1, lo + 1):
                    acc += coeffs_half[s] * tmp[k - s]
                out[t, k] = acc

    @njit(parallel=True, cache=True)
    def band_correlate_batch(probs, band_half, order_max, out):
        """out[t, k] = sum_s T_s probs[t, k+s] with a symmetric real band."""
        ntraj, m = probs.shape
        for t in prange(ntraj):
            for k in range(m):
                lo = k if k < order_max else order_max
                hi = (m - 1 - k) if (m - 1 - k) < order_max else order_max
                pair = lo if lo < hi else hi
                acc = band_half[0] * probs[t, k]
                for s in range(1, pair + 1):
                    acc += band_half[s] * (probs[t, k + s] + probs[t, k - s])
                for s in range(pair + 1, hi + 1):
                    acc += band_half[s] * probs[t, k + s]
                for s in range(pair + 1, lo + 1):
                    acc += band_half[s] * probs[t, k - s]
                out[t, k] = acc

else:  # pragma: no cover - exercised only without numba

    def banded_step_batch(amps, phases, coeffs_half, order_max, out):
        ntraj, m = amps.shape
        nphase = phases.shape[0]
        tmp = (phases if nphase == ntraj else np.broadcast_to(phases, amps.shape)) * amps
        out[:] = coeffs_half[0] * tmp
        for s in range(1, order_max + 1):
            c = coeffs_half[s]
            out[:, :m - s] += c * tmp[:, s:]
            out[:, s:] += c * tmp[:, :m - s]

    def band_correlate_batch(probs, band_half, order_max, out):
        m = probs.shape[1]
        out[:] = band_half[0] * probs
        for s in range(1, order_max + 1):
            c = band_half[s]
            out[:, :m - s] += c * probs[:, s:]
            out[:, s:] += c * probs[:, :m - s]
