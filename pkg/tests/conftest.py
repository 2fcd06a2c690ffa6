"""Shared fixtures and independent oracles for the test suite.

The three session fixtures run the full-size ensembles once and share them
across every test that needs them; together they take a few minutes.
"""

import numpy as np
import pytest

from rotorlab import RunConfig, build_initial_set, run_ensemble
from rotorlab.rotor import kick_coefficients


def dense_floquet_matrix(band, tau, halfwidth):
    """The one-step operator as an explicit dense matrix.

    Element (k, l) is i**(-(l-k)) J_{l-k} exp(-i tau l**2 / 2), zero outside
    the band; this is the brute-force counterpart of the banded apply.
    """
    m = 2 * halfwidth + 1
    coeffs = kick_coefficients(band)
    k = np.arange(-halfwidth, halfwidth + 1)
    u = np.zeros((m, m), dtype=np.complex128)
    for row in range(m):
        for col in range(m):
            s = col - row
            if abs(s) <= band.order_max:
                u[row, col] = (coeffs[band.order_max + s]
                               * np.exp(-0.5j * tau * float(k[col]) ** 2))
    return u


def beta_by_double_sum(u, amps):
    """Interference residual from the explicit pair sum.

    beta_k = sum over l != m of U_kl U_km* a_l a_m*, evaluated term by term
    (O(N**3)); tractable only on small bases, which is exactly its role as
    a test oracle.
    """
    m = amps.size
    beta = np.zeros(m)
    for ki in range(m):
        total = 0.0 + 0.0j
        for li in range(m):
            uli = u[ki, li]
            if uli == 0:
                continue
            ali = amps[li]
            for mi in range(m):
                if mi == li:
                    continue
                total += uli * np.conj(u[ki, mi]) * ali * np.conj(amps[mi])
        beta[ki] = total.real
    return beta


@pytest.fixture(scope="session")
def periodic_run():
    """The headline run: kappa 21, tau 1, 1000 kicks, 100 trajectories."""
    config = RunConfig(
        kappa=21.0,
        tau=1.0,
        kicks=1000,
        schedule="periodic",
        seed=1,
        basis_halfwidth=4096,
        initial_set=tuple(build_initial_set(50)),
        models=("quantum", "markov"),
    )
    return run_ensemble(config)


@pytest.fixture(scope="session")
def random_run():
    """Same physics, random kick intervals (uniform, half-width 0.5)."""
    config = RunConfig(
        kappa=21.0,
        tau=1.0,
        kicks=1000,
        schedule="random",
        jitter=0.5,
        seed=11,
        basis_halfwidth=4096,
        initial_set=tuple(build_initial_set(50)),
        models=("quantum", "markov"),
    )
    return run_ensemble(config)


@pytest.fixture(scope="session")
def qdkr_run():
    """Quasi-periodic double rotor at the golden period ratio."""
    config = RunConfig(
        kappa=21.0,
        tau=1.0,
        kicks=500,
        schedule="quasi_periodic",
        seed=1,
        basis_halfwidth=2560,
        initial_set=tuple(build_initial_set(50)),
        models=("quantum", "markov"),
    )
    return run_ensemble(config)
