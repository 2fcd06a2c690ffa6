"""Acceptance criteria, one test per criterion.

Each test prints one PASS/FAIL line (run with ``pytest -s`` to see them all)
and then asserts at the stated tolerance.  The three large ensembles are
session fixtures shared across criteria; see conftest.py for their exact
configurations.
"""

import numpy as np
import pytest

from rotorlab import (
    Distribution,
    FloquetStep,
    QuantumState,
    apply_step_banded,
    apply_step_spectral,
    bessel_band,
    canonical_profile,
    diffusion_coefficient,
    entropy,
    fit_localization,
    initial_state,
    interference_residual,
    markov_step,
    occupation,
    transition_band,
)
from rotorlab.markov import TransitionMatrix

from conftest import beta_by_double_sum, dense_floquet_matrix

KAPPA = 21.0
SLOPE = KAPPA ** 2 / 2.0  # 220.5


def _report(number, ok, detail):
    print(f"ACCEPTANCE {number:2d} {'PASS' if ok else 'FAIL'}: {detail}")


@pytest.mark.slow
def test_criterion_01_markov_slope(periodic_run):
    q = periodic_run.series["quantum"]
    kicks = periodic_run.kick_index.astype(float)
    relative = np.abs(q["markov_energy_cum"] / (kicks * SLOPE) - 1.0)
    worst = float(relative.max())
    runtime = periodic_run.provenance["runtime_seconds"]
    ok = worst < 0.01 and runtime < 300.0
    _report(1, ok, f"cumulative Markov term slope off by at most "
                   f"{worst:.2e} (tolerance 1e-2); runtime {runtime:.0f}s "
                   f"(limit 300s)")
    assert worst < 0.01
    assert runtime < 300.0


@pytest.mark.slow
def test_criterion_02_localization_onset(periodic_run):
    q = periodic_run.series["quantum"]["energy"]
    m = periodic_run.series["markov"]["energy"]
    quantum_ratio = float(q[999] / q[199])
    markov_ratio = float(m[999] / m[199])
    ok = quantum_ratio < 1.3 and markov_ratio > 4.0
    _report(2, ok, f"quantum E(1000)/E(200) = {quantum_ratio:.3f} "
                   f"(bound < 1.3); Markov-only ratio = {markov_ratio:.3f} "
                   f"(bound > 4)")
    assert markov_ratio > 4.0
    assert quantum_ratio < 1.3


@pytest.mark.slow
def test_criterion_03_interference_dormancy(periodic_run):
    q = periodic_run.series["quantum"]
    early = slice(0, 30)
    ratio = np.abs(q["interference_energy_cum"][early]) / \
        q["markov_energy_cum"][early]
    worst = float(ratio.max())
    peak_kick = int(np.argmax(ratio)) + 1
    ok = worst < 0.10
    _report(3, ok, f"|interference|/Markov peaks at {worst:.3f} on kick "
                   f"{peak_kick} within the first 30 kicks (bound 0.10 at "
                   f"every kick; ratio at kick 30 is {float(ratio[-1]):.3f})")
    assert worst < 0.10


@pytest.mark.slow
def test_criterion_04_entropy_dichotomy(periodic_run, random_run):
    s_periodic = periodic_run.series["quantum"]["entropy"]
    s_random = random_run.series["quantum"]["entropy"]
    plateau = abs(float(s_periodic[999] - s_periodic[499]))
    growth = float(s_random[999] - s_random[499])
    ok = plateau < 0.1 and growth > 0.3
    _report(4, ok, f"periodic entropy drift {plateau:.4f} nats over kicks "
                   f"500..1000 (bound < 0.1); random growth {growth:.4f} "
                   f"(bound > 0.3)")
    assert plateau < 0.1
    assert growth > 0.3


@pytest.mark.slow
def test_criterion_05_exponential_profile(periodic_run):
    fit = fit_localization(periodic_run.final_distributions["quantum"], 0,
                           floor=1e-10)
    round_trips = {}
    for l0 in (5.0, 10.0, 50.0):
        recovered = fit_localization(canonical_profile(l0, 0, 1024), 0)
        round_trips[l0] = abs(recovered.length_estimate / l0 - 1.0)
    worst_round_trip = max(round_trips.values())
    ok = fit.fit_quality > 0.9 and worst_round_trip < 0.02
    _report(5, ok, f"saturated profile log-fit R^2 = {fit.fit_quality:.4f} "
                   f"(bound > 0.9), length {fit.length_estimate:.1f}; "
                   f"round-trip error at most {worst_round_trip:.4f} "
                   f"(bound 0.02)")
    assert fit.fit_quality > 0.9
    assert worst_round_trip < 0.02


@pytest.mark.slow
def test_criterion_06_decomposition_exactness(periodic_run):
    split = periodic_run.decomposition_max
    telescoped = periodic_run.closure_max
    ok = split < 1e-8 and telescoped < 1e-8
    _report(6, ok, f"energy-split defect {split:.2e}, telescoped "
                   f"occupation defect {telescoped:.2e} after 1000 kicks "
                   f"(bounds 1e-8)")
    assert split < 1e-8
    assert telescoped < 1e-8


def test_criterion_07_brute_force_interference_oracle():
    halfwidth = 8
    kappa = 2.0
    band = bessel_band(kappa, 1e-16)
    t = TransitionMatrix.from_bessel(band)
    u = dense_floquet_matrix(band, 1.0, halfwidth)
    state = initial_state(0, halfwidth)
    step = FloquetStep(kappa, 1.0)
    worst = 0.0
    for _ in range(3):
        before = occupation(state)
        next_state = apply_step_banded(state, step, band)
        beta = interference_residual(occupation(next_state), before, t)
        oracle = beta_by_double_sum(u, state.amplitudes)
        worst = max(worst, float(np.max(np.abs(beta.beta - oracle))))
        state = next_state
    ok = worst < 1e-12
    _report(7, ok, f"residual vs O(N^3) pair-sum oracle differs by "
                   f"{worst:.2e} (bound 1e-12, N=8, kappa=2, 3 kicks)")
    assert worst < 1e-12


@pytest.mark.slow
def test_criterion_08_h_theorem(periodic_run, random_run):
    t = transition_band(KAPPA, 1e-16)
    rng = np.random.default_rng(2026)
    n = 256
    pad = t.order_max
    worst_drop = 0.0
    for _ in range(1000):
        raw = np.zeros(2 * n + 1)
        interior = rng.random(2 * n + 1 - 2 * pad)
        raw[pad:-pad] = interior / interior.sum()
        p = Distribution(raw, n)
        drop = entropy(markov_step(p, t)) - entropy(p)
        worst_drop = min(worst_drop, float(drop))
    chain_drop = min(periodic_run.markov_entropy_min_delta,
                     random_run.markov_entropy_min_delta)
    ok = worst_drop >= -1e-12 and chain_drop >= -1e-12
    _report(8, ok, f"smallest entropy change: {worst_drop:.2e} over 1000 "
                   f"random distributions, {chain_drop:.2e} over all chain "
                   f"trajectories (bound -1e-12)")
    assert worst_drop >= -1e-12
    assert chain_drop >= -1e-12


@pytest.mark.slow
def test_criterion_09_diffusion_coefficient(periodic_run):
    d = diffusion_coefficient(transition_band(KAPPA, 1e-16), 1.0)
    chain_moment = float(periodic_run.series["markov"]["second_moment"][49])
    expected = SLOPE * 50.0
    moment_error = abs(chain_moment / expected - 1.0)
    ok = abs(d - 220.5) < 0.1 and moment_error < 0.02
    _report(9, ok, f"D(kappa=21, dt=1) = {d:.4f} (220.5 +/- 0.1); chain "
                   f"second moment at kick 50 off by {moment_error:.2e} "
                   f"(bound 0.02)")
    assert abs(d - 220.5) < 0.1
    assert moment_error < 0.02


@pytest.mark.slow
def test_criterion_10_path_equivalence():
    band = bessel_band(KAPPA, 1e-24)
    step = FloquetStep(KAPPA, 1.0)
    rng = np.random.default_rng(77)
    halfwidth = 128
    size = 2 * halfwidth + 1
    worst = 0.0
    for _ in range(100):
        amps = rng.normal(size=size) + 1j * rng.normal(size=size)
        amps /= np.linalg.norm(amps)
        state = QuantumState(amps, 0, halfwidth)
        banded = state
        spectral = state
        for _ in range(100):
            banded = apply_step_banded(banded, step, band)
            spectral = apply_step_spectral(spectral, step)
            worst = max(worst, float(np.max(np.abs(
                banded.amplitudes - spectral.amplitudes))))

    drift_state = initial_state(0, 4096)
    for _ in range(1000):
        drift_state = apply_step_banded(drift_state, step, band)
    banded_drift = abs(drift_state.norm() - 1.0)
    drift_state = initial_state(0, 4096)
    for _ in range(1000):
        drift_state = apply_step_spectral(drift_state, step)
    spectral_drift = abs(drift_state.norm() - 1.0)

    ok = worst < 1e-8 and banded_drift < 1e-9 and spectral_drift < 1e-9
    _report(10, ok, f"paths agree to {worst:.2e} per amplitude over 100 "
                    f"states x 100 kicks (bound 1e-8); 1000-kick norm "
                    f"drift {banded_drift:.2e} banded / {spectral_drift:.2e} "
                    f"spectral (bound 1e-9)")
    assert worst < 1e-8
    assert banded_drift < 1e-9
    assert spectral_drift < 1e-9


@pytest.mark.slow
def test_criterion_11_quasiperiodic_diffusion(qdkr_run):
    q = float(qdkr_run.series["quantum"]["second_moment"][499])
    m = float(qdkr_run.series["markov"]["second_moment"][499])
    deviation = abs(q / m - 1.0)
    ok = deviation < 0.15
    _report(11, ok, f"quasi-periodic quantum second moment within "
                    f"{deviation:.3f} of the Markov chain at kick 500 "
                    f"(bound 0.15)")
    assert deviation < 0.15
