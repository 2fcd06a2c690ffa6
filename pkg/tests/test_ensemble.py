"""Ensemble orchestration: model co-propagation, closure, determinism."""

import numpy as np
import pytest

from rotorlab import (
    EdgeOccupationError,
    FloquetStep,
    RunConfig,
    apply_step_banded,
    bessel_band,
    build_initial_set,
    energy,
    initial_state,
    markov_step,
    occupation,
    run_ensemble,
)
from rotorlab.markov import TransitionMatrix


def small_config(**overrides):
    base = dict(
        kappa=2.0,
        tau=1.0,
        kicks=5,
        schedule="periodic",
        seed=3,
        basis_halfwidth=96,
        initial_set=tuple(build_initial_set(2)),
        models=("quantum", "markov"),
    )
    base.update(overrides)
    return RunConfig(**base)


class TestBuildInitialSet:
    def test_single_pair(self):
        assert build_initial_set(1) == [-1, 1]

    def test_fifty_pairs(self):
        values = build_initial_set(50)
        assert len(values) == 100
        assert sorted(values) == sorted(
            [k for i in range(1, 51) for k in (-i, i)])

    def test_domain_error(self):
        with pytest.raises(ValueError):
            build_initial_set(0)


class TestRunEnsemble:
    def test_first_kick_quantum_equals_markov(self):
        # With a single initial amplitude the interference residual of the
        # first kick vanishes, so both models coincide.
        result = run_ensemble(small_config(kicks=1))
        q = result.series["quantum"]
        m = result.series["markov"]
        assert q["energy"][0] == pytest.approx(m["energy"][0], abs=1e-12)
        assert q["entropy"][0] == pytest.approx(m["entropy"][0], abs=1e-12)
        dq = result.final_distributions["quantum"].probabilities
        dm = result.final_distributions["markov"].probabilities
        assert np.max(np.abs(dq - dm)) < 1e-14

    def test_deterministic_rerun(self):
        a = run_ensemble(small_config(schedule="random", kicks=20))
        b = run_ensemble(small_config(schedule="random", kicks=20))
        for model in a.series:
            for column in a.series[model]:
                np.testing.assert_array_equal(a.series[model][column],
                                              b.series[model][column])
        np.testing.assert_array_equal(
            a.final_distributions["quantum"].probabilities,
            b.final_distributions["quantum"].probabilities)
        assert a.provenance["config_hash"] == b.provenance["config_hash"]

    def test_telescoping_closure_small_run(self):
        result = run_ensemble(small_config(kicks=50, basis_halfwidth=512))
        assert result.closure_max < 1e-12
        assert result.decomposition_max < 1e-10

    def test_energy_decomposition_columns_close(self):
        result = run_ensemble(small_config(kicks=30, basis_halfwidth=256))
        q = result.series["quantum"]
        reconstructed = (q["markov_energy_cum"] + q["interference_energy_cum"]
                         + result.initial_energy)
        np.testing.assert_allclose(q["energy"], reconstructed, atol=1e-8)

    def test_matches_single_trajectory_operations(self):
        # The batched kernels must reproduce the public per-state ops.
        config = small_config(kicks=4, basis_halfwidth=64)
        result = run_ensemble(config)
        band = bessel_band(config.kappa, config.band_tail)
        t = TransitionMatrix.from_bessel(band)
        step = FloquetStep(config.kappa, config.tau)

        energies = np.zeros((len(config.initial_set), config.kicks))
        finals = []
        chain_finals = []
        for i, k0 in enumerate(config.initial_set):
            state = initial_state(k0, config.basis_halfwidth)
            chain = occupation(state)
            for n in range(config.kicks):
                state = apply_step_banded(state, step, band)
                chain = markov_step(chain, t)
                energies[i, n] = energy(occupation(state))
            finals.append(occupation(state).probabilities)
            chain_finals.append(chain.probabilities)

        np.testing.assert_allclose(result.series["quantum"]["energy"],
                                   energies.mean(axis=0), atol=1e-10)
        np.testing.assert_allclose(
            result.final_distributions["quantum"].probabilities,
            np.mean(finals, axis=0), atol=1e-13)
        np.testing.assert_allclose(
            result.final_distributions["markov"].probabilities,
            np.mean(chain_finals, axis=0), atol=1e-13)

    def test_edge_guard_aborts(self):
        config = small_config(kappa=5.0, kicks=20, basis_halfwidth=12,
                              initial_set=(-1, 1))
        with pytest.raises(EdgeOccupationError) as excinfo:
            run_ensemble(config)
        assert excinfo.value.kick_index >= 1
        assert excinfo.value.occupation > config.edge_tolerance

    def test_markov_co_model_linear_energy_growth(self):
        config = small_config(kappa=5.0, kicks=40, basis_halfwidth=1024,
                              initial_set=tuple(build_initial_set(3)))
        result = run_ensemble(config)
        m = result.series["markov"]
        kicks = np.arange(1, 41)
        np.testing.assert_allclose(m["markov_energy_cum"],
                                   kicks * 12.5, rtol=1e-9)
        assert np.all(m["interference_energy_cum"] == 0.0)
        assert result.markov_entropy_min_delta >= -1e-12

    def test_diffusion_model_tracks_classical_growth(self):
        config = small_config(kappa=5.0, kicks=40, basis_halfwidth=1024,
                              models=("quantum", "markov", "diffusion"))
        result = run_ensemble(config)
        d = result.series["diffusion"]
        kicks = np.arange(1, 41)
        expected = result.initial_energy + kicks * 12.5
        np.testing.assert_allclose(d["energy"], expected, rtol=1e-6)
        assert "diffusion" in result.final_distributions

    def test_random_schedule_stays_diffusive(self):
        # Without a periodic drive the interference term stays negligible
        # and the quantum growth follows the Markov chain.
        config = small_config(
            kappa=5.0, kicks=100, basis_halfwidth=640,
            schedule="random", seed=9,
            initial_set=tuple(build_initial_set(5)))
        result = run_ensemble(config)
        q = result.series["quantum"]
        m = result.series["markov"]
        assert abs(q["second_moment"][-1] / m["second_moment"][-1] - 1.0) < 0.10
        assert abs(q["interference_energy_cum"][-1]) < \
            0.1 * q["markov_energy_cum"][-1]

    def test_markov_only_run(self):
        config = small_config(models=("markov",), kicks=10)
        result = run_ensemble(config)
        assert set(result.series) == {"markov"}
        assert result.closure_max is None
        assert result.decomposition_max is None
        assert result.fit is None

    def test_quasi_periodic_schedule_runs(self):
        config = small_config(schedule="quasi_periodic", kicks=10,
                              basis_halfwidth=128)
        result = run_ensemble(config)
        assert result.series["quantum"]["energy"].shape == (10,)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            run_ensemble(small_config(kappa=-1.0))
        with pytest.raises(ValueError):
            run_ensemble(small_config(models=("quantum", "nonsense")))
        with pytest.raises(ValueError):
            run_ensemble(small_config(initial_set=()))
        with pytest.raises(ValueError):
            run_ensemble(small_config(initial_set=(200,)))
        with pytest.raises(ValueError):
            run_ensemble(small_config(kicks=0))
        with pytest.raises(ValueError):
            run_ensemble(small_config(schedule="sometimes"))

    def test_provenance(self):
        result = run_ensemble(small_config())
        for key in ("config_hash", "seed", "version", "basis_halfwidth",
                    "band_order_max", "trajectory_count", "runtime_seconds"):
            assert key in result.provenance
        assert result.trajectory_count == 4

    def test_hash_ignores_output_placement(self):
        a = small_config(out_dir="x", prefix="a")
        b = small_config(out_dir="y", prefix="b")
        assert a.config_hash() == b.config_hash()
        c = small_config(kappa=2.5)
        assert a.config_hash() != c.config_hash()
