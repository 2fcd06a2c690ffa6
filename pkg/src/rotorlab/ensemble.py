"""Many-trajectory runs with co-propagated reference models.

A run evolves one quantum trajectory per initial eigenstate and, alongside
each, a Markov-only chain driven by the same transition band and a
spreading-gaussian diffusion reference.  Per kick it records energy (with
its exact Markov/interference split), entropy, participation and second
moment for every enabled model, reduces them to ensemble means in a fixed
trajectory order, and verifies two closure identities as it goes:

* decomposition: each kick's energy change equals the Markov increment
  plus the interference increment;
* telescoping: the quantum occupation equals the Markov-only occupation
  plus the accumulated interference residuals, each propagated by the
  remaining Markov steps.

Trajectories whose probability reaches the basis boundary abort the whole
run; silently dropping them would bias the ensemble means.
"""

from __future__ import annotations

import hashlib
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.special import xlogy

from . import __version__
from ._kernels import band_correlate_batch, banded_step_batch
from .bessel import bessel_band
from .markov import TransitionMatrix
from .rotor import (
    EDGE_TOLERANCE,
    Distribution,
    default_basis_halfwidth,
    edge_occupation,
    kick_coefficients_half,
)
from .schedules import (
    GOLDEN_RATIO,
    KickSchedule,
    periodic_schedule,
    quasiperiodic_schedule,
    random_schedule,
)

MODELS = ("quantum", "markov", "diffusion")
SERIES_COLUMNS = ("energy", "markov_energy_cum", "interference_energy_cum",
                  "entropy", "participation", "second_moment")


class EdgeOccupationError(RuntimeError):
    """Probability reached the basis boundary; the run was aborted."""

    def __init__(self, kick_index: int, occupation: float, model: str):
        super().__init__(
            f"{model} occupation {occupation:.3e} at the basis edge on "
            f"kick {kick_index} exceeds the edge tolerance; enlarge "
            f"basis_halfwidth"
        )
        self.kick_index = kick_index
        self.occupation = occupation
        self.model = model


def build_initial_set(lowest_count: int) -> list[int]:
    """Initial eigenstate indices covering the lowest nonzero energies.

    The free-rotor levels k**2 are doubly degenerate in the sign of k, so
    the c lowest nonzero eigenvalues supply the 2c states
    [-1, 1, -2, 2, ..., -c, c].
    """
    if lowest_count < 1:
        raise ValueError("lowest_count must be at least 1")
    out: list[int] = []
    for i in range(1, lowest_count + 1):
        out.extend((-i, i))
    return out


_DEFAULT_INITIAL_SET = tuple(build_initial_set(50))

# Physics fields that define a run; output placement is excluded so the
# provenance hash identifies the computation, not where it was written.
_HASH_FIELDS = ("kappa", "tau", "kicks", "schedule", "jitter", "ratio",
                "seed", "basis_halfwidth", "initial_set", "models",
                "band_tail", "edge_tolerance")


@dataclass(frozen=True)
class RunConfig:
    """Full description of one ensemble run.

    ``basis_halfwidth`` of None selects :func:`default_basis_halfwidth`.
    ``band_tail`` is the discarded-probability tolerance of the propagation
    band; its default keeps the norm drift of a thousand-kick trajectory
    below 1e-10.  ``out_dir``/``prefix``/``plots`` only steer the emitters.
    """

    kappa: float
    tau: float = 1.0
    kicks: int = 1000
    schedule: str = "periodic"
    jitter: float = 0.5
    ratio: float = GOLDEN_RATIO
    seed: int = 1
    basis_halfwidth: Optional[int] = None
    initial_set: tuple[int, ...] = _DEFAULT_INITIAL_SET
    models: tuple[str, ...] = ("quantum", "markov")
    band_tail: float = 1e-24
    edge_tolerance: float = EDGE_TOLERANCE
    out_dir: str = "."
    prefix: str = "rotor"
    plots: bool = True

    def validate(self) -> None:
        if not (np.isfinite(self.kappa) and self.kappa >= 0.0):
            raise ValueError("kappa must be a finite non-negative real")
        if not (np.isfinite(self.tau) and self.tau > 0.0):
            raise ValueError("tau must be a finite positive real")
        if self.kicks < 1:
            raise ValueError("kicks must be at least 1")
        if self.schedule not in ("periodic", "random", "quasi_periodic"):
            raise ValueError(
                f"schedule must be one of periodic, random, quasi_periodic; "
                f"got '{self.schedule}'"
            )
        if not (0.0 < self.jitter < 1.0):
            raise ValueError("jitter must lie strictly between 0 and 1")
        if not (np.isfinite(self.ratio) and self.ratio > 0.0):
            raise ValueError("ratio must be a finite positive real")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.basis_halfwidth is not None and self.basis_halfwidth < 1:
            raise ValueError("basis_halfwidth must be at least 1")
        if not self.initial_set:
            raise ValueError("initial_set must not be empty")
        if not self.models:
            raise ValueError("models must not be empty")
        for model in self.models:
            if model not in MODELS:
                raise ValueError(
                    f"unknown model '{model}'; choose from {', '.join(MODELS)}"
                )
        if not (0.0 < self.band_tail < 1.0):
            raise ValueError("band_tail must lie strictly between 0 and 1")
        if not (0.0 < self.edge_tolerance < 1.0):
            raise ValueError("edge_tolerance must lie strictly between 0 and 1")
        n = self.resolved_basis_halfwidth()
        worst = max(abs(k0) for k0 in self.initial_set)
        if worst > n:
            raise ValueError(
                f"initial state k0={worst} lies outside the basis halfwidth {n}"
            )

    def resolved_basis_halfwidth(self) -> int:
        if self.basis_halfwidth is not None:
            return int(self.basis_halfwidth)
        return default_basis_halfwidth(self.kappa)

    def schedule_generator(self) -> KickSchedule:
        if self.schedule == "periodic":
            return periodic_schedule(self.tau)
        if self.schedule == "random":
            return random_schedule(self.tau, self.jitter, self.seed)
        return quasiperiodic_schedule(self.tau, self.ratio,
                                      horizon=max(1, self.kicks))

    def config_hash(self) -> str:
        parts = []
        for name in _HASH_FIELDS:
            value = getattr(self, name)
            if isinstance(value, tuple):
                rendered = ",".join(repr(v) for v in value)
            else:
                rendered = repr(value)
            parts.append(f"{name}={rendered}")
        canonical = "\n".join(parts)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:16]


@dataclass
class EnsembleResult:
    """Reduced output of one run.

    ``series[model][column]`` is the per-kick ensemble mean (kick 1 is the
    first entry).  ``closure_max`` is the largest componentwise defect of
    the telescoping identity over the whole run, ``decomposition_max`` the
    largest per-kick energy-split defect, and ``markov_entropy_min_delta``
    the smallest per-kick entropy change any Markov-chain trajectory ever
    exhibited (the H-theorem keeps it non-negative up to roundoff).
    """

    config: RunConfig
    kick_index: np.ndarray
    series: dict
    initial_energy: float
    final_distributions: dict
    fit: object
    closure_max: Optional[float]
    decomposition_max: Optional[float]
    markov_entropy_min_delta: Optional[float]
    trajectory_count: int
    provenance: dict = field(default_factory=dict)


def _empty_series(kicks: int) -> dict:
    return {column: np.zeros(kicks) for column in SERIES_COLUMNS}


def _edge_check(values: np.ndarray, tolerance: float, kick: int,
                model: str) -> None:
    worst = edge_occupation(values)
    if worst > tolerance:
        raise EdgeOccupationError(kick, worst, model)


def run_ensemble(config: RunConfig) -> EnsembleResult:
    """Run every trajectory of ``config`` and reduce the diagnostics.

    Deterministic for a fixed config: the only randomness is the interval
    sequence, drawn from counter-based streams keyed on (seed, trajectory
    index), and reductions run in trajectory order.

    Raises :class:`EdgeOccupationError` if any model's probability touches
    the basis boundary, and ValueError on an invalid config.
    """
    config.validate()
    started = time.perf_counter()

    n = config.resolved_basis_halfwidth()
    m = 2 * n + 1
    band = bessel_band(config.kappa, config.band_tail)
    order_max = band.order_max
    coeffs_half = np.ascontiguousarray(kick_coefficients_half(band))
    transition = TransitionMatrix.from_bessel(band)
    t_half = np.ascontiguousarray(transition.half())

    k0s = np.asarray(config.initial_set, dtype=np.int64)
    ntraj = k0s.size
    kicks = config.kicks

    schedule = config.schedule_generator()
    per_trajectory_intervals = schedule.kind == "random"
    if per_trajectory_intervals:
        taus = np.stack([schedule.intervals(kicks, i) for i in range(ntraj)])
    else:
        taus = schedule.intervals(kicks)[None, :]

    quantum_on = "quantum" in config.models
    markov_on = "markov" in config.models
    diffusion_on = "diffusion" in config.models
    track_closure = quantum_on and markov_on

    l = np.arange(-n, n + 1, dtype=np.float64)
    l2 = l * l
    excursion2 = (l[None, :] - k0s[:, None].astype(np.float64)) ** 2
    initial_rows = (k0s.astype(np.float64)) ** 2
    initial_energy = float(initial_rows.mean())
    kmax = int(np.abs(k0s).max())

    series = {model: _empty_series(kicks)
              for model in MODELS if model in config.models}

    if quantum_on:
        amps = np.zeros((ntraj, m), dtype=np.complex128)
        amps[np.arange(ntraj), n + k0s] = 1.0
        amps_out = np.empty_like(amps)
        p_prev = np.zeros((ntraj, m))
        p_prev[np.arange(ntraj), n + k0s] = 1.0
        predicted = np.empty((ntraj, m))
        e_rows = initial_rows.copy()
        markov_cum = np.zeros(ntraj)
        interference_cum = np.zeros(ntraj)
        if config.schedule == "periodic":
            fixed_phases = np.exp(-0.5j * taus[0, 0] * l2)[None, :]
    if markov_on:
        chain = np.zeros((ntraj, m))
        chain[np.arange(ntraj), n + k0s] = 1.0
        chain_out = np.empty_like(chain)
        chain_entropy_prev = np.zeros(ntraj)
        markov_entropy_min_delta = np.inf
    if track_closure:
        residual = np.zeros((ntraj, m))
        residual_out = np.empty_like(residual)
        closure_max = 0.0
    decomposition_max = 0.0

    for kick in range(1, kicks + 1):
        idx = kick - 1
        if quantum_on:
            if config.schedule == "periodic":
                phases = fixed_phases
            elif per_trajectory_intervals:
                phases = np.exp(-0.5j * np.multiply.outer(taus[:, idx], l2))
            else:
                phases = np.exp(-0.5j * taus[0, idx] * l2)[None, :]
            banded_step_batch(amps, phases, coeffs_half, order_max, amps_out)
            amps, amps_out = amps_out, amps
            p_next = np.square(amps.real) + np.square(amps.imag)
            _edge_check(p_next, config.edge_tolerance, kick, "quantum")

            band_correlate_batch(p_prev, t_half, order_max, predicted)
            beta = p_next - predicted
            e_next = p_next @ l2
            e_predicted = predicted @ l2
            markov_inc = e_predicted - e_rows
            interference_inc = beta @ l2
            split_defect = np.abs(e_next - e_rows - markov_inc
                                  - interference_inc).max()
            decomposition_max = max(decomposition_max, float(split_defect))
            markov_cum = markov_cum + markov_inc
            interference_cum = interference_cum + interference_inc

            cols = series["quantum"]
            cols["energy"][idx] = e_next.mean()
            cols["markov_energy_cum"][idx] = markov_cum.mean()
            cols["interference_energy_cum"][idx] = interference_cum.mean()
            cols["entropy"][idx] = (-xlogy(p_next, p_next).sum(axis=1)).mean()
            cols["participation"][idx] = (
                1.0 / np.square(p_next).sum(axis=1)).mean()
            cols["second_moment"][idx] = (p_next * excursion2).sum(axis=1).mean()
            e_rows = e_next
            p_prev = p_next

        if markov_on:
            band_correlate_batch(chain, t_half, order_max, chain_out)
            chain, chain_out = chain_out, chain
            _edge_check(chain, config.edge_tolerance, kick, "markov")
            chain_energy = chain @ l2
            chain_entropy = -xlogy(chain, chain).sum(axis=1)
            markov_entropy_min_delta = min(
                markov_entropy_min_delta,
                float((chain_entropy - chain_entropy_prev).min()))
            chain_entropy_prev = chain_entropy

            cols = series["markov"]
            cols["energy"][idx] = chain_energy.mean()
            cols["markov_energy_cum"][idx] = (chain_energy - initial_rows).mean()
            cols["interference_energy_cum"][idx] = 0.0
            cols["entropy"][idx] = chain_entropy.mean()
            cols["participation"][idx] = (
                1.0 / np.square(chain).sum(axis=1)).mean()
            cols["second_moment"][idx] = (chain * excursion2).sum(axis=1).mean()

        if track_closure:
            band_correlate_batch(residual, t_half, order_max, residual_out)
            residual, residual_out = residual_out, residual
            residual += beta
            closure_max = max(closure_max,
                              float(np.abs(p_next - chain - residual).max()))

        if diffusion_on:
            variance = 0.5 * config.kappa ** 2 * kick
            profile = _diffusion_profile(l2, variance, n)
            worst_edge = profile[min(2 * n, 2 * n - kmax)]
            if worst_edge > config.edge_tolerance:
                raise EdgeOccupationError(kick, float(worst_edge), "diffusion")
            sm = float(profile @ l2)
            cols = series["diffusion"]
            cols["energy"][idx] = sm + initial_energy
            cols["markov_energy_cum"][idx] = sm
            cols["interference_energy_cum"][idx] = 0.0
            cols["entropy"][idx] = float(-np.sum(xlogy(profile, profile)))
            cols["participation"][idx] = float(1.0 / np.sum(profile * profile))
            cols["second_moment"][idx] = sm

    final_distributions = {}
    if quantum_on:
        final_distributions["quantum"] = Distribution(p_prev.mean(axis=0), n)
    if markov_on:
        final_distributions["markov"] = Distribution(chain.mean(axis=0), n)
    if diffusion_on:
        variance = 0.5 * config.kappa ** 2 * kicks
        profile = _diffusion_profile(l2, variance, n)
        mean_profile = np.zeros(m)
        for k0 in k0s:
            if k0 >= 0:
                mean_profile[k0:] += profile[:m - k0]
            else:
                mean_profile[:m + k0] += profile[-k0:]
        final_distributions["diffusion"] = Distribution(mean_profile / ntraj, n)

    fit = None
    if quantum_on:
        from .diagnostics import InsufficientDataError, fit_localization
        try:
            fit = fit_localization(final_distributions["quantum"], 0)
        except (InsufficientDataError, ValueError):
            fit = None

    elapsed = time.perf_counter() - started
    provenance = {
        "config_hash": config.config_hash(),
        "seed": config.seed,
        "version": __version__,
        "basis_halfwidth": n,
        "band_order_max": order_max,
        "trajectory_count": int(ntraj),
        "runtime_seconds": elapsed,
    }
    return EnsembleResult(
        config=config,
        kick_index=np.arange(1, kicks + 1),
        series=series,
        initial_energy=initial_energy,
        final_distributions=final_distributions,
        fit=fit,
        closure_max=closure_max if track_closure else None,
        decomposition_max=decomposition_max if quantum_on else None,
        markov_entropy_min_delta=(float(markov_entropy_min_delta)
                                  if markov_on else None),
        trajectory_count=int(ntraj),
        provenance=provenance,
    )


def _diffusion_profile(l2: np.ndarray, variance: float, n: int) -> np.ndarray:
    profile = np.exp(-0.5 * l2 / variance)
    return profile / profile.sum()
