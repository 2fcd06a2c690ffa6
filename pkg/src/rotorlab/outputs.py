"""CSV, fit-summary and SVG emission for ensemble results.

All numeric CSV fields are written with 17 significant digits so parsing
them back recovers the doubles exactly, and every file carries the config
hash and seed in comment headers.  Nothing time- or host-dependent is
written, so identical runs emit byte-identical files.
"""

from __future__ import annotations

import json
import os

import numpy as np

from . import __version__
from .ensemble import EnsembleResult
from .rotor import Distribution
from .svgplot import LinePlot

TIMESERIES_COLUMNS = ("kick", "model", "energy", "markov_energy_cum",
                      "interference_energy_cum", "entropy", "participation",
                      "second_moment")


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _header_lines(result: EnsembleResult) -> list[str]:
    return [
        f"# rotorlab {__version__}",
        f"# config_hash={result.provenance['config_hash']} "
        f"seed={result.config.seed}",
    ]


def _require_nonempty(result: EnsembleResult) -> None:
    if not result.series or result.kick_index.size == 0:
        raise ValueError("result contains no kicks or no models")


def emit_timeseries(result: EnsembleResult, path) -> None:
    """One CSV row per (kick, model), sorted by kick then model name."""
    _require_nonempty(result)
    models = sorted(result.series)
    lines = _header_lines(result)
    lines.append(",".join(TIMESERIES_COLUMNS))
    for idx, kick in enumerate(result.kick_index):
        for model in models:
            cols = result.series[model]
            row = [str(int(kick)), model]
            row.extend(_fmt(float(cols[name][idx]))
                       for name in TIMESERIES_COLUMNS[2:])
            lines.append(",".join(row))
    _write_text(path, "\n".join(lines) + "\n")


def read_timeseries(path) -> dict:
    """Parse a timeseries CSV back into {model: {column: array}}."""
    with open(path, "r", encoding="utf-8") as handle:
        rows = [line.rstrip("\n") for line in handle
                if line.strip() and not line.startswith("#")]
    header = rows[0].split(",")
    if tuple(header) != TIMESERIES_COLUMNS:
        raise ValueError(f"unexpected timeseries columns: {header}")
    out: dict = {}
    for row in rows[1:]:
        fields = row.split(",")
        kick = int(fields[0])
        model = fields[1]
        entry = out.setdefault(model, {name: [] for name in ("kick",)
                                       + TIMESERIES_COLUMNS[2:]})
        entry["kick"].append(kick)
        for name, raw in zip(TIMESERIES_COLUMNS[2:], fields[2:]):
            entry[name].append(float(raw))
    for model, entry in out.items():
        for name, values in entry.items():
            entry[name] = np.asarray(values)
    return out


def emit_distributions(result: EnsembleResult, path) -> None:
    """Final ensemble-mean distribution per model, one column per model."""
    _require_nonempty(result)
    if not result.final_distributions:
        raise ValueError("result holds no final distributions")
    models = sorted(result.final_distributions)
    first = result.final_distributions[models[0]]
    k = first.k_values()
    lines = _header_lines(result)
    lines.append(",".join(["k"] + models))
    columns = [result.final_distributions[m].probabilities for m in models]
    for i, kv in enumerate(k):
        row = [str(int(kv))]
        row.extend(_fmt(float(col[i])) for col in columns)
        lines.append(",".join(row))
    _write_text(path, "\n".join(lines) + "\n")


def read_distribution(path) -> tuple[np.ndarray, dict]:
    """Parse a distribution CSV into (k values, {model: probabilities})."""
    with open(path, "r", encoding="utf-8") as handle:
        rows = [line.rstrip("\n") for line in handle
                if line.strip() and not line.startswith("#")]
    header = rows[0].split(",")
    if header[0] != "k" or len(header) < 2:
        raise ValueError("expected columns: k, <model>, ...")
    models = header[1:]
    k = []
    columns: list[list[float]] = [[] for _ in models]
    for row in rows[1:]:
        fields = row.split(",")
        k.append(int(fields[0]))
        for i, raw in enumerate(fields[1:]):
            columns[i].append(float(raw))
    return np.asarray(k), {m: np.asarray(c) for m, c in zip(models, columns)}


def distribution_from_csv(path, model: str) -> Distribution:
    k, columns = read_distribution(path)
    if model not in columns:
        raise ValueError(
            f"model '{model}' not present in {path}; available: "
            f"{', '.join(sorted(columns))}"
        )
    halfwidth = (k.size - 1) // 2
    if k[0] != -halfwidth or k[-1] != halfwidth:
        raise ValueError("distribution file k range is not symmetric")
    return Distribution(columns[model], halfwidth)


def emit_fit_summary(result: EnsembleResult, path) -> None:
    """Key-value summary (JSON) of the run's fit and closure checks."""
    _require_nonempty(result)
    summary = {
        "config_hash": result.provenance["config_hash"],
        "seed": result.config.seed,
        "version": __version__,
        "trajectories": result.trajectory_count,
        "kicks": int(result.kick_index[-1]),
        "initial_energy": result.initial_energy,
        "decomposition_max": result.decomposition_max,
        "closure_max": result.closure_max,
        "markov_entropy_min_delta": result.markov_entropy_min_delta,
    }
    for model, cols in sorted(result.series.items()):
        summary[f"final_energy_{model}"] = float(cols["energy"][-1])
        summary[f"final_entropy_{model}"] = float(cols["entropy"][-1])
    if result.fit is not None:
        summary["fit_length"] = result.fit.length_estimate
        summary["fit_decay_rate"] = result.fit.decay_rate
        summary["fit_quality"] = result.fit.fit_quality
        summary["fit_window"] = list(result.fit.fit_window)
    _write_text(path, json.dumps(summary, indent=2, sort_keys=True) + "\n")


def emit_plots(result: EnsembleResult, path_prefix) -> list[str]:
    """Write ``<prefix>_energy.svg`` and ``<prefix>_entropy.svg``.

    The energy plot shows the quantum model's total energy alongside the
    cumulative Markov (dashed) and interference (dotted) terms; the entropy
    plot shows each model's entropy against the kick number on a log axis.
    Raises before creating any file when the result is empty.
    """
    _require_nonempty(result)
    if "quantum" not in result.series:
        raise ValueError("energy plot needs the quantum model in the result")
    written = []
    kicks = result.kick_index
    quantum = result.series["quantum"]

    energy_plot = LinePlot(
        "Kicked-rotor energy decomposition",
        "kick number", "energy (units of h-bar^2 / 2I)")
    energy_plot.add_series(kicks, quantum["energy"], "total energy", "#000000")
    energy_plot.add_series(kicks, quantum["markov_energy_cum"],
                           "Markov term (cumulative)", "#c43b3b", dash="7 4")
    energy_plot.add_series(kicks, quantum["interference_energy_cum"],
                           "interference term (cumulative)", "#2f6fb2",
                           dash="2 4")
    energy_path = f"{path_prefix}_energy.svg"
    energy_plot.write(energy_path)
    written.append(energy_path)

    entropy_plot = LinePlot("Entropy growth and saturation",
                            "kick number (log scale)", "entropy (nats)",
                            logx=True)
    for model, cols in sorted(result.series.items()):
        entropy_plot.add_series(kicks, cols["entropy"], model)
    entropy_path = f"{path_prefix}_entropy.svg"
    entropy_plot.write(entropy_path)
    written.append(entropy_path)
    return written


def emit_entropy_comparison(results: list[EnsembleResult], labels: list[str],
                            path) -> None:
    """Entropy-versus-kick curves from several runs on one log-axis plot."""
    if not results:
        raise ValueError("no results to compare")
    if len(results) != len(labels):
        raise ValueError("results and labels differ in length")
    plot = LinePlot("Entropy by kick schedule", "kick number (log scale)",
                    "entropy (nats)", logx=True)
    for result, label in zip(results, labels):
        _require_nonempty(result)
        model = "quantum" if "quantum" in result.series else sorted(result.series)[0]
        plot.add_series(result.kick_index, result.series[model]["entropy"],
                        label)
    plot.write(path)


def _write_text(path, content: str) -> None:
    directory = os.path.dirname(str(path))
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(content)
