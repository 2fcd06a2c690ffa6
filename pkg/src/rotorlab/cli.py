"""Command-line entry point.

Subcommands mirror the three analyses the package supports:

* ``run``     one ensemble (timeseries CSV, distribution CSV, fit summary,
              optional SVG plots);
* ``compare`` the same physics under several kick schedules, merged into
              one entropy plot;
* ``fit``     exponential-localization fit of a saved distribution CSV.

Exit codes: 0 success, 2 configuration error, 3 run aborted by the
edge-occupation guard, 4 I/O failure.  The environment variable
ROTORLAB_OUTPUT_DIR, when set, overrides the configured output directory.
"""

from __future__ import annotations

import dataclasses
import json
import os
import sys

from .config import ConfigError, parse_config, parse_tokens
from .diagnostics import fit_localization
from .ensemble import EdgeOccupationError, RunConfig, run_ensemble
from .outputs import (
    distribution_from_csv,
    emit_distributions,
    emit_entropy_comparison,
    emit_fit_summary,
    emit_plots,
    emit_timeseries,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUN = 3
EXIT_IO = 4

USAGE = """\
usage: rotorlab <command> [--key value ...]

commands:
  run       run one ensemble and write CSV/SVG outputs
  compare   run several schedules and plot their entropies together
  fit       fit an exponential profile to a saved distribution CSV

common run/compare keys (also valid in a --config file as 'key = value'):
  --kappa X            kick strength (required)
  --tau X              base interval (default 1.0)
  --kicks N            number of kicks (default 1000)
  --schedule KIND      periodic | random | quasiperiodic
  --trajectories N     even ensemble size; initial states are +/-1..+/-N/2
  --basis-halfwidth N  momentum cutoff, or 'auto'
  --seed N, --jitter F, --ratio R, --models LIST
  --out-dir DIR, --prefix NAME, --plots BOOL
  --config FILE        flat key = value file; flags override it
compare adds:
  --schedules A,B[,C]  schedules to run side by side
fit keys:
  --input FILE [--model NAME] [--k0 K] [--floor F] [--out FILE]
"""


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    if not argv or argv[0] in ("-h", "--help", "help"):
        print(USAGE, end="")
        return EXIT_OK
    command, rest = argv[0], list(argv[1:])
    try:
        if command == "run":
            _cmd_run(rest)
        elif command == "compare":
            _cmd_compare(rest)
        elif command == "fit":
            _cmd_fit(rest)
        else:
            raise ConfigError(f"unknown command '{command}'")
    except ConfigError as exc:
        print(f"rotorlab: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except EdgeOccupationError as exc:
        print(f"rotorlab: run aborted: {exc}", file=sys.stderr)
        return EXIT_RUN
    except OSError as exc:
        print(f"rotorlab: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"rotorlab: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


def _extract(tokens: list[str], key: str) -> tuple[list[str], str | None]:
    """Pull one ``--key value`` pair out of a token list."""
    remaining: list[str] = []
    value = None
    i = 0
    while i < len(tokens):
        token = tokens[i]
        if token == f"--{key}" and i + 1 < len(tokens):
            value = tokens[i + 1]
            i += 2
            continue
        if token.startswith(f"--{key}="):
            value = token.split("=", 1)[1]
            i += 1
            continue
        remaining.append(token)
        i += 1
    return remaining, value


def _load_config(tokens: list[str]) -> RunConfig:
    tokens, config_path = _extract(tokens, "config")
    file_text = None
    if config_path is not None:
        with open(config_path, "r", encoding="utf-8") as handle:
            file_text = handle.read()
    config = parse_config(tokens, file_text)
    env_dir = os.environ.get("ROTORLAB_OUTPUT_DIR")
    if env_dir:
        config = dataclasses.replace(config, out_dir=env_dir)
    return config


def _emit_run_outputs(result, config: RunConfig) -> list[str]:
    os.makedirs(config.out_dir, exist_ok=True)
    base = os.path.join(config.out_dir, config.prefix)
    written = []
    emit_timeseries(result, f"{base}_timeseries.csv")
    written.append(f"{base}_timeseries.csv")
    emit_distributions(result, f"{base}_distribution.csv")
    written.append(f"{base}_distribution.csv")
    emit_fit_summary(result, f"{base}_fit.json")
    written.append(f"{base}_fit.json")
    if config.plots:
        written.extend(emit_plots(result, base))
    return written


def _cmd_run(tokens: list[str]) -> None:
    config = _load_config(tokens)
    result = run_ensemble(config)
    written = _emit_run_outputs(result, config)
    quantum = result.series.get("quantum")
    if quantum is not None:
        print(f"final quantum energy: {quantum['energy'][-1]:.6g} "
              f"(started at {result.initial_energy:.6g})")
        print(f"final quantum entropy: {quantum['entropy'][-1]:.6g} nats")
    if result.fit is not None:
        print(f"localization length: {result.fit.length_estimate:.4g} "
              f"(log-fit quality {result.fit.fit_quality:.4f})")
    for path in written:
        print(f"wrote {path}")


def _cmd_compare(tokens: list[str]) -> None:
    tokens, schedules_raw = _extract(tokens, "schedules")
    if schedules_raw is None:
        raise ConfigError("compare requires --schedules, e.g. "
                          "--schedules periodic,random")
    kinds = [part.strip() for part in schedules_raw.split(",") if part.strip()]
    if len(kinds) < 2:
        raise ConfigError("compare needs at least two schedules")
    results = []
    config = None
    for kind in kinds:
        config = _load_config(tokens + ["--schedule", kind])
        result = run_ensemble(config)
        results.append(result)
        base = os.path.join(config.out_dir, f"{config.prefix}_{config.schedule}")
        emit_timeseries(result, f"{base}_timeseries.csv")
        print(f"wrote {base}_timeseries.csv")
    combined = os.path.join(config.out_dir, f"{config.prefix}_entropy.svg")
    emit_entropy_comparison(results, [r.config.schedule for r in results],
                            combined)
    print(f"wrote {combined}")


_FIT_KEYS = {"input", "model", "k0", "floor", "out"}


def _cmd_fit(tokens: list[str]) -> None:
    raw = parse_tokens(tokens, known=_FIT_KEYS)
    if "input" not in raw:
        raise ConfigError("missing required key 'input'")
    model = raw.get("model", "quantum")
    try:
        k0 = int(raw.get("k0", "0"))
    except ValueError:
        raise ConfigError("invalid value for 'k0': expected an integer") from None
    try:
        floor = float(raw.get("floor", "1e-12"))
    except ValueError:
        raise ConfigError("invalid value for 'floor': expected a number") from None

    distribution = distribution_from_csv(raw["input"], model)
    fit = fit_localization(distribution, k0, floor)
    summary = {
        "input": raw["input"],
        "model": model,
        "k0": k0,
        "floor": floor,
        "length_estimate": fit.length_estimate,
        "decay_rate": fit.decay_rate,
        "log_intercept": fit.log_intercept,
        "fit_quality": fit.fit_quality,
        "fit_window": list(fit.fit_window),
    }
    rendered = json.dumps(summary, indent=2, sort_keys=True)
    if "out" in raw:
        with open(raw["out"], "w", encoding="utf-8") as handle:
            handle.write(rendered + "\n")
        print(f"wrote {raw['out']}")
    else:
        print(rendered)


if __name__ == "__main__":
    sys.exit(main())
