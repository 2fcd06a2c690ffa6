"""Run-configuration parsing shared by the CLI and config files.

Configuration comes from two layers with identical keys: an optional flat
text file of ``key = value`` lines (``#`` starts a comment) and command-line
tokens of the form ``--key value`` or ``--key=value``.  Flags override file
values.  Unknown keys are rejected by name in both layers, as are type and
constraint violations.
"""

from __future__ import annotations

from typing import Optional

from .ensemble import RunConfig, build_initial_set
from .schedules import GOLDEN_RATIO


class ConfigError(ValueError):
    """A configuration key is unknown, missing, malformed or out of range."""


_SCHEDULE_ALIASES = {
    "periodic": "periodic",
    "random": "random",
    "quasiperiodic": "quasi_periodic",
    "quasi_periodic": "quasi_periodic",
}

_TRUE = {"true", "yes", "on", "1"}
_FALSE = {"false", "no", "off", "0"}


def _parse_bool(raw: str, key: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in _TRUE:
        return True
    if lowered in _FALSE:
        return False
    raise ConfigError(f"invalid value for '{key}': expected true or false")


def _parse_float(raw: str, key: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ConfigError(f"invalid value for '{key}': expected a number") from None


def _parse_int(raw: str, key: str) -> int:
    try:
        return int(raw, 10)
    except ValueError:
        raise ConfigError(f"invalid value for '{key}': expected an integer") from None


# key -> converter taking (raw string, key name)
_CONVERTERS = {
    "kappa": _parse_float,
    "tau": _parse_float,
    "kicks": _parse_int,
    "schedule": lambda raw, key: raw.strip(),
    "trajectories": _parse_int,
    "basis_halfwidth": lambda raw, key: raw.strip(),
    "seed": _parse_int,
    "jitter": _parse_float,
    "ratio": _parse_float,
    "models": lambda raw, key: raw.strip(),
    "band_tail": _parse_float,
    "edge_tolerance": _parse_float,
    "out_dir": lambda raw, key: raw.strip(),
    "prefix": lambda raw, key: raw.strip(),
    "plots": _parse_bool,
}

_DEFAULTS = {
    "tau": 1.0,
    "kicks": 1000,
    "schedule": "periodic",
    "trajectories": 100,
    "basis_halfwidth": "auto",
    "seed": 1,
    "jitter": 0.5,
    "ratio": GOLDEN_RATIO,
    "models": "quantum,markov",
    "band_tail": 1e-24,
    "edge_tolerance": 1e-12,
    "out_dir": ".",
    "prefix": "rotor",
    "plots": True,
}


def parse_tokens(tokens: list[str], known: Optional[set[str]] = None) -> dict:
    """Parse ``--key value`` / ``--key=value`` tokens into raw strings.

    Dashes in key names normalise to underscores; unknown keys raise a
    :class:`ConfigError` that names the key.
    """
    if known is None:
        known = set(_CONVERTERS)
    raw: dict[str, str] = {}
    i = 0
    while i < len(tokens):
        token = tokens[i]
        if not token.startswith("--"):
            raise ConfigError(f"unexpected argument '{token}'; expected --key value")
        body = token[2:]
        if "=" in body:
            key, value = body.split("=", 1)
        else:
            key = body
            if i + 1 >= len(tokens):
                raise ConfigError(f"missing value for '--{key}'")
            i += 1
            value = tokens[i]
        key = key.replace("-", "_")
        if key not in known:
            raise ConfigError(f"unknown configuration key '{key}'")
        raw[key] = value
        i += 1
    return raw


def parse_file(text: str, known: Optional[set[str]] = None) -> dict:
    """Parse flat ``key = value`` config text into raw strings."""
    if known is None:
        known = set(_CONVERTERS)
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(
                f"config file line {lineno}: expected 'key = value', got "
                f"'{stripped}'"
            )
        key, value = stripped.split("=", 1)
        key = key.strip().replace("-", "_")
        if key not in known:
            raise ConfigError(
                f"config file line {lineno}: unknown configuration key '{key}'"
            )
        raw[key] = value.strip()
    return raw


def parse_config(tokens: list[str], file_text: Optional[str] = None) -> RunConfig:
    """Build a validated :class:`RunConfig` from tokens and optional file text.

    Flag values override file values; anything unset falls back to the
    documented defaults.  ``kappa`` has no default and must be supplied.
    """
    raw = dict(_DEFAULTS)
    if file_text is not None:
        for key, value in parse_file(file_text).items():
            raw[key] = _CONVERTERS[key](value, key)
    for key, value in parse_tokens(tokens).items():
        raw[key] = _CONVERTERS[key](value, key)

    if "kappa" not in raw:
        raise ConfigError("missing required key 'kappa'")

    schedule_name = str(raw["schedule"]).lower()
    if schedule_name not in _SCHEDULE_ALIASES:
        raise ConfigError(
            "invalid value for 'schedule': choose periodic, random or "
            "quasiperiodic"
        )

    trajectories = raw["trajectories"]
    if trajectories < 2 or trajectories % 2 != 0:
        raise ConfigError(
            "invalid value for 'trajectories': must be an even count of at "
            "least 2 (trajectories come in +/-k0 pairs)"
        )

    basis_raw = raw["basis_halfwidth"]
    if isinstance(basis_raw, str):
        if basis_raw.lower() == "auto":
            basis: Optional[int] = None
        else:
            basis = _parse_int(basis_raw, "basis_halfwidth")
    else:
        basis = int(basis_raw)

    models = tuple(part.strip() for part in str(raw["models"]).split(",")
                   if part.strip())

    config = RunConfig(
        kappa=raw["kappa"],
        tau=raw["tau"],
        kicks=raw["kicks"],
        schedule=_SCHEDULE_ALIASES[schedule_name],
        jitter=raw["jitter"],
        ratio=raw["ratio"],
        seed=raw["seed"],
        basis_halfwidth=basis,
        initial_set=tuple(build_initial_set(trajectories // 2)),
        models=models,
        band_tail=raw["band_tail"],
        edge_tolerance=raw["edge_tolerance"],
        out_dir=str(raw["out_dir"]),
        prefix=str(raw["prefix"]),
        plots=bool(raw["plots"]),
    )
    try:
        config.validate()
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return config
