"""Experiment configuration: JSON file plus flag overrides, flags winning.

The file is a single nested JSON object::

    {
      "game": {"preset": "five-player"}           # or explicit matrices
              {"a": [[...]], "rho": [...], "k_upper": [...], "k_lower": [...]}
              {"generate": {"n": 5, "seed": 7, "offdiag_scale": 1.0,
                            "dominance_margin": 0.1, "rho": [...]}}
      "learn": {"stages": 250, "step_size": 1.0, "mode": "exact",
                "grad_tolerance": 0.0, "k0": [...]},
      "sim":   {"batch_size": 500, "horizon": 200.0, "dt": 0.1,
                "seed": 0, "integrator": "quadrature"},
      "output_dir": "runs/out",
      "format": "csv"
    }

Validation failures raise :class:`ConfigError`, which the CLI maps to
exit code 2.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .analysis import MatrixEnsembleConfig, game_from_matrix, generate_sdd_matrix
from .game import GameSpec
from .learning import LearnConfig
from .presets import PRESETS, preset_game
from .simulate import SimConfig, substream

__all__ = ["ConfigError", "ExperimentConfig", "load_experiment", "resolve_seed"]

SEED_ENV_VAR = "NASHLQ_SEED"

_FORMATS = ("csv", "json-lines")


class ConfigError(ValueError):
    """Invalid or incomplete experiment configuration."""


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    game: GameSpec
    learn: LearnConfig
    sim: SimConfig
    output_dir: Path
    format: str
    k0: np.ndarray | None


def resolve_seed(flag_value, file_value=None, default: int = 0) -> int:
    """Seed precedence: flag, then config file, then NASHLQ_SEED, then default."""
    for candidate in (flag_value, file_value, os.environ.get(SEED_ENV_VAR)):
        if candidate is not None:
            try:
                seed = int(candidate)
            except (TypeError, ValueError):
                raise ConfigError(f"seed must be an integer, got {candidate!r}") from None
            if seed < 0:
                raise ConfigError("seed must be nonnegative")
            return seed
    return default


def _game_from_section(section) -> GameSpec:
    if not isinstance(section, dict):
        raise ConfigError("'game' section must be an object")
    if "preset" in section:
        name = section["preset"]
        if name not in PRESETS:
            raise ConfigError(f"unknown game preset {name!r}; choose from {sorted(PRESETS)}")
        return preset_game(name)
    if "generate" in section:
        gen = section["generate"]
        if not isinstance(gen, dict) or "n" not in gen:
            raise ConfigError("'game.generate' needs at least an 'n' entry")
        try:
            ens = MatrixEnsembleConfig(
                n=int(gen["n"]),
                count=1,
                offdiag_scale=float(gen.get("offdiag_scale", 1.0)),
                dominance_margin=float(gen.get("dominance_margin", 0.1)),
                seed=int(gen.get("seed", 0)),
            )
        except ValueError as err:
            raise ConfigError(f"invalid 'game.generate' section: {err}") from None
        rng = substream(ens.seed, 0)
        a = generate_sdd_matrix(ens, rng)
        rho = gen.get("rho")
        if rho is None:
            rho = rng.uniform(0.0, 1.0, size=ens.n)
        return game_from_matrix(a, rho, box_factor=float(gen.get("box_factor", 10.0)))
    if "a" not in section:
        raise ConfigError("'game' section needs 'preset', 'generate', or an explicit 'a' matrix")
    try:
        return GameSpec(
            a=section["a"],
            rho=section.get("rho", 0.0),
            k_upper=section.get("k_upper", 10.0),
            k_lower=section.get("k_lower"),
        )
    except ValueError as err:
        raise ConfigError(f"invalid game: {err}") from None


def _pick(overrides: dict, section: dict, key: str, default):
    value = overrides.get(key)
    if value is not None:
        return value
    return section.get(key, default)


def load_experiment(config_path, overrides: dict | None = None) -> ExperimentConfig:
    """Build a validated experiment from an optional file and flag overrides.

    Flag overrides use the keys ``preset, seed, mode, stages, step_size,
    batch_size, horizon, dt, integrator, grad_tolerance, k0, output_dir,
    format``; any ``None`` override defers to the file, then to defaults.
    """
    overrides = overrides or {}
    raw = {}
    if config_path is not None:
        path = Path(config_path)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as err:
            raise ConfigError(f"config file is not valid JSON: {err}") from None
        if not isinstance(raw, dict):
            raise ConfigError("config file must contain a JSON object")

    game_section = raw.get("game", {})
    if overrides.get("preset") is not None:
        game_section = {"preset": overrides["preset"]}
    if not game_section:
        raise ConfigError("no game configured: pass --preset or a config file with a 'game' section")
    game = _game_from_section(game_section)

    learn_raw = raw.get("learn", {})
    sim_raw = raw.get("sim", {})
    if not isinstance(learn_raw, dict) or not isinstance(sim_raw, dict):
        raise ConfigError("'learn' and 'sim' sections must be objects")

    seed = resolve_seed(overrides.get("seed"), sim_raw.get("seed"))
    try:
        sim = SimConfig(
            batch_size=int(_pick(overrides, sim_raw, "batch_size", 500)),
            horizon=float(_pick(overrides, sim_raw, "horizon", 200.0)),
            dt=float(_pick(overrides, sim_raw, "dt", 0.1)),
            seed=seed,
            integrator=str(_pick(overrides, sim_raw, "integrator", "quadrature")),
        )
        learn = LearnConfig(
            stages=int(_pick(overrides, learn_raw, "stages", 250)),
            step_size=float(_pick(overrides, learn_raw, "step_size", 1.0)),
            mode=str(_pick(overrides, learn_raw, "mode", "exact")),
            sim=sim,
            grad_tolerance=float(_pick(overrides, learn_raw, "grad_tolerance", 0.0)),
        )
    except ValueError as err:
        raise ConfigError(str(err)) from None

    k0 = overrides.get("k0", learn_raw.get("k0"))
    if k0 is not None:
        k0 = np.asarray(k0, dtype=float)
        if k0.shape != (game.n,):
            raise ConfigError(f"k0 must have {game.n} entries, got shape {k0.shape}")
        if not game.contains(k0):
            raise ConfigError("k0 lies outside the action box")

    fmt = str(_pick(overrides, raw, "format", "csv"))
    if fmt not in _FORMATS:
        raise ConfigError(f"format must be one of {_FORMATS}")

    out = Path(_pick(overrides, raw, "output_dir", "runs"))
    return ExperimentConfig(game=game, learn=learn, sim=sim, output_dir=out, format=fmt, k0=k0)
