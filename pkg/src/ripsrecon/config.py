"""Experiment configuration (JSON, ``"schema": 1``)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Any

from .manifolds import Grid, ManifoldModel, Random, sampler_from_spec

SCHEMA_VERSION = 1
_KEYS = {"schema", "model", "sampler", "noise", "zeta", "beta", "max_homology_dim", "pipeline",
         "sweep", "certify", "timing"}


class ConfigError(ValueError):
    """Invalid or incomplete configuration."""


def parse_number(value, *, name: str):
    """Accept ints, floats and rational strings such as ``"1/14"`` (kept exact)."""
    if isinstance(value, bool):
        raise ConfigError(f"{name} must be a number, got {value!r}")
    if isinstance(value, (int, float, Fraction)):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value) if "/" in value else float(value)
        except (ValueError, ZeroDivisionError):
            pass
    raise ConfigError(f"{name} must be a number or a fraction string, got {value!r}")


@dataclass(frozen=True)
class ExperimentConfig:
    """A fully determined reconstruction experiment.

    ``zeta=None`` means: sweep a grid of ``zeta`` values and use the widest
    window. ``beta=None`` means: geometric midpoint of the window.
    """

    model: ManifoldModel
    sampler: Grid | Random
    eta: float = 0.0
    noise_seed: int = 0
    zeta: Any = None
    beta: float | None = None
    max_homology_dim: int = 2
    pipeline: str | None = None
    sweep: dict = field(default_factory=dict)
    certify: dict = field(default_factory=dict)
    timing: bool = False

    @property
    def resolved_pipeline(self) -> str:
        if self.pipeline is not None:
            return self.pipeline
        return "gh" if self.model.kind in ("circle", "flat_torus") else "h"

    def with_overrides(self, *, seed=None, max_dim=None, beta=None, zeta=None) -> "ExperimentConfig":
        cfg = self
        if seed is not None:
            if not isinstance(cfg.sampler, Random):
                raise ConfigError("--seed only applies to random samplers")
            cfg = replace(cfg, sampler=Random(cfg.sampler.n, int(seed)))
        if max_dim is not None:
            if max_dim < 0:
                raise ConfigError("--max-dim must be non-negative")
            cfg = replace(cfg, max_homology_dim=int(max_dim))
        if beta is not None:
            cfg = replace(cfg, beta=_positive(parse_number(beta, name="beta"), "beta"))
        if zeta is not None:
            cfg = replace(cfg, zeta=parse_number(zeta, name="zeta"))
        return cfg


def _positive(x, name):
    if not x > 0:
        raise ConfigError(f"{name} must be positive, got {x!r}")
    return x


def config_from_dict(data: dict) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a JSON object")
    if data.get("schema") != SCHEMA_VERSION:
        raise ConfigError(f"unsupported config schema {data.get('schema')!r}; expected {SCHEMA_VERSION}")
    unknown = set(data) - _KEYS
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    try:
        model = ManifoldModel.from_spec(data["model"])
    except KeyError as err:
        raise ConfigError(f"missing config entry {err}") from None
    except (TypeError, ValueError) as err:
        raise ConfigError(f"invalid model: {err}") from None
    try:
        sampler = sampler_from_spec(data.get("sampler", {"type": "grid", "n": 100}))
    except (KeyError, TypeError, ValueError) as err:
        raise ConfigError(f"invalid sampler: {err}") from None
    noise = data.get("noise", {}) or {}
    eta = float(parse_number(noise.get("eta", 0.0), name="eta"))
    if eta < 0:
        raise ConfigError("noise eta must be non-negative")
    zeta = data.get("zeta")
    zeta = None if zeta is None else parse_number(zeta, name="zeta")
    beta = data.get("beta")
    if beta == "midpoint":
        beta = None
    elif beta is not None:
        beta = _positive(parse_number(beta, name="beta"), "beta")
    pipeline = data.get("pipeline")
    if pipeline not in (None, "gh", "h"):
        raise ConfigError("pipeline must be 'gh' or 'h'")
    if pipeline == "gh" and not model.has_geodesic:
        raise ConfigError(f"{model.kind} has no exact geodesics; use the 'h' pipeline")
    if pipeline == "h" and not model.has_embedding:
        raise ConfigError(f"{model.kind} is not embedded; use the 'gh' pipeline")
    dim = data.get("max_homology_dim", 2)
    if not isinstance(dim, int) or dim < 0:
        raise ConfigError("max_homology_dim must be a non-negative integer")
    return ExperimentConfig(model, sampler, eta, int(noise.get("seed", 0)), zeta, beta, dim,
                            pipeline, dict(data.get("sweep", {}) or {}),
                            dict(data.get("certify", {}) or {}), bool(data.get("timing", False)))


def load_config(path) -> ExperimentConfig:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as err:
        raise ConfigError(f"cannot read config {path}: {err}") from None
    except json.JSONDecodeError as err:
        raise ConfigError(f"config {path} is not valid JSON: {err}") from None
    return config_from_dict(data)
