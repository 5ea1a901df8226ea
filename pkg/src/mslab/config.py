"""Experiment configuration: JSON, validated against ``schema/config.schema.json``."""
from __future__ import annotations

import copy
import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .boundary import MAX_GRID
from .disk import MIN_BOUNDARY_GAP, geometric_depths
from .errors import ConfigError, MslabError
from .inner import InnerFunction
from .probe import DEFAULT_APERTURES

SUITES = ("gram", "tto-verify", "tto-zero", "tto-defect", "ni-build", "ni-verify",
          "probe-adc", "probe-dichotomy", "paper-example")

_DEFAULTS = {
    "seed": 0,
    "grid": None,
    "pair": {"kind": "trivial"},
    "probe": {"zeta": [1.0, 0.0], "apertures": list(DEFAULT_APERTURES), "depths": {"q": 0.5, "count": 40, "start": 1},
              "rays": 3},
    "trials": {"symbols": 5, "extremality": 1000},
}


@lru_cache(maxsize=1)
def schema() -> dict:
    text = resources.files("mslab").joinpath("schema/config.schema.json").read_text()
    return json.loads(text)


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict) and k != "pair":
            out[k] = _merge(out[k], v)
        else:
            out[k] = copy.deepcopy(v)
    return out


@dataclass(frozen=True)
class ExperimentConfig:
    raw: dict
    base_dir: Path

    @property
    def seed(self) -> int:
        return self.raw["seed"]

    @property
    def grid(self) -> int | None:
        return self.raw["grid"]

    @property
    def inner(self) -> InnerFunction:
        return InnerFunction.from_config(self.raw["inner"])

    @property
    def pair(self) -> dict:
        return self.raw["pair"]

    @property
    def suites(self) -> tuple:
        # fixed execution order, independent of how the list was written
        return tuple(s for s in SUITES if s in self.raw["suites"])

    @property
    def zeta(self) -> complex:
        return complex(*self.raw["probe"]["zeta"])

    @property
    def apertures(self) -> tuple:
        return tuple(self.raw["probe"]["apertures"])

    @property
    def rays(self) -> int:
        return self.raw["probe"]["rays"]

    @property
    def depths(self) -> np.ndarray:
        d = self.raw["probe"]["depths"]
        if isinstance(d, list):
            return np.asarray(d, dtype=float)
        return geometric_depths(d.get("q", 0.5), d.get("count", 40), d.get("start", 1))

    def trials(self, key: str) -> int:
        return self.raw["trials"][key]

    def resolve(self, path: str) -> Path:
        p = Path(path)
        return p if p.is_absolute() else self.base_dir / p


def load_config(path, seed: int | None = None, grid: int | None = None) -> ExperimentConfig:
    """Read, validate and resolve a config; raises :class:`ConfigError` on any problem."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    return parse_config(data, path.parent, seed=seed, grid=grid)


def parse_config(data, base_dir=".", seed: int | None = None, grid: int | None = None) -> ExperimentConfig:
    try:
        jsonschema.validate(data, schema())
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ConfigError(f"config invalid at {where}: {exc.message}") from exc
    raw = _merge(_DEFAULTS, data)
    raw["inner"] = {"zeros": [], "atoms": [], "phase": 0.0, **raw["inner"]}
    if seed is not None:
        if seed < 0:
            raise ConfigError("seed must be non-negative")
        raw["seed"] = seed
    if grid is not None:
        raw["grid"] = grid
    cfg = ExperimentConfig(raw, Path(base_dir))
    _check_semantics(cfg)
    return cfg


def _check_semantics(cfg: ExperimentConfig) -> None:
    g = cfg.grid
    if g is not None and (g < 16 or g & (g - 1) or g > MAX_GRID):
        raise ConfigError(f"grid must be a power of two in [16, {MAX_GRID}], got {g}")
    try:
        I = cfg.inner
    except (MslabError, ValueError) as exc:
        raise ConfigError(f"inner function: {exc}") from exc
    suites = set(cfg.suites)
    needs_space = suites & {"ni-build", "ni-verify", "probe-dichotomy", "tto-verify"}
    needs_basis = suites & {"gram", "tto-verify", "tto-zero", "tto-defect", "ni-build", "ni-verify",
                            "probe-dichotomy", "paper-example"}
    if needs_basis and (not I.is_finite_blaschke or I.degree == 0):
        raise ConfigError(f"suites {sorted(needs_basis)} need a finite Blaschke product of degree >= 1")
    if (needs_space or "paper-example" in suites or "tto-defect" in suites) and not I.vanishes_at_origin:
        raise ConfigError("nearly invariant and defect suites need I(0) = 0 (put a zero at the origin)")
    pair = cfg.pair
    if "paper-example" in suites and pair["kind"] != "paper_example":
        raise ConfigError("suite paper-example needs pair kind 'paper_example'")
    if pair["kind"] == "paper_example" and pair["n2"] != 2 * pair["n1"]:
        raise ConfigError(f"pair kind 'paper_example' needs n2 = 2 n1, got n1={pair['n1']}, n2={pair['n2']}")
    if pair["kind"] == "samples":
        for key in ("a", "b"):
            if not cfg.resolve(pair[key]).is_file():
                raise ConfigError(f"pair sample file {pair[key]!r} not found")
    if abs(abs(cfg.zeta) - 1.0) > 1e-12:
        raise ConfigError(f"probe zeta must be unimodular, |zeta| = {abs(cfg.zeta)!r}")
    if pair["kind"] == "vanishing" and "zeta" in pair and abs(abs(complex(*pair["zeta"])) - 1.0) > 1e-12:
        raise ConfigError("vanishing pair zeta must be unimodular")
    d = cfg.depths
    if np.any(np.diff(d) <= 0):
        raise ConfigError("probe depths must increase strictly")
    if np.any(1.0 - d < MIN_BOUNDARY_GAP):
        raise ConfigError(f"probe depths closer than {MIN_BOUNDARY_GAP:g} to the circle")
