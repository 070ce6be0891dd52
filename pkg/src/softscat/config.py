"""Experiment configuration: defaults, named presets, flat key = value files.

Precedence is defaults < preset < config file < command-line overrides.
Config files hold one ``key = value`` pair per line; ``#`` starts a comment;
keys containing a dot are diagnostics (as written by run manifests) and are
skipped, so a manifest can be fed back in as a config.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields, replace

from .geometry import SHAPE_NAMES
from .specfun import ORDER_LIMIT


class ConfigError(Exception):
    """Invalid configuration, preset, or config file."""


FULL_APERTURE = ((0.0, 2 * math.pi),)
ALL_FUNCTIONALS = ("FF", "TDSM", "CD")


@dataclass(frozen=True)
class ExperimentConfig:
    shape: str = "circle"
    k: float = 4.0
    gamma_radius: float = 5.0
    n: int = 64
    m_forward: int = 32
    n_boundary: int = 256
    tau_rel: float = 1e-8
    m_kernel: int = 10
    delta: float = 0.05
    seed: int = 0
    p1: float = 4.0
    p2: float = 4.0
    rho: float = 8.0
    alpha: float = 1e-3
    aperture: tuple = FULL_APERTURE
    grid_half_width: float = 2.0
    grid_n: int = 128
    functionals: tuple = ALL_FUNCTIONALS
    residual_guard: float = 0.05

    def validate(self) -> "ExperimentConfig":
        if self.shape not in SHAPE_NAMES:
            raise ConfigError(f"shape: unknown shape {self.shape!r}, choose from {SHAPE_NAMES}")
        if self.k <= 0:
            raise ConfigError("k: wavenumber must be positive")
        if self.gamma_radius <= 0:
            raise ConfigError("gamma_radius: must be positive")
        if self.n < 8:
            raise ConfigError("n: need at least 8 sources/receivers")
        if not (1 <= self.m_forward <= ORDER_LIMIT - 1):
            raise ConfigError(f"m_forward: must be in [1, {ORDER_LIMIT - 1}]")
        if self.n_boundary < 2 * self.m_forward + 1:
            raise ConfigError("n_boundary: need at least 2*m_forward + 1 collocation nodes")
        if not (0 < self.tau_rel < 1):
            raise ConfigError("tau_rel: must lie in (0, 1)")
        if not (0 <= self.m_kernel <= ORDER_LIMIT):
            raise ConfigError(f"m_kernel: must be in [0, {ORDER_LIMIT}]")
        if self.delta < 0:
            raise ConfigError("delta: noise level must be nonnegative")
        for name in ("p1", "p2", "rho", "alpha", "grid_half_width", "residual_guard"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name}: must be positive")
        if self.grid_n < 2:
            raise ConfigError("grid_n: need at least a 2x2 grid")
        for arc in self.aperture:
            if len(arc) != 2 or not (0 <= arc[0] < arc[1] <= 2 * math.pi + 1e-12):
                raise ConfigError("aperture: arcs must satisfy 0 <= lo < hi <= 2*pi")
        for tag in self.functionals:
            if tag not in ALL_FUNCTIONALS:
                raise ConfigError(f"functionals: unknown tag {tag!r}")
        if not self.functionals:
            raise ConfigError("functionals: need at least one")
        return self


PRESETS = {
    "example1": {"shape": "circle"},
    "example2": {"shape": "acorn"},
    "example3": {"shape": "flower"},
    "example4a": {"shape": "rounded-square"},
    "example4b": {"shape": "rounded-square", "delta": 0.25},
    "example5a": {"shape": "rounded-square", "aperture": ((0.0, 1.5 * math.pi),)},
    "example5b": {"shape": "rounded-square", "aperture": ((0.0, math.pi),)},
}
PRESETS["example4"] = PRESETS["example4a"]


def preset_config(name: str) -> ExperimentConfig:
    try:
        overrides = PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return replace(ExperimentConfig(), **overrides)


# ---------------------------------------------------------------------------
# key = value parsing
# ---------------------------------------------------------------------------
def _parse_aperture(text: str) -> tuple:
    text = text.strip()
    if text == "full":
        return FULL_APERTURE
    arcs = []
    for part in text.split(";"):
        try:
            lo, hi = part.split(":")
            arcs.append((float(lo), float(hi)))
        except ValueError:
            raise ConfigError(f"aperture: cannot parse arc {part!r}; use lo:hi or 'full'") from None
    return tuple(arcs)


def format_aperture(arcs: tuple) -> str:
    if any(lo == 0.0 and hi >= 2 * math.pi for lo, hi in arcs):
        return "full"
    return ";".join(f"{repr(lo)}:{repr(hi)}" for lo, hi in arcs)


def _parse_functionals(text: str) -> tuple:
    return tuple(tag.strip() for tag in text.split(",") if tag.strip())


_PARSERS = {
    "shape": str,
    "k": float,
    "gamma_radius": float,
    "n": int,
    "m_forward": int,
    "n_boundary": int,
    "tau_rel": float,
    "m_kernel": int,
    "delta": float,
    "seed": int,
    "p1": float,
    "p2": float,
    "rho": float,
    "alpha": float,
    "aperture": _parse_aperture,
    "grid_half_width": float,
    "grid_n": int,
    "functionals": _parse_functionals,
    "residual_guard": float,
}


def apply_setting(config: ExperimentConfig, key: str, raw: str) -> ExperimentConfig:
    key = key.strip()
    if key not in _PARSERS:
        raise ConfigError(f"unknown config key {key!r}")
    try:
        value = _PARSERS[key](raw.strip())
    except ConfigError:
        raise
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: cannot parse value {raw!r}") from None
    return replace(config, **{key: value})


def load_config_file(path, base: ExperimentConfig | None = None) -> ExperimentConfig:
    config = base if base is not None else ExperimentConfig()
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, raw = line.split("=", 1)
            if "." in key:
                continue                      # manifest diagnostics line
            config = apply_setting(config, key, raw)
    return config


def config_lines(config: ExperimentConfig) -> list[str]:
    """Every field echoed explicitly, in declaration order, reloadable."""
    out = []
    for f in fields(config):
        value = getattr(config, f.name)
        if f.name == "aperture":
            text = format_aperture(value)
        elif f.name == "functionals":
            text = ",".join(value)
        elif isinstance(value, float):
            text = repr(value)
        else:
            text = str(value)
        out.append(f"{f.name} = {text}")
    return out
