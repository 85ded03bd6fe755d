"""Experiment configuration and its flat ``key = value`` text format.

Example::

    # threshold scan at the desk-scale point
    n = 50000
    p = 0.01
    m_fraction = 0.40:0.48:12     # start:stop:count, inclusive
    trials = 200
    master_seed = 1
    shared_graph = true

List-valued keys accept a single value, a comma-separated list, or an
inclusive ``start:stop:count`` range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

__all__ = ["ConfigError", "ExperimentConfig", "parse_config", "parse_grid", "INIT_KEYS"]

INIT_KEYS = ("m", "m_fraction", "q", "lambda", "theta")
_MODES = ("fixed_m", "bernoulli_q")
_KEYS = ("n", "p", "mode", *INIT_KEYS, "trials", "master_seed", "confidence_level",
         "shared_graph", "output_path")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    """One Monte Carlo experiment.

    Exactly one of ``m``, ``m_fraction``, ``q``, ``lam``, ``theta`` is set; each
    is a tuple of grid values.  ``lam`` and ``theta`` are turned into concrete
    sizes or probabilities by :meth:`points`.
    """

    n: int
    p: float
    mode: str = "fixed_m"
    m: tuple[int, ...] | None = None
    m_fraction: tuple[float, ...] | None = None
    q: tuple[float, ...] | None = None
    lam: tuple[float, ...] | None = None
    theta: tuple[float, ...] | None = None
    trials: int = 100
    master_seed: int = 0
    confidence_level: float = 0.95
    shared_graph: bool = False
    output_path: str | None = None

    def __post_init__(self):
        set_keys = [k for k in INIT_KEYS if self._init_value(k) is not None]
        if len(set_keys) != 1:
            if not set_keys:
                raise ConfigError("one of m, m_fraction, q, lambda, theta is required")
            raise ConfigError("conflicting initialisation keys: " + ", ".join(set_keys))
        if self.mode not in _MODES:
            raise ConfigError(f"mode must be one of {', '.join(_MODES)}, got {self.mode!r}")
        key = set_keys[0]
        if key in ("m", "m_fraction") and self.mode != "fixed_m":
            raise ConfigError(f"{key} requires mode = fixed_m")
        if key in ("q", "theta") and self.mode != "bernoulli_q":
            raise ConfigError(f"{key} requires mode = bernoulli_q")
        if self.n < 1:
            raise ConfigError(f"n must be >= 1, got {self.n}")
        if not 0.0 <= self.p <= 1.0:
            raise ConfigError(f"p must lie in [0, 1], got {self.p}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if not 0.0 < self.confidence_level < 1.0:
            raise ConfigError(f"confidence_level must lie in (0, 1), got {self.confidence_level}")
        for v in self._init_value(key):
            if key == "m" and not 0 <= v <= self.n:
                raise ConfigError(f"m={v} outside [0, {self.n}]")
            if key in ("m_fraction", "q") and not 0.0 <= v <= 1.0:
                raise ConfigError(f"{key}={v} outside [0, 1]")

    def _init_value(self, key):
        return {"m": self.m, "m_fraction": self.m_fraction, "q": self.q,
                "lambda": self.lam, "theta": self.theta}[key]

    @property
    def init_key(self) -> str:
        return next(k for k in INIT_KEYS if self._init_value(k) is not None)

    def points(self) -> list:
        """The grid of initial sizes (fixed_m) or infection probabilities (bernoulli_q)."""
        from .thresholds import ThresholdParams, critical_m, critical_q

        key = self.init_key
        values = self._init_value(key)
        if key == "m":
            return [int(v) for v in values]
        if key == "m_fraction":
            return [int(round(f * self.n)) for f in values]
        if key == "q":
            return [float(v) for v in values]
        if key == "lambda":
            params = [ThresholdParams(self.n, self.p, lam=v) for v in values]
            if self.mode == "fixed_m":
                return [critical_m(tp) for tp in params]
            return [critical_q(tp) for tp in params]
        return [critical_q(ThresholdParams(self.n, self.p, theta=v)) for v in values]

    def with_points(self, points) -> "ExperimentConfig":
        """Copy of this config pinned to an explicit grid in the current mode."""
        if self.mode == "fixed_m":
            return replace(self, m=tuple(int(x) for x in points), m_fraction=None, lam=None, theta=None, q=None)
        return replace(self, q=tuple(float(x) for x in points), m=None, m_fraction=None, lam=None, theta=None)

    def header_lines(self) -> list[str]:
        """``key=value`` lines echoing the config and any derived grid."""
        key = self.init_key
        lines = [f"n={self.n}", f"p={self.p!r}", f"mode={self.mode}",
                 f"{key}={','.join(repr(v) for v in self._init_value(key))}"]
        if key not in ("m", "q"):
            derived = "m" if self.mode == "fixed_m" else "q"
            lines.append(f"derived_{derived}={','.join(repr(v) for v in self.points())}")
        lines += [f"trials={self.trials}", f"master_seed={self.master_seed}",
                  f"confidence_level={self.confidence_level!r}",
                  f"shared_graph={str(self.shared_graph).lower()}"]
        return lines


def parse_grid(text: str, kind=float) -> tuple:
    text = text.strip()
    if not text:
        raise ValueError("empty value")
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"range must be start:stop:count, got {text!r}")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 1:
            raise ValueError("range count must be >= 1")
        vals = np.linspace(start, stop, count).tolist()
        if kind is int:
            vals = [int(round(v)) for v in vals]
        return tuple(vals)
    out = []
    for tok in text.split(","):
        tok = tok.strip()
        if kind is int:
            f = float(tok)
            if not f.is_integer():
                raise ValueError(f"expected an integer, got {tok!r}")
            out.append(int(f))
        else:
            v = float(tok)
            if math.isnan(v):
                raise ValueError("NaN is not allowed")
            out.append(v)
    return tuple(out)


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("true", "yes", "1", "on"):
        return True
    if t in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _parse_int(text: str) -> int:
    return int(text.strip(), 0)


_CONVERT = {
    "n": _parse_int,
    "p": float,
    "mode": str.strip,
    "m": lambda t: parse_grid(t, int),
    "m_fraction": parse_grid,
    "q": parse_grid,
    "lambda": parse_grid,
    "theta": parse_grid,
    "trials": _parse_int,
    "master_seed": _parse_int,
    "confidence_level": float,
    "shared_graph": _parse_bool,
    "output_path": str.strip,
}


def parse_config(text: str) -> ExperimentConfig:
    """Parse and validate a config; errors carry the offending line number."""
    values: dict = {}
    lines: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r} (first set on line {lines[key]})")
        try:
            values[key] = _CONVERT[key](value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {exc}") from None
        lines[key] = lineno

    for required in ("n", "p"):
        if required not in values:
            raise ConfigError(f"missing required key {required!r}")
    init = [k for k in INIT_KEYS if k in values]
    if len(init) > 1:
        where = ", ".join(f"{k} (line {lines[k]})" for k in init)
        raise ConfigError(f"conflicting initialisation keys: {where}")
    if "mode" not in values and init:
        values["mode"] = "bernoulli_q" if init[0] in ("q", "theta") else "fixed_m"
    kwargs = {("lam" if k == "lambda" else k): v for k, v in values.items()}
    try:
        return ExperimentConfig(**kwargs)
    except ConfigError as exc:
        bad = [k for k in _KEYS if k in values and k in str(exc)]
        suffix = f" (line {lines[bad[0]]})" if bad else ""
        raise ConfigError(f"{exc}{suffix}") from None
