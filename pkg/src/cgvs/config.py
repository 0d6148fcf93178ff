"""Run configuration and the flat ``key = value`` config file format."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path

from .edges import DEFAULT_SIGMA
from .errors import InvalidParameterError


@dataclass(frozen=True)
class RunConfig:
    sigma_edge: float = DEFAULT_SIGMA
    ridge_quantile: float = 0.8
    d_r_factor: float = 1 / 3
    sigma_c_factor: float = 1 / 3
    iterations: int = 2
    working_resolution_cap: int = 400
    histogram_bins: int = 32
    median_size: int = 21
    # multi-object search
    local_prior_factor: float = 1.0  # local prior sigma, as a multiple of d_r
    inhibition_dilation: int = 3
    stop_residual: float = 0.05
    workers: int = 1

    def __post_init__(self):
        checks = [
            (self.sigma_edge > 0, "sigma_edge must be > 0"),
            (0 < self.ridge_quantile < 1, "ridge_quantile must lie in (0, 1)"),
            (self.d_r_factor > 0, "d_r_factor must be > 0"),
            (self.sigma_c_factor > 0, "sigma_c_factor must be > 0"),
            (self.iterations >= 0, "iterations must be >= 0"),
            (self.working_resolution_cap >= 8, "working_resolution_cap must be >= 8"),
            (self.histogram_bins >= 2, "histogram_bins must be >= 2"),
            (self.median_size >= 1 and self.median_size % 2 == 1, "median_size must be odd"),
            (self.local_prior_factor > 0, "local_prior_factor must be > 0"),
            (self.inhibition_dilation >= 0, "inhibition_dilation must be >= 0"),
            (0 <= self.stop_residual < 1, "stop_residual must lie in [0, 1)"),
            (self.workers >= 1, "workers must be >= 1"),
        ]
        for ok, message in checks:
            if not ok:
                raise InvalidParameterError(message)

    def with_overrides(self, **overrides) -> "RunConfig":
        clean = {k: v for k, v in overrides.items() if v is not None}
        return dataclasses.replace(self, **clean)


def _coerce(name: str, raw: str):
    fields = {f.name: f for f in dataclasses.fields(RunConfig)}
    if name not in fields:
        raise InvalidParameterError(f"unknown config key {name!r}")
    default = getattr(RunConfig(), name)
    try:
        if isinstance(default, int):
            return int(raw)
        if "/" in raw:
            num, den = raw.split("/", 1)
            return float(num) / float(den)
        return float(raw)
    except (ValueError, ZeroDivisionError):
        raise InvalidParameterError(f"bad value for {name}: {raw!r}") from None


def parse_config_text(text: str) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment. Fractions like ``1/3`` are allowed."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidParameterError(f"config line {lineno}: expected 'key = value'")
        key, raw = (part.strip() for part in line.split("=", 1))
        values[key] = _coerce(key, raw)
    return values


def load_config(path: str | Path | None = None, **overrides) -> RunConfig:
    """Defaults, then the file (if any), then explicit overrides."""
    base = {}
    if path is not None:
        base = parse_config_text(Path(path).read_text())
    cfg = RunConfig(**base)
    return cfg.with_overrides(**overrides)
