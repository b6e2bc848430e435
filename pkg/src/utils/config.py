"""Engine configuration: defaults, flat key=value files and CLI overrides."""

import logging
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Dict, Optional, Union

from .error_handlers import ConfigError
from .validators import validate_config_value

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EngineConfig:
    """Numerical defaults shared by the library and the CLI."""

    float_threshold: float = 1e-14
    inverse_floor: float = 1e-12
    series_tolerance: float = 1e-12
    series_cap_factor: int = 10
    hermite_max_order: int = 512
    hermite_order: int = 200
    grid_half_width: float = 50.0
    grid_points: int = 16384
    near_zero_split: float = 1e-6
    tail_tolerance: float = 1e-8
    integral_tolerance: float = 1e-8
    refinement_cap: int = 20
    workers: int = 1


DEFAULT_CONFIG = EngineConfig()

_FIELD_TYPES: Dict[str, type] = {f.name: type(getattr(DEFAULT_CONFIG, f.name)) for f in fields(EngineConfig)}


def _convert(key: str, raw: Any, source: str) -> Any:
    if key not in _FIELD_TYPES:
        raise ConfigError(f"{source}: unknown configuration key {key!r}")
    target = _FIELD_TYPES[key]
    try:
        if target is int:
            if isinstance(raw, float) and not raw.is_integer():
                raise ValueError(f"expected an integer, got {raw}")
            value: Any = int(raw) if not isinstance(raw, str) else int(raw.strip())
        else:
            value = float(raw)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{source}: invalid value {raw!r} for {key}: {e}") from e
    is_valid, message = validate_config_value(key, value)
    if not is_valid:
        raise ConfigError(f"{source}: {message}")
    return value


def load_config(path: Optional[Union[str, Path]] = None) -> EngineConfig:
    """
    Load a flat key=value configuration file.

    Blank lines and lines starting with '#' are ignored.

    Args:
        path: Config file path; None returns the defaults

    Returns:
        EngineConfig with the file's values applied

    Raises:
        ConfigError: On a missing file, malformed line, unknown key or bad value
    """
    if path is None:
        return DEFAULT_CONFIG
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Configuration file not found: {path}")

    values: Dict[str, Any] = {}
    for number, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{number}: expected key=value, got {stripped!r}")
        key, raw = (part.strip() for part in stripped.split("=", 1))
        values[key] = _convert(key, raw, f"{path}:{number}")

    logger.debug("Loaded configuration from %s: %s", path, values)
    return replace(DEFAULT_CONFIG, **values)


def merge_overrides(config: EngineConfig, **flags: Any) -> EngineConfig:
    """
    Apply CLI flag values on top of a configuration (None means not given).

    Args:
        config: Base configuration
        **flags: Field names mapped to flag values

    Returns:
        New EngineConfig; flags win over file values
    """
    overrides = {key: _convert(key, value, "command line") for key, value in flags.items() if value is not None}
    return replace(config, **overrides) if overrides else config
