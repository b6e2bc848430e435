"""Input validation utilities for CLI arguments and configuration values."""

import math
import re
from pathlib import Path
from typing import Any, Optional, Sequence, Tuple

_FBM_PATTERN = re.compile(r"^fbm:H=(?P<hurst>[0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?)$")

# Keys whose value must be strictly positive; the rest only need to be >= 0.
_POSITIVE_KEYS = {
    'float_threshold', 'inverse_floor', 'series_tolerance', 'series_cap_factor',
    'hermite_max_order', 'grid_half_width', 'grid_points', 'near_zero_split',
    'tail_tolerance', 'integral_tolerance', 'refinement_cap', 'workers',
}


def validate_density_spec(spec: str) -> Tuple[bool, Optional[str]]:
    """
    Validate a spectral density spec: 'bm', 'fbm:H=<v>' or 'table:<path>'.

    Args:
        spec: Density spec as given on the command line

    Returns:
        Tuple of (is_valid, error_message). If valid, error_message is None.
    """
    if not spec:
        return False, "Density spec is required"

    if spec == 'bm':
        return True, None

    if spec.startswith('fbm:'):
        match = _FBM_PATTERN.match(spec)
        if match is None:
            return False, f"Invalid fBm spec {spec!r}; expected fbm:H=<value>"
        hurst = float(match.group('hurst'))
        if not 0.0 < hurst < 1.0:
            return False, f"Hurst index must lie in (0, 1), got {hurst}"
        return True, None

    if spec.startswith('table:'):
        path = spec[len('table:'):]
        if not path:
            return False, "Tabulated density needs a path: table:<path>"
        if not Path(path).exists():
            return False, f"Density table not found: {path}"
        return True, None

    return False, f"Unknown density spec {spec!r}; expected bm, fbm:H=<v> or table:<path>"


def validate_time_grid(values: Sequence[float]) -> Tuple[bool, Optional[str]]:
    """
    Validate a time grid: non-empty, finite, non-negative and strictly increasing.

    Args:
        values: Grid values

    Returns:
        Tuple of (is_valid, error_message). If valid, error_message is None.
    """
    if len(values) == 0:
        return False, "Time grid is empty"

    for value in values:
        if not math.isfinite(value):
            return False, f"Time grid contains a non-finite value: {value}"
        if value < 0:
            return False, f"Time grid values must be non-negative, got {value}"

    for left, right in zip(values, values[1:]):
        if not right > left:
            return False, f"Time grid must be strictly increasing ({left} then {right})"

    return True, None


def validate_scale_pair(p: int, q: int) -> Tuple[bool, Optional[str]]:
    """
    Validate Våge levels: integers with p > q >= 0.

    Args:
        p: Level of the product and of the second factor
        q: Level of the first factor

    Returns:
        Tuple of (is_valid, error_message). If valid, error_message is None.
    """
    if q < 0:
        return False, f"q must be non-negative, got {q}"
    if not p > q:
        return False, f"p must exceed q, got p={p}, q={q}"
    return True, None


def validate_config_value(key: str, value: Any) -> Tuple[bool, Optional[str]]:
    """
    Validate one configuration value after type conversion.

    Args:
        key: Configuration key
        value: Converted value

    Returns:
        Tuple of (is_valid, error_message). If valid, error_message is None.
    """
    if isinstance(value, float) and not math.isfinite(value):
        return False, f"{key} must be finite, got {value}"
    if key in _POSITIVE_KEYS and not value > 0:
        return False, f"{key} must be positive, got {value}"
    if value < 0:
        return False, f"{key} must be non-negative, got {value}"
    if key == 'grid_points' and value < 3:
        return False, f"grid_points must be at least 3, got {value}"
    return True, None
