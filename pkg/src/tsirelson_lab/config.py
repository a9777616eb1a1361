"""Size caps, overridable through TSL_* environment variables.

Values are read on every call so that tests and the command line can change them at run time.
"""

import os

from .logger import get_logger

log = get_logger()

# Measured worst case of one exact evaluation: support 256 about 1 s, 512 about 7 s, 1024 about 2 min.
DEFAULT_MAX_SUPPORT = 1024
DEFAULT_BRUTE_FORCE_SUPPORT = 6
BRUTE_FORCE_HARD_LIMIT = 8
DEFAULT_EXHAUSTIVE_SUPPORT = 8
EXHAUSTIVE_HARD_LIMIT = 10
DEFAULT_DUAL_EXACT_SUPPORT = 12
DEFAULT_FAMILY_CAP = 64
DEFAULT_SATURATION_CAP = 2 ** 62

# Default absolute tolerance of norm comparisons (TSL_NORM_TOL, --tol).
NORM_TOLERANCE = 1e-9
# Fixed-point sweeps stop when no entry moves by more than this.
SWEEP_TOLERANCE = 1e-12


def _get_int_env(name: str, default: int) -> int:
    """Helper to get a positive integer from environment variable, falling back to the default."""
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = int(raw)
    except (ValueError, TypeError):
        log.warning(f"Ignoring non-integer value '{raw}' of {name}, using {default}")
        return default
    if value < 1:
        log.warning(f"Ignoring non-positive value {value} of {name}, using {default}")
        return default
    return value


def _get_float_env(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        value = float(raw)
    except (ValueError, TypeError):
        log.warning(f"Ignoring non-numeric value '{raw}' of {name}, using {default}")
        return default
    if not value > 0.0 or value == float("inf"):
        log.warning(f"Ignoring value {value} of {name}, it must be positive and finite; using {default}")
        return default
    return value


def _clamped(name: str, default: int, hard_limit: int) -> int:
    value = _get_int_env(name, default)
    if value > hard_limit:
        log.warning(f"{name}={value} exceeds the hard limit {hard_limit}, clamping")
        return hard_limit
    return value


def max_support() -> int:
    """Largest support handled by the interval DP (TSL_MAX_SUPPORT)."""
    return _get_int_env("TSL_MAX_SUPPORT", DEFAULT_MAX_SUPPORT)


def brute_force_support() -> int:
    """Largest support accepted by the exhaustive set-partition oracle (TSL_BRUTE_FORCE_SUPPORT, at most 8)."""
    return _clamped("TSL_BRUTE_FORCE_SUPPORT", DEFAULT_BRUTE_FORCE_SUPPORT, BRUTE_FORCE_HARD_LIMIT)


def exhaustive_support() -> int:
    """Largest support of the permutation oracles (TSL_EXHAUSTIVE_SUPPORT)."""
    return _clamped("TSL_EXHAUSTIVE_SUPPORT", DEFAULT_EXHAUSTIVE_SUPPORT, EXHAUSTIVE_HARD_LIMIT)


def dual_exact_support() -> int:
    """Largest support for which dual enclosures must close to the target gap (TSL_DUAL_EXACT_SUPPORT)."""
    return _get_int_env("TSL_DUAL_EXACT_SUPPORT", DEFAULT_DUAL_EXACT_SUPPORT)


def norm_tolerance() -> float:
    """Absolute tolerance of certificate replays and probe comparisons (TSL_NORM_TOL)."""
    return _get_float_env("TSL_NORM_TOL", NORM_TOLERANCE)


def family_cap() -> int:
    """Largest family size accepted by the probes (TSL_FAMILY_CAP)."""
    return _get_int_env("TSL_FAMILY_CAP", DEFAULT_FAMILY_CAP)


def saturation_cap() -> int:
    """Saturation threshold of the counting and hierarchy functions (TSL_SATURATION_CAP)."""
    return _get_int_env("TSL_SATURATION_CAP", DEFAULT_SATURATION_CAP)
