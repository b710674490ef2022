"""Size caps for the exponential-time routines.

``SHAPCIRC_MAX_BRUTE`` (an integer) overrides every cap at once.
"""
import os

DETERMINISM_MAX_VARS = 20
ORACLE_MAX_PHI_VARS = 22
ORACLE_MAX_SHAP_VARS = 18
DECIMAL_PRECISION = 12


def _override():
    raw = os.environ.get("SHAPCIRC_MAX_BRUTE")
    if raw is None or raw.strip() == "":
        return None
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"SHAPCIRC_MAX_BRUTE must be an integer, got {raw!r}")


def cap(default):
    """Return ``default`` unless the environment override is set."""
    value = _override()
    return default if value is None else value
