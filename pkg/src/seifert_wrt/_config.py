"""Runtime precision settings shared by the numerical modules."""

from __future__ import annotations

import os

PRECISION_ENV = "SEIFERT_WRT_PRECISION"
DEFAULT_BITS = 64


def precision_bits() -> int:
    """Working precision in bits; values above 64 select mpmath arithmetic."""
    raw = os.environ.get(PRECISION_ENV, "").strip()
    if not raw:
        return DEFAULT_BITS
    try:
        bits = int(raw)
    except ValueError as exc:
        raise ValueError(f"{PRECISION_ENV} must be an integer number of bits, got {raw!r}") from exc
    if bits < 53:
        raise ValueError(f"{PRECISION_ENV} must be at least 53, got {bits}")
    return bits


def extended_precision() -> bool:
    return precision_bits() > DEFAULT_BITS
