"""Complex tolerance conventions and deterministic number formatting."""

from __future__ import annotations

REL_TOL = 1e-9
ABS_TOL = 1e-6


def is_close(a: complex, b: complex, rel: float = REL_TOL, abs_: float = ABS_TOL) -> bool:
    """|a - b| <= max(rel*|b|, abs_): the package-wide comparison rule."""
    return abs(a - b) <= max(rel * abs(b), abs_)


def sig_round(v: float, digits: int = 12) -> float:
    """Round to a fixed number of significant digits (stable JSON output)."""
    if v == 0:
        return 0.0
    return float(f"{v:.{digits}g}")


def complex_payload(z: complex) -> dict:
    return {"re": sig_round(z.real), "im": sig_round(z.imag)}
