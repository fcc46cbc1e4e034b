"""Parsing of unit-suffixed quantities like "10 T" or "0.44e24 cm^-3".

Every dimensioned configuration value must carry an explicit unit; bare
numbers are rejected so that cm/MHz/meV-style unit mixups can never slip
in silently. All supported units are pure powers of ten of the SI base
unit, so conversion happens in the decimal exponent before the string is
handed to float(): parsing "300 ns" yields exactly the same bits as the
literal 300e-9.
"""

from __future__ import annotations

__all__ = ["UnitError", "parse_quantity", "DIMENSIONS"]


class UnitError(ValueError):
    """A quantity string is malformed, unitless, or has the wrong unit."""


# dimension -> unit suffix -> decimal exponent relative to the SI unit
DIMENSIONS: dict[str, dict[str, int]] = {
    "magnetic_field": {"T": 0, "mT": -3, "uT": -6},
    "temperature": {"K": 0, "mK": -3},
    "time": {"s": 0, "ms": -3, "us": -6, "ns": -9, "ps": -12},
    "frequency": {"Hz": 0, "kHz": 3, "MHz": 6, "GHz": 9, "THz": 12},
    "rate": {"/s": 0, "1/s": 0, "Hz": 0, "kHz": 3, "MHz": 6},
    "number_density": {"m^-3": 0, "cm^-3": 6},
    "area": {"m^2": 0, "cm^2": -4},
    "gyromagnetic_ratio": {"rad/s/T": 0},
}


def _split_number(token: str) -> tuple[str, int]:
    """Split a numeric token into (mantissa, decimal exponent)."""
    for sep in ("e", "E"):
        if sep in token:
            mantissa, _, exp = token.partition(sep)
            try:
                return mantissa, int(exp)
            except ValueError:
                raise UnitError(f"bad exponent in number {token!r}") from None
    return token, 0


def parse_quantity(text: str, dimension: str) -> float:
    """Parse "NUMBER UNIT" for the given dimension into the SI value."""
    units = DIMENSIONS.get(dimension)
    if units is None:
        raise UnitError(f"unknown dimension {dimension!r}")
    parts = text.strip().split()
    if len(parts) == 1:
        raise UnitError(
            f"{text!r} has no unit; expected one of {sorted(units)} "
            f"for a {dimension} quantity"
        )
    if len(parts) != 2:
        raise UnitError(f"expected 'NUMBER UNIT', got {text!r}")
    number, unit = parts
    if unit not in units:
        raise UnitError(
            f"unit {unit!r} is not a {dimension} unit; expected one of "
            f"{sorted(units)}"
        )
    mantissa, exp = _split_number(number)
    try:
        value = float(f"{mantissa}e{exp + units[unit]}")
    except ValueError:
        raise UnitError(f"cannot parse number {number!r} in {text!r}") from None
    return value
