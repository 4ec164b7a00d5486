"""Exact-arithmetic verification lab for p-adic classical groups."""

from padic_lab.local_field import (
    LocalField,
    PadicScalar,
    PrecisionError,
    make_field,
    TRIVIAL,
    UNRAMIFIED,
    RAMIFIED,
)

__all__ = [
    "LocalField",
    "PadicScalar",
    "PrecisionError",
    "make_field",
    "TRIVIAL",
    "UNRAMIFIED",
    "RAMIFIED",
]

__version__ = "0.1.0"
