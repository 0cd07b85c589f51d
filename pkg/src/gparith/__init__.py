"""Exact generalised-polynomial arithmetic and first-order verification toolkit."""

from .exactnum import (
    AlgebraicReal,
    Ball,
    NumberField,
    ball_eval,
    circle_norm,
    field_create,
    floor_exact,
    frac_signed,
    nint,
    sign,
)

__all__ = [
    "AlgebraicReal",
    "Ball",
    "NumberField",
    "ball_eval",
    "circle_norm",
    "field_create",
    "floor_exact",
    "frac_signed",
    "nint",
    "sign",
]

__version__ = "0.1.0"
