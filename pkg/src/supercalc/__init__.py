"""Exact symbolic calculus for superspace harmonic and Clifford analysis."""

from .scalars import PoleError, Rational, Scalar, gamma_half, recip_gamma_half
from .algebra import (
    Element,
    SpaceMismatch,
    SpaceSignature,
    SuperMonomial,
    bos_var,
    cliff_gen,
    ferm_var,
    format_element,
    mul,
    parse,
    vector_x,
    weyl_gen,
    x_squared,
)

__all__ = [
    "PoleError",
    "Rational",
    "Scalar",
    "gamma_half",
    "recip_gamma_half",
    "Element",
    "SpaceMismatch",
    "SpaceSignature",
    "SuperMonomial",
    "bos_var",
    "cliff_gen",
    "ferm_var",
    "format_element",
    "mul",
    "parse",
    "vector_x",
    "weyl_gen",
    "x_squared",
]

__version__ = "0.1.0"
