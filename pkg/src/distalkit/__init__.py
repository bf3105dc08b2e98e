"""Exact toolkit for types, indiscernibles, distal cells and strong Erdos-Hajnal
certificates in the structure of monotone piecewise-linear maps of [0, 1]."""

from .errors import DistalKitError
from .pl_core import MonotoneMap, format_rational, make_map, parse_rational
from .type_chains import Chain, hausdorff_distance, image_chain, make_chain, phi_alpha

__version__ = "0.1.0"

__all__ = [
    "Chain",
    "DistalKitError",
    "MonotoneMap",
    "format_rational",
    "hausdorff_distance",
    "image_chain",
    "make_chain",
    "make_map",
    "parse_rational",
    "phi_alpha",
]
