"""Executable combinatorics for Artin groups: classification, blowups,
projection-system validators, quotient presentations and a random model."""

__version__ = "0.1.0"

from .graph import GraphError, LabelledGraph, parse_graph
from .classify import hopf_verdict, odd_decomposition, product_region_graph
from .presentations import (
    artin_presentation,
    hyperbolic_quotient_presentation,
    kernel_presentation,
    shephard_presentation,
)
from .delta import four_point_delta

__all__ = [
    "GraphError",
    "LabelledGraph",
    "parse_graph",
    "hopf_verdict",
    "odd_decomposition",
    "product_region_graph",
    "artin_presentation",
    "shephard_presentation",
    "hyperbolic_quotient_presentation",
    "kernel_presentation",
    "four_point_delta",
]
