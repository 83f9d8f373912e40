"""Exact analysis of generalized mass-action networks: sign conditions, Laplacians, and stability certificates."""

from .network import GeneralizedNetwork, NetworkStructure, ParseError, analyze_structure, format_network, parse_network
from .report import ConditionReport

__all__ = [
    "ConditionReport",
    "GeneralizedNetwork",
    "NetworkStructure",
    "ParseError",
    "analyze_structure",
    "format_network",
    "parse_network",
]
__version__ = "0.1.0"
