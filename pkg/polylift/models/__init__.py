"""
Data models and schemas
"""
from polylift.models.ode import Monomial, PolyODE, compile_system, degree_norms
from polylift.models.dsl import ParsedSystem, parse_dsl, to_dsl
from polylift.models.schemas import (
    BoundEnvelope,
    BoundParams,
    SystemDocument,
)

__all__ = [
    "Monomial",
    "PolyODE",
    "compile_system",
    "degree_norms",
    "ParsedSystem",
    "parse_dsl",
    "to_dsl",
    "BoundEnvelope",
    "BoundParams",
    "SystemDocument",
]
