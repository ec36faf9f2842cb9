"""Exact excess and reflection-excess computations in finite Coxeter groups."""

from .coxeter import CoxeterSystem, CoxeterType, Element, build_system, parse_type

__version__ = "0.1.0"

__all__ = ["CoxeterSystem", "CoxeterType", "Element", "build_system", "parse_type", "__version__"]
