"""Pseudolinear drawings: obstructions, extensions and forbidden configurations."""

from __future__ import annotations

from .errors import (
    CapExceeded,
    InternalInconsistency,
    InvalidInput,
    PseudolinearError,
)
from .extension import PseudolineArrangement, extend_to_arrangement, verify_arrangement
from .forbidden import ForbiddenConfig, classify_config, extract_forbidden
from .ingest import DrawingDoc, Polyline, load_drawing, parse_drawing, polylines_to_stringset, serialize_drawing
from .kn import GoodDrawing, find_b_configuration, theorem4_crosscheck, validate_good_drawing
from .obstruction import ObstructionReport, find_obstruction, is_obstruction
from .oracle import brute_force_obstruction
from .stringset import StringSet

__version__ = "0.1.0"

__all__ = [
    "CapExceeded",
    "DrawingDoc",
    "ForbiddenConfig",
    "GoodDrawing",
    "InternalInconsistency",
    "InvalidInput",
    "ObstructionReport",
    "Polyline",
    "PseudolineArrangement",
    "PseudolinearError",
    "StringSet",
    "brute_force_obstruction",
    "classify_config",
    "extend_to_arrangement",
    "extract_forbidden",
    "find_b_configuration",
    "find_obstruction",
    "is_obstruction",
    "load_drawing",
    "parse_drawing",
    "polylines_to_stringset",
    "serialize_drawing",
    "theorem4_crosscheck",
    "validate_good_drawing",
    "verify_arrangement",
]
