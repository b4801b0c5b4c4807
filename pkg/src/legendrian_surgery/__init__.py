"""Legendrian fronts, contact (+/-1)-surgery arithmetic and a rule engine
deciding what is known about the resulting contact structure.

The rule engine entry point is :func:`legendrian_surgery.classify.classify`.
"""
from .classify import Level, Report, Verdict
from .front import FrontWord, build_diagram, format_front_word, parse_front_word
from .invariants import ClassicalData, classical_data
from .knots import KnotRecord, default_knot_table, load_knot_table
from .presentation import load_presentation, parse_presentation
from .surgery import (
    Annotations,
    Declared,
    IsolatedSummand,
    SurgeryPresentation,
    build_matrices,
    homology,
    surgery_transform,
)

__version__ = "0.1.0"

__all__ = [
    "Annotations",
    "ClassicalData",
    "Declared",
    "FrontWord",
    "IsolatedSummand",
    "KnotRecord",
    "Level",
    "Report",
    "SurgeryPresentation",
    "Verdict",
    "build_diagram",
    "build_matrices",
    "classical_data",
    "default_knot_table",
    "format_front_word",
    "homology",
    "load_knot_table",
    "load_presentation",
    "parse_front_word",
    "parse_presentation",
    "surgery_transform",
]
