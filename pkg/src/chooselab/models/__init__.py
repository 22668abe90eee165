"""Domain models for graphs, list assignments and quantified formulas."""

__all__ = [
    "assignments",
    "graph",
    "qbf",
    "reduction_output",
    "verdicts",
]
