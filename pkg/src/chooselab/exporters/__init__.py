"""Writers for DOT drawings and command reports."""

__all__ = [
    "dot",
    "reports",
]
