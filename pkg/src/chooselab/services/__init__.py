"""Service layer: solvers, deciders, gadget builders and reductions."""

__all__ = [
    "choosability",
    "closed_forms",
    "gadgets",
    "graph_io",
    "graph_ops",
    "lemma_checks",
    "list_coloring",
    "paper_claims",
    "qbf",
    "reductions",
    "run_config",
    "structure",
    "text_formats",
]
