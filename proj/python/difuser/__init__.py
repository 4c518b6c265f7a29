"""Hash-fused sketch-space influence maximization."""

import json as _json

try:  # installed wheel: extension lives inside the package
    from ._difuser import (  # noqa: F401
        Graph,
        edge_hash,
        graph_from_text,
        greedy_exact,
        influence,
        is_sampled,
        load_graph,
        random_value_at,
        run_json,
        save_cache,
    )
except ImportError:  # build tree: extension sits on PYTHONPATH
    from _difuser import (  # noqa: F401
        Graph,
        edge_hash,
        graph_from_text,
        greedy_exact,
        influence,
        is_sampled,
        load_graph,
        random_value_at,
        run_json,
        save_cache,
    )

__all__ = [
    "Graph",
    "edge_hash",
    "graph_from_text",
    "greedy_exact",
    "influence",
    "is_sampled",
    "load_graph",
    "random_value_at",
    "run",
    "run_json",
    "save_cache",
]


def run(graph, **kwargs):
    """Select seeds and return the report as a dict (see run_json)."""
    return _json.loads(run_json(graph, **kwargs))
