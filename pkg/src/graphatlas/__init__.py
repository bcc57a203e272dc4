"""graphatlas: a multi-zoom-level graph map engine.

Builds a competition mesh over node positions, routes graph edges on it,
optimizes the routes, assigns nodes to zoom levels by a convex-cost flow,
and emits level-by-level geometry for an interactive viewer.
"""

__version__ = "0.1.0"
