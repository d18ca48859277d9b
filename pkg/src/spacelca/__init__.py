"""Space-efficient local computation algorithms for hypergraph 2-coloring and MIS."""

__version__ = "0.1.0"
