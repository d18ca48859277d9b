"""Seeded instance generators."""

from __future__ import annotations

import numpy as np

from ..errors import ParameterError
from ..graph import Graph
from ..hypergraph import Hypergraph


def gen_hypergraph_cycle(N: int, k: int) -> Hypergraph:
    """N k-uniform edges in a ring; consecutive edges share exactly one vertex.

    Edge i is ``{(i*(k-1) + j) mod m : 0 <= j < k}`` with ``m = N*(k-1)``, so
    every edge meets exactly two others (d = 2).
    """
    if N < 3:
        raise ParameterError("a cycle needs at least 3 edges")
    if k < 3:
        raise ParameterError("k must be >= 3")
    m = N * (k - 1)
    edges = [[(i * (k - 1) + j) % m for j in range(k)] for i in range(N)]
    return Hypergraph.build(m, edges, d=2)


def gen_graph(n: int, d: int, density: float, entropy) -> Graph:
    """Random graph with max degree <= d.

    Proposes ``round(density * n * d / 2)`` uniform pairs of distinct vertices
    and keeps a pair unless it repeats or would push an endpoint past d.
    """
    if n < 1:
        raise ParameterError("n must be >= 1")
    if d < 0 or (d >= n and not (n == 1 and d == 0)):
        raise ParameterError(f"need 0 <= d < n, got d={d}, n={n}")
    if density < 0:
        raise ParameterError("density must be non-negative")
    if d == 0:
        return Graph.from_edges(n, [], 0)
    rng = entropy.rng()
    proposals = round(density * n * d / 2)
    us = rng.integers(0, n, size=proposals)
    # second endpoint uniform over the other n-1 vertices
    vs = (us + rng.integers(1, n, size=proposals)) % n
    pairs = np.stack([us, vs], axis=1)
    degree = [0] * n
    seen = set()
    edges = []
    for u, v in pairs.tolist():
        key = (u, v) if u < v else (v, u)
        if key in seen or degree[u] >= d or degree[v] >= d:
            continue
        seen.add(key)
        degree[u] += 1
        degree[v] += 1
        edges.append(key)
    return Graph.from_edges(n, edges, d)
