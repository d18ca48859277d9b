"""Bounded-degree undirected graphs.

File format (UTF-8)::

    G <n> <d>
    <u> <v>          # one edge per line, 0-based
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import LoadError, ParameterError


@dataclass(frozen=True)
class Graph:
    n: int
    d: int
    adj: tuple[tuple[int, ...], ...]

    @classmethod
    def from_edges(cls, n: int, edges, d: int | None = None) -> "Graph":
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ParameterError(f"edge ({u}, {v}) has a vertex outside 0..{n - 1}")
            if u == v:
                raise ParameterError(f"self-loop at {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        measured = max((len(s) for s in nbrs), default=0)
        if d is None:
            d = measured
        elif measured > d:
            raise ParameterError(f"max degree {measured} exceeds declared d={d}")
        return cls(n, d, tuple(tuple(sorted(s)) for s in nbrs))

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def edges(self):
        for u, nb in enumerate(self.adj):
            for v in nb:
                if u < v:
                    yield u, v

    def dumps(self) -> str:
        lines = [f"G {self.n} {self.d}"] + [f"{u} {v}" for u, v in self.edges()]
        return "\n".join(lines) + "\n"

    def bfs_distances(self, source: int, limit: int | None = None) -> dict[int, int]:
        dist = {source: 0}
        frontier = [source]
        while frontier:
            nxt = []
            for u in frontier:
                if limit is not None and dist[u] >= limit:
                    continue
                for w in self.adj[u]:
                    if w not in dist:
                        dist[w] = dist[u] + 1
                        nxt.append(w)
            frontier = nxt
        return dist


def load_graph(text: str) -> Graph:
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise LoadError("missing header", 1)
    head = lines[0].split()
    if len(head) != 3 or head[0] != "G":
        raise LoadError("header must be 'G <n> <d>'", 1)
    try:
        n, d = int(head[1]), int(head[2])
    except ValueError:
        raise LoadError("non-integer header field", 1) from None
    edges = []
    degree = [0] * n
    seen = set()
    for i, ln in enumerate(lines[1:], start=2):
        if not ln.strip():
            continue
        parts = ln.split()
        if len(parts) != 2:
            raise LoadError("edge line must be 'u v'", i)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise LoadError("non-integer vertex id", i) from None
        if not (0 <= u < n and 0 <= v < n):
            raise LoadError("dangling vertex id", i)
        if u == v:
            raise LoadError("self-loop", i)
        pair = (min(u, v), max(u, v))
        if pair in seen:
            continue
        seen.add(pair)
        degree[u] += 1
        degree[v] += 1
        if degree[u] > d or degree[v] > d:
            raise LoadError(f"degree exceeds declared d={d}", i)
        edges.append(pair)
    return Graph.from_edges(n, edges, d)


def verify_mis(g: Graph, membership: Sequence[bool]) -> tuple[bool, int | None]:
    """(ok, witness vertex). Independent: no edge inside; maximal: every outsider has a neighbour inside."""
    if len(membership) != g.n:
        raise ParameterError(f"expected {g.n} entries, got {len(membership)}")
    for u, nb in enumerate(g.adj):
        if membership[u]:
            for v in nb:
                if membership[v]:
                    return False, u
        elif not any(membership[v] for v in nb):
            return False, u
    return True, None
