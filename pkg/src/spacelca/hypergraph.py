"""k-uniform hypergraphs stored as vertex/edge incidence lists.

File format (UTF-8)::

    H <m> <N> <k> <d>
    <k space-separated 0-based vertex ids>      # N lines, one per edge
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import LoadError, ParameterError

RED, BLUE = 0, 1


@dataclass(frozen=True)
class Hypergraph:
    m: int
    edges: tuple[tuple[int, ...], ...]
    d: int
    incidence: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def N(self) -> int:
        return len(self.edges)

    @property
    def k(self) -> int:
        return len(self.edges[0]) if self.edges else 0

    @classmethod
    def build(cls, m: int, edges: Sequence[Sequence[int]], d: int | None = None) -> "Hypergraph":
        """Validate and index an edge list; ``d`` defaults to the measured degree."""
        edges = tuple(tuple(sorted(e)) for e in edges)
        _check_edges(m, edges)
        inc: list[list[int]] = [[] for _ in range(m)]
        for eid, e in enumerate(edges):
            for v in e:
                inc[v].append(eid)
        h = cls(m, edges, 0, tuple(tuple(x) for x in inc))
        measured = max((len(h.dependency_neighbors(e)) for e in range(h.N)), default=0)
        if d is not None and measured > d:
            raise ParameterError(f"intersection degree {measured} exceeds declared d={d}")
        object.__setattr__(h, "d", measured if d is None else d)
        return h

    def dependency_neighbors(self, e: int) -> list[int]:
        """Edges sharing at least one vertex with edge ``e``, ascending, no repeats."""
        if not 0 <= e < self.N:
            raise ParameterError(f"edge id {e} out of range")
        out = set()
        for v in self.edges[e]:
            out.update(self.incidence[v])
        out.discard(e)
        return sorted(out)

    def co_edge_vertices(self, x: int) -> list[int]:
        """Vertices sharing an edge with ``x`` (excluding x)."""
        out = set()
        for e in self.incidence[x]:
            out.update(self.edges[e])
        out.discard(x)
        return sorted(out)

    def dumps(self) -> str:
        lines = [f"H {self.m} {self.N} {self.k} {self.d}"]
        lines += [" ".join(map(str, e)) for e in self.edges]
        return "\n".join(lines) + "\n"


def _check_edges(m: int, edges) -> None:
    if not edges:
        return
    k = len(edges[0])
    for i, e in enumerate(edges):
        if len(e) != k:
            raise LoadError(f"non-uniform edge (expected {k} vertices, got {len(e)})", i + 2)
        if len(set(e)) != k:
            raise LoadError("duplicate vertex in edge", i + 2)
        if any(not 0 <= v < m for v in e):
            raise LoadError("dangling vertex id", i + 2)


def load_hypergraph(text: str) -> Hypergraph:
    lines = [ln for ln in text.splitlines()]
    if not lines or not lines[0].strip():
        raise LoadError("missing header", 1)
    head = lines[0].split()
    if len(head) != 5 or head[0] != "H":
        raise LoadError("header must be 'H <m> <N> <k> <d>'", 1)
    try:
        m, n_edges, k, d = map(int, head[1:])
    except ValueError:
        raise LoadError("non-integer header field", 1) from None
    body = [(i + 1, ln) for i, ln in enumerate(lines) if i > 0 and ln.strip()]
    if len(body) != n_edges:
        raise LoadError(f"header declares {n_edges} edges, found {len(body)}", 1)
    edges = []
    for lineno, ln in body:
        try:
            e = [int(t) for t in ln.split()]
        except ValueError:
            raise LoadError("non-integer vertex id", lineno) from None
        if len(e) != k:
            raise LoadError(f"non-uniform edge (expected {k} vertices, got {len(e)})", lineno)
        if len(set(e)) != k:
            raise LoadError("duplicate vertex in edge", lineno)
        if any(not 0 <= v < m for v in e):
            raise LoadError("dangling vertex id", lineno)
        edges.append(e)
    h = Hypergraph.build(m, edges)
    if h.d > d:
        bad = next(e for e in range(h.N) if len(h.dependency_neighbors(e)) > d)
        raise LoadError(f"intersection degree {len(h.dependency_neighbors(bad))} exceeds declared d={d}", bad + 2)
    object.__setattr__(h, "d", d)
    return h


def verify_coloring(h: Hypergraph, colors: Sequence[int]) -> tuple[bool, int | None]:
    """(ok, witness): witness is the first monochromatic edge id, or None."""
    if len(colors) != h.m:
        raise ParameterError(f"expected {h.m} colors, got {len(colors)}")
    if any(c not in (RED, BLUE) for c in colors):
        raise ParameterError("every vertex must be colored red or blue")
    for eid, e in enumerate(h.edges):
        first = colors[e[0]]
        if all(colors[v] == first for v in e):
            return False, eid
    return True, None
