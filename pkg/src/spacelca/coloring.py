"""Local two-coloring of k-uniform hypergraphs with bounded edge intersections.

Each query runs Alon's three phases on a small neighbourhood of the queried
vertex only:

1. Vertices are colored in the order given by a pseudorandom ordering; an
   edge that collects ``k1`` vertices of one color and none of the other
   becomes dangerous and freezes its remaining vertices. A vertex's status
   depends only on co-edge vertices of lower rank, so it is computed over the
   rank-pruned query tree.
2. The component of surviving edges around a frozen vertex is recolored with
   fresh color tables (threshold ``k2``) until a trial leaves only small
   surviving components.
3. Those residual components are solved by exhaustive search.

Every step is a pure function of the instance, parameters and seeds, so
answers do not depend on query order or on which vertex of a component is
asked first.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Iterable

from .entropy import Entropy
from .errors import ParameterError
from .hypergraph import BLUE, RED, Hypergraph
from .kwise import SampleSpace, new_sample_space
from .ordering import Ordering, new_ordering

FROZEN = 2
COLOR_NAMES = {RED: "red", BLUE: "blue"}

FAIL_BUDGET = "budget"
FAIL_INFEASIBLE = "infeasible"


def log_n(N: int) -> int:
    """ceil(log2 N), at least 1."""
    return max(1, math.ceil(math.log2(max(N, 2))))


def log_log_n(N: int) -> int:
    """ceil(log2 log2 N), at least 1."""
    return max(1, math.ceil(math.log2(max(2.0, math.log2(max(N, 2))))))


def default_trials(N: int) -> int:
    lg = math.log2(max(N, 2))
    return 10 * math.ceil(lg / max(1.0, math.log2(lg) if lg > 1 else 1.0))


def feasibility_violations(k1: int, k2: int, k3: int, d: int) -> list[str]:
    """Which of the three sufficient conditions fail (empty when feasible)."""
    bound = 16 * d * (d - 1) ** 3 * (d + 1)
    out = []
    if not bound < 2**k1:
        out.append(f"16d(d-1)^3(d+1) = {bound} >= 2^k1 = {2**k1}")
    if not bound < 2**k2:
        out.append(f"16d(d-1)^3(d+1) = {bound} >= 2^k2 = {2**k2}")
    if not 2 * math.e * (d + 1) < 2**k3:
        out.append(f"2e(d+1) = {2 * math.e * (d + 1):.2f} >= 2^k3 = {2**k3}")
    return out


@dataclass(frozen=True)
class ColoringParams:
    k1: int
    k2: int
    k3: int
    c_color: int = 4
    c_order: int = 4
    c2: int = 16
    c3: int = 8
    trials2: int | None = None
    safety_cap: int = 10**5
    phase3_cap: int = 10**6

    def __post_init__(self):
        if min(self.k1, self.k2, self.k3) < 1:
            raise ParameterError("k1, k2, k3 must be positive")
        for name in ("c_color", "c_order", "c2", "c3", "safety_cap", "phase3_cap"):
            if getattr(self, name) < 1:
                raise ParameterError(f"{name} must be >= 1")
        if self.trials2 is not None and self.trials2 < 1:
            raise ParameterError("trials2 must be >= 1")

    @property
    def k(self) -> int:
        return self.k1 + self.k2 + self.k3

    @classmethod
    def default_for(cls, k: int, d: int, **overrides) -> "ColoringParams":
        """Smallest feasible k3, remainder split evenly (k1 gets the extra one)."""
        k3 = 1
        while k3 < k - 2 and not 2 * math.e * (d + 1) < 2**k3:
            k3 += 1
        rest = k - k3
        if rest < 2:
            raise ParameterError(f"k={k} too small to split into three phases")
        return cls(k1=(rest + 1) // 2, k2=rest // 2, k3=k3, **overrides)

    def with_overrides(self, **kw) -> "ColoringParams":
        return ColoringParams(**{**self.__dict__, **kw})


@dataclass(frozen=True)
class ColorAnswer:
    vertex: int
    color: int | None
    phase: int
    fail: str | None = None
    tree_size: int = 0
    examined: int = 0

    @property
    def ok(self) -> bool:
        return self.fail is None


@dataclass(frozen=True)
class Phase2Result:
    color: int | None = None
    residual: tuple[int, ...] | None = None  # edge ids of x's residual component
    fail: str | None = None

    @property
    def escalated(self) -> bool:
        return self.residual is not None


@dataclass
class _ComponentOutcome:
    edges: tuple[int, ...]
    trial: int | None = None
    colors: dict[int, int] = field(default_factory=dict)
    frozen: frozenset[int] = frozenset()
    residual_of: dict[int, tuple[int, ...]] = field(default_factory=dict)  # edge -> its residual component
    fail: str | None = None


class ColoringContext:
    """Instance, parameters and seeds; answers ``color_query`` for any vertex.

    ``materialize`` precomputes the full rank table and the phase-1 color table
    in one vectorized pass; answers are identical either way.
    """

    def __init__(self, h: Hypergraph, params: ColoringParams, entropy: Entropy, materialize: bool = True):
        if h.N == 0 or h.m < 2:
            raise ParameterError("need a hypergraph with at least one edge and two vertices")
        if params.k != h.k:
            raise ParameterError(f"k1+k2+k3 = {params.k} but the hypergraph is {h.k}-uniform")
        bad = feasibility_violations(params.k1, params.k2, params.k3, h.d)
        if bad:
            warnings.warn("coloring parameters outside the feasible region: " + "; ".join(bad), stacklevel=2)
        self.h = h
        self.params = params
        self.lg = log_n(h.N)
        self.trials2 = params.trials2 or default_trials(h.N)
        self.component_cap = params.c2 * self.lg
        self.residual_cap = params.c3 * log_log_n(h.N)
        self.D = h.k * (h.d + 1)
        order_k = min(h.m, max(2, params.c_order * self.lg))
        color_k = min(h.m, params.c_color * self.lg)
        self.ordering: Ordering = new_ordering(h.m, order_k, entropy.child("ordering"))
        self.color_tables: list[SampleSpace] = [
            new_sample_space(h.m, color_k, entropy.child(f"colors/{t}")) for t in range(self.trials2 + 1)
        ]
        m = h.m
        if materialize:
            ranks = self.ordering.materialize()
            self._key = [int(r) * m + v for v, r in enumerate(ranks)]
            self._color0 = self.color_tables[0].bits().tolist()
        else:
            self._key = None
            self._color0 = None
        self._key_cache: dict[int, int] = {}
        self._lower: dict[int, tuple[int, ...]] = {}
        self._status: dict[int, int] = {}
        self._survived: dict[int, bool] = {}
        self._components: dict[int, _ComponentOutcome] = {}
        self._phase3: dict[tuple[int, ...], dict[int, int] | None | str] = {}
        self.collisions = 0

    def fresh(self) -> "ColoringContext":
        """Same instance and seeds, empty caches."""
        other = object.__new__(ColoringContext)
        other.__dict__.update(self.__dict__)
        other._key_cache, other._lower, other._status = {}, {}, {}
        other._survived, other._components, other._phase3 = {}, {}, {}
        other.collisions = 0
        return other

    # ordering helpers

    def key(self, v: int) -> int:
        if self._key is not None:
            return self._key[v]
        k = self._key_cache.get(v)
        if k is None:
            k = self.ordering.rank(v) * self.h.m + v
            self._key_cache[v] = k
        return k

    def color_bit(self, table: int, v: int) -> int:
        if table == 0 and self._color0 is not None:
            return self._color0[v]
        return self.color_tables[table].bit(v)

    def lower_neighbors(self, v: int) -> tuple[int, ...]:
        """Co-edge vertices that precede v in the ordering (the query-tree children)."""
        got = self._lower.get(v)
        if got is None:
            kv = self.key(v)
            m = self.h.m
            rank_v = kv // m
            out = []
            for u in self.h.co_edge_vertices(v):
                ku = self.key(u)
                if ku < kv:
                    out.append(u)
                if ku // m == rank_v:
                    self.collisions += 1
            got = tuple(out)
            self._lower[v] = got
        return got

    # phase 1

    def query_tree(self, x: int) -> set[int] | None:
        """Vertices whose phase-1 status the query for x depends on; None past the cap."""
        seen = {x}
        stack = [x]
        cap = self.params.safety_cap
        while stack:
            v = stack.pop()
            for u in self.lower_neighbors(v):
                if u not in seen:
                    seen.add(u)
                    if len(seen) > cap:
                        return None
                    stack.append(u)
        return seen

    def examined(self, tree: Iterable[int]) -> int:
        """Distinct vertices inspected while evaluating the given query tree."""
        out = set()
        for v in tree:
            out.add(v)
            out.update(self.h.co_edge_vertices(v))
        return len(out)

    def phase1_status(self, x: int) -> int:
        """RED, BLUE or FROZEN after sequential phase 1 in ordering order."""
        self._check_vertex(x)
        st = self._status
        if x in st:
            return st[x]
        stack = [x]
        while stack:
            v = stack[-1]
            if v in st:
                stack.pop()
                continue
            pending = [u for u in self.lower_neighbors(v) if u not in st]
            if pending:
                stack.extend(pending)
                continue
            stack.pop()
            st[v] = self._decide_phase1(v)
        return st[x]

    def _decide_phase1(self, v: int) -> int:
        st, k1 = self._status, self.params.k1
        kv = self.key(v)
        for e in self.h.incidence[v]:
            counts = [0, 0]
            for u in self.h.edges[e]:
                if u != v and self.key(u) < kv:
                    s = st[u]
                    if s != FROZEN:
                        counts[s] += 1
            if (counts[RED] >= k1 and counts[BLUE] == 0) or (counts[BLUE] >= k1 and counts[RED] == 0):
                return FROZEN
        return self.color_bit(0, v)

    def survived(self, e: int) -> bool:
        """Edge lacks one of the two colors after phase 1."""
        got = self._survived.get(e)
        if got is None:
            seen = set()
            for v in self.h.edges[e]:
                s = self.phase1_status(v)
                if s != FROZEN:
                    seen.add(s)
            got = len(seen) < 2
            self._survived[e] = got
        return got

    # phase 2

    def _explore(self, start: Iterable[int], keep, cap: int) -> tuple[int, ...] | None:
        """Connected set of ``keep`` edges reachable from ``start``; None once above cap."""
        comp = set(start)
        queue = list(comp)
        while queue:
            e = queue.pop()
            for f in self.h.dependency_neighbors(e):
                if f not in comp and keep(f):
                    comp.add(f)
                    if len(comp) > cap:
                        return None
                    queue.append(f)
        return tuple(sorted(comp))

    def survived_component(self, x: int) -> tuple[int, ...] | None:
        start = [e for e in self.h.incidence[x] if self.survived(e)]
        if not start:
            return ()
        return self._explore(start, self.survived, self.component_cap)

    def _component_outcome(self, x: int) -> _ComponentOutcome:
        start = [e for e in self.h.incidence[x] if self.survived(e)]
        for e in start:
            if e in self._components:
                return self._components[e]
        comp = self._explore(start, self.survived, self.component_cap)
        if comp is None:
            # too large: the verdict is the same from every vertex of the component
            return _ComponentOutcome(edges=(), fail=FAIL_BUDGET)
        outcome = self._run_trials(comp)
        for e in comp:
            self._components[e] = outcome
        return outcome

    def _run_trials(self, comp: tuple[int, ...]) -> _ComponentOutcome:
        h, k2 = self.h, self.params.k2
        comp_set = set(comp)
        pending = sorted(
            {v for e in comp for v in h.edges[e] if self.phase1_status(v) == FROZEN},
            key=self.key,
        )
        for t in range(self.trials2):
            table = 1 + t
            colors: dict[int, int] = {}
            frozen = set()
            for y in pending:
                danger = False
                for e in h.incidence[y]:
                    if e not in comp_set:
                        continue
                    counts = [0, 0]
                    for u in h.edges[e]:
                        c = colors.get(u)
                        if c is not None:
                            counts[c] += 1
                    if (counts[RED] >= k2 and counts[BLUE] == 0) or (counts[BLUE] >= k2 and counts[RED] == 0):
                        danger = True
                        break
                if danger:
                    frozen.add(y)
                else:
                    colors[y] = self.color_bit(table, y)
            surviving = set()
            for e in comp:
                seen = {colors[u] for u in h.edges[e] if u in colors}
                if len(seen) < 2:
                    surviving.add(e)
            residual_of: dict[int, tuple[int, ...]] = {}
            good = True
            for e in sorted(surviving):
                if e in residual_of:
                    continue
                part = self._explore([e], surviving.__contains__, self.residual_cap)
                if part is None:
                    good = False
                    break
                for f in part:
                    residual_of[f] = part
            if good:
                return _ComponentOutcome(comp, t, colors, frozenset(frozen), residual_of)
        return _ComponentOutcome(comp, fail=FAIL_BUDGET)

    def phase2_color(self, x: int) -> Phase2Result:
        if self.phase1_status(x) != FROZEN:
            raise ParameterError(f"vertex {x} was colored in phase 1")
        out = self._component_outcome(x)
        if out.fail:
            return Phase2Result(fail=out.fail)
        if x in out.colors:
            return Phase2Result(color=out.colors[x])
        for e in self.h.incidence[x]:
            if e in out.residual_of:
                return Phase2Result(residual=out.residual_of[e])
        raise AssertionError(f"frozen vertex {x} has no residual edge")  # unreachable by construction

    # phase 3

    def residual_vertices(self, component: tuple[int, ...]) -> list[int]:
        out = self._components[component[0]]
        return sorted({v for e in component for v in self.h.edges[e] if v in out.frozen})

    def phase3_color(self, x: int, component: tuple[int, ...]) -> int | str:
        """x's color in the lexicographically first assignment; a fail tag if none."""
        sol = self._phase3.get(component)
        if sol is None:
            out = self._components[component[0]]
            sets = [[v for v in self.h.edges[e] if v in out.frozen] for e in component]
            sol = solve_residual(self.residual_vertices(component), sets, self.params.phase3_cap)
            self._phase3[component] = sol
        if isinstance(sol, str):
            return sol
        return sol[x]

    # full query

    def color_query(self, x: int) -> ColorAnswer:
        self._check_vertex(x)
        tree = self.query_tree(x)
        if tree is None:
            return ColorAnswer(x, None, 1, FAIL_BUDGET, self.params.safety_cap + 1, 0)
        size, seen = len(tree), self.examined(tree)
        s = self.phase1_status(x)
        if s != FROZEN:
            return ColorAnswer(x, s, 1, None, size, seen)
        p2 = self.phase2_color(x)
        if p2.fail:
            return ColorAnswer(x, None, 2, p2.fail, size, seen)
        if not p2.escalated:
            return ColorAnswer(x, p2.color, 2, None, size, seen)
        c = self.phase3_color(x, p2.residual)
        if isinstance(c, str):
            return ColorAnswer(x, None, 3, c, size, seen)
        return ColorAnswer(x, c, 3, None, size, seen)

    def _check_vertex(self, x: int) -> None:
        if not 0 <= x < self.h.m:
            raise ParameterError(f"vertex {x} out of range 0..{self.h.m - 1}")


def solve_residual(variables: list[int], edge_sets: list[list[int]], cap: int = 10**6) -> dict[int, int] | str:
    """Lexicographically first 0/1 assignment leaving no edge set monochromatic.

    ``variables`` are ordered most significant first and 0 (red) is tried
    before 1, so the result equals the first hit of a plain enumeration over
    all 2^len(variables) assignments. Returns FAIL_INFEASIBLE when no
    assignment exists and FAIL_BUDGET when the search exceeds ``cap`` nodes.
    """
    pos = {v: i for i, v in enumerate(variables)}
    # each edge is checked once its last variable is assigned
    closing: list[list[list[int]]] = [[] for _ in variables]
    for s in edge_sets:
        if not s:
            return FAIL_INFEASIBLE
        idx = sorted(pos[v] for v in s)
        closing[idx[-1]].append(idx)
    n = len(variables)
    assign = [0] * n
    nodes = 0
    i = 0
    tried = [0] * n  # values tried so far at position i (0, 1 or 2 = exhausted)
    while True:
        if i == n:
            return {v: assign[j] for j, v in enumerate(variables)}
        if tried[i] == 2:
            tried[i] = 0
            i -= 1
            if i < 0:
                return FAIL_INFEASIBLE
            continue
        assign[i] = tried[i]
        tried[i] += 1
        nodes += 1
        if nodes > cap:
            return FAIL_BUDGET
        if all(any(assign[j] != assign[idx[0]] for j in idx) for idx in closing[i]):
            i += 1
