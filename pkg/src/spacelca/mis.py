"""Local maximal independent set on bounded-degree graphs.

Phase 1 simulates ``r = ceil(20 d log2 d)`` rounds of Luby's algorithm
around the queried vertex. In round i an undecided vertex is deleted if a
neighbour was selected in round i-1; otherwise it chooses itself with
probability 1/(2 d~) (``d~`` is d rounded up to a power of two) and is
selected when no undecided neighbour chose itself in the same round.
Vertices still undecided after r rounds are settled in phase 2 by a greedy
scan, in vertex-id order, of their connected component of undecided vertices.

Coins come from one k-wise independent sample space; ``coin(v, i)`` reads
``log2(2 d~)`` dedicated bits and is 1 when all of them are 0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .entropy import Entropy
from .errors import ParameterError, QueryError
from .graph import Graph
from .kwise import SampleSpace, new_sample_space


class MisStatus(enum.IntEnum):
    BOTTOM = 0
    SELECTED = 1
    DELETED = 2


BOTTOM, SELECTED, DELETED = MisStatus.BOTTOM, MisStatus.SELECTED, MisStatus.DELETED


def rounded_degree(d: int) -> int:
    return 1 if d <= 1 else 1 << math.ceil(math.log2(d))


def rounds_for(d: int) -> int:
    return max(1, math.ceil(20 * d * math.log2(d))) if d >= 2 else 1


@dataclass(frozen=True)
class MisAnswer:
    vertex: int
    in_mis: bool | None
    phase: int
    fail: str | None = None

    @property
    def ok(self) -> bool:
        return self.fail is None


class MisContext:
    """Graph plus coin seed. ``trace``, when set, collects every (vertex, round) consulted."""

    def __init__(
        self,
        g: Graph,
        entropy: Entropy,
        c1_mult: int = 4,
        k_bits: int | None = None,
        safety_cap: int = 10**6,
        rounds: int | None = None,
    ):
        if g.n < 1:
            raise ParameterError("empty graph")
        self.g = g
        self.d_tilde = rounded_degree(g.d)
        # a shorter phase 1 is only for experiments that need phase-2 survivors
        self.rounds = rounds_for(g.d) if rounds is None else rounds
        if self.rounds < 1:
            raise ParameterError("rounds must be >= 1")
        self.bits_per_coin = int(math.log2(2 * self.d_tilde))
        total = g.n * self.rounds * self.bits_per_coin
        lg = max(1, math.ceil(math.log2(max(g.n, 2))))
        if k_bits is None:
            k_bits = c1_mult * lg
        self.k_bits = max(1, min(total, k_bits))
        self.safety_cap = safety_cap
        self.coin_source: SampleSpace = new_sample_space(total, self.k_bits, entropy.child("coins"))
        # per vertex: rounds 1..bottom_through known undecided; verdict from verdict_round on
        self._bottom_through = [0] * g.n
        self._verdict: dict[int, tuple[MisStatus, int]] = {}
        self._coins: dict[tuple[int, int], int] = {}
        self._picked: dict[int, int] = {}
        self._phase2: dict[int, frozenset[int]] = {}
        self.trace: set[tuple[int, int]] | None = None

    def fresh(self) -> "MisContext":
        """Same graph and seed, empty memo tables."""
        other = object.__new__(MisContext)
        other.__dict__.update(self.__dict__)
        other._bottom_through = [0] * self.g.n
        other._verdict, other._coins, other._picked, other._phase2 = {}, {}, {}, {}
        other.trace = None
        return other

    def _check(self, v: int, i: int | None = None) -> None:
        if not 0 <= v < self.g.n:
            raise ParameterError(f"vertex {v} out of range 0..{self.g.n - 1}")
        if i is not None and not 0 <= i <= self.rounds:
            raise ParameterError(f"round {i} out of range 0..{self.rounds}")

    def coin_offset(self, v: int, i: int) -> int:
        return ((v * self.rounds) + (i - 1)) * self.bits_per_coin

    def coin(self, v: int, i: int) -> int:
        key = (v, i)
        got = self._coins.get(key)
        if got is None:
            if not 1 <= i <= self.rounds:
                raise ParameterError(f"round {i} out of range 1..{self.rounds}")
            self._check(v)
            base = self.coin_offset(v, i)
            got = 1
            for j in range(self.bits_per_coin):
                if self.coin_source.bit(base + j):
                    got = 0
                    break
            self._coins[key] = got
        if self.trace is not None:
            self.trace.add(key)
        return got

    # round statuses

    def _known(self, u: int, t: int) -> bool:
        return u in self._verdict or t <= self._bottom_through[u]

    def _status(self, u: int, t: int) -> MisStatus:
        if self.trace is not None:
            self.trace.add((u, t))
        got = self._verdict.get(u)
        if got is not None and t >= got[1]:
            return got[0]
        return BOTTOM

    def _ensure(self, v: int, target: int) -> None:
        adj = self.g.adj
        stack = [(v, target)]
        while stack:
            u, j = stack[-1]
            if self._known(u, j):
                stack.pop()
                continue
            t = self._bottom_through[u] + 1
            missing = [(w, t - 1) for w in adj[u] if not self._known(w, t - 1)]
            if missing:
                stack.extend(missing)
                continue
            verdict = self._decide(u, t)
            if verdict is BOTTOM:
                self._bottom_through[u] = t
            else:
                self._verdict[u] = (verdict, t)

    def _decide(self, u: int, t: int) -> MisStatus:
        nbrs = self.g.adj[u]
        if self.trace is not None:
            self.trace.add((u, t))
        for w in nbrs:
            if self._status(w, t - 1) is SELECTED:
                return DELETED
        if not self.coin(u, t):
            return BOTTOM
        for w in nbrs:
            if self._status(w, t - 1) is BOTTOM and self.coin(w, t):
                return BOTTOM
        return SELECTED

    def mis_round(self, v: int, i: int) -> MisStatus:
        """Status of v after round i (round 0 is the all-undecided start)."""
        self._check(v, i)
        if i == 0:
            return BOTTOM
        self._ensure(v, i)
        return self._status(v, i)

    def phase1(self, v: int) -> MisStatus:
        return self.mis_round(v, self.rounds)

    def decided_round(self, v: int) -> int | None:
        """Round where v's phase-1 verdict was reached (None if undecided)."""
        self.phase1(v)
        got = self._verdict.get(v)
        return got[1] if got else None

    # analysis variant (no deletions)

    def mis_b(self, v: int, i: int) -> MisStatus:
        """SELECTED ("picked") once v chose itself in a round where no neighbour did."""
        self._check(v, i)
        first = self._picked.get(v)
        if first is None:
            first = 0
            for t in range(1, self.rounds + 1):
                if self.coin(v, t) and not any(self.coin(w, t) for w in self.g.adj[v]):
                    first = t
                    break
            self._picked[v] = first
        return SELECTED if first and first <= i else BOTTOM

    # phase 2

    def surviving_component(self, v: int) -> list[int]:
        comp = {v}
        queue = [v]
        while queue:
            u = queue.pop()
            for w in self.g.adj[u]:
                if w not in comp and self.phase1(w) is BOTTOM:
                    comp.add(w)
                    if len(comp) > self.safety_cap:
                        raise QueryError(f"surviving component around {v} exceeds {self.safety_cap}")
                    queue.append(w)
        return sorted(comp)

    def phase2(self, v: int) -> bool:
        if self.phase1(v) is not BOTTOM:
            raise ParameterError(f"vertex {v} was decided in phase 1")
        chosen = self._phase2.get(v)
        if chosen is None:
            comp = self.surviving_component(v)
            adj = self.g.adj
            deleted = {u for u in comp if any(self.phase1(w) is SELECTED for w in adj[u])}
            picked = set()
            for u in comp:
                if u not in deleted:
                    picked.add(u)
                    deleted.update(adj[u])
            chosen = frozenset(picked)
            for u in comp:
                self._phase2[u] = chosen
        return v in chosen

    def mis_query(self, v: int) -> MisAnswer:
        s = self.phase1(v)
        if s is SELECTED:
            return MisAnswer(v, True, 1)
        if s is DELETED:
            return MisAnswer(v, False, 1)
        try:
            return MisAnswer(v, self.phase2(v), 2)
        except QueryError:
            return MisAnswer(v, None, 2, "budget")
