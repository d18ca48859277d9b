"""Random query trees on the infinite D-regular tree.

A node's children are explored only when their rank is strictly below the
node's own rank. Ranks are uniform 64-bit integers standing in for reals in
[0, 1]. Nodes are split into D+1 levels by rank: level i holds ranks in
(1 - i/(D+1), 1 - (i-1)/(D+1)], level D+1 holds [0, 1/(D+1)].

Also here: the binomial Galton-Watson model that dominates the level-1 tree,
its Otter constants, and a Poisson fit of the tail of the total progeny.
"""

from __future__ import annotations

import enum
import hashlib
import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np
from scipy import stats

from .errors import ParameterError

RANK_SPACE = 1 << 64
TOP_RANK = RANK_SPACE  # "rank 1": above every drawable rank


class RootMode(str, enum.Enum):
    WORST_CASE_ONE = "worst"
    UNIFORM_RANDOM = "uniform"


@dataclass(frozen=True)
class QueryTreeParams:
    D: int
    root_rank_mode: RootMode = RootMode.UNIFORM_RANDOM
    safety_cap: int = 10**6

    def __post_init__(self):
        if self.D < 2:
            raise ParameterError(f"D must be >= 2, got {self.D}")
        if self.safety_cap < 1:
            raise ParameterError("safety_cap must be >= 1")
        object.__setattr__(self, "root_rank_mode", RootMode(self.root_rank_mode))


@dataclass(frozen=True)
class TreeSample:
    size: int
    level_sizes: tuple[int, ...]
    level_roots: tuple[int, ...]
    truncated: bool = False
    nodes: frozenset[int] | None = field(default=None, repr=False, compare=False)


def level_thresholds(D: int) -> list[int]:
    """``T_j = floor(j * 2^64 / (D+1))`` for j = 1..D."""
    return [(j * RANK_SPACE) // (D + 1) for j in range(1, D + 1)]


def level_of(rank: int, D: int, thresholds: list[int] | None = None) -> int:
    """Level index 1..D+1 of a 64-bit rank (``TOP_RANK`` is level 1)."""
    thresholds = thresholds or level_thresholds(D)
    return D + 1 - sum(rank > t for t in thresholds)


class RankTape:
    """A replayable rank for every node of the infinite D-ary tree.

    Nodes use heap numbering: the root is 0 and the children of ``v`` are
    ``D*v + 1 .. D*v + D``. Any two traversals reading the same tape see the
    same ranks, which is what coupled comparisons need.
    """

    def __init__(self, seed: bytes, D: int, overrides: dict[int, int] | None = None):
        self.seed = seed
        self.D = D
        self.overrides = dict(overrides or {})

    def __call__(self, node: int) -> int:
        if node in self.overrides:
            return self.overrides[node]
        data = node.to_bytes((node.bit_length() + 7) // 8 or 1, "big")
        return int.from_bytes(hashlib.blake2b(data, key=self.seed, digest_size=8).digest(), "big")

    def children(self, node: int) -> range:
        return range(self.D * node + 1, self.D * node + self.D + 1)

    def with_override(self, node: int, rank: int) -> "RankTape":
        return RankTape(self.seed, self.D, {**self.overrides, node: rank})


def grow(
    D: int,
    root_rank: int,
    tape: RankTape,
    accept: Callable[[int, int], bool],
    cap: int = 10**6,
    keep_nodes: bool = False,
) -> TreeSample:
    """BFS growth over ``tape``; ``accept(child_rank, parent_rank)`` admits children."""
    thresholds = level_thresholds(D)
    sizes = [0] * (D + 1)
    roots = [0] * (D + 1)
    root_level = level_of(root_rank, D, thresholds)
    sizes[root_level - 1] += 1
    roots[root_level - 1] += 1
    seen = [0] if keep_nodes else None
    frontier = deque([(0, root_rank, root_level)])
    total = 1
    while frontier:
        node, rank, lvl = frontier.popleft()
        for child in tape.children(node):
            r = tape(child)
            if not accept(r, rank):
                continue
            if total >= cap:
                return TreeSample(total, tuple(sizes), tuple(roots), True)
            c_lvl = level_of(r, D, thresholds)
            sizes[c_lvl - 1] += 1
            if c_lvl != lvl:
                roots[c_lvl - 1] += 1
            total += 1
            if keep_nodes:
                seen.append(child)
            frontier.append((child, r, c_lvl))
    return TreeSample(total, tuple(sizes), tuple(roots), False, frozenset(seen) if keep_nodes else None)


def _below(child: int, parent: int) -> bool:
    return child < parent


def sample_query_tree(params: QueryTreeParams, entropy, keep_nodes: bool = False) -> TreeSample:
    """One query tree. ``entropy`` is a :class:`RankTape` or anything with ``take``."""
    tape = entropy if isinstance(entropy, RankTape) else RankTape(entropy.take(128).to_bytes(16, "big"), params.D)
    if params.root_rank_mode is RootMode.WORST_CASE_ONE:
        root = TOP_RANK
    else:
        root = tape(0)
    return grow(params.D, root, tape, _below, params.safety_cap, keep_nodes)


@dataclass
class TreeBatch:
    sizes: np.ndarray
    level_sizes: np.ndarray
    truncated: np.ndarray

    @property
    def kept(self) -> np.ndarray:
        return self.sizes[~self.truncated]


def sample_query_trees(params: QueryTreeParams, rng: np.random.Generator, n_samples: int) -> TreeBatch:
    """Many independent trees at once, one generation per step.

    Same distribution as :func:`sample_query_tree`; the draw order differs,
    so individual samples do not match it.
    """
    if n_samples < 1:
        raise ParameterError("empty sample")
    D = params.D
    thr = np.array(level_thresholds(D), dtype=np.uint64)
    sizes = np.ones(n_samples, dtype=np.int64)
    levels = np.zeros((n_samples, D + 1), dtype=np.int64)
    truncated = np.zeros(n_samples, dtype=bool)
    sid = np.arange(n_samples)
    if params.root_rank_mode is RootMode.WORST_CASE_ONE:
        rank = np.full(n_samples, np.iinfo(np.uint64).max, dtype=np.uint64)
        levels[:, 0] = 1
    else:
        rank = rng.bit_generator.random_raw(n_samples).astype(np.uint64)
        lv = D - np.searchsorted(thr, rank, side="left")
        np.add.at(levels, (sid, lv), 1)
    while sid.size:
        child = rng.bit_generator.random_raw(sid.size * D).astype(np.uint64).reshape(sid.size, D)
        ok = child < rank[:, None]
        c_sid = np.repeat(sid, D)[ok.ravel()]
        c_rank = child[ok]
        if c_sid.size == 0:
            break
        sizes += np.bincount(c_sid, minlength=n_samples)
        lv = D - np.searchsorted(thr, c_rank, side="left")
        np.add.at(levels, (c_sid, lv), 1)
        over = sizes > params.safety_cap
        truncated |= over
        keep = ~truncated[c_sid]
        sid, rank = c_sid[keep], c_rank[keep]
    return TreeBatch(sizes, levels, truncated)


def expected_size(D: int) -> float:
    """Mean query-tree size, (e^D - 1) / D."""
    if D < 1:
        raise ParameterError("D must be >= 1")
    return math.expm1(D) / D


def expected_size_series(D: int, terms: int = 50) -> float:
    return sum(D**t / math.factorial(t + 1) for t in range(terms))


@dataclass(frozen=True)
class GwModel:
    """Binomial(D, 1/(D+1)) offspring law of the relaxed level-1 tree."""

    D: int
    q: float
    pmf: tuple[float, ...]
    a: float
    alpha: float
    t: int = 1
    rho: float = math.inf

    def f(self, s: float) -> float:
        return (1 - self.q + self.q * s) ** self.D

    def f_prime(self, s: float) -> float:
        return self.D * self.q * (1 - self.q + self.q * s) ** (self.D - 1)

    def f_second(self, s: float) -> float:
        return self.D * (self.D - 1) * self.q**2 * (1 - self.q + self.q * s) ** (self.D - 2)

    @property
    def mean(self) -> float:
        return self.D * self.q

    @property
    def mean_exact(self) -> Fraction:
        return sum((Fraction(j) * p for j, p in enumerate(self.pmf_exact())), Fraction(0))

    def pmf_exact(self) -> list[Fraction]:
        q = Fraction(1, self.D + 1)
        return [math.comb(self.D, j) * q**j * (1 - q) ** (self.D - j) for j in range(self.D + 1)]

    def progeny_pmf(self, n: int) -> float:
        """Exact Pr[Z = n] = Pr[Bin(nD, q) = n-1] / n (hitting-time identity)."""
        if n < 1:
            return 0.0
        return float(stats.binom.pmf(n - 1, n * self.D, self.q)) / n


def gw_model(D: int) -> GwModel:
    if D < 2:
        raise ParameterError(f"D must be >= 2, got {D}")
    q = 1.0 / (D + 1)
    pmf = tuple(math.comb(D, j) * q**j * (1 - q) ** (D - j) for j in range(D + 1))
    a = D / (D - 1)
    f_a = (1 - q + q * a) ** D
    return GwModel(D=D, q=q, pmf=pmf, a=a, alpha=a / f_a)


def simulate_gw_total(model: GwModel, rng: np.random.Generator, cap: int = 10**6) -> int | None:
    """Total progeny of one process started from a single individual.

    Returns None when the running total passes ``cap``.
    """
    total, generation = 1, 1
    while generation:
        generation = int(rng.binomial(model.D * generation, model.q))
        total += generation
        if total > cap:
            return None
    return total


def simulate_gw_totals(model: GwModel, rng: np.random.Generator, n_samples: int, cap: int = 10**6):
    """Vectorized :func:`simulate_gw_total`; returns (totals, truncated mask)."""
    if n_samples < 1:
        raise ParameterError("empty sample")
    totals = np.ones(n_samples, dtype=np.int64)
    gen = np.ones(n_samples, dtype=np.int64)
    truncated = np.zeros(n_samples, dtype=bool)
    live = np.arange(n_samples)
    while live.size:
        g = rng.binomial(model.D * gen[live], model.q)
        gen[live] = g
        totals[live] += g
        truncated[live] |= totals[live] > cap
        live = live[(g > 0) & ~truncated[live]]
    return totals, truncated


@dataclass(frozen=True)
class DecayFit:
    rate: float  # fitted ln(alpha)
    raw_slope: float  # least-squares slope of ln(count) with no n^{-3/2} correction
    n_lo: int
    n_hi: int
    counts: tuple[int, ...]


def fit_decay_rate(totals: np.ndarray, n_lo: int = 20, n_hi: int = 60) -> DecayFit:
    """Poisson maximum-likelihood fit of count(n) ~ exp(c - rate*n) * n^{-3/2} on [n_lo, n_hi]."""
    ns = np.arange(n_lo, n_hi + 1, dtype=float)
    counts = np.bincount(np.asarray(totals, dtype=np.int64), minlength=n_hi + 1)[n_lo : n_hi + 1].astype(float)
    if counts.sum() < 2:
        raise ParameterError("too few samples in the fitting window")
    offset = -1.5 * np.log(ns)
    x = ns - ns.mean()
    # Newton on the concave Poisson log-likelihood in (c, -rate)
    beta = np.array([math.log(counts.mean() + 1e-300) - offset.mean(), 0.0])
    for _ in range(100):
        lam = np.exp(beta[0] + beta[1] * x + offset)
        grad = np.array([np.sum(counts - lam), np.sum((counts - lam) * x)])
        hess = -np.array([[lam.sum(), (lam * x).sum()], [(lam * x).sum(), (lam * x * x).sum()]])
        step = np.linalg.solve(hess, grad)
        beta = beta - step
        if np.max(np.abs(step)) < 1e-12:
            break
    nz = counts > 0
    raw = np.polyfit(ns[nz], np.log(counts[nz]), 1)[0] if nz.sum() >= 2 else float("nan")
    return DecayFit(rate=float(-beta[1]), raw_slope=float(raw), n_lo=n_lo, n_hi=n_hi, counts=tuple(int(c) for c in counts))


@dataclass(frozen=True)
class DominanceReport:
    samples: int
    violations: int
    max_t1: int
    max_t1_relaxed: int
    mean_t1: float
    mean_t1_relaxed: float

    @property
    def ok(self) -> bool:
        return self.violations == 0


def coupled_level1(D: int, tape: RankTape, cap: int = 10**6) -> tuple[TreeSample, TreeSample]:
    """Level-1 tree and its relaxed superset grown from one tape, root rank 1."""
    thresholds = level_thresholds(D)
    in_top = lambda r: level_of(r, D, thresholds) == 1  # noqa: E731
    t1 = grow(D, TOP_RANK, tape, lambda c, p: c < p and in_top(c), cap, keep_nodes=True)
    t1r = grow(D, TOP_RANK, tape, lambda c, p: in_top(c), cap, keep_nodes=True)
    return t1, t1r


def dominance_check(params: QueryTreeParams, entropy, n_samples: int) -> DominanceReport:
    """Check |T1| <= |T1'| (and T1 within T1') over coupled samples."""
    if n_samples < 1:
        raise ParameterError("empty sample")
    violations = 0
    a, b = [], []
    for _ in range(n_samples):
        tape = RankTape(entropy.take(128).to_bytes(16, "big"), params.D)
        t1, t1r = coupled_level1(params.D, tape, params.safety_cap)
        if t1.size > t1r.size or not t1.nodes <= t1r.nodes:
            violations += 1
        a.append(t1.size)
        b.append(t1r.size)
    return DominanceReport(n_samples, violations, max(a), max(b), float(np.mean(a)), float(np.mean(b)))
