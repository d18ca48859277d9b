"""Whole-instance reference computations the local algorithms are checked against."""

from __future__ import annotations

import numpy as np

from ..coloring import FROZEN, ColoringContext
from ..mis import BOTTOM, DELETED, SELECTED, MisContext


def coin_table(ctx: MisContext) -> np.ndarray:
    """All coins, shape (n, rounds), via one vectorized pass over the coin space."""
    n, r, b = ctx.g.n, ctx.rounds, ctx.bits_per_coin
    bits = ctx.coin_source.bits().reshape(n, r, b)
    return (bits.sum(axis=2) == 0).astype(np.uint8)


def global_luby(ctx: MisContext, coins: np.ndarray | None = None) -> np.ndarray:
    """Round-synchronous Luby over every vertex with the context's coins.

    Returns phase-1 statuses (MisStatus values) after ``ctx.rounds`` rounds.
    """
    g = ctx.g
    coins = coin_table(ctx) if coins is None else coins
    src = np.array([u for u, nb in enumerate(g.adj) for _ in nb], dtype=np.int64)
    dst = np.array([v for nb in g.adj for v in nb], dtype=np.int64)
    state = np.full(g.n, int(BOTTOM), dtype=np.int64)
    for i in range(ctx.rounds):
        prev = state.copy()
        chose = coins[:, i].astype(bool)
        sel_nbr = np.zeros(g.n, dtype=bool)
        np.logical_or.at(sel_nbr, dst, prev[src] == SELECTED)
        contend = np.zeros(g.n, dtype=bool)
        np.logical_or.at(contend, dst, (prev[src] == BOTTOM) & chose[src])
        active = prev == BOTTOM
        state[active & sel_nbr] = DELETED
        state[active & ~sel_nbr & chose & ~contend] = SELECTED
    return state


def sequential_phase1(ctx: ColoringContext) -> list[int]:
    """Phase 1 run globally: every vertex in ordering order, one pass."""
    h, k1 = ctx.h, ctx.params.k1
    order = sorted(range(h.m), key=ctx.key)
    status = [None] * h.m
    counts = [[0, 0] for _ in range(h.N)]
    dangerous = [False] * h.N
    for v in order:
        if any(dangerous[e] for e in h.incidence[v]):
            status[v] = FROZEN
            continue
        c = ctx.color_tables[0].bit(v)
        status[v] = c
        for e in h.incidence[v]:
            counts[e][c] += 1
            if counts[e][c] >= k1 and counts[e][1 - c] == 0:
                dangerous[e] = True
    return status

