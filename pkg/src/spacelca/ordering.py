"""Almost k-wise independent random orderings of ``range(m)``.

The rank of element ``i`` concatenates bit ``i`` of ``s = 4*ceil(log2 m)``
independent k-wise independent sample spaces, copy 0 being the most
significant bit. Two fixed elements collide with probability ``2^-s <= m^-4``.
Collisions are broken by element index so comparisons always yield a total
order; each one observed through :meth:`Ordering.compare` is counted.
"""

from __future__ import annotations

import enum
import threading

import numpy as np

from . import gf2
from .errors import ParameterError
from .kwise import SampleSpace, bits_matrix, new_sample_space


class Cmp(enum.IntEnum):
    LESS = -1
    GREATER = 1


def copies_for(m: int) -> int:
    return 4 * gf2.field_log_for(m)


class Ordering:
    def __init__(self, m: int, k: int, copies: list[SampleSpace]):
        if m < 2 or not 2 <= k <= m:
            raise ParameterError(f"need m >= 2 and 2 <= k <= m, got m={m}, k={k}")
        if len(copies) != copies_for(m):
            raise ParameterError(f"expected {copies_for(m)} copies, got {len(copies)}")
        if any(c.n != m or c.k != k for c in copies):
            raise ParameterError("every copy must be a k-wise space over m bits")
        self.m = m
        self.k = k
        self.s = len(copies)
        self.copies = tuple(copies)
        self._table: np.ndarray | None = None
        self._collision_lock = threading.Lock()
        self._collision_total = 0

    @property
    def seed_bits(self) -> int:
        return sum(c.seed_bits for c in self.copies)

    def rank(self, i: int) -> int:
        if not 0 <= i < self.m:
            raise ParameterError(f"element {i} out of range 0..{self.m - 1}")
        if self._table is not None:
            return int(self._table[i])
        r = 0
        for c in self.copies:
            r = (r << 1) | c.bit(i)
        return r

    def ranks(self, elements=None) -> np.ndarray:
        """Ranks as uint64, or Python ints past 64 copies (all elements when None)."""
        pts = np.arange(self.m) if elements is None else np.asarray(elements)
        if self._table is not None:
            return self._table[pts]
        bits = bits_matrix(self.copies, pts)
        if self.s > 64:
            out = np.zeros(len(pts), dtype=object)
            for row in bits:
                out = out * 2 + row.astype(object)
            return out
        out = np.zeros(len(pts), dtype=np.uint64)
        for row in bits:
            out = (out << np.uint64(1)) | row.astype(np.uint64)
        return out

    def materialize(self) -> np.ndarray:
        """Cache the full rank table (values are unchanged; only speed differs)."""
        if self._table is None:
            self._table = self.ranks()
        return self._table

    def key(self, i: int) -> int:
        """Sort key realizing the tie-broken total order."""
        return self.rank(i) * self.m + i

    def compare(self, i: int, j: int) -> Cmp:
        if i == j:
            raise ParameterError("compare needs two distinct elements")
        ri, rj = self.rank(i), self.rank(j)
        if ri == rj:
            self.note_collision()
            return Cmp.LESS if i < j else Cmp.GREATER
        return Cmp.LESS if ri < rj else Cmp.GREATER

    def note_collision(self) -> None:
        with self._collision_lock:
            self._collision_total += 1

    @property
    def collisions(self) -> int:
        return self._collision_total

    def has_collision(self) -> bool:
        """Whether any two elements share a rank (inspects the full table)."""
        table = self.ranks()
        return np.unique(table).size < self.m


def new_ordering(m: int, k: int, entropy) -> Ordering:
    """Draw an ordering; each copy consumes its own consecutive slice of entropy."""
    if m < 2 or not 2 <= k <= m:
        raise ParameterError(f"need m >= 2 and 2 <= k <= m, got m={m}, k={k}")
    copies = [new_sample_space(m, k, entropy) for _ in range(copies_for(m))]
    return Ordering(m, k, copies)
