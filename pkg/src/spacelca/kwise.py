"""k-wise independent bit vectors from low-degree polynomials over GF(2^l).

Bit ``i`` of a sample space is the least significant bit of
``p(i) = c_0 + c_1 i + ... + c_{k-1} i^{k-1}`` evaluated in GF(2^l), where the
coefficients ``c_j`` are the seed. The values ``p(i)`` at any k distinct
points are jointly uniform over the field, so any k bits are jointly uniform.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .errors import ParameterError


def seed_length_bits(n: int, k: int) -> int:
    """Seed bits needed for a k-wise independent vector of n bits."""
    if n < 1 or not 1 <= k <= n:
        raise ParameterError(f"need 1 <= k <= n, got n={n}, k={k}")
    return k * gf2.field_log_for(n)


@dataclass(frozen=True)
class SampleSpace:
    n: int
    k: int
    field_log: int
    coeffs: tuple[int, ...]
    _desc: np.ndarray = field(init=False, repr=False, compare=False)
    _red: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1 or not 1 <= self.k <= self.n:
            raise ParameterError(f"need 1 <= k <= n, got n={self.n}, k={self.k}")
        if (1 << self.field_log) < self.n:
            raise ParameterError("field too small for n evaluation points")
        if len(self.coeffs) != self.k:
            raise ParameterError(f"expected {self.k} coefficients, got {len(self.coeffs)}")
        if any(c < 0 or c >> self.field_log for c in self.coeffs):
            raise ParameterError("coefficient outside the field")
        object.__setattr__(self, "_desc", np.array(self.coeffs[::-1], dtype=np.uint64))
        object.__setattr__(self, "_red", gf2.reduction_table(self.field_log))

    @classmethod
    def from_coefficients(cls, n: int, coeffs) -> "SampleSpace":
        coeffs = tuple(int(c) for c in coeffs)
        return cls(n, len(coeffs), gf2.field_log_for(n), coeffs)

    @property
    def seed_bits(self) -> int:
        return self.k * self.field_log

    @property
    def seed_hex(self) -> str:
        value = 0
        for c in self.coeffs:
            value = (value << self.field_log) | c
        return format(value, f"0{(self.seed_bits + 3) // 4}x")

    def bit(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise ParameterError(f"position {i} out of range 0..{self.n - 1}")
        return int(gf2._horner(self._desc, i, self.field_log, self._red)) & 1

    def bits(self, positions=None) -> np.ndarray:
        """Bits at many positions at once (all n when ``positions`` is None)."""
        pts = np.arange(self.n, dtype=np.uint64) if positions is None else np.asarray(positions, dtype=np.uint64)
        if pts.size and int(pts.max()) >= self.n:
            raise ParameterError("position out of range")
        vals = gf2.poly_eval_many(self._desc, pts, self.field_log)[0]
        return (vals & np.uint64(1)).astype(np.uint8)


def new_sample_space(n: int, k: int, entropy) -> SampleSpace:
    """Draw a k-wise independent space over n bits; consumes k*l bits of entropy.

    ``entropy`` is anything with ``take(nbits) -> int`` (see :mod:`.entropy`).
    """
    nbits = seed_length_bits(n, k)
    ell = gf2.field_log_for(n)
    packed = entropy.take(nbits)
    mask = (1 << ell) - 1
    coeffs = tuple((packed >> (ell * (k - 1 - j))) & mask for j in range(k))
    return SampleSpace(n, k, ell, coeffs)


def bits_matrix(spaces, positions) -> np.ndarray:
    """Stack the bits of several same-field spaces: shape (len(spaces), len(positions)).

    One kernel call evaluates every space, which is how orderings are materialized.
    """
    spaces = list(spaces)
    if not spaces:
        return np.zeros((0, len(positions)), dtype=np.uint8)
    ell, k = spaces[0].field_log, spaces[0].k
    if any(s.field_log != ell or s.k != k for s in spaces):
        raise ParameterError("spaces must share field and independence")
    rows = np.stack([s._desc for s in spaces])
    vals = gf2.poly_eval_many(rows, np.asarray(positions, dtype=np.uint64), ell)
    return (vals & np.uint64(1)).astype(np.uint8)
